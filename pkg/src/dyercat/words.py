"""Syllable words and the word problem for Dyer groups.

Words are sequences of ``(generator, exponent)`` syllables.  Reduction is an
exhaustive search over the closure of a word under three kinds of moves:

* syllable normalisation (merge neighbours on the same generator, reduce
  exponents modulo finite orders, drop zero exponents);
* commutation ``x_u^a x_v^b -> x_v^b x_u^a`` when ``m(u, v) = 2``;
* braid moves ``[x_u x_v]_m -> [x_v x_u]_m`` when ``m(u, v) = m >= 3``
  (both generators then have order 2).

The search never lengthens a word; whenever a move shortens it the search
restarts from the shorter word.  The canonical form is the lexicographically
least word of minimal syllable length reachable that way.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from .budget import Budget, default_budget
from .errors import ParseError, SearchBudgetExceeded, UnknownGenerator
from .graph import INF, DyerGraph

Syllable = tuple[str, int]


@dataclass(frozen=True)
class Word:
    syllables: tuple[Syllable, ...] = ()

    def __post_init__(self):
        for gen, exp in self.syllables:
            if not isinstance(exp, int) or exp == 0:
                raise ValueError(f"bad exponent {exp!r} on {gen!r}")

    @classmethod
    def of(cls, *items) -> "Word":
        """``Word.of("a", ("d", 2), "b")``: bare ids mean exponent 1."""
        syl = []
        for it in items:
            syl.append((it, 1) if isinstance(it, str) else (it[0], int(it[1])))
        return cls(tuple(syl))

    @classmethod
    def letters(cls, gens: Iterable[str]) -> "Word":
        return cls(tuple((g, 1) for g in gens))

    @classmethod
    def parse(cls, text: str) -> "Word":
        syl = []
        for tok in text.split():
            if tok == "1":
                continue
            gen, sep, exp = tok.partition("^")
            if not gen:
                raise ParseError(f"bad token {tok!r}")
            try:
                e = int(exp) if sep else 1
            except ValueError:
                raise ParseError(f"bad exponent in {tok!r}") from None
            if e:
                syl.append((gen, e))
        return cls(tuple(syl))

    def __str__(self):
        if not self.syllables:
            return "1"
        return " ".join(g if e == 1 else f"{g}^{e}" for g, e in self.syllables)

    def __len__(self):
        return len(self.syllables)

    def __iter__(self) -> Iterator[Syllable]:
        return iter(self.syllables)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.syllables + other.syllables)

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        return Word(self.syllables * n)

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.syllables)))

    @property
    def generators(self) -> set[str]:
        return {g for g, _ in self.syllables}

    def sort_key(self):
        return word_key(self.syllables)


IDENTITY = Word()


def syllable_key(s: Syllable):
    # positive exponents before negative ones, then by size
    g, e = s
    return (g, e < 0, abs(e))


def word_key(syl) -> tuple:
    return tuple(syllable_key(s) for s in syl)


def shortlex_key(syl) -> tuple:
    return (len(syl), word_key(syl))


def braid_word(u: str, v: str, m: int) -> Word:
    """The alternating word ``u v u ...`` with ``m`` letters."""
    return Word.letters((u, v)[i % 2] for i in range(m))


# -- per-graph lookup tables ------------------------------------------------

@dataclass(frozen=True)
class _Ctx:
    f: dict
    m: dict  # (u, v) -> label for adjacent pairs, both orders


@lru_cache(maxsize=256)
def _ctx(g: DyerGraph) -> _Ctx:
    m = {}
    for e, k in g.m.items():
        u, v = sorted(e)
        m[(u, v)] = m[(v, u)] = k
    return _Ctx(dict(g.f), m)


def _normalize(syl, f) -> tuple:
    out: list = []
    for gen, exp in syl:
        if out and out[-1][0] == gen:
            exp += out.pop()[1]
        order = f[gen]
        if order != INF:
            exp %= order
        if exp:
            out.append((gen, exp))
    return tuple(out)


def normalize_syllables(w: Word, g: DyerGraph) -> Word:
    """Merge equal neighbours and reduce exponents into ``{1, ..., f-1}``."""
    f = _ctx(g).f
    for gen in w.generators:
        if gen not in f:
            raise UnknownGenerator(gen)
    return Word(_normalize(w.syllables, f))


def _shuffle_merge(w: tuple, ctx: _Ctx) -> tuple:
    """Repeatedly slide a syllable left across commuting syllables onto an equal generator."""
    f, m = ctx.f, ctx.m
    changed = True
    while changed:
        changed = False
        for i in range(1, len(w)):
            gi = w[i][0]
            for j in range(i - 1, -1, -1):
                gj = w[j][0]
                if gj == gi:
                    moved = w[:j + 1] + (w[i],) + w[j + 1:i] + w[i + 1:]
                    w = _normalize(moved, f)
                    changed = True
                    break
                if m.get((gi, gj)) != 2:
                    break
            if changed:
                break
    return w


def _moves(w: tuple, ctx: _Ctx) -> Iterator[tuple]:
    f, m = ctx.f, ctx.m
    n = len(w)
    for i in range(n - 1):
        u, v = w[i][0], w[i + 1][0]
        k = m.get((u, v))
        if k is None:
            continue
        if k == 2:
            y = w[:i] + (w[i + 1], w[i]) + w[i + 2:]
            if (i > 0 and w[i - 1][0] == v) or (i + 2 < n and w[i + 2][0] == u):
                y = _normalize(y, f)
            yield y
        elif i + k <= n:
            seg = w[i:i + k]
            if all(seg[j][0] == (u, v)[j % 2] for j in range(k)):
                # order-2 generators: exponents are already 1
                new = tuple(((v, u)[j % 2], 1) for j in range(k))
                y = w[:i] + new + w[i + k:]
                if (i > 0 and w[i - 1][0] == v) or (i + k < n and w[i + k][0] == new[-1][0]):
                    y = _normalize(y, f)
                yield y


def _closure_min(start: tuple, ctx: _Ctx, budget: Budget) -> tuple:
    w = _shuffle_merge(start, ctx)
    while True:
        seen = {w}
        stack = [w]
        shorter = None
        while stack and shorter is None:
            x = stack.pop()
            for y in _moves(x, ctx):
                if len(y) < len(x):
                    shorter = y
                    break
                if y not in seen:
                    seen.add(y)
                    if len(seen) > budget.max_closure:
                        raise SearchBudgetExceeded(
                            f"move closure exceeded {budget.max_closure} words")
                    stack.append(y)
        if shorter is None:
            return min(seen, key=word_key)
        w = _shuffle_merge(shorter, ctx)


@lru_cache(maxsize=200_000)
def _dyer_reduce_cached(g: DyerGraph, syl: tuple, budget: Budget) -> tuple:
    ctx = _ctx(g)
    w = _normalize(syl, ctx.f)
    if len(w) > budget.max_length:
        raise SearchBudgetExceeded(
            f"word has {len(w)} syllables, cap is {budget.max_length}")
    return _closure_min(w, ctx, budget)


def dyer_reduce(w: Word, g: DyerGraph, budget: Budget | None = None) -> Word:
    """Canonical (minimal syllable length, lexicographically least) form of ``w``."""
    f = _ctx(g).f
    for gen in w.generators:
        if gen not in f:
            raise UnknownGenerator(gen)
    return Word(_dyer_reduce_cached(g, w.syllables, budget or default_budget()))


def is_trivial(w: Word, g: DyerGraph, budget: Budget | None = None) -> bool:
    return len(dyer_reduce(w, g, budget)) == 0


def equal_in_group(u: Word, v: Word, g: DyerGraph, budget: Budget | None = None) -> bool:
    return dyer_reduce(u, g, budget) == dyer_reduce(v, g, budget)


# -- Coxeter words, letter by letter ----------------------------------------

def _tits_moves(w: tuple, m: dict) -> Iterator[tuple]:
    n = len(w)
    for i in range(n - 1):
        u, v = w[i], w[i + 1]
        if u == v:
            yield w[:i] + w[i + 2:]
            continue
        k = m.get((u, v))
        if k is not None and i + k <= n:
            seg = w[i:i + k]
            if all(seg[j] == (u, v)[j % 2] for j in range(k)):
                yield w[:i] + tuple((v, u)[j % 2] for j in range(k)) + w[i + k:]


def tits_reduce_coxeter(w: Word, cox: DyerGraph, budget: Budget | None = None) -> Word:
    """Lexicographically least geodesic for a word in a Coxeter group.

    Works on letters: a syllable ``s^k`` is expanded into ``|k|`` copies of
    ``s``.  Closure under braid moves plus cancellation of ``s s``.
    """
    budget = budget or default_budget()
    for v in cox.vertices:
        if cox.f[v] != 2:
            raise ValueError(f"not a Coxeter graph: f({v}) = {cox.f[v]}")
    letters: list[str] = []
    for gen, exp in w:
        if gen not in cox.f:
            raise UnknownGenerator(gen)
        letters.extend([gen] * abs(exp))
    if len(letters) > budget.max_length:
        raise SearchBudgetExceeded(
            f"word has {len(letters)} letters, cap is {budget.max_length}")
    m = _ctx(cox).m
    x = tuple(letters)
    while True:
        seen = {x}
        stack = [x]
        shorter = None
        while stack and shorter is None:
            y = stack.pop()
            for z in _tits_moves(y, m):
                if len(z) < len(y):
                    shorter = z
                    break
                if z not in seen:
                    seen.add(z)
                    if len(seen) > budget.max_closure:
                        raise SearchBudgetExceeded(
                            f"braid closure exceeded {budget.max_closure} words")
                    stack.append(z)
        if shorter is None:
            return Word.letters(min(seen))
        x = shorter
