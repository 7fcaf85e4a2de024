"""Finite local groups, word-metric balls and coset representatives.

A spherical subset ``X`` without infinite-order vertices generates the
finite group ``D_{X2} x prod_{v in Xp} C_{f(v)}``; it is enumerated from the
reflection representation of the Coxeter factor and exponent vectors for the
cyclic factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

from .budget import Budget, default_budget
from .errors import ContainsInfiniteVertex, NotSpherical, OrderBudgetExceeded, UnknownGenerator
from .graph import INF, DyerGraph, induced_subgraph, is_spherical, partition
from .reflection import canonical_representation, enumerate_coxeter
from .words import Syllable, Word, dyer_reduce, shortlex_key


@dataclass(frozen=True, eq=False)
class FiniteGroupTable:
    subset: frozenset
    elements: tuple[Word, ...]
    generators: tuple[Syllable, ...]
    product: tuple[tuple[int, ...], ...]   # product[i][j]: elements[i] * generators[j]
    identity: int = 0
    _index: dict = field(default_factory=dict, repr=False)
    _orders: dict = field(default_factory=dict, repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def index_of(self, w: Word) -> int:
        return self._index[w]

    def evaluate(self, w: Word, start: int | None = None) -> int:
        """Index of the element represented by an arbitrary word over the subset."""
        i = self.identity if start is None else start
        for gen, exp in w:
            order = self._orders.get(gen)
            if order is None:
                raise UnknownGenerator(gen)
            k = exp % order
            if k:
                i = self.product[i][self.generators.index((gen, k))]
        return i

    def multiply(self, i: int, j: int) -> int:
        return self.evaluate(self.elements[j], start=i)

    def inverse(self, i: int) -> int:
        return self.evaluate(self.elements[i].inverse())


def _check_local(g: DyerGraph, X: frozenset):
    for v in X:
        if v not in g.f:
            raise UnknownGenerator(v)
    if any(g.f[v] == INF for v in X):
        raise ContainsInfiniteVertex(sorted(v for v in X if g.f[v] == INF))
    if not is_spherical(g, X):
        raise NotSpherical(sorted(X))


@lru_cache(maxsize=1024)
def _finite_table(g: DyerGraph, X: frozenset, budget: Budget) -> FiniteGroupTable:
    _check_local(g, X)
    X2 = sorted(v for v in X if g.f[v] == 2)
    Xp = sorted(v for v in X if g.f[v] != 2)
    cyc_order = math.prod(g.f[v] for v in Xp)
    if cyc_order > budget.max_order:
        raise OrderBudgetExceeded(f"cyclic part of {sorted(X)} has order {cyc_order}")
    cox = enumerate_coxeter(
        canonical_representation(induced_subgraph(g, X2)),
        Budget(budget.max_length, budget.max_closure, max(1, budget.max_order // cyc_order) + 1),
    )
    total = len(cox) * cyc_order
    if total > budget.max_order:
        raise OrderBudgetExceeded(f"local group of {sorted(X)} has order {total}")

    # internal coordinates: (coxeter index, exponent tuple)
    exps = [()]
    for v in Xp:
        exps = [e + (k,) for e in exps for k in range(g.f[v])]
    states = [(c, e) for c in range(len(cox)) for e in exps]
    pos = {s: i for i, s in enumerate(states)}
    gens: list[Syllable] = [(s, 1) for s in X2]
    gens += [(v, k) for v in Xp for k in range(1, g.f[v])]

    def step(state, gen):
        c, e = state
        v, k = gen
        if v in X2:
            return (cox.right_mult[c][X2.index(v)], e)
        j = Xp.index(v)
        e = e[:j] + ((e[j] + k) % g.f[v],) + e[j + 1:]
        return (c, e)

    def word_of(state):
        c, e = state
        syl = [(s, 1) for s in cox.words[c]]
        syl += [(v, k) for v, k in zip(Xp, e) if k]
        return dyer_reduce(Word(tuple(syl)), g, budget)

    labels = [word_of(s) for s in states]
    order = sorted(range(len(states)), key=lambda i: shortlex_key(labels[i].syllables))
    new_index = {old: new for new, old in enumerate(order)}
    product = []
    for old in order:
        st = states[old]
        product.append(tuple(new_index[pos[step(st, gen)]] for gen in gens))
    elements = tuple(labels[i] for i in order)
    if len(set(elements)) != len(elements):
        raise RuntimeError(f"canonical forms collide in local group of {sorted(X)}")
    orders = {v: 2 for v in X2}
    orders.update({v: g.f[v] for v in Xp})
    return FiniteGroupTable(
        frozenset(X), elements, tuple(gens), tuple(product), 0,
        {w: i for i, w in enumerate(elements)}, orders,
    )


def enumerate_finite_dyer_group(g: DyerGraph, X: Iterable, budget: Budget | None = None) -> FiniteGroupTable:
    return _finite_table(g, frozenset(X), budget or default_budget())


def local_group(g: DyerGraph, X: Iterable, budget: Budget | None = None) -> FiniteGroupTable:
    """``D^f_X``: the finite group generated by the finite-order vertices of ``X``."""
    part = partition(g)
    return enumerate_finite_dyer_group(g, frozenset(X) - part.Vinf, budget)


# -- word-metric balls ---------------------------------------------------------

def ball_generators(g: DyerGraph) -> list[Syllable]:
    """One-syllable elements: ``x_v^k`` for ``0 < k < f(v)``, and ``x_v^{+-1}`` when ``f(v) = inf``."""
    out = []
    for v in g.vertices:
        if g.f[v] == INF:
            out += [(v, 1), (v, -1)]
        else:
            out += [(v, k) for k in range(1, g.f[v])]
    return out


@dataclass(frozen=True)
class BallEnumeration:
    """Ball in the word metric for the one-syllable generators of :func:`ball_generators`.

    A finite-order syllable ``x_v^k`` costs 1; an infinite-order generator
    costs ``|k|`` for ``x_v^k`` (otherwise every power of it would sit at
    distance 1 and balls would be infinite).
    """

    radius: int
    elements: tuple[Word, ...]            # by distance, then shortlex
    distance: dict = field(repr=False, compare=False)
    parent: dict = field(repr=False, compare=False)   # element -> (parent, generator syllable)

    def __contains__(self, w: Word) -> bool:
        return w in self.distance

    def __len__(self):
        return len(self.elements)

    def sphere(self, k: int) -> list[Word]:
        return [w for w in self.elements if self.distance[w] == k]

    def path(self, w: Word) -> list[Syllable]:
        """Generator syllables along the BFS tree from the identity to ``w``."""
        out = []
        while self.parent[w] is not None:
            w, s = self.parent[w]
            out.append(s)
        return out[::-1]


def enumerate_ball(g: DyerGraph, R: int, budget: Budget | None = None) -> BallEnumeration:
    if R < 0:
        raise ValueError("radius must be nonnegative")
    budget = budget or default_budget()
    gens = ball_generators(g)
    level = [Word()]
    elements = [Word()]
    distance = {Word(): 0}
    parent: dict = {Word(): None}
    for k in range(R):
        nxt = []
        for w in level:
            for s in gens:
                c = dyer_reduce(Word(w.syllables + (s,)), g, budget)
                if c not in distance:
                    distance[c] = k + 1
                    parent[c] = (w, s)
                    nxt.append(c)
        level = sorted(nxt, key=lambda w: shortlex_key(w.syllables))
        elements += level
        if not level:
            break
    return BallEnumeration(R, tuple(elements), distance, parent)


@lru_cache(maxsize=100_000)
def _coset_rep(g: DyerGraph, syl: tuple, X: frozenset, budget: Budget) -> Word:
    table = local_group(g, X, budget)
    best = None
    for d in table.elements:
        c = dyer_reduce(Word(syl + d.syllables), g, budget)
        if best is None or shortlex_key(c.syllables) < shortlex_key(best.syllables):
            best = c
    return best


def coset_canonical_rep(gw: Word, X: Iterable, g: DyerGraph, budget: Budget | None = None) -> Word:
    """Shortlex-least reduced word in the left coset ``gw D^f_X``."""
    return _coset_rep(g, gw.syllables, frozenset(X), budget or default_budget())
