"""Presentations, the Coxeter overgroups ``W(Lambda)`` and the maps between them.

Two embeddings of a Dyer group into a Coxeter group are handled:

* ``lambda``: ``W(Lambda) = D x| (Z/2)^k`` with involutions ``xi_v`` inverting ``x_v``;
* ``omega``: ``W(Lambda) = D' x| (Z/2)^k`` where ``D' = D(Omega)`` and the
  involutions ``kappa_v`` invert ``x_v`` (``v`` in ``Vp``) or swap ``x_v`` and
  ``x_v'`` (``v`` in ``Vinf``).

Here ``k = |Vp u Vinf|``.  Elements of the semidirect product are written as
words over the Dyer generators together with the ids ``xi.v`` / ``kappa.v``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .budget import Budget
from .errors import BudgetExceeded, UnknownGenerator, ValidationError
from .graph import INF, DyerGraph, Violation, make_graph, partition
from .words import IDENTITY, Word, braid_word, dyer_reduce, normalize_syllables, tits_reduce_coxeter

LAMBDA = "lambda"
OMEGA = "omega"
VARIANTS = (LAMBDA, OMEGA)


def prime(v: str) -> str:
    return v + "'"


def involution_id(v: str, variant: str = LAMBDA) -> str:
    return ("xi." if variant == LAMBDA else "kappa.") + v


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self):
        known = set(self.generators)
        for r in self.relators:
            extra = r.generators - known
            if extra:
                raise UnknownGenerator(sorted(extra))

    def to_text(self) -> str:
        lines = ["generators: " + " ".join(self.generators)]
        lines += [str(r) for r in self.relators]
        return "\n".join(lines) + "\n"


def edge_relator(u: str, v: str, m: int) -> Word:
    """``[x_u, x_v]_m ([x_v, x_u]_m)^{-1}``."""
    return braid_word(u, v, m) * braid_word(v, u, m).inverse()


def dyer_presentation(g: DyerGraph) -> Presentation:
    rels = [Word(((v, g.f[v]),)) for v in g.vertices if g.f[v] != INF]
    rels += [edge_relator(u, v, g.m[frozenset((u, v))]) for u, v in g.edges]
    return Presentation(tuple(g.vertices), tuple(rels))


def _check_fresh(g: DyerGraph, names):
    clash = sorted(n for n in names if n in g.f)
    if clash:
        raise ValidationError([Violation("NameCollision", (n,), "derived id already used") for n in clash])


def lambda_graph(g: DyerGraph) -> DyerGraph:
    """The Coxeter graph ``Lambda`` (returned as a Dyer graph with every order 2)."""
    part = partition(g)
    doubled = sorted(part.Vp | part.Vinf)
    _check_fresh(g, [prime(u) for u in doubled])
    f = {v: 2 for v in g.vertices}
    f.update({prime(u): 2 for u in doubled})
    edges = {(u, v): g.m[frozenset((u, v))] for u, v in g.edges}
    for u in doubled:
        for v in f:
            if v in (u, prime(u)):
                continue
            pair = tuple(sorted((prime(u), v)))
            edges[pair] = 2
        if u in part.Vp:
            edges[(u, prime(u))] = g.f[u]
    return make_graph(f, edges)


def omega_graph(g: DyerGraph) -> DyerGraph:
    part = partition(g)
    inf = sorted(part.Vinf)
    _check_fresh(g, [prime(u) for u in inf])
    f = {v: (g.f[v] if v in part.Vp else 2) for v in g.vertices}
    f.update({prime(u): 2 for u in inf})

    def copy(v):
        return prime(v) if v in part.Vinf else v

    edges = {}
    for u, v in g.edges:
        k = g.m[frozenset((u, v))]
        edges[tuple(sorted((u, v)))] = k
        edges[tuple(sorted((copy(u), copy(v))))] = k
        if u in part.Vinf and v in part.Vinf:
            edges[tuple(sorted((u, prime(v))))] = 2
            edges[tuple(sorted((v, prime(u))))] = 2
    return make_graph(f, edges)


def target_graph(g: DyerGraph, variant: str) -> DyerGraph:
    """The Dyer graph whose group carries the involution action: ``Gamma`` or ``Omega``."""
    if variant == LAMBDA:
        return g
    if variant == OMEGA:
        return omega_graph(g)
    raise ValueError(f"unknown variant {variant!r}")


# -- the maps phi and psi -----------------------------------------------------

def _phi_table(g: DyerGraph, variant: str) -> dict[str, Word]:
    part = partition(g)
    t = {}
    for u in part.V2:
        t[u] = Word.of(u)
    for u in part.Vp | part.Vinf:
        inv = involution_id(u, variant)
        if variant == LAMBDA or u in part.Vp:
            t[u] = Word.of(inv, u)
        else:
            t[u] = Word.of(u)
        t[prime(u)] = Word.of(inv)
    return t


def _psi_table(g: DyerGraph, variant: str) -> dict[str, Word]:
    part = partition(g)
    t = {}
    for u in part.V2:
        t[u] = Word.of(u)
    for u in part.Vp | part.Vinf:
        t[involution_id(u, variant)] = Word.of(prime(u))
        if variant == LAMBDA or u in part.Vp:
            t[u] = Word.of(prime(u), u)
        else:
            t[u] = Word.of(u)
            t[prime(u)] = Word.of(prime(u), u, prime(u))
    return t


def _substitute(w: Word, table: dict[str, Word]) -> Word:
    out = IDENTITY
    for gen, exp in w:
        img = table.get(gen)
        if img is None:
            raise UnknownGenerator(gen)
        out = out * img ** exp
    return out


def phi_map(w: Word, g: DyerGraph, variant: str = LAMBDA) -> Word:
    """Image in the semidirect product of a word over the vertices of ``Lambda``."""
    return _substitute(w, _phi_table(g, variant))


def psi_map(w: Word, g: DyerGraph, variant: str = LAMBDA) -> Word:
    """Image in ``W(Lambda)`` of a word over the semidirect-product generators."""
    return _substitute(w, _psi_table(g, variant))


# -- the involution actions ---------------------------------------------------

def _act_syllable(eps: frozenset, gen: str, exp: int, part, variant: str):
    if variant == LAMBDA:
        return (gen, -exp) if gen in eps else (gen, exp)
    if gen in eps and gen in part.Vp:
        return (gen, -exp)
    for u in eps & part.Vinf:
        if gen == u:
            return (prime(u), exp)
        if gen == prime(u):
            return (u, exp)
    return (gen, exp)


def xi_action(eps, w: Word, g: DyerGraph, variant: str = LAMBDA) -> Word:
    """Apply the product of the involutions indexed by ``eps`` to ``w``.

    ``variant="lambda"`` is the action ``xi`` on ``D``; ``variant="omega"`` is
    ``kappa`` on ``D(Omega)``.  The result is syllable-normalised.
    """
    part = partition(g)
    eps = frozenset(eps)
    bad = eps - (part.Vp | part.Vinf)
    if bad:
        raise UnknownGenerator(sorted(bad))
    tg = target_graph(g, variant)
    syl = tuple(_act_syllable(eps, gen, e, part, variant) for gen, e in w)
    return normalize_syllables(Word(syl), tg)


@dataclass(frozen=True)
class SemidirectElement:
    d: Word
    eps: frozenset

    def __str__(self):
        bits = ",".join(sorted(self.eps))
        return f"({self.d}, {{{bits}}})"

    @property
    def is_identity(self) -> bool:
        return not self.d.syllables and not self.eps


def semidirect_normal_form(w: Word, g: DyerGraph, variant: str = LAMBDA,
                           budget: Budget | None = None) -> SemidirectElement:
    """Write ``w`` as ``d * prod(involutions)`` with ``d`` in canonical form.

    Reading left to right, ``d e x = d e(x) e``: each Dyer letter is pushed
    through the accumulated involutions, each involution letter toggles a bit.
    """
    part = partition(g)
    tg = target_graph(g, variant)
    inv_of = {involution_id(u, variant): u for u in part.Vp | part.Vinf}
    eps: set = set()
    d = []
    for gen, exp in w:
        if gen in inv_of:
            if exp % 2:
                eps ^= {inv_of[gen]}
            continue
        if gen not in tg.f:
            raise UnknownGenerator(gen)
        d.append(_act_syllable(frozenset(eps), gen, exp, part, variant))
    return SemidirectElement(dyer_reduce(Word(tuple(d)), tg, budget), frozenset(eps))


# -- verification -------------------------------------------------------------

def semidirect_presentation(g: DyerGraph, variant: str = LAMBDA) -> Presentation:
    """Presentation of ``D x| (Z/2)^k`` (or ``D' x| (Z/2)^k``)."""
    part = partition(g)
    tg = target_graph(g, variant)
    base = dyer_presentation(tg)
    doubled = sorted(part.Vp | part.Vinf)
    invs = [involution_id(u, variant) for u in doubled]
    rels = list(base.relators)
    rels += [Word(((s, 2),)) for s in invs]
    for i, s in enumerate(invs):
        for t in invs[i + 1:]:
            rels.append(Word.of(s, t, (s, -1), (t, -1)))
    for u, s in zip(doubled, invs):
        if variant == OMEGA and u in part.Vinf:
            moved = {u, prime(u)}
        else:
            moved = {u}
        for v in tg.vertices:
            if v not in moved:
                rels.append(Word.of(s, v, (s, -1), (v, -1)))
        if variant == OMEGA and u in part.Vinf:
            rels.append(Word.of(s, u, s, (prime(u), -1)))
        else:
            rels.append(Word.of(s, u, s, u))
    return Presentation(tuple(tg.vertices) + tuple(invs), tuple(rels))


@dataclass(frozen=True)
class Check:
    family: str
    subject: str
    image: str
    ok: bool
    note: str = ""

    def line(self) -> str:
        tag = "ok  " if self.ok else "FAIL"
        extra = f"  ({self.note})" if self.note else ""
        return f"[{tag}] {self.family}: {self.subject} -> {self.image}{extra}"


@dataclass(frozen=True)
class VerificationReport:
    variant: str
    checks: tuple[Check, ...]
    index: int
    expected_index: int
    coxeter_graph: DyerGraph = field(repr=False)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks) and self.index == self.expected_index

    def summary(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} index={self.index}"

    def to_text(self) -> str:
        lines = [f"variant: {self.variant}"]
        lines += [c.line() for c in self.checks]
        lines.append(f"index: {self.index} (expected {self.expected_index})")
        lines.append(self.summary())
        return "\n".join(lines) + "\n"


def _guarded(family, subject, fn) -> Check:
    try:
        image, ok = fn()
        return Check(family, subject, image, ok)
    except BudgetExceeded as exc:
        return Check(family, subject, "?", False, f"budget exceeded: {exc}")


def _span_size(vectors: list[frozenset]) -> int:
    """Size of the subgroup of ``(Z/2)^k`` spanned by the given bit sets."""
    basis: dict = {}
    for vec in vectors:
        v = set(vec)
        while v:
            pivot = min(v)
            if pivot not in basis:
                basis[pivot] = v
                break
            v ^= basis[pivot]
    return 2 ** len(basis)


def verify_embedding_theorem(g: DyerGraph, variant: str = LAMBDA,
                             budget: Budget | None = None) -> VerificationReport:
    lam = lambda_graph(g)
    part = partition(g)
    checks: list[Check] = []

    def phi_nf(w):
        return semidirect_normal_form(phi_map(w, g, variant), g, variant, budget)

    for r in dyer_presentation(lam).relators:
        def run(r=r):
            nf = phi_nf(r)
            return str(nf), nf.is_identity
        checks.append(_guarded("phi(W relator)", str(r), run))

    for r in semidirect_presentation(g, variant).relators:
        def run(r=r):
            red = tits_reduce_coxeter(psi_map(r, g, variant), lam, budget)
            return str(red), not red.syllables
        checks.append(_guarded("psi(U relator)", str(r), run))

    for y in lam.vertices:
        def run(y=y):
            back = tits_reduce_coxeter(psi_map(phi_map(Word.of(y), g, variant), g, variant), lam, budget)
            return str(back), back == Word.of(y)
        checks.append(_guarded("psi.phi", y, run))

    u_gens = semidirect_presentation(g, variant).generators
    for x in u_gens:
        def run(x=x):
            w = Word.of(x)
            lhs = phi_nf(psi_map(w, g, variant))
            rhs = semidirect_normal_form(w, g, variant, budget)
            return str(lhs), lhs == rhs
        checks.append(_guarded("phi.psi", x, run))

    eps_parts = []
    for y in lam.vertices:
        try:
            eps_parts.append(phi_nf(Word.of(y)).eps)
        except BudgetExceeded:
            pass
    index = _span_size(eps_parts)
    return VerificationReport(variant, tuple(checks), index,
                              2 ** len(part.Vp | part.Vinf), lam)
