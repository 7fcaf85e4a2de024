"""Vertex links of Sigma and the metric-flag test behind the CAT(0) certificate.

Link vertices are named by the neighbouring Sigma vertex; each carries the
label of the connecting edge.  An edge between link vertices with labels
``u`` and ``v`` has spherical length ``pi - pi/m(u, v)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .budget import Budget
from .development import vertex_key, vertex_text
from .errors import BoundaryVertex
from .graph import INF, DyerGraph, extended_m, is_positive_definite, partition, spherical_subsets
from .sigma import SigmaBall, edge_label, sigma_ball

RIGHT = math.pi / 2
LENGTH_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class LinkComplex:
    vertices: tuple
    labels: dict                   # vertex -> label in V
    lengths: dict                  # frozenset{u, v} -> spherical length
    facets: frozenset              # maximal simplices (frozensets of vertices)

    def adjacent(self, u, v) -> bool:
        return frozenset((u, v)) in self.lengths

    def is_simplex(self, s) -> bool:
        s = frozenset(s)
        return len(s) <= 1 or any(s <= f for f in self.facets)

    def cliques(self, min_size: int = 2):
        """Every set of pairwise adjacent vertices with at least ``min_size`` elements."""
        vs = list(self.vertices)
        nbr = {v: {u for u in vs if u != v and self.adjacent(u, v)} for v in vs}

        def grow(clique, cands):
            if len(clique) >= min_size:
                yield frozenset(clique)
            for k, v in enumerate(cands):
                yield from grow(clique + [v], [u for u in cands[k + 1:] if u in nbr[v]])

        yield from grow([], vs)

    def label_multiset(self) -> list[str]:
        return sorted(self.labels[v] for v in self.vertices)


def cosine_of_lengths(lk: LinkComplex, clique) -> np.ndarray:
    clique = list(clique)
    n = len(clique)
    c = np.eye(n)
    for i, j in itertools.combinations(range(n), 2):
        c[i, j] = c[j, i] = math.cos(lk.lengths[frozenset((clique[i], clique[j]))])
    return c


def link_length(g: DyerGraph, u: str, v: str) -> float:
    m = extended_m(g, u, v)
    return math.pi if m == INF else math.pi - math.pi / m


def vertex_link(ball: SigmaBall, v, budget: Budget | None = None) -> LinkComplex:
    """Union of the links of ``v`` in the blocks containing it.

    Within a block the link is the join of a full simplex on the polytope
    neighbours, a full simplex on the cube neighbours, and per star factor
    either the single centre or the discrete set of tips.
    """
    if v not in ball.containing:
        raise KeyError(v)
    if not ball.is_interior(v):
        raise BoundaryVertex(vertex_text(v))
    g = ball.graph
    labels: dict = {}
    facets = set()
    for pb, a in ball.containing[v]:
        groups: dict = {}
        for b, label, factor in pb.block.neighbours(a):
            u = pb.sigma[b]
            old = labels.setdefault(u, label)
            if old != label:
                raise RuntimeError(f"link vertex {vertex_text(u)} labelled {old} and {label}")
            groups.setdefault(factor, []).append(u)
        simplex_parts = [groups.pop("cox", []), groups.pop("cube", [])]
        fixed = frozenset(x for part in simplex_parts for x in part)
        choices = [sorted(opts, key=vertex_key) for _, opts in sorted(groups.items())]
        for pick in itertools.product(*choices):
            facets.add(fixed | frozenset(pick))
    # drop facets contained in others
    facets = {f for f in facets if not any(f < h for h in facets)}
    lengths = {}
    for f in facets:
        for x, y in itertools.combinations(f, 2):
            lengths[frozenset((x, y))] = link_length(g, labels[x], labels[y])
    for u in labels:
        if edge_label(g, v, u, budget) != labels[u]:
            raise RuntimeError(f"edge {vertex_text(v)}--{vertex_text(u)} label mismatch")
    verts = tuple(sorted(labels, key=vertex_key))
    return LinkComplex(verts, labels, lengths, frozenset(facets))


@dataclass(frozen=True)
class FlagCheck:
    ok: bool
    lengths_ok: bool
    flag_ok: bool
    witness: tuple = ()
    detail: str = ""


def check_metric_flag(lk: LinkComplex, threshold: float | None = None) -> FlagCheck:
    """All edges at least pi/2, and cliques span simplices exactly when their cosine matrix is PD."""
    short = [e for e, d in lk.lengths.items() if d < RIGHT - LENGTH_TOL]
    if short:
        e = min(short, key=lambda e: lk.lengths[e])
        return FlagCheck(False, False, True, tuple(e), f"edge length {lk.lengths[e]:.6f} < pi/2")
    for clique in lk.cliques(2):
        pd = is_positive_definite(cosine_of_lengths(lk, clique), threshold)
        if pd != lk.is_simplex(clique):
            what = "positive definite but no simplex" if pd else "simplex but not positive definite"
            return FlagCheck(False, True, False, tuple(clique), what)
    return FlagCheck(True, True, True)


@dataclass(frozen=True)
class VertexVerdict:
    vertex: tuple
    link_size: int
    check: FlagCheck


@dataclass(frozen=True, eq=False)
class Cat0Certificate:
    radius: int
    verdicts: tuple
    skipped: int
    ball: SigmaBall = field(repr=False)

    @property
    def passed(self) -> bool:
        return bool(self.verdicts) and all(v.check.ok for v in self.verdicts)

    def to_text(self) -> str:
        lines = [f"radius: {self.radius}",
                 f"interior vertices checked: {len(self.verdicts)}",
                 f"boundary vertices skipped: {self.skipped}",
                 "simple connectedness: by construction (development is a subdivision of Sigma), not re-checked"]
        for v in self.verdicts:
            c = v.check
            status = "pass" if c.ok else "FAIL"
            extra = ""
            if not c.ok:
                extra = f" witness={[vertex_text(x) for x in c.witness]} {c.detail}"
            lines.append(f"{status} {vertex_text(v.vertex)} link={v.link_size} "
                         f"lengths={'ok' if c.lengths_ok else 'bad'} flag={'ok' if c.flag_ok else 'bad'}{extra}")
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines) + "\n"


def certify_cat0(g: DyerGraph, R: int, budget: Budget | None = None,
                 ball: SigmaBall | None = None) -> Cat0Certificate:
    if R < 1:
        raise ValueError("certification needs radius >= 1")
    ball = ball or sigma_ball(g, R, budget)
    verdicts = []
    for v in ball.vertices:
        if not ball.is_interior(v):
            continue
        lk = vertex_link(ball, v, budget)
        verdicts.append(VertexVerdict(v, len(lk.vertices), check_metric_flag(lk)))
    return Cat0Certificate(R, tuple(verdicts), len(ball.vertices) - len(verdicts), ball)


def dimension_stats(g: DyerGraph) -> tuple[int, int]:
    """``(dim Sigma, dim Sigma(W))`` from the spherical subsets."""
    part = partition(g)
    sph = spherical_subsets(g)
    dim_sigma = max(len(Y) for Y in sph)
    dim_w = max(len(Y) + len(part.Vp) + len(part.Vinf - Y) for Y in sph)
    assert dim_sigma <= dim_w
    return dim_sigma, dim_w
