"""Finite balls of the development of the complex of groups over spherical subsets.

Vertices are pairs ``(k, X)`` standing for the coset ``k D^f_X`` (with ``k`` the
canonical coset representative); the edge ``(k, (X, Y, w))`` runs from
``(k, X)`` to ``(k phi(w)^{-1}, Y)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .budget import Budget
from .errors import BoundaryVertex
from .graph import DyerGraph, subset_label
from .groups import coset_canonical_rep, enumerate_ball, local_group
from .scwol import Scwol, dyer_scwol, edge_key, edge_text, phi_of, subset_key
from .words import shortlex_key

IN = "in"
OUT = "out"


def vertex_key(v):
    k, X = v
    return (subset_key(X), shortlex_key(k.syllables))


def vertex_text(v) -> str:
    k, X = v
    return f"{k}{subset_label(X)}"


@dataclass(frozen=True, eq=False)
class DevelopmentBall:
    graph: DyerGraph
    radius: int
    vertices: tuple                 # (Word, frozenset), sorted
    edges: tuple                    # (Word, (X, Y, w))
    i: dict
    t: dict
    interior_in: dict = field(repr=False)
    interior_out: dict = field(repr=False)

    def is_interior(self, v) -> bool:
        return self.interior_in[v] and self.interior_out[v]

    @property
    def interior(self) -> list:
        return [v for v in self.vertices if self.is_interior(v)]

    def as_scwol(self) -> Scwol:
        es = set(self.edges)
        comp = {}
        into: dict = {}
        for b in self.edges:
            into.setdefault(self.t[b], []).append(b)
        for a in self.edges:
            for b in into.get(self.i[a], ()):
                ea, eb = a[1], b[1]
                ab = (b[0], (eb[0], ea[1], ea[2] | eb[2]))
                if ab in es:
                    comp[(a, b)] = ab
        return Scwol(self.vertices, self.edges, self.i, self.t, comp)

    def to_text(self) -> str:
        lines = [f"radius: {self.radius}",
                 f"vertices: {len(self.vertices)} ({len(self.interior)} interior)"]
        for v in self.vertices:
            flag = "interior" if self.is_interior(v) else "boundary"
            lines.append(f"vertex {vertex_text(v)} {flag}")
        for e in self.edges:
            lines.append(f"edge {e[0]}{edge_text(e[1])}: {vertex_text(self.i[e])} -> {vertex_text(self.t[e])}")
        return "\n".join(lines) + "\n"


def out_neighbors(g: DyerGraph, v, scwol: Scwol, budget: Budget | None = None) -> list:
    """``[(edge, target)]`` for the edges of the development leaving ``v``."""
    k, X = v
    out = []
    for e in scwol.out_edges(X):
        _, Y, w = e
        rep = coset_canonical_rep(k * phi_of(w).inverse(), Y, g, budget)
        out.append(((k, e), (rep, Y)))
    return out


def in_neighbors(g: DyerGraph, v, scwol: Scwol, budget: Budget | None = None) -> list:
    """``[(edge, source)]`` for the edges of the development arriving at ``v``."""
    k, X = v
    table = local_group(g, X, budget)
    out = []
    for e in scwol.in_edges(X):
        W, _, w = e
        seen = set()
        for d in table.elements:
            rep = coset_canonical_rep(k * phi_of(w) * d, W, g, budget)
            if rep not in seen:
                seen.add(rep)
                out.append(((rep, e), (rep, W)))
    return out


def development_ball(g: DyerGraph, R: int, budget: Budget | None = None) -> DevelopmentBall:
    scwol = dyer_scwol(g)
    ball = enumerate_ball(g, R, budget)
    verts = set()
    for h in ball.elements:
        for X in scwol.vertices:
            verts.add((coset_canonical_rep(h, X, g, budget), X))
    edges, i, t = [], {}, {}
    interior_out, interior_in = {}, {}
    for v in verts:
        nbrs = out_neighbors(g, v, scwol, budget)
        interior_out[v] = all(u in verts for _, u in nbrs)
        for e, u in nbrs:
            if u in verts:
                edges.append(e)
                i[e], t[e] = v, u
        interior_in[v] = all(u in verts for _, u in in_neighbors(g, v, scwol, budget))
    vertices = tuple(sorted(verts, key=vertex_key))
    edges.sort(key=lambda e: (vertex_key(i[e]), edge_key(e[1])))
    return DevelopmentBall(g, R, vertices, tuple(edges), i, t, interior_in, interior_out)


def star_link(ball: DevelopmentBall, v, direction: str = IN, star: bool = True) -> Scwol:
    """Incoming/outgoing star (or link, with ``star=False``) of ``v`` as a full sub-scwol."""
    if direction not in (IN, OUT):
        raise ValueError(f"direction must be {IN!r} or {OUT!r}")
    flags = ball.interior_in if direction == IN else ball.interior_out
    if v not in flags:
        raise KeyError(v)
    if not flags[v]:
        raise BoundaryVertex(vertex_text(v))
    if direction == IN:
        nbrs = {ball.i[e] for e in ball.edges if ball.t[e] == v}
    else:
        nbrs = {ball.t[e] for e in ball.edges if ball.i[e] == v}
    if star:
        nbrs.add(v)
    return ball.as_scwol().full_subscwol(nbrs)
