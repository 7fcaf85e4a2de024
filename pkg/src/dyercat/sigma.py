"""The piecewise Euclidean complex Sigma, assembled from elementary blocks.

The block of a spherical subset ``Y`` is ``Cox(Y2) x [0,1]^{|Yinf|} x prod_{v in Yp} star(v)``
with the l2 product metric.  A block vertex is a triple ``(w, lam, star)``:
``w`` an element of ``D_{Y2}`` (index into the polytope), ``lam`` a subset of
``Yinf`` and ``star`` a tuple over ``Yp`` holding ``None`` for the centre of
``star(v)`` or the exponent ``i`` of the tip ``x_v^i``.

A copy ``Sigma(gY)`` sits on the vertices ``j_g(w, lam, star) = g w phi(lam) h Z``
where ``Z`` collects the centres and ``h`` the tip exponents.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .budget import Budget
from .development import DevelopmentBall, development_ball, vertex_key, vertex_text
from .errors import NotSpherical, UnlabelableEdge
from .graph import DyerGraph, induced_subgraph, is_spherical, partition, subset_label
from .groups import coset_canonical_rep
from .polytope import CoxeterPolytope, polytope
from .scwol import phi_of
from .words import Word

CENTRE = None
COX_EDGE = 2.0
CUBE_EDGE = 1.0
STAR_EDGE = 1.0


@dataclass(frozen=True)
class BlockCell:
    dim: int
    vertices: frozenset      # block vertex indices


@dataclass(frozen=True, eq=False)
class ElementaryBlock:
    graph: DyerGraph
    Y: frozenset
    Y2: tuple
    Yinf: tuple
    Yp: tuple
    cox: CoxeterPolytope
    vertices: tuple          # (w index, lam frozenset, star tuple)
    index: dict = field(repr=False)

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def expected_count(self) -> int:
        return self.cox.order * 2 ** len(self.Yinf) * math.prod(self.graph.f[v] + 1 for v in self.Yp)

    @property
    def dim(self) -> int:
        return len(self.Y)

    def edges(self) -> list[tuple[int, int, str, float]]:
        """1-cells as ``(u, v, label, length)``, ``u < v``."""
        out = []
        for a, (w, lam, st) in enumerate(self.vertices):
            for i, j, s in self.cox.edges():
                if w == i:
                    out.append((a, self.index[(j, lam, st)], s, COX_EDGE))
            for v in self.Yinf:
                if v not in lam:
                    out.append((a, self.index[(w, lam | {v}, st)], v, CUBE_EDGE))
            for k, v in enumerate(self.Yp):
                if st[k] is CENTRE:
                    for tip in range(self.graph.f[v]):
                        b = self.index[(w, lam, st[:k] + (tip,) + st[k + 1:])]
                        out.append((min(a, b), max(a, b), v, STAR_EDGE))
        return sorted(out)

    def neighbours(self, a: int) -> list[tuple[int, str, str]]:
        """``(b, label, factor)`` for the block vertices adjacent to vertex ``a``."""
        w, lam, st = self.vertices[a]
        out = []
        for i, j, s in self.cox.edges():
            if w in (i, j):
                out.append((self.index[(j if w == i else i, lam, st)], s, "cox"))
        for v in self.Yinf:
            out.append((self.index[(w, lam ^ {v}, st)], v, "cube"))
        for k, v in enumerate(self.Yp):
            if st[k] is CENTRE:
                for tip in range(self.graph.f[v]):
                    out.append((self.index[(w, lam, st[:k] + (tip,) + st[k + 1:])], v, f"star:{v}"))
            else:
                out.append((self.index[(w, lam, st[:k] + (CENTRE,) + st[k + 1:])], v, f"star:{v}"))
        return out

    def distance(self, a: int, b: int) -> float:
        """l2 product of the polytope, cube and star-tree distances."""
        wa, la, sa = self.vertices[a]
        wb, lb, sb = self.vertices[b]
        d2 = self.cox.b_distance(wa, wb) ** 2
        d2 += len(la ^ lb) * CUBE_EDGE ** 2
        for x, y in zip(sa, sb):
            if x == y:
                continue
            d = STAR_EDGE if (x is CENTRE or y is CENTRE) else 2 * STAR_EDGE
            d2 += d * d
        return math.sqrt(d2)

    def cells(self) -> list[BlockCell]:
        """Product cells: polytope face x cube face x (star vertex or star edge) per star factor."""
        cube_faces = []
        for k in range(len(self.Yinf) + 1):
            for free in itertools.combinations(self.Yinf, k):
                rest = [v for v in self.Yinf if v not in free]
                for fixed in itertools.product((0, 1), repeat=len(rest)):
                    base = frozenset(v for v, bit in zip(rest, fixed) if bit)
                    cube_faces.append((k, [base | frozenset(c) for r in range(k + 1)
                                           for c in itertools.combinations(free, r)]))
        star_cells = []
        for v in self.Yp:
            opts = [(0, [CENTRE])] + [(0, [i]) for i in range(self.graph.f[v])]
            opts += [(1, [CENTRE, i]) for i in range(self.graph.f[v])]
            star_cells.append(opts)
        out = []
        for face in self.cox.faces:
            for kc, lams in cube_faces:
                for combo in itertools.product(*star_cells):
                    dim = face.dim + kc + sum(c[0] for c in combo)
                    verts = frozenset(self.index[(w, lam, st)] for w in face.members
                                      for lam in lams for st in _star_vertices(combo))
                    out.append(BlockCell(dim, verts))
        return out


def _star_vertices(combo):
    return list(itertools.product(*(c[1] for c in combo)))


@lru_cache(maxsize=512)
def elementary_block(g: DyerGraph, Y: frozenset) -> ElementaryBlock:
    Y = frozenset(Y)
    if not is_spherical(g, Y):
        raise NotSpherical(sorted(Y))
    part = partition(g)
    Y2 = tuple(sorted(Y & part.V2))
    Yinf = tuple(sorted(Y & part.Vinf))
    Yp = tuple(sorted(Y & part.Vp))
    cox = polytope(induced_subgraph(g, Y2))
    lams = [frozenset(c) for k in range(len(Yinf) + 1) for c in itertools.combinations(Yinf, k)]
    stars = list(itertools.product(*([CENTRE] + list(range(g.f[v])) for v in Yp)))
    verts = tuple((w, lam, st) for w in range(cox.order) for lam in lams for st in stars)
    return ElementaryBlock(g, Y, Y2, Yinf, Yp, cox, verts, {v: i for i, v in enumerate(verts)})


def block_word(block: ElementaryBlock, a: int) -> tuple[Word, frozenset]:
    """``(w phi(lam) h, Z)`` for block vertex ``a``: the image under ``j`` before reduction."""
    w, lam, st = block.vertices[a]
    word = block.cox.word(w) * phi_of(lam)
    tips = [(v, i) for v, i in zip(block.Yp, st) if i is not CENTRE and i != 0]
    word = word * Word(tuple(tips))
    Z = frozenset(v for v, i in zip(block.Yp, st) if i is CENTRE)
    return word, Z


def vertex_bijection(g: DyerGraph, Y, base: Word = Word(), budget: Budget | None = None) -> dict:
    """``j_base``: block vertex triple -> Sigma vertex ``(coset rep, Z)``."""
    block = elementary_block(g, frozenset(Y))
    out = {}
    for a, triple in enumerate(block.vertices):
        word, Z = block_word(block, a)
        out[triple] = (coset_canonical_rep(base * word, Z, g, budget), Z)
    return out


# -- edge labels -----------------------------------------------------------------

def edge_label(g: DyerGraph, u, v, budget: Budget | None = None) -> str:
    """Label of the Sigma edge between vertices ``u = kX`` and ``v = lZ``."""
    (k, X), (l, Z) = u, v
    part = partition(g)
    if X == Z:
        for s in sorted(part.V2):
            if coset_canonical_rep(k * Word.of(s), X, g, budget) == l:
                return s
        for s in sorted(part.Vinf):
            for e in (1, -1):
                if coset_canonical_rep(k * Word.of((s, e)), X, g, budget) == l:
                    return s
    elif X < Z and len(Z - X) == 1 and next(iter(Z - X)) in part.Vp:
        if coset_canonical_rep(k, Z, g, budget) == l:
            return next(iter(Z - X))
    elif Z < X and len(X - Z) == 1 and next(iter(X - Z)) in part.Vp:
        if coset_canonical_rep(l, X, g, budget) == k:
            return next(iter(X - Z))
    raise UnlabelableEdge(f"{vertex_text(u)} -- {vertex_text(v)}")


# -- the ball --------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PlacedBlock:
    centre: tuple               # the development vertex gY
    block: ElementaryBlock
    sigma: tuple                # block vertex index -> Sigma vertex


@dataclass(frozen=True, eq=False)
class SigmaBall:
    graph: DyerGraph
    radius: int
    development: DevelopmentBall
    blocks: tuple               # PlacedBlock, in development-vertex order
    vertices: tuple             # Sigma vertices, sorted
    edges: dict                 # frozenset{u, v} -> label
    containing: dict = field(repr=False)   # Sigma vertex -> [(PlacedBlock, block index)]
    interior: frozenset = frozenset()

    def is_interior(self, v) -> bool:
        return v in self.interior

    def degree(self, v) -> int:
        return sum(1 for e in self.edges if v in e)

    def edge_length(self, e) -> float:
        for pb, a in self.containing[next(iter(e))]:
            for b, _, factor in pb.block.neighbours(a):
                if frozenset((pb.sigma[a], pb.sigma[b])) == e:
                    return COX_EDGE if factor == "cox" else (CUBE_EDGE if factor == "cube" else STAR_EDGE)
        raise KeyError(e)

    def to_dot(self) -> str:
        lines = ["graph sigma {"]
        for v in self.vertices:
            shape = "" if v in self.interior else " [style=dashed]"
            lines.append(f'  "{vertex_text(v)}"{shape};')
        for e in sorted(self.edges, key=lambda e: sorted(vertex_key(x) for x in e)):
            u, v = sorted(e, key=vertex_key)
            lines.append(f'  "{vertex_text(u)}" -- "{vertex_text(v)}" [label="{self.edges[e]}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def sigma_ball(g: DyerGraph, R: int, budget: Budget | None = None) -> SigmaBall:
    """Blocks ``Sigma(gY)`` for every vertex ``gY`` of the development ball of radius ``R``.

    Blocks are kept whole, so some Sigma vertices lie outside the development
    ball.  A Sigma vertex is interior when every block that contains it (one
    per vertex of its outgoing star) is present.
    """
    dev = development_ball(g, R, budget)
    placed = []
    containing: dict = {}
    edges: dict = {}
    for centre in dev.vertices:
        k, Y = centre
        block = elementary_block(g, Y)
        jmap = vertex_bijection(g, Y, k, budget)
        sigma = tuple(jmap[t] for t in block.vertices)
        if len(set(sigma)) != len(sigma):
            raise RuntimeError(f"vertex map of block {vertex_text(centre)} is not injective")
        pb = PlacedBlock(centre, block, sigma)
        placed.append(pb)
        for a, v in enumerate(sigma):
            containing.setdefault(v, []).append((pb, a))
        for a, b, label, _ in block.edges():
            e = frozenset((sigma[a], sigma[b]))
            old = edges.setdefault(e, label)
            if old != label:
                raise UnlabelableEdge(f"edge {[vertex_text(x) for x in e]} labelled {old} and {label}")
    dev_vertices = set(dev.vertices)
    interior = frozenset(
        v for v in containing
        if v in dev_vertices and dev.interior_out[v]
    )
    vertices = tuple(sorted(containing, key=vertex_key))
    return SigmaBall(g, R, dev, tuple(placed), vertices, edges, containing, interior)


# -- consistency checks ---------------------------------------------------------

def gluing_problems(ball: SigmaBall, tol: float = 1e-9) -> list[str]:
    """Blocks nested along the development must agree on vertices and distances."""
    out = []
    by_centre = {pb.centre: pb for pb in ball.blocks}
    dev = ball.development
    for e in dev.edges:
        small, big = by_centre.get(dev.i[e]), by_centre.get(dev.t[e])
        if small is None or big is None:
            continue
        pos = {v: a for a, v in enumerate(big.sigma)}
        if not set(small.sigma) <= set(pos):
            out.append(f"block {vertex_text(small.centre)} not inside {vertex_text(big.centre)}")
            continue
        for a, b in itertools.combinations(range(len(small.sigma)), 2):
            d1 = small.block.distance(a, b)
            d2 = big.block.distance(pos[small.sigma[a]], pos[small.sigma[b]])
            if abs(d1 - d2) > tol:
                out.append(f"distance {vertex_text(small.sigma[a])}-{vertex_text(small.sigma[b])}: "
                           f"{d1} in {vertex_text(small.centre)}, {d2} in {vertex_text(big.centre)}")
    return out


def label_problems(ball: SigmaBall, budget: Budget | None = None) -> list[str]:
    """Block labels against the coset-arithmetic classification of edges."""
    out = []
    for e, label in ball.edges.items():
        u, v = sorted(e, key=vertex_key)
        try:
            other = edge_label(ball.graph, u, v, budget)
        except UnlabelableEdge as exc:
            out.append(str(exc))
            continue
        if other != label:
            out.append(f"{vertex_text(u)}--{vertex_text(v)}: block says {label}, cosets say {other}")
    return out


# -- OBJ --------------------------------------------------------------------------

def _block_coords(block: ElementaryBlock) -> np.ndarray:
    cox = block.cox.euclidean_points()
    rows = []
    for w, lam, st in block.vertices:
        row = list(cox[w])
        row += [1.0 if v in lam else 0.0 for v in block.Yinf]
        for v, i in zip(block.Yp, st):
            if i is CENTRE:
                row += [0.0, 0.0]
            else:
                ang = 2 * math.pi * i / block.graph.f[v]
                row += [math.cos(ang), math.sin(ang)]
        rows.append(row)
    return np.array(rows, dtype=float).reshape(len(rows), -1)


def to_obj(ball: SigmaBall, spacing: float = 8.0) -> str:
    """Each block drawn in its own product coordinates, blocks laid out along a grid.

    Only intrinsic block geometry is meaningful; positions of different
    blocks relative to each other carry no metric information.
    """
    lines = [f"# Sigma ball, radius {ball.radius}: {len(ball.blocks)} blocks, {len(ball.vertices)} vertices"]
    base = 1
    side = max(1, math.ceil(math.sqrt(len(ball.blocks))))
    for n, pb in enumerate(ball.blocks):
        coords = _block_coords(pb.block)
        if coords.shape[1] > 3:
            raise ValueError(f"block {vertex_text(pb.centre)} needs {coords.shape[1]} coordinates")
        coords = np.hstack([coords, np.zeros((len(coords), 3 - coords.shape[1]))])
        coords += np.array([spacing * (n % side), spacing * (n // side), 0.0])
        lines.append(f"o block_{n}  # {vertex_text(pb.centre)}")
        for a, row in enumerate(coords):
            lines.append("v " + " ".join(f"{x:.9f}" for x in row) + f"  # {vertex_text(pb.sigma[a])}")
        for a, b, _, _ in pb.block.edges():
            lines.append(f"l {base + a} {base + b}")
        for cell in pb.block.cells():
            if cell.dim == 2:
                idx = sorted(cell.vertices)
                pts = coords[idx]
                centre = pts.mean(axis=0)
                _, _, vt = np.linalg.svd(pts - centre)
                ang = np.arctan2((pts - centre) @ vt[1], (pts - centre) @ vt[0])
                ring = [idx[k] for k in np.argsort(ang)]
                lines.append("f " + " ".join(str(base + a) for a in ring))
        base += len(coords)
    return "\n".join(lines) + "\n"


def block_text(block: ElementaryBlock) -> str:
    lines = [f"block {subset_label(block.Y)}: {block.vertex_count} vertices"]
    for a in range(block.vertex_count):
        word, Z = block_word(block, a)
        lines.append(f"  {word}{subset_label(Z)}")
    return "\n".join(lines) + "\n"
