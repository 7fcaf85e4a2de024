"""Coxeter polytopes: the convex hull of the orbit of ``x0 = sum_s alpha_s*``.

Faces are produced combinatorially from cosets ``w W_T``; the geometric check
compares each coset against the argmax set of a supporting functional.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .budget import Budget
from .graph import DyerGraph, induced_subgraph
from .reflection import CoxeterElements, ReflectionRep, canonical_representation, enumerate_coxeter
from .words import Word

POINT_TOL = 1e-6


@dataclass(frozen=True)
class Face:
    T: frozenset
    rep: int                    # index of the shortlex-least element of the coset
    members: frozenset          # element indices of the coset w W_T

    @property
    def dim(self) -> int:
        return len(self.T)


@dataclass(frozen=True, eq=False)
class CoxeterPolytope:
    cox: DyerGraph
    rep: ReflectionRep
    group: CoxeterElements
    x0: np.ndarray
    points: np.ndarray          # row i is rho(w_i) x0, root coordinates
    faces: tuple[Face, ...]

    @property
    def order(self) -> int:
        return len(self.group)

    def word(self, i: int) -> Word:
        return Word.letters(self.group.words[i])

    def faces_of_dim(self, k: int) -> list[Face]:
        return [f for f in self.faces if f.dim == k]

    def edges(self) -> list[tuple[int, int, str]]:
        out = []
        for f in self.faces_of_dim(1):
            i, j = sorted(f.members)
            out.append((i, j, next(iter(f.T))))
        return out

    def b_distance(self, i: int, j: int) -> float:
        d = self.points[i] - self.points[j]
        return math.sqrt(max(float(d @ self.rep.B @ d), 0.0))

    def euclidean_points(self) -> np.ndarray:
        """Coordinates in which the B-metric is the standard one (``B = L L^T``)."""
        L = np.linalg.cholesky(self.rep.B)
        return self.points @ L


def _cosets(group: CoxeterElements, gens, T) -> list[frozenset]:
    cols = [gens.index(s) for s in sorted(T)]
    seen = [False] * len(group)
    out = []
    for start in range(len(group)):
        if seen[start]:
            continue
        block = {start}
        stack = [start]
        seen[start] = True
        while stack:
            i = stack.pop()
            for c in cols:
                j = group.right_mult[i][c]
                if not seen[j]:
                    seen[j] = True
                    block.add(j)
                    stack.append(j)
        out.append(frozenset(block))
    return out


def base_point(rep: ReflectionRep) -> np.ndarray:
    return np.linalg.solve(rep.B, np.ones(rep.rank))


def polytope(cox: DyerGraph, rep: ReflectionRep | None = None, budget: Budget | None = None) -> CoxeterPolytope:
    rep = rep or canonical_representation(cox)
    group = enumerate_coxeter(rep, budget)
    x0 = base_point(rep)
    points = np.array([m @ x0 for m in group.matrices]) if len(group) else np.zeros((1, 0))
    gens = rep.generators
    faces = []
    for k in range(len(gens) + 1):
        for T in itertools.combinations(gens, k):
            for block in _cosets(group, gens, T):
                faces.append(Face(frozenset(T), min(block), block))
    return CoxeterPolytope(cox, rep, group, x0, points, tuple(faces))


@dataclass(frozen=True)
class FaceCheck:
    ok: bool
    witness: str = ""


def face_poset_check(p: CoxeterPolytope, tol: float = 1e-7) -> FaceCheck:
    """Compare the coset poset with the face structure of the point set.

    For the coset ``w W_T`` the functional ``<rho(w) sum_{s not in T} alpha_s*, .>``
    must attain its maximum exactly on the coset's vertices; coset inclusion
    must coincide with inclusion of vertex sets.
    """
    n = len(p.points)
    for i, j in itertools.combinations(range(n), 2):
        if np.linalg.norm(p.points[i] - p.points[j]) <= POINT_TOL:
            return FaceCheck(False, f"vertices {p.word(i)} and {p.word(j)} coincide")
    dual = p.rep.dual_basis()
    gens = p.rep.generators
    for f in p.faces:
        y0 = sum((dual[:, gens.index(s)] for s in gens if s not in f.T), np.zeros(p.rep.rank))
        y = p.group.matrices[f.rep] @ y0
        values = p.points @ p.rep.B @ y
        top = values.max()
        argmax = frozenset(int(i) for i in np.flatnonzero(values >= top - tol))
        if argmax != f.members:
            return FaceCheck(False, f"coset {p.word(f.rep)}W_{sorted(f.T)}: supporting set differs")
    for f, h in itertools.permutations(p.faces, 2):
        coset_incl = f.T <= h.T and f.rep in h.members
        if coset_incl != (f.members <= h.members):
            return FaceCheck(False, f"inclusion mismatch {p.word(f.rep)}W_{sorted(f.T)} / {p.word(h.rep)}W_{sorted(h.T)}")
    return FaceCheck(True)


@dataclass(frozen=True)
class SubpolytopeMap:
    T: frozenset
    translation: np.ndarray     # u = x0 - x0_T, root coordinates of the big group
    max_error: float

    @property
    def ok(self) -> bool:
        return self.max_error <= 1e-9


def subpolytope_isometry(p: CoxeterPolytope, T) -> SubpolytopeMap:
    """Translation carrying the standalone polytope of ``W_T`` onto the face through ``x0``."""
    T = frozenset(T)
    gens = p.rep.generators
    slots = [gens.index(s) for s in sorted(T)]
    sub = polytope(induced_subgraph(p.cox, T)) if T else None

    def embed(v):
        out = np.zeros(p.rep.rank)
        out[slots] = v
        return out

    x0T = embed(sub.x0) if sub else np.zeros(p.rep.rank)
    u = p.x0 - x0T
    err = 0.0
    if sub is None:
        err = float(np.abs(u - p.points[0]).max(initial=0.0))
    else:
        for word, pt in zip(sub.group.words, sub.points):
            target = p.rep.matrix(word) @ p.x0
            err = max(err, float(np.abs(embed(pt) + u - target).max()))
    return SubpolytopeMap(T, u, err)


def corner_angle(p: CoxeterPolytope, s: str, t: str) -> float:
    """Angle at ``x0`` between the edges towards ``rho(s) x0`` and ``rho(t) x0``."""
    B = p.rep.B
    a = p.rep.rho[s] @ p.x0 - p.x0
    b = p.rep.rho[t] @ p.x0 - p.x0
    c = (a @ B @ b) / math.sqrt((a @ B @ a) * (b @ B @ b))
    return math.acos(max(-1.0, min(1.0, c)))


# -- emitters -----------------------------------------------------------------

def _cyclic_order(pts: np.ndarray, idx: list[int]) -> list[int]:
    sub = pts[idx]
    centre = sub.mean(axis=0)
    rel = sub - centre
    # plane of the face from its two leading principal directions
    _, _, vt = np.linalg.svd(rel)
    e1, e2 = vt[0], vt[1] if len(vt) > 1 else np.zeros_like(vt[0])
    ang = np.arctan2(rel @ e2, rel @ e1)
    return [idx[k] for k in np.argsort(ang)]


def to_obj(p: CoxeterPolytope) -> str:
    if p.rep.rank > 3:
        raise ValueError("OBJ output is limited to rank <= 3")
    pts = p.euclidean_points()
    pts = np.hstack([pts, np.zeros((len(pts), 3 - pts.shape[1]))])
    lines = [f"# Coxeter polytope on {','.join(p.rep.generators)}: {p.order} vertices"]
    for i, row in enumerate(pts):
        lines.append("v " + " ".join(f"{x:.9f}" for x in row) + f"  # {p.word(i)}")
    if p.rep.rank == 1:
        lines.append("l 1 2")
    else:
        for f in p.faces_of_dim(2):
            cyc = _cyclic_order(pts, sorted(f.members))
            lines.append("f " + " ".join(str(i + 1) for i in cyc))
    return "\n".join(lines) + "\n"


def face_poset_text(p: CoxeterPolytope) -> str:
    lines = []
    for f in sorted(p.faces, key=lambda f: (f.dim, sorted(f.T), f.rep)):
        verts = ", ".join(str(p.word(i)) for i in sorted(f.members))
        lines.append(f"dim={f.dim} T={{{','.join(sorted(f.T))}}} rep={p.word(f.rep)} vertices=[{verts}]")
    return "\n".join(lines) + "\n"
