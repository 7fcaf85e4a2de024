"""Dyer graphs: validation, vertex partition, cosine matrices and sphericity.

A Dyer graph is a simplicial graph with vertex orders ``f(v)`` in
``{2, 3, ...} U {inf}`` and edge labels ``m(e) >= 2`` such that every edge
at a vertex of order ``>= 3`` carries the label 2.
"""

from __future__ import annotations

import json
import math
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DuplicateVertex, UnknownVertex, ValidationError

INF = math.inf
PD_PIVOT_THRESHOLD = 1e-9

_pd_threshold: ContextVar[float] = ContextVar("pd_threshold", default=PD_PIVOT_THRESHOLD)


def pd_threshold() -> float:
    return _pd_threshold.get()


@contextmanager
def tolerance(value: float):
    """Temporarily replace the Cholesky pivot threshold used by the sphericity tests."""
    if not 0 < value < 1e-3:
        raise ValueError("tolerance must lie in (0, 1e-3)")
    token = _pd_threshold.set(value)
    try:
        yield
    finally:
        _pd_threshold.reset(token)


def _fmt_order(f) -> str:
    return "inf" if f == INF else str(f)


@dataclass(frozen=True)
class Violation:
    kind: str            # NonSimplicial | BadLabelConstraint | MissingLabel | InvalidLabel | UnknownVertex
    witness: tuple
    detail: str = ""

    def __str__(self):
        w = ",".join(str(x) for x in self.witness)
        return f"{self.kind}({w}){': ' + self.detail if self.detail else ''}"


@dataclass(frozen=True)
class VertexPartition:
    V2: frozenset
    Vp: frozenset
    Vinf: frozenset


@dataclass(frozen=True, eq=False)
class DyerGraph:
    """Immutable Dyer graph.  Build through :func:`make_graph` or :func:`validate`."""

    vertices: tuple[str, ...]
    f: Mapping[str, float]
    m: Mapping[frozenset, int]
    _key: tuple = field(init=False, repr=False)

    def __post_init__(self):
        key = (
            self.vertices,
            tuple(self.f[v] for v in self.vertices),
            tuple(sorted((tuple(sorted(e)), k) for e, k in self.m.items())),
        )
        object.__setattr__(self, "_key", key)

    def __eq__(self, other):
        return isinstance(other, DyerGraph) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    @property
    def edges(self) -> list[tuple[str, str]]:
        return sorted(tuple(sorted(e)) for e in self.m)

    def has_vertex(self, v) -> bool:
        return v in self.f

    def adjacent(self, u, v) -> bool:
        return frozenset((u, v)) in self.m

    def neighbors(self, v) -> list[str]:
        return [u for u in self.vertices if u != v and self.adjacent(u, v)]

    def order(self, v):
        try:
            return self.f[v]
        except KeyError:
            raise UnknownVertex(v) from None

    def __repr__(self):
        vs = " ".join(f"{v}:{_fmt_order(self.f[v])}" for v in self.vertices)
        es = " ".join(f"{u}-{v}:{self.m[frozenset((u, v))]}" for u, v in self.edges)
        return f"DyerGraph({vs} | {es})"


def _coerce_order(value):
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "infinity", "∞"):
            return INF
        value = int(value)
    if value == INF:
        return INF
    if isinstance(value, bool) or not float(value).is_integer():
        raise ValueError(f"bad order {value!r}")
    return int(value)


def find_violations(vertices, edges) -> list[Violation]:
    """Every constraint a raw description breaks.

    ``vertices`` is an iterable of ``(id, f)`` pairs and ``edges`` of
    ``(u, v, m)`` triples; ``None`` stands for a missing label.
    """
    out: list[Violation] = []
    f: dict = {}
    for vid, order in vertices:
        if vid in f:
            out.append(Violation("NonSimplicial", (vid,), "duplicate vertex"))
            continue
        if order is None:
            out.append(Violation("MissingLabel", (vid,), "vertex order"))
            f[vid] = None
            continue
        try:
            order = _coerce_order(order)
        except (TypeError, ValueError):
            out.append(Violation("InvalidLabel", (vid,), f"order {order!r}"))
            f[vid] = None
            continue
        if order != INF and order < 2:
            out.append(Violation("InvalidLabel", (vid,), f"order {order} < 2"))
        f[vid] = order

    seen = set()
    for u, v, label in edges:
        if u == v:
            out.append(Violation("NonSimplicial", (u, v), "loop"))
            continue
        for x in (u, v):
            if x not in f:
                out.append(Violation("UnknownVertex", (x,), f"edge {u}-{v}"))
        e = frozenset((u, v))
        if e in seen:
            out.append(Violation("NonSimplicial", tuple(sorted(e)), "duplicate edge"))
            continue
        seen.add(e)
        if label is None:
            out.append(Violation("MissingLabel", tuple(sorted(e)), "edge label"))
            continue
        if isinstance(label, bool) or not isinstance(label, int) or label < 2:
            out.append(Violation("InvalidLabel", tuple(sorted(e)), f"m={label!r}"))
            continue
        for x in sorted(e):
            fx = f.get(x)
            if fx is not None and fx >= 3 and label != 2:
                out.append(Violation(
                    "BadLabelConstraint", (*sorted(e), x),
                    f"f({x})={_fmt_order(fx)} forces m=2, got {label}"))
    return out


def validate(vertices, edges) -> DyerGraph:
    """Build a :class:`DyerGraph`, raising :class:`ValidationError` listing all violations."""
    vertices = list(vertices)
    edges = list(edges)
    problems = find_violations(vertices, edges)
    if problems:
        raise ValidationError(problems)
    f = {str(v): _coerce_order(o) for v, o in vertices}
    m = {frozenset((str(u), str(v))): int(k) for u, v, k in edges}
    return DyerGraph(tuple(sorted(f)), f, m)


def make_graph(f: Mapping, edges: Mapping | Iterable = ()) -> DyerGraph:
    """Shorthand: ``make_graph({"a": INF, "b": 2}, {("a", "b"): 2})``."""
    if isinstance(edges, Mapping):
        edges = [(u, v, k) for (u, v), k in edges.items()]
    return validate(list(f.items()), list(edges))


# -- JSON document format ---------------------------------------------------

def from_document(doc: Mapping) -> DyerGraph:
    try:
        vertices = [(d["id"], d.get("f")) for d in doc.get("vertices", [])]
        edges = [(d["u"], d["v"], d.get("m")) for d in doc.get("edges", [])]
    except (KeyError, TypeError, AttributeError) as exc:
        raise ValidationError([Violation("MissingLabel", (), f"malformed document: {exc}")])
    return validate(vertices, edges)


def to_document(g: DyerGraph) -> dict:
    return {
        "vertices": [
            {"id": v, "f": "inf" if g.f[v] == INF else g.f[v]} for v in g.vertices
        ],
        "edges": [{"u": u, "v": v, "m": g.m[frozenset((u, v))]} for u, v in g.edges],
    }


def loads(text: str) -> DyerGraph:
    return from_document(json.loads(text))


def dumps(g: DyerGraph) -> str:
    return json.dumps(to_document(g), indent=2) + "\n"


def load(path) -> DyerGraph:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


# -- structure --------------------------------------------------------------

def partition(g: DyerGraph) -> VertexPartition:
    V2 = frozenset(v for v in g.vertices if g.f[v] == 2)
    Vinf = frozenset(v for v in g.vertices if g.f[v] == INF)
    return VertexPartition(V2, frozenset(g.vertices) - V2 - Vinf, Vinf)


def _check_vertices(g: DyerGraph, vs):
    for v in vs:
        if v not in g.f:
            raise UnknownVertex(v)


def induced_subgraph(g: DyerGraph, W: Iterable) -> DyerGraph:
    W = set(W)
    _check_vertices(g, W)
    f = {v: g.f[v] for v in W}
    m = {e: k for e, k in g.m.items() if e <= W}
    return DyerGraph(tuple(sorted(W)), f, m)


def extended_m(g: DyerGraph, u, v):
    """Edge label, extended by ``m(u,u) = 1`` and ``inf`` on non-edges."""
    _check_vertices(g, (u, v))
    if u == v:
        return 1
    return g.m.get(frozenset((u, v)), INF)


def cosine_matrix(g: DyerGraph, subset: Sequence) -> np.ndarray:
    subset = list(subset)
    _check_vertices(g, subset)
    if len(set(subset)) != len(subset):
        raise DuplicateVertex(subset)
    n = len(subset)
    c = np.empty((n, n))
    for i, u in enumerate(subset):
        for j, v in enumerate(subset):
            mm = extended_m(g, u, v)
            c[i, j] = -1.0 if mm == INF else math.cos(math.pi - math.pi / mm)
    return c


def is_positive_definite(a: np.ndarray, threshold: float | None = None) -> bool:
    """Attempted Cholesky factorisation; fails as soon as a pivot drops to ``threshold``."""
    if threshold is None:
        threshold = pd_threshold()
    a = np.array(a, dtype=float)
    n = a.shape[0]
    L = np.zeros_like(a)
    for j in range(n):
        pivot = a[j, j] - L[j, :j] @ L[j, :j]
        if pivot <= threshold:
            return False
        L[j, j] = math.sqrt(pivot)
        for i in range(j + 1, n):
            L[i, j] = (a[i, j] - L[i, :j] @ L[j, :j]) / L[j, j]
    return True


def is_spherical(g: DyerGraph, subset: Iterable) -> bool:
    subset = sorted(set(subset))
    _check_vertices(g, subset)
    return is_positive_definite(cosine_matrix(g, subset))


def spherical_subsets(g: DyerGraph) -> list[frozenset]:
    """All spherical vertex subsets, smallest first.

    Grows cliques one vertex at a time (larger than the current maximum, so
    each clique is produced once) and only extends sets that are spherical;
    this is enough because sphericity is closed under taking subsets.
    """
    found = [frozenset()]
    frontier = [()]
    while frontier:
        nxt = []
        for clique in frontier:
            start = clique[-1] if clique else None
            for v in g.vertices:
                if start is not None and v <= start:
                    continue
                if not all(g.adjacent(u, v) for u in clique):
                    continue
                cand = clique + (v,)
                if is_spherical(g, cand):
                    found.append(frozenset(cand))
                    nxt.append(cand)
        frontier = nxt
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def subset_label(s: Iterable) -> str:
    s = sorted(s)
    return "{" + ",".join(s) + "}"


def gamma(m_bc: int = 4, p: int = 3) -> DyerGraph:
    """The four-vertex example graph a(inf) -2- b(2) -m- c(2) -2- d(p)."""
    return make_graph(
        {"a": INF, "b": 2, "c": 2, "d": p},
        {("a", "b"): 2, ("b", "c"): m_bc, ("c", "d"): 2},
    )
