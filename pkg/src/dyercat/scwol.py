"""Small categories without loops, the scwol of spherical subsets, and complexes of groups.

A scwol is stored as vertex and edge tuples, the maps ``i`` and ``t``, and a
composition table keyed by composable pairs ``(a, b)`` with ``t(b) = i(a)``;
``compose[a, b]`` is the edge ``ab`` running from ``i(b)`` to ``t(a)``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from .budget import Budget
from .errors import NotAPartialOrder, NotATree, NotConnected
from .graph import DyerGraph, induced_subgraph, partition, spherical_subsets, subset_label
from .groups import local_group
from .presentations import Presentation, dyer_presentation
from .words import IDENTITY, Word, is_trivial


@dataclass(frozen=True, eq=False)
class Scwol:
    vertices: tuple
    edges: tuple
    i: Mapping
    t: Mapping
    compose: Mapping = field(default_factory=dict)

    def __len__(self):
        return len(self.vertices)

    def composable(self):
        """All pairs ``(a, b)`` with ``t(b) = i(a)``."""
        into: dict = {}
        for b in self.edges:
            into.setdefault(self.t[b], []).append(b)
        for a in self.edges:
            for b in into.get(self.i[a], ()):
                yield a, b

    def in_edges(self, v) -> list:
        return [e for e in self.edges if self.t[e] == v]

    def out_edges(self, v) -> list:
        return [e for e in self.edges if self.i[e] == v]

    def check_axioms(self) -> list[str]:
        """Every violated scwol axiom, as text.  Empty means valid."""
        problems = []
        vs = set(self.vertices)
        for e in self.edges:
            if self.i[e] not in vs or self.t[e] not in vs:
                problems.append(f"edge {e!r} has an endpoint outside the vertex set")
            if self.i[e] == self.t[e]:
                problems.append(f"edge {e!r} is a loop")
        es = set(self.edges)
        for a, b in self.composable():
            ab = self.compose.get((a, b))
            if ab is None:
                problems.append(f"composition of {a!r} and {b!r} undefined")
                continue
            if ab not in es:
                problems.append(f"composite {ab!r} is not an edge")
                continue
            if self.i[ab] != self.i[b] or self.t[ab] != self.t[a]:
                problems.append(f"composite {ab!r} has wrong endpoints")
        extra = set(self.compose) - set(self.composable())
        for a, b in extra:
            problems.append(f"composition defined on non-composable pair {a!r}, {b!r}")
        for a, b in self.composable():
            ab = self.compose.get((a, b))
            if ab is None:
                continue
            for c in self.edges:
                if self.t[c] != self.i[b]:
                    continue
                bc = self.compose.get((b, c))
                left = self.compose.get((ab, c))
                right = self.compose.get((a, bc)) if bc is not None else None
                if left is None or left != right:
                    problems.append(f"associativity fails on {a!r}, {b!r}, {c!r}")
        return problems

    def full_subscwol(self, vs: Iterable) -> "Scwol":
        vs = set(vs)
        verts = tuple(v for v in self.vertices if v in vs)
        edges = tuple(e for e in self.edges if self.i[e] in vs and self.t[e] in vs)
        es = set(edges)
        comp = {k: c for k, c in self.compose.items() if k[0] in es and k[1] in es}
        return Scwol(verts, edges, {e: self.i[e] for e in edges}, {e: self.t[e] for e in edges}, comp)

    def relabel(self, vmap: Callable, emap: Callable) -> "Scwol":
        edges = tuple(emap(e) for e in self.edges)
        return Scwol(
            tuple(vmap(v) for v in self.vertices), edges,
            {emap(e): vmap(self.i[e]) for e in self.edges},
            {emap(e): vmap(self.t[e]) for e in self.edges},
            {(emap(a), emap(b)): emap(c) for (a, b), c in self.compose.items()},
        )

    def same_as(self, other: "Scwol") -> bool:
        """Equality of vertex sets, edge sets, endpoint maps and composition."""
        return (set(self.vertices) == set(other.vertices)
                and set(self.edges) == set(other.edges)
                and all(self.i[e] == other.i[e] and self.t[e] == other.t[e] for e in self.edges)
                and dict(self.compose) == dict(other.compose))


# -- posets and products ------------------------------------------------------

def scwol_from_poset(elements: Sequence, less: Iterable[tuple]) -> Scwol:
    """One edge ``(a, b)`` from ``b`` to ``a`` for every relation ``b < a``.

    ``less`` lists pairs ``(b, a)`` meaning ``b < a``; it must already be a
    strict partial order (irreflexive, antisymmetric, transitive).
    """
    elements = tuple(elements)
    known = set(elements)
    rel = set()
    for b, a in less:
        if a not in known or b not in known:
            raise NotAPartialOrder(f"{b!r} < {a!r} mentions an unknown element")
        if a == b:
            raise NotAPartialOrder(f"{a!r} < {a!r}")
        rel.add((b, a))
    for b, a in rel:
        if (a, b) in rel:
            raise NotAPartialOrder(f"{a!r} and {b!r} are mutually below each other")
    for (c, b), (b2, a) in itertools.product(rel, rel):
        if b == b2 and (c, a) not in rel:
            raise NotAPartialOrder(f"not transitive: {c!r} < {b!r} < {a!r}")
    edges = tuple(sorted(((a, b) for b, a in rel), key=repr))
    i = {e: e[1] for e in edges}
    t = {e: e[0] for e in edges}
    comp = {}
    for a, b in itertools.product(edges, edges):
        if t[b] == i[a]:
            comp[(a, b)] = (a[0], b[1])
    return Scwol(elements, edges, i, t, comp)


def powerset_scwol(S: Iterable) -> Scwol:
    """``Y_S``: the scwol of the power set of ``S`` ordered by inclusion."""
    S = sorted(S)
    subsets = [frozenset(c) for k in range(len(S) + 1) for c in itertools.combinations(S, k)]
    less = [(x, y) for x in subsets for y in subsets if x < y]
    return scwol_from_poset(subsets, less)


def doubled_edge_scwol(v: str) -> Scwol:
    """``Z_v``: vertices ``{}`` and ``{v}`` joined by the edges with ``omega = {}`` and ``{v}``."""
    lo, hi = frozenset(), frozenset({v})
    edges = ((lo, hi, frozenset()), (lo, hi, frozenset({v})))
    return Scwol((lo, hi), edges, {e: lo for e in edges}, {e: hi for e in edges}, {})


def scwol_product(factors: Sequence[Scwol]) -> Scwol:
    """n-ary product: an edge picks, per factor, a vertex or an edge, with at least one edge.

    Vertices are tuples of factor vertices; edges are tuples of ``("v", x)`` /
    ``("e", a)`` components.
    """
    factors = list(factors)
    vertices = tuple(itertools.product(*(f.vertices for f in factors)))
    options = [[("v", v) for v in f.vertices] + [("e", e) for e in f.edges] for f in factors]
    edges = tuple(c for c in itertools.product(*options) if any(k == "e" for k, _ in c))

    def end(c, which):
        out = []
        for f, (k, x) in zip(factors, c):
            out.append(x if k == "v" else (f.i[x] if which == "i" else f.t[x]))
        return tuple(out)

    i = {e: end(e, "i") for e in edges}
    t = {e: end(e, "t") for e in edges}
    comp = {}
    into: dict = {}
    for b in edges:
        into.setdefault(t[b], []).append(b)
    for a in edges:
        for b in into.get(i[a], ()):
            parts = []
            for f, (ka, xa), (kb, xb) in zip(factors, a, b):
                if ka == "v" and kb == "v":
                    parts.append(("v", xa))
                elif kb == "v":
                    parts.append(("e", xa))
                elif ka == "v":
                    parts.append(("e", xb))
                else:
                    parts.append(("e", f.compose[(xa, xb)]))
            comp[(a, b)] = tuple(parts)
    return Scwol(vertices, edges, i, t, comp)


# -- the scwol of spherical subsets ------------------------------------------

def subset_key(s: frozenset):
    return (len(s), sorted(s))


def edge_key(e):
    X, Y, w = e
    return (subset_key(X), subset_key(Y), subset_key(w))


def edge_text(e) -> str:
    X, Y, w = e
    return f"({subset_label(X)},{subset_label(Y)},{subset_label(w)})"


def dyer_scwol(g: DyerGraph) -> Scwol:
    """Vertices: spherical subsets.  Edges ``(X, Y, w)`` with ``X < Y`` and ``w`` within ``(Y - X) n Vinf``."""
    part = partition(g)
    verts = spherical_subsets(g)
    edges = []
    for X in verts:
        for Y in verts:
            if X < Y:
                free = sorted((Y - X) & part.Vinf)
                for k in range(len(free) + 1):
                    for w in itertools.combinations(free, k):
                        edges.append((X, Y, frozenset(w)))
    edges.sort(key=edge_key)
    i = {e: e[0] for e in edges}
    t = {e: e[1] for e in edges}
    comp = {}
    by_source: dict = {}
    for b in edges:
        by_source.setdefault(b[1], []).append(b)
    for a in edges:
        for b in by_source.get(a[0], ()):
            comp[(a, b)] = (b[0], a[1], a[2] | b[2])
    return Scwol(tuple(verts), tuple(edges), i, t, comp)


def sub_scwol_union(g: DyerGraph) -> Scwol:
    """Union over spherical ``Y`` of the scwols of the spherical subgraphs ``Gamma_Y``."""
    verts, edges, comp = set(), set(), {}
    for Y in spherical_subsets(g):
        s = dyer_scwol(induced_subgraph(g, Y))
        verts |= set(s.vertices)
        edges |= set(s.edges)
        comp.update(s.compose)
    edges = sorted(edges, key=edge_key)
    return Scwol(tuple(sorted(verts, key=subset_key)), tuple(edges),
                 {e: e[0] for e in edges}, {e: e[1] for e in edges}, comp)


def to_dot(s: Scwol, vertex_text: Callable = None, edge_label: Callable = None) -> str:
    vertex_text = vertex_text or _default_text
    lines = ["digraph scwol {"]
    for v in s.vertices:
        lines.append(f'  "{vertex_text(v)}";')
    for e in s.edges:
        label = edge_label(e) if edge_label else ""
        attr = f' [label="{label}"]' if label else ""
        lines.append(f'  "{vertex_text(s.i[e])}" -> "{vertex_text(s.t[e])}"{attr};')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _default_text(v) -> str:
    if isinstance(v, frozenset):
        return subset_label(v)
    return str(v)


def dyer_scwol_dot(g: DyerGraph) -> str:
    s = dyer_scwol(g)
    return to_dot(s, subset_label, lambda e: subset_label(e[2]) if e[2] else "")


# -- complexes of groups ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ComplexOfGroups:
    """Simple complex of groups given by presentations of the local groups.

    ``psi[a]`` maps each local generator of ``i(a)`` to a word over the local
    generators of ``t(a)``.
    """

    base: Scwol
    local: Mapping          # vertex -> Presentation
    psi: Mapping            # edge -> {generator: Word}
    tables: Mapping = field(default_factory=dict)   # vertex -> FiniteGroupTable, when known


@dataclass(frozen=True, eq=False)
class Morphism:
    """Morphism to a Dyer group: inclusions at vertices plus one element per edge."""

    graph: DyerGraph
    phi_vertex: Mapping     # vertex -> {generator: Word in D}
    phi_edge: Mapping       # edge -> Word in D

    def problems(self, cx: ComplexOfGroups, budget: Budget | None = None) -> list[str]:
        out = []
        base = cx.base
        for a in base.edges:
            x = self.phi_edge[a]
            for s, img in self.phi_vertex[base.i[a]].items():
                lhs = x * img * x.inverse()
                rhs = _substitute(cx.psi[a][s], self.phi_vertex[base.t[a]])
                if not is_trivial(lhs * rhs.inverse(), self.graph, budget):
                    out.append(f"Ad(phi({edge_text(a)})) disagrees on {s}")
        for (a, b), ab in base.compose.items():
            w = self.phi_edge[a] * self.phi_edge[b] * self.phi_edge[ab].inverse()
            if not is_trivial(w, self.graph, budget):
                out.append(f"phi not multiplicative on {edge_text(a)}, {edge_text(b)}")
        return out


def _substitute(w: Word, table: Mapping) -> Word:
    out = IDENTITY
    for gen, exp in w:
        out = out * table[gen] ** exp
    return out


def local_generator(s: str, X: frozenset) -> str:
    return f"{s}@{subset_label(X)}"


def phi_of(omega: Iterable) -> Word:
    return Word.of(*sorted(omega))


def dyer_complex_of_groups(g: DyerGraph, budget: Budget | None = None) -> tuple[ComplexOfGroups, Morphism]:
    base = dyer_scwol(g)
    part = partition(g)
    local, tables, phi_v = {}, {}, {}
    for X in base.vertices:
        fin = X - part.Vinf
        pres = dyer_presentation(induced_subgraph(g, fin))
        local[X] = pres
        tables[X] = local_group(g, X, budget)
        phi_v[X] = {s: Word.of(s) for s in pres.generators}
    psi = {e: {s: Word.of(s) for s in local[e[0]].generators} for e in base.edges}
    phi_e = {e: phi_of(e[2]) for e in base.edges}
    cx = ComplexOfGroups(base, local, psi, tables)
    return cx, Morphism(g, phi_v, phi_e)


# -- fundamental group ---------------------------------------------------------

def bfs_tree(s: Scwol, root=None) -> frozenset:
    """Maximal tree of the underlying graph by breadth-first search, edges in listed order."""
    if not s.vertices:
        return frozenset()
    root = s.vertices[0] if root is None else root
    adj: dict = {v: [] for v in s.vertices}
    for e in s.edges:
        adj[s.i[e]].append((e, s.t[e]))
        adj[s.t[e]].append((e, s.i[e]))
    seen = {root}
    tree = []
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for e, w in adj[v]:
            if w not in seen:
                seen.add(w)
                tree.append(e)
                queue.append(w)
    if len(seen) != len(s.vertices):
        raise NotConnected(f"{len(s.vertices) - len(seen)} vertices unreachable")
    return frozenset(tree)


def _check_tree(s: Scwol, tree: frozenset):
    if not tree <= set(s.edges):
        raise NotATree("tree contains edges outside the scwol")
    if len(tree) != len(s.vertices) - 1:
        raise NotATree("a maximal tree has |V| - 1 edges")
    parent = {v: v for v in s.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in tree:
        a, b = find(s.i[e]), find(s.t[e])
        if a == b:
            raise NotATree("tree contains a cycle")
        parent[a] = b


def fundamental_group_presentation(cx: ComplexOfGroups, tree: Iterable | None = None) -> Presentation:
    """Generators: local generators and ``a+``/``a-`` per edge; relators as in the standard presentation."""
    base = cx.base
    if tree is None:
        tree = bfs_tree(base)
    else:
        tree = frozenset(tree)
        bfs_tree(base)          # connectivity
        _check_tree(base, tree)
    names = {e: _edge_name(e) for e in base.edges}

    def plus(e):
        return "+" + names[e]

    def minus(e):
        return "-" + names[e]

    def rename(w: Word, X) -> Word:
        return Word(tuple((local_generator(s, X), k) for s, k in w))

    gens = []
    rels = []
    for X in base.vertices:
        pres = cx.local[X]
        gens += [local_generator(s, X) for s in pres.generators]
        rels += [rename(r, X) for r in pres.relators]
    for e in base.edges:
        gens += [plus(e), minus(e)]
    for e in base.edges:
        rels.append(Word.of(plus(e), minus(e)))
    for (a, b), ab in base.compose.items():
        rels.append(Word.of(plus(a), plus(b), (plus(ab), -1)))
    for e in base.edges:
        X, Y = base.i[e], base.t[e]
        for s in cx.local[X].generators:
            lhs = Word.of(plus(e), local_generator(s, X), minus(e))
            rels.append(lhs * rename(cx.psi[e][s], Y).inverse())
    for e in sorted(tree, key=lambda e: names[e]):
        rels.append(Word.of(plus(e)))
    return Presentation(tuple(gens), tuple(rels))


def _edge_name(e) -> str:
    if isinstance(e, tuple) and len(e) == 3 and all(isinstance(x, frozenset) for x in e):
        return edge_text(e)
    return repr(e).replace(" ", "")


@dataclass(frozen=True)
class AbelianInvariants:
    rank: int
    torsion: tuple[int, ...]    # invariant factors > 1, each dividing the next

    def __str__(self):
        parts = ["Z"] * self.rank + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def abelianization(p: Presentation) -> AbelianInvariants:
    """Abelian invariants from the Smith normal form of the exponent-sum matrix."""
    n = len(p.generators)
    if n == 0:
        return AbelianInvariants(0, ())
    col = {s: j for j, s in enumerate(p.generators)}
    rows = []
    for r in p.relators:
        row = [0] * n
        for s, k in r:
            row[col[s]] += k
        if any(row):
            rows.append(row)
    if not rows:
        return AbelianInvariants(n, ())
    factors = [abs(int(d)) for d in invariant_factors(Matrix(rows), domain=ZZ)]
    nonzero = [d for d in factors if d != 0]
    return AbelianInvariants(n - len(nonzero), tuple(d for d in nonzero if d > 1))
