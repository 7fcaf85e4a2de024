"""Acceptance gate: one test per criterion, summarised as PASS/FAIL lines at the end of the run.

Run alone with ``pytest tests/test_acceptance.py`` (or ``python tests/test_acceptance.py``).
"""

import io
import itertools
import math
import random
import time

import pytest

from dyercat.cat0 import (LinkComplex, certify_cat0, check_metric_flag, cosine_of_lengths,
                          dimension_stats, vertex_link)
from dyercat.cli import run
from dyercat.graph import INF, dumps, gamma, is_positive_definite, make_graph, partition
from dyercat.groups import coset_canonical_rep, enumerate_ball, local_group
from dyercat.polytope import corner_angle, face_poset_check, polytope
from dyercat.presentations import LAMBDA, OMEGA, target_graph
from dyercat.scwol import phi_of
from dyercat.sigma import elementary_block, sigma_ball, vertex_bijection
from dyercat.words import Word, dyer_reduce
from oracles import CosetOracle, dyer_order, normalized_words
from properties import (check_ball_monotone, check_coset_constancy, check_involution_laws,
                        check_scwol_axioms, check_sphericity_closed, doubled, random_word,
                        small_spherical_subsets)
from strategies import random_dyer_graph

FAMILY = [(2, 2), (3, 2), (4, 3), (6, 5)]


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue()


def write(tmp_path, g, name):
    path = tmp_path / f"{name}.json"
    path.write_text(dumps(g))
    return str(path)


# 1 -------------------------------------------------------------------------------

def test_criterion_1_spherical_subsets_and_scwol(gamma43_path):
    start = time.perf_counter()
    code, out = cli("spherical", gamma43_path)
    assert code == 0
    assert out.splitlines() == ["{}", "{a}", "{b}", "{c}", "{d}", "{a,b}", "{b,c}", "{c,d}"]
    code, out = cli("scwol", gamma43_path)
    assert code == 0
    lines = out.splitlines()
    assert "edges: 16" in lines
    edges = [x for x in lines if x.startswith("edge ")]
    assert len(edges) == 16
    assert "edge ({},{a},{})" in edges and "edge ({},{a},{a})" in edges
    assert time.perf_counter() - start < 1.0


# 2 -------------------------------------------------------------------------------

def test_criterion_2_embedding_verifies(tmp_path):
    """Verification passes everywhere; the index is 2^|Vp u Vinf| (4 for p >= 3, 2 for p = 2)."""
    start = time.perf_counter()
    for m, p in FAMILY:
        g = gamma(m, p)
        path = write(tmp_path, g, f"g{m}{p}")
        part = partition(g)
        expected = 2 ** len(part.Vp | part.Vinf)
        for variant in ("lambda", "omega"):
            assert cli("embed", path, "--variant", variant, "--verify") == (0, f"PASS index={expected}\n")
    cox = make_graph({"s": 2, "t": 2, "u": 2}, {("s", "t"): 3, ("t", "u"): 5})
    assert cli("embed", write(tmp_path, cox, "cox"), "--verify") == (0, "PASS index=1\n")
    assert time.perf_counter() - start < 10.0


def test_criterion_2_index_four_for_every_pair(tmp_path):
    """The literal claim: index 4 for all four (m, p).

    For p = 2 the vertex d has order 2, so it is a Coxeter generator and gets
    no involution; the index is 2, not 4.  Expected to fail for (2,2) and (3,2).
    """
    got = {}
    for m, p in FAMILY:
        path = write(tmp_path, gamma(m, p), f"g{m}{p}")
        for variant in ("lambda", "omega"):
            got[(m, p, variant)] = cli("embed", path, "--variant", variant, "--verify")[1].strip()
    wrong = {k: v for k, v in got.items() if v != "PASS index=4"}
    assert not wrong, f"index differs from 4: {wrong}"


# 3 -------------------------------------------------------------------------------

def _finite_graphs():
    names = "abc"
    for n in (1, 2, 3):
        vs = names[:n]
        pairs = list(itertools.combinations(vs, 2))
        for fs in itertools.product((2, 3, 4), repeat=n):
            for ms in itertools.product((2, 3, 4), repeat=len(pairs)):
                f = dict(zip(vs, fs))
                if any(m != 2 and (f[u] != 2 or f[v] != 2) for (u, v), m in zip(pairs, ms)):
                    continue
                g = make_graph(f, dict(zip(pairs, ms)))
                order = dyer_order(g)
                if order is not None and order <= 200:
                    yield g, order
        # graphs with a missing edge contain a free product and are infinite


def test_criterion_3_word_problem_oracle():
    start = time.perf_counter()
    mismatches, graphs, words = [], 0, 0
    for g, order in _finite_graphs():
        graphs += 1
        oracle = CosetOracle(g)
        assert oracle.order == order
        canon_to_elem, elem_to_canon = {}, {}
        for syl in normalized_words(g, 6):
            w = Word(syl)
            words += 1
            c = dyer_reduce(w, g)
            e = oracle.element(w)
            if canon_to_elem.setdefault(c, e) != e or elem_to_canon.setdefault(e, c) != c:
                mismatches.append((g, str(w)))
        assert len(elem_to_canon) <= order
    elapsed = time.perf_counter() - start
    print(f"{graphs} graphs, {words} words, {len(mismatches)} mismatches, {elapsed:.1f}s")
    assert graphs > 0 and not mismatches, mismatches[:5]
    assert elapsed < 60.0


# 4 -------------------------------------------------------------------------------

@pytest.mark.parametrize("m", [2, 3, 4, 6])
def test_criterion_4_dihedral_polytopes(m):
    p = polytope(make_graph({"s": 2, "t": 2}, {("s", "t"): m}))
    assert p.order == 2 * m
    assert len(p.edges()) == 2 * m
    assert all(abs(p.b_distance(i, j) - 2.0) <= 1e-9 for i, j, _ in p.edges())
    assert face_poset_check(p).ok
    assert abs(corner_angle(p, "s", "t") - (math.pi - math.pi / m)) <= 1e-9


# 5 -------------------------------------------------------------------------------

def test_criterion_5_blocks_and_vertex_bijection():
    g = gamma()
    part = partition(g)
    for Y, count in (("ab", 4), ("bc", 8), ("cd", 8)):
        Y = frozenset(Y)
        block = elementary_block(g, Y)
        assert block.vertex_count == count
        j = vertex_bijection(g, Y)
        assert set(j) == set(block.vertices)
        image = set(j.values())
        assert len(image) == count
        # the same vertex set, enumerated from group elements instead of block coordinates
        yinf = sorted(Y & part.Vinf)
        yp = sorted(Y & part.Vp)
        direct = set()
        for t in local_group(g, Y).elements:
            for r in range(len(yinf) + 1):
                for lam in itertools.combinations(yinf, r):
                    for s in range(len(yp) + 1):
                        for Z in itertools.combinations(yp, s):
                            Z = frozenset(Z)
                            direct.add((coset_canonical_rep(t * phi_of(lam), Z, g), Z))
        assert image == direct


# 6 -------------------------------------------------------------------------------

def test_criterion_6_link_laws():
    g = gamma()
    ball = sigma_ball(g, 2)
    one = vertex_link(ball, (Word(), frozenset()))
    assert len(one.vertices) == 5 and one.label_multiset() == ["a", "a", "b", "c", "d"]
    centre = vertex_link(ball, (Word(), frozenset("d")))
    assert len(centre.vertices) == 4 and centre.label_multiset() == ["c", "d", "d", "d"]
    cert = certify_cat0(g, 2, ball=ball)
    assert cert.verdicts
    for v in cert.verdicts:
        lk = vertex_link(ball, v.vertex)
        assert all(d >= math.pi / 2 - 1e-12 for d in lk.lengths.values())
        assert v.check.ok
    # negative control: three pairwise 2pi/3 edges spanning a triangle
    vs = ("x", "y", "z")
    lengths = {frozenset(p): 2 * math.pi / 3 for p in itertools.combinations(vs, 2)}
    bad = LinkComplex(vs, {v: v for v in vs}, lengths, frozenset([frozenset(vs)]))
    assert not is_positive_definite(cosine_of_lengths(bad, vs))
    assert not check_metric_flag(bad).ok


# 7 -------------------------------------------------------------------------------

def test_criterion_7_specialisations():
    cox = make_graph({"s": 2, "t": 2, "u": 2}, {("s", "t"): 3, ("t", "u"): 4})
    ball = sigma_ball(cox, 2)
    assert ball.interior
    for v in ball.interior:
        nbrs = [(next(iter(e - {v})), lab) for e, lab in ball.edges.items() if v in e]
        assert len(nbrs) == 3 and sorted(lab for _, lab in nbrs) == ["s", "t", "u"]
        assert all(k == dyer_reduce(v[0] * Word.of(lab), cox) for (k, _), lab in nbrs)

    raag = make_graph({"a": INF, "b": INF, "c": INF}, {("a", "b"): 2, ("b", "c"): 2, ("a", "c"): 2})
    cert = certify_cat0(raag, 3)
    assert cert.passed
    for v in cert.verdicts:
        lk = vertex_link(cert.ball, v.vertex)
        assert set(lk.lengths.values()) == {math.pi / 2}
    for pb in cert.ball.blocks:
        k, Y = pb.centre
        corners = {dyer_reduce(k * phi_of(lam), raag)
                   for r in range(len(Y) + 1) for lam in itertools.combinations(sorted(Y), r)}
        assert pb.block.vertex_count == 2 ** len(Y)
        assert {w for w, _ in pb.sigma} == corners


# 8 -------------------------------------------------------------------------------

def test_criterion_8_dimensions():
    assert dimension_stats(gamma()) == (2, 4)
    rng = random.Random(20240601)
    for _ in range(100):
        a, b = dimension_stats(random_dyer_graph(rng, max_vertices=5))
        assert a <= b


# 9 -------------------------------------------------------------------------------

def test_criterion_9_property_suites():
    rng = random.Random(1729)
    cases = 100
    for _ in range(cases):
        check_scwol_axioms(random_dyer_graph(rng, 5))
    for _ in range(cases):
        check_sphericity_closed(random_dyer_graph(rng, 5))
    for _ in range(cases):
        g = random_dyer_graph(rng, 4)
        variant = rng.choice((LAMBDA, OMEGA))
        pool = doubled(g)
        e1 = {v for v in pool if rng.random() < 0.5}
        e2 = {v for v in pool if rng.random() < 0.5}
        check_involution_laws(g, random_word(rng, target_graph(g, variant)), e1, e2, variant)
    for _ in range(cases):
        g = random_dyer_graph(rng, 4, labels=(2, 3, 4))
        X = rng.choice(small_spherical_subsets(g))
        check_coset_constancy(g, rng.choice(enumerate_ball(g, 2).elements), X)
    for _ in range(cases):
        check_ball_monotone(random_dyer_graph(rng, 4), rng.randint(0, 1))


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
