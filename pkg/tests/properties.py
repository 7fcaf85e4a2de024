"""Property checks shared by the hypothesis suites and the acceptance gate.

Each function raises ``AssertionError`` with a message on failure.
"""

import itertools

from dyercat.graph import INF, is_spherical, partition, spherical_subsets
from dyercat.groups import coset_canonical_rep, enumerate_ball, local_group
from dyercat.presentations import LAMBDA, dyer_presentation, target_graph, xi_action
from dyercat.scwol import dyer_scwol
from dyercat.words import Word, dyer_reduce, normalize_syllables

from oracles import dyer_order, spherical_by_classification

LOCAL_ORDER_CAP = 200


def check_scwol_axioms(g):
    s = dyer_scwol(g)
    assert s.check_axioms() == [], s.check_axioms()[:3]
    vinf = partition(g).Vinf
    expected = sum(2 ** len((Y - X) & vinf) for X in s.vertices for Y in s.vertices if X < Y)
    assert len(s.edges) == expected


def check_sphericity_closed(g):
    sph = set(spherical_subsets(g))
    for Y in sph:
        for k in range(len(Y)):
            for Z in itertools.combinations(sorted(Y), k):
                assert frozenset(Z) in sph, (sorted(Y), Z)
    for k in range(len(g.vertices) + 1):
        for Z in itertools.combinations(g.vertices, k):
            want = spherical_by_classification(g, Z)
            assert is_spherical(g, Z) == want, (g, Z)
            assert (frozenset(Z) in sph) == want, (g, Z)


def doubled(g):
    part = partition(g)
    return sorted(part.Vp | part.Vinf)


def check_involution_laws(g, word, eps1, eps2, variant=LAMBDA):
    tg = target_graph(g, variant)
    w = normalize_syllables(word, tg)
    e1, e2 = frozenset(eps1), frozenset(eps2)
    assert xi_action(e1, xi_action(e1, w, g, variant), g, variant) == w
    a = xi_action(e1, xi_action(e2, w, g, variant), g, variant)
    b = xi_action(e2, xi_action(e1, w, g, variant), g, variant)
    c = xi_action(e1 ^ e2, w, g, variant)
    assert a == b == c, (a, b, c)
    # the action preserves the relators, so it is a homomorphism of the group
    for r in dyer_presentation(tg).relators:
        img = xi_action(e1, r, g, variant)
        assert dyer_reduce(img, tg) == Word(), (r, img)
    # and respects multiplication up to the group relations
    u = xi_action(e1, w * w, g, variant)
    v = xi_action(e1, w, g, variant)
    assert dyer_reduce(u, tg) == dyer_reduce(v * v, tg)


def small_spherical_subsets(g, cap=LOCAL_ORDER_CAP):
    vinf = partition(g).Vinf
    return [Y for Y in spherical_subsets(g) if (dyer_order(g, Y - vinf) or cap + 1) <= cap]


def check_coset_constancy(g, h, X):
    table = local_group(g, X)
    rep = coset_canonical_rep(h, X, g)
    for d in table.elements:
        assert coset_canonical_rep(h * d, X, g) == rep, (h, d, X)
    # rep lies in the coset: rep^-1 h is in the local group
    q = dyer_reduce(rep.inverse() * h, g)
    assert q in table._index, (rep, h, q)


def check_ball_monotone(g, R):
    small = enumerate_ball(g, R)
    big = enumerate_ball(g, R + 1)
    for w in small.elements:
        assert w in big and big.distance[w] == small.distance[w]
    for w in big.elements:
        if big.distance[w] <= R:
            assert w in small
        if w.syllables:
            parent, s = big.parent[w]
            assert big.distance[parent] == big.distance[w] - 1
            assert dyer_reduce(parent * Word((s,)), g) == w
    order = dyer_order(g)
    if order is None or len(small) < order:
        assert len(big) > len(small)


def random_word(rng, g, max_len=6):
    out = []
    for _ in range(rng.randint(0, max_len)):
        v = rng.choice(g.vertices)
        if g.f[v] == INF:
            e = rng.choice((-2, -1, 1, 2))
        else:
            e = rng.randint(1, g.f[v] - 1)
        out.append((v, e))
    return Word(tuple(out))
