import json
import math

import numpy as np
import pytest
from hypothesis import given

from dyercat.errors import DuplicateVertex, UnknownVertex, ValidationError
from dyercat.graph import (INF, cosine_matrix, dumps, extended_m, find_violations, from_document,
                           gamma, induced_subgraph, is_positive_definite, is_spherical, load, loads,
                           make_graph, partition, spherical_subsets, subset_label, tolerance, validate)
from strategies import dyer_graphs
from properties import check_sphericity_closed


def kinds(vertices, edges):
    return sorted(v.kind for v in find_violations(vertices, edges))


def test_gamma43_is_valid():
    g = gamma()
    assert g.vertices == ("a", "b", "c", "d")
    assert g.f == {"a": INF, "b": 2, "c": 2, "d": 3}
    assert g.edges == [("a", "b"), ("b", "c"), ("c", "d")]


def test_label_constraint_violation():
    vs = [("a", INF), ("b", 2), ("c", 2), ("d", 3)]
    es = [("a", "b", 2), ("b", "c", 4), ("c", "d", 3)]
    with pytest.raises(ValidationError) as exc:
        validate(vs, es)
    assert [v.kind for v in exc.value.violations] == ["BadLabelConstraint"]
    assert exc.value.violations[0].witness == ("c", "d", "d")


def test_all_violations_reported():
    vs = [("a", 1), ("b", None), ("a", 2), ("c", "x")]
    es = [("a", "a", 2), ("a", "z", 2), ("a", "b", None), ("b", "a", 2), ("a", "c", 1)]
    assert kinds(vs, es) == ["InvalidLabel", "InvalidLabel", "InvalidLabel", "MissingLabel",
                             "MissingLabel", "NonSimplicial", "NonSimplicial", "NonSimplicial",
                             "UnknownVertex"]


def test_infinite_vertex_forces_right_angles():
    assert kinds([("a", "inf"), ("b", 2)], [("a", "b", 3)]) == ["BadLabelConstraint"]
    assert kinds([("a", "inf"), ("b", 2)], [("a", "b", 2)]) == []


def test_partition():
    p = partition(gamma())
    assert p.V2 == {"b", "c"} and p.Vp == {"d"} and p.Vinf == {"a"}


def test_json_round_trip(tmp_path):
    g = gamma(6, 5)
    assert loads(dumps(g)) == g
    path = tmp_path / "g.json"
    path.write_text(dumps(g))
    assert load(path) == g
    doc = json.loads(dumps(g))
    assert doc["vertices"][0] == {"id": "a", "f": "inf"}


def test_malformed_document():
    with pytest.raises(ValidationError):
        from_document({"vertices": [{"f": 2}]})


def test_cosine_matrix_entries():
    c = cosine_matrix(gamma(), ["a", "b", "c", "d"])
    assert np.allclose(np.diag(c), 1.0)
    assert c[0, 1] == pytest.approx(0.0, abs=1e-15)           # m = 2
    assert c[1, 2] == pytest.approx(-math.cos(math.pi / 4))   # m = 4
    assert c[0, 2] == -1.0                                     # non-edge
    assert np.allclose(c, c.T)


def test_cosine_matrix_errors():
    g = gamma()
    with pytest.raises(UnknownVertex):
        cosine_matrix(g, ["a", "z"])
    with pytest.raises(DuplicateVertex):
        cosine_matrix(g, ["a", "a"])


def test_extended_m():
    g = gamma()
    assert extended_m(g, "a", "a") == 1
    assert extended_m(g, "b", "c") == 4
    assert extended_m(g, "a", "d") == INF


def test_spherical_subsets_gamma43():
    got = [subset_label(s) for s in spherical_subsets(gamma())]
    assert got == ["{}", "{a}", "{b}", "{c}", "{d}", "{a,b}", "{b,c}", "{c,d}"]


def test_affine_triangle_is_not_spherical():
    g = make_graph({"a": 2, "b": 2, "c": 2}, {("a", "b"): 3, ("b", "c"): 3, ("a", "c"): 3})
    assert not is_spherical(g, "abc")
    assert all(is_spherical(g, s) for s in ("ab", "bc", "ac"))


def test_h3_is_spherical_and_affine_b2_is_not():
    h3 = make_graph({"a": 2, "b": 2, "c": 2}, {("a", "b"): 5, ("b", "c"): 3, ("a", "c"): 2})
    assert is_spherical(h3, "abc")
    c2 = make_graph({"a": 2, "b": 2, "c": 2}, {("a", "b"): 4, ("b", "c"): 4, ("a", "c"): 2})
    assert not is_spherical(c2, "abc")


def test_positive_definite_threshold():
    a = np.array([[1.0, -1.0], [-1.0, 1.0]])
    assert not is_positive_definite(a)
    assert is_positive_definite(np.eye(3))
    near = np.array([[1.0, 0.0], [0.0, 1e-8]])
    assert is_positive_definite(near)
    with tolerance(1e-7):
        assert not is_positive_definite(near)
    assert is_positive_definite(near)


def test_tolerance_range():
    with pytest.raises(ValueError):
        with tolerance(1e-2):
            pass


def test_induced_subgraph():
    g = gamma()
    h = induced_subgraph(g, {"b", "c"})
    assert h.vertices == ("b", "c") and h.edges == [("b", "c")]
    with pytest.raises(UnknownVertex):
        induced_subgraph(g, {"q"})


def test_graph_is_hashable_and_immutable():
    a, b = gamma(), gamma()
    assert a == b and hash(a) == hash(b)
    assert gamma(4, 3) != gamma(4, 5)


@given(dyer_graphs(max_vertices=5))
def test_sphericity_matches_classification_and_is_downward_closed(g):
    check_sphericity_closed(g)
