import pytest

from ssgraph import corpus
from ssgraph.action import (
    GeneratorSpec, act_on_path, check_cocycle, close_group, is_pseudo_free, parse_word, restrict,
    trivially_acting_pairs, vertex_stabilizer,
)
from ssgraph.errors import ClosureCapExceeded, CocycleViolation, EquivarianceViolation, SpecError
from ssgraph.graph import Path, build_graph
from ssgraph.io import build_system
from ssgraph.oracle import pseudo_free_bruteforce, trivially_acting_bruteforce


def test_parse_word():
    assert parse_word("a b'", ["a", "b"]) == (("a", False), ("b", True))
    assert parse_word("ab'a", ["a", "b"]) == (("a", False), ("b", True), ("a", False))
    assert parse_word("1", ["a"]) == ()
    assert parse_word([], ["a"]) == ()
    with pytest.raises(SpecError):
        parse_word("c", ["a", "b"])


def test_trivial_group_has_order_one():
    s = build_system(corpus.e22("none"))
    assert s.order == 1 and list(s.elements) == [0]


def test_e22_swap_has_order_two(e22):
    assert e22.order == 2
    assert e22.mul(1, 1) == 0 and e22.inv(1) == 1


def test_adding_machine_exceeds_cap():
    with pytest.raises(ClosureCapExceeded):
        build_system(corpus.adding_machine(), cap=500)


def test_bisimilar_presentations_collapse():
    # g fixes both loops, g|_a = 1 and g|_b = g: bisimilar to the identity
    g = build_graph(corpus.rose(2))
    s = close_group(g, [GeneratorSpec("g", {}, {}, {"a1": "1"})])
    assert s.order == 1


def test_equivariance_violation():
    g = build_graph(corpus.e22())
    bad = GeneratorSpec("s", {"v1": "v2", "v2": "v1"}, {}, {})
    with pytest.raises(EquivarianceViolation):
        close_group(g, [bad])


def test_cocycle_violation_on_source_mismatch():
    # g swaps v1 and v2 but the restriction at g1 is the identity, so
    # g|_{g1} . s(g1) = v1 differs from g . s(g1) = v2
    spec = corpus.e22("full")
    spec["group"]["generators"][0]["restrictions"] = {"g1": "1"}
    with pytest.raises(CocycleViolation):
        build_system(spec)


def test_cocycle_law_holds(e22):
    assert check_cocycle(e22) == []


def test_vertex_action_restriction_is_identity_rule(e22):
    p = Path("v1")
    img, r = act_on_path(e22, 1, p)
    assert img.vertex == "v2" and r == 1


def test_automorphisms_restrict_to_themselves(e22):
    g = e22.graph
    p = Path.of(g, "e1", "g1", "f1")
    img, r = act_on_path(e22, 1, p)
    assert img == Path.of(g, "e2", "g2", "f2")
    assert r == 1


def test_length_two_paths_with_nonconstant_restrictions():
    s = build_system(corpus.nonfree_rose())
    g = s.graph
    assert act_on_path(s, 1, Path.of(g, "b", "a")) == (Path.of(g, "c", "a"), 0)
    assert act_on_path(s, 1, Path.of(g, "a", "b")) == (Path.of(g, "a", "b"), 0)
    assert restrict(s, 1, Path.of(g, "b", "b")) == 1


def test_pseudo_freeness_examples(e22):
    assert is_pseudo_free(e22)
    n = build_system(corpus.nonfree_rose())
    w = is_pseudo_free(n)
    assert not w
    assert w.path == Path.of(n.graph, "a") and n.label(w.element) == "g"
    assert pseudo_free_bruteforce(n)[0] is False


def test_stabilizers(e22):
    assert vertex_stabilizer(e22, "v1") == (0,)
    assert vertex_stabilizer(e22, "v0") == (0, 1)
    assert vertex_stabilizer(build_system(corpus.single_loop()), "v") == (0,)


def test_trivially_acting_pairs(e22, e22_fixed):
    assert trivially_acting_pairs(e22, e22.graph.vertices) == ()
    assert trivially_acting_pairs(e22_fixed, e22_fixed.graph.vertices) == ()
    pairs = trivially_acting_pairs(e22_fixed, {"v0"})
    assert [(e22_fixed.label(g), v) for g, v in pairs] == [("s", "v0")]
    assert pairs == trivially_acting_bruteforce(e22_fixed, {"v0"})
