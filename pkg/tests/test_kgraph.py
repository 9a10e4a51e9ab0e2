import time
from fractions import Fraction

import pytest

from ssgraph import corpus
from ssgraph.action import GeneratorSpec
from ssgraph.errors import (
    CubeConditionFailed, EssentialCentralityViolated, FactorizationEquivarianceViolation,
    FactorizationNotBijective, MalformedSequence, NotPseudoFree, SourcePresent,
)
from ssgraph.io import build_system
from ssgraph.kgraph import (
    convergence_certificate, cycline_element, cycline_fixpoint, hereditary_saturated_lattice, kgraph_action,
    m_perg, maximal_g_tails_k, periodicity_group, sigma_membership, spectrum_components_k, validate_kgraph,
)
from ssgraph.lattice import IntegerLattice
from ssgraph.oracle import cycline_bruteforce, maximal_tails_bruteforce


def cube():
    """The 3-cube: one vertex with a loop of each of three colors."""
    edges = [{"name": n, "range": "v", "source": "v", "color": c} for n, c in (("a", 1), ("b", 2), ("c", 3))]
    facts = [{"left": ["a", "b"], "right": ["b", "a"]}, {"left": ["a", "c"], "right": ["c", "a"]},
             {"left": ["b", "c"], "right": ["c", "b"]}]
    return {"rank": 3, "vertices": ["v"], "edges": edges, "factorizations": facts}


def test_torus_valid():
    sk = validate_kgraph(corpus.torus())
    assert sk.k == 2 and sk.swap[("b", "r")] == ("r", "b")


def test_cycle_product_valid():
    sk = validate_kgraph(corpus.cycle_product(2, 3))
    assert len(sk.graph.vertices) == 6 and len(sk.swap) == 12


def test_missing_factorization():
    spec = corpus.torus()
    spec["factorizations"] = []
    with pytest.raises(FactorizationNotBijective):
        validate_kgraph(spec)


def test_source_present():
    spec = corpus.torus()
    spec["vertices"].append("w")
    spec["edges"].append({"name": "x", "range": "v", "source": "w", "color": 1})
    with pytest.raises(SourcePresent):
        validate_kgraph(spec)


def _three_colors(ab_twist: bool, ac_twist: bool):
    """Two red loops a1, a2, two blue loops b1, b2, one green loop c."""
    edges = [{"name": n, "range": "v", "source": "v", "color": c}
             for n, c in (("a1", 1), ("a2", 1), ("b1", 2), ("b2", 2), ("c", 3))]
    other = {"a1": "a2", "a2": "a1", "b1": "b2", "b2": "b1"}
    facts = []
    for a in ("a1", "a2"):
        for b in ("b1", "b2"):
            # the twisted version sends a1 b to (other b) a1
            facts.append({"left": [a, b], "right": [other[b] if ab_twist and a == "a1" else b, a]})
        facts.append({"left": [a, "c"], "right": ["c", other[a] if ac_twist else a]})
    for b in ("b1", "b2"):
        facts.append({"left": [b, "c"], "right": ["c", b]})
    return {"rank": 3, "vertices": ["v"], "edges": edges, "factorizations": facts}


def test_cube_condition():
    assert validate_kgraph(cube()).k == 3
    assert validate_kgraph(_three_colors(False, True)).k == 3
    assert validate_kgraph(_three_colors(True, False)).k == 3


def test_cube_condition_failure():
    # both twists together: the two ways of sorting a1 b1 c disagree
    with pytest.raises(CubeConditionFailed):
        validate_kgraph(_three_colors(True, True))


def test_actions():
    assert build_system(corpus.torus()).order == 1
    assert build_system(corpus.swapped_torus()).order == 2
    sk = validate_kgraph(corpus.swapped_torus())
    # swap b1, b2 but restrict to the identity at r: s.(b1 r) = b2 r while
    # s.(r b1) = r b1, and b2 r = r b2 is a different square
    bad = GeneratorSpec("s", {}, {"b1": "b2", "b2": "b1"}, {"r": "1"})
    with pytest.raises(FactorizationEquivarianceViolation):
        kgraph_action(sk, [bad])


def test_tails_k():
    t = build_system(corpus.torus())
    assert maximal_g_tails_k(t) == (frozenset({"v"}),)
    layer = build_system(corpus.layered_2graph())
    assert [set(M) for M in maximal_g_tails_k(layer)] == [{"u"}, {"u", "w"}]
    assert sorted(maximal_g_tails_k(layer), key=sorted) == sorted(maximal_tails_bruteforce(layer), key=sorted)


def test_hereditary_saturated():
    t = build_system(corpus.torus())
    assert hereditary_saturated_lattice(t).sets == (frozenset(), frozenset({"v"}))
    layer = build_system(corpus.layered_2graph())
    assert [set(H) for H in hereditary_saturated_lattice(layer).sets] == [set(), {"w"}, {"u", "w"}]


def test_cycline_fixpoint_examples(torus, c2xc3):
    assert cycline_fixpoint(torus, (1, 0))
    assert not cycline_fixpoint(c2xc3, (1, 0))
    assert cycline_fixpoint(c2xc3, (2, 0))
    loop = build_system(corpus.loop_kgraph(), kgraph=True)
    assert cycline_fixpoint(loop, (1,)) == {(("v", ("e",)), 0, ("v", ()))}


def test_cycline_bruteforce_examples(torus, c2xc3):
    assert cycline_bruteforce(torus, ("v", ("b",)), 0, ("v", ("r",)))
    assert cycline_bruteforce(c2xc3, ("x0_0", ()), 0, ("x0_0", ()))
    assert not cycline_bruteforce(c2xc3, ("x0_0", ("b0_0",)), 0, ("x0_0", ()), depth=2)


def test_periodicity(torus, c2xc3):
    t0 = time.perf_counter()
    assert str(periodicity_group(torus, None, 2).lattice) == "<(1,0),(0,1)>"
    assert str(periodicity_group(c2xc3, None, 4).lattice) == "<(2,0),(0,3)>"
    loop = build_system(corpus.single_loop(), kgraph=True)
    assert periodicity_group(loop, None, 3).lattice.index_in_rank_one() == 1
    assert time.perf_counter() - t0 < 5


def test_rank_one_per_matches_period():
    for spec, n in ((corpus.cycle(4, None), 4), (corpus.cycle(4, 2), 2), (corpus.twin_cycles(2), 2)):
        s = build_system(spec, kgraph=True)
        (M,) = maximal_g_tails_k(s)
        assert periodicity_group(s, M, 4).lattice.index_in_rank_one() == n


def test_rank_one_no_circuit_gives_trivial_per():
    s = build_system(corpus.rose(2), kgraph=True)
    assert periodicity_group(s, None, 3).lattice.rank == 0


def test_sigma_membership(torus, c2xc3):
    assert sigma_membership(torus, "v", (0, 0), (0, 0))
    assert sigma_membership(torus, "v", (2, 1), (0, 3))
    assert sigma_membership(c2xc3, "x0_0", (2, 0), (0, 0))
    assert not sigma_membership(c2xc3, "x0_0", (1, 0), (0, 0))
    assert sigma_membership(c2xc3, "x1_2", (3, 1), (1, 1))


def test_m_perg(torus):
    assert m_perg(torus, None, 3).vertices == {"v"}
    e = build_system(corpus.e22(), kgraph=True)
    assert m_perg(e, {"v0"}, 3).vertices == {"v0"}
    assert m_perg(e, {"v0", "v1", "v2"}, 3).vertices == {"v1", "v2"}


def test_cycline_element_unique(c2xc3):
    assert cycline_element(c2xc3, None, ("x0_0", ("b0_0", "b1_0")), (0, 0)) == 0


def test_spectrum_components(torus, c2xc3):
    (c,) = spectrum_components_k(torus).components
    assert c.per.rank == 2 and c.label().endswith("T^2")
    (c,) = spectrum_components_k(c2xc3, 4).components
    assert str(c.per) == "<(2,0),(0,3)>"
    layer = spectrum_components_k(build_system(corpus.layered_2graph()))
    assert layer.leq == ((True, True), (False, True))


def test_spectrum_components_rank_one_agrees_with_prim():
    from ssgraph.spectrum import prim_spectrum
    spec = corpus.e22()
    k = spectrum_components_k(build_system(spec, kgraph=True))
    p = prim_spectrum(build_system(spec))
    assert [c.tail for c in k.components] == [c.tail for c in p.components]
    assert [c.per.rank for c in k.components] == [1 if c.kind == "circle" else 0 for c in p.components]
    assert k.leq == p.leq


def test_spectrum_components_refusals():
    with pytest.raises(EssentialCentralityViolated):
        spectrum_components_k(build_system(corpus.e22("vertices"), kgraph=True))
    with pytest.raises(NotPseudoFree):
        spectrum_components_k(build_system(corpus.nonfree_rose(), kgraph=True))


def test_convergence_certificates(torus, c2xc3):
    v = frozenset({"v"})
    assert convergence_certificate(torus, (v, (0, 0)), [(v, (0, 0))]).verdict == "Verified"
    seq = [(v, (Fraction(1, 2), 0)), (v, (Fraction(1, 3), Fraction(1, 5)))]
    assert convergence_certificate(torus, (v, (Fraction(1, 3), Fraction(1, 5))), seq).verdict == "Verified"
    assert convergence_certificate(torus, (v, (Fraction(1, 3), 0)), seq[:1]).verdict == "Refuted"
    M = frozenset(c2xc3.graph.vertices)
    off = convergence_certificate(c2xc3, (M, (0, 0)), [(M, (Fraction(1, 4), 0))], char_box=3)
    assert off.verdict == "Refuted" and off.counterexample is not None
    # (1/2, 0) and 0 agree on Per = 2Z + 3Z
    assert convergence_certificate(c2xc3, (M, (0, 0)), [(M, (Fraction(1, 2), 0))], char_box=3).verdict == "Verified"
    # a character box too small to see a generator of Per
    assert convergence_certificate(c2xc3, (M, (0, 0)), [(M, (0, 0))], char_box=2).verdict == "Inconclusive"


def test_convergence_between_tails():
    s = build_system(corpus.layered_2graph())
    U, UW = frozenset({"u"}), frozenset({"u", "w"})
    assert convergence_certificate(s, (U, (0, 0)), [(UW, (0, 0))]).verdict == "Verified"
    assert convergence_certificate(s, (UW, (0, 0)), [(U, (0, 0))]).verdict == "Refuted"


def test_malformed_sequences(torus):
    v = frozenset({"v"})
    with pytest.raises(MalformedSequence):
        convergence_certificate(torus, (v, (0, 0)), [])
    with pytest.raises(MalformedSequence):
        convergence_certificate(torus, (v, (0,)), [(v, (0, 0))])
    with pytest.raises(MalformedSequence):
        convergence_certificate(torus, (frozenset({"x"}), (0, 0)), [(v, (0, 0))])


def test_lattice_canonical_form():
    assert str(IntegerLattice.generated_by([(2, 0), (0, 3), (4, -3), (-2, 0)], 2)) == "<(2,0),(0,3)>"
    assert str(IntegerLattice.generated_by([(4, 6), (6, 4)], 2)) == "<(2,8),(0,10)>"
    assert str(IntegerLattice.generated_by([], 2)) == "0"
    assert (6, 3) in IntegerLattice.generated_by([(2, 0), (0, 3)], 2)
    assert (1, 0) not in IntegerLattice.generated_by([(2, 0), (0, 3)], 2)
