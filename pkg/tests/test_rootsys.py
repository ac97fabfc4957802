from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from foldbranch import InvalidInput, LieType, ResourceGuardExceeded, build_root_system
from foldbranch.rootsys import positive_root_count

import oracles

CLOSED_FORM = {
    "A": lambda n: n * (n + 1) // 2,
    "B": lambda n: n * n,
    "C": lambda n: n * n,
    "D": lambda n: n * (n - 1),
}
EXCEPTIONAL = {"E6": 36, "E7": 63, "E8": 120, "F4": 24, "G2": 6}
SMALL = ["A1", "A2", "A3", "B2", "B3", "C2", "C3", "D4", "G2"]


@pytest.mark.parametrize("label", [f"{f}{n}" for f in "ABCD" for n in range(1, 8)
                                   if (f, n) not in {("B", 1), ("C", 1), ("D", 1), ("D", 2)}])
def test_positive_root_counts_classical(label):
    t = LieType.parse(label)
    rs = build_root_system(t)
    assert rs.n_positive == CLOSED_FORM[t.family](t.rank) == positive_root_count(t)


@pytest.mark.parametrize("label,count", sorted(EXCEPTIONAL.items()))
def test_positive_root_counts_exceptional(label, count):
    assert build_root_system(label).n_positive == count


@pytest.mark.parametrize("label", ["A0", "B1", "C1", "D2", "E5", "E9", "F3", "G3", "X2", "A"])
def test_invalid_types(label):
    with pytest.raises(InvalidInput):
        build_root_system(label)


def test_c2_positive_roots_match_euclidean_model():
    rs = build_root_system("C2")
    simple = oracles.c_simple_roots(2)
    expected = {tuple(int(c) for c in oracles.solve_in_basis(v, simple))
                for v in oracles.c_positive_roots(2)}
    assert set(rs.positive_roots) == expected == {(1, 0), (0, 1), (1, 1), (2, 1)}


@pytest.mark.parametrize("n", [3, 4])
def test_cn_positive_roots_match_euclidean_model(n):
    rs = build_root_system(f"C{n}")
    simple = oracles.c_simple_roots(n)
    expected = {tuple(int(c) for c in oracles.solve_in_basis(v, simple))
                for v in oracles.c_positive_roots(n)}
    assert set(rs.positive_roots) == expected


def test_g2_cartan_and_roots():
    rs = build_root_system("G2")
    assert rs.cartan == ((2, -1), (-3, 2))
    assert rs.n_positive == 6
    assert rs.highest_root == (3, 2)


def test_positive_roots_sorted_by_height_then_lex():
    rs = build_root_system("F4")
    keys = [(sum(a), a) for a in rs.positive_roots]
    assert keys == sorted(keys)


@pytest.mark.parametrize("label", SMALL + ["F4", "E6"])
def test_rho(label):
    rs = build_root_system(label)
    assert rs.rho().coords == (1,) * rs.rank
    for i in range(rs.rank):
        simple = tuple(int(j == i) for j in range(rs.rank))
        assert rs.pairing(rs.rho(), simple) == 1


def test_pairing_examples():
    c2 = build_root_system("C2")
    assert c2.pairing(c2.weight((1, 1)), (1, 0)) == 1
    # 2e1 = 2a1 + a2 has coroot e1 = a1^v + a2^v, so <3e1 + e2, e1> = 3
    assert c2.pairing(c2.weight((2, 1)), (2, 1)) == 3
    a3 = build_root_system("A3")
    assert a3.pairing(a3.rho(), a3.highest_root) == 3
    with pytest.raises(InvalidInput):
        c2.pairing(c2.weight((1, 1)), (1, 2))


def test_to_root_coords():
    c2 = build_root_system("C2")
    assert c2.to_root_coords(c2.weight((1, 0))) == (1, Fraction(1, 2))
    assert c2.to_root_coords(c2.zero()) == (0, 0)
    g2 = build_root_system("G2")
    assert g2.to_root_coords(g2.weight((1, 0))) == (2, 1)


def test_is_dominant_and_representative():
    c2 = build_root_system("C2")
    assert c2.is_dominant(c2.weight((2, 1)))
    assert not c2.is_dominant(c2.weight((-1, 0)))
    assert build_root_system("A3").is_dominant((0, 0, 0))
    assert c2.dominant_representative(c2.weight((-1, 0))).coords == (1, 0)
    assert c2.dominant_representative(c2.weight((2, 1))).coords == (2, 1)
    a1 = build_root_system("A1")
    assert a1.dominant_representative(a1.weight((-5,))).coords == (5,)


def test_dominance_examples():
    c2 = build_root_system("C2")
    assert c2.dominance_leq((0, 1), (2, 1))
    assert not c2.dominance_leq((1, 0), (2, 1))
    assert c2.dominance_leq((2, 1), (2, 1))
    with pytest.raises(InvalidInput):
        c2.dominance_leq(c2.weight((0, 1)), build_root_system("B2").weight((0, 1)))


def test_weyl_dim_examples():
    c2 = build_root_system("C2")
    assert c2.weyl_dim((0, 0)) == 1
    assert c2.weyl_dim((2, 1)) == 35
    assert build_root_system("A3").weyl_dim((1, 1, 1)) == 64
    with pytest.raises(InvalidInput):
        c2.weyl_dim((-1, 0))


@pytest.mark.parametrize("label", SMALL + ["F4"])
def test_weyl_dim_matches_invariant_form_oracle(label):
    rs = build_root_system(label)
    for lam in [(1,) * rs.rank, (2,) + (0,) * (rs.rank - 1), (0,) * (rs.rank - 1) + (3,)]:
        assert rs.weyl_dim(lam) == oracles.weyl_dim_via_form(rs, lam)


@pytest.mark.parametrize("label", SMALL + ["E6", "F4"])
def test_rho_dimension_is_power_of_two(label):
    rs = build_root_system(label)
    assert rs.weyl_dim(rs.rho()) == 2 ** rs.n_positive


def test_weyl_orbit_examples():
    c2 = build_root_system("C2")
    assert {w.coords for w in c2.weyl_orbit(c2.weight((1, 0)))} == {(1, 0), (-1, 1), (1, -1), (-1, 0)}
    assert {w.coords for w in c2.weyl_orbit(c2.zero())} == {(0, 0)}
    a1 = build_root_system("A1")
    assert {w.coords for w in a1.weyl_orbit((3,))} == {(3,), (-3,)}
    with pytest.raises(ResourceGuardExceeded):
        build_root_system("E6").weyl_orbit((1,) * 6, guard=1000)


@pytest.mark.parametrize("label,order", [("A3", 24), ("C2", 8), ("G2", 12), ("F4", 1152), ("D4", 192)])
def test_weyl_group_order(label, order):
    rs = build_root_system(label)
    assert rs.weyl_group_order() == order
    assert len(rs.weyl_orbit(rs.rho())) == order


def test_weight_arithmetic_rejects_mixed_systems():
    a = build_root_system("C2").weight((1, 0))
    b = build_root_system("B2").weight((1, 0))
    with pytest.raises(InvalidInput):
        a + b


# -- properties ----------------------------------------------------------------

labels = st.sampled_from(["A2", "A3", "B3", "C2", "C3", "D4", "G2"])


@st.composite
def system_and_weights(draw, k=1, lo=-4, hi=4):
    rs = build_root_system(draw(labels))
    ws = [tuple(draw(st.lists(st.integers(lo, hi), min_size=rs.rank, max_size=rs.rank)))
          for _ in range(k)]
    return rs, ws


@settings(max_examples=60, deadline=None)
@given(system_and_weights(k=3))
def test_dominance_is_a_partial_order(data):
    rs, (x, y, z) = data
    assert rs.dominance_leq(x, x)
    if rs.dominance_leq(x, y) and rs.dominance_leq(y, x):
        assert x == y
    if rs.dominance_leq(x, y) and rs.dominance_leq(y, z):
        assert rs.dominance_leq(x, z)


@settings(max_examples=60, deadline=None)
@given(system_and_weights(), st.lists(st.integers(0, 7), max_size=12))
def test_dominant_representative_is_weyl_invariant(data, word):
    rs, (x,) = data
    w = rs.weight(x)
    for i in word:
        w = rs.reflect(w, i % rs.rank)
    rep = rs.dominant_representative(x)
    assert rs.dominant_representative(w) == rep
    assert rs.is_dominant(rep)


@settings(max_examples=40, deadline=None)
@given(system_and_weights(lo=-2, hi=2))
def test_orbit_size_divides_group_order(data):
    rs, (x,) = data
    orbit = rs.weyl_orbit(x)
    assert rs.weyl_group_order() % len(orbit) == 0
    assert sum(rs.is_dominant(w) for w in orbit) == 1


@settings(max_examples=60, deadline=None)
@given(system_and_weights(k=2))
def test_form_is_weyl_invariant(data):
    rs, (x, y) = data
    for i in range(rs.rank):
        assert rs.inner(rs.reflect(x, i), rs.reflect(y, i)) == rs.inner(x, y)
