import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from foldbranch import (
    FormalCharacter,
    IrrDecomposition,
    InvalidInput,
    ResourceGuardExceeded,
    build_root_system,
    char_freudenthal,
    char_product,
    configured,
    decompose_character,
    folded_pair,
    folded_rho_character,
    is_weight_of,
    klimyk_tensor,
    restrict_character,
    weight_multiplicity,
)

import oracles

SMALL = ["A1", "A2", "A3", "B2", "B3", "C2", "C3", "D4", "G2"]


def box(rank, bound):
    return itertools.product(range(bound + 1), repeat=rank)


# -- characters ----------------------------------------------------------------


def test_c2_five_dimensional_character():
    rs = build_root_system("C2")
    ch = char_freudenthal(rs, (0, 1))
    e_weights = {oracles.c_fundamental_to_e(w) for w in ch}
    assert e_weights == {(1, 1), (1, -1), (-1, 1), (-1, -1), (0, 0)}
    assert set(ch.terms.values()) == {1}
    assert ch.mass == 5


@pytest.mark.parametrize("label", SMALL)
def test_trivial_character(label):
    rs = build_root_system(label)
    assert dict(char_freudenthal(rs, rs.zero()).items()) == {(0,) * rs.rank: 1}


def test_g2_seven_dimensional_character():
    rs = build_root_system("G2")
    ch = char_freudenthal(rs, (1, 0))
    assert ch.mass == 7 and ch[(0, 0)] == 1


def test_non_dominant_highest_weight_rejected():
    rs = build_root_system("C2")
    with pytest.raises(InvalidInput):
        char_freudenthal(rs, (-1, 1))
    with pytest.raises(InvalidInput):
        klimyk_tensor(rs, (1, 0), (0, -1))


def test_formal_character_drops_zeros_and_rejects_bad_keys():
    rs = build_root_system("A1")
    ch = FormalCharacter(rs, {(1,): 1, (0,): 0})
    assert dict(ch.items()) == {(1,): 1}
    with pytest.raises(InvalidInput):
        FormalCharacter(rs, {(1, 2): 1})


@pytest.mark.parametrize("label", SMALL)
def test_mass_equals_weyl_dimension(label):
    rs = build_root_system(label)
    for lam in box(rs.rank, 2 if rs.rank <= 3 else 1):
        ch = char_freudenthal(rs, lam)
        assert ch.mass == rs.weyl_dim(lam)
        assert ch.is_weyl_invariant()
        assert min(ch.terms.values()) > 0


@pytest.mark.parametrize("label", ["A2", "B2", "C3", "G2", "B3"])
def test_freudenthal_is_irreducible_by_weyl_numerator(label):
    rs = build_root_system(label)
    for lam in box(rs.rank, 2):
        ch = char_freudenthal(rs, lam)
        assert oracles.numerator_decomposition(rs, ch.terms) == {lam: 1}


def test_weight_multiplicity_examples():
    rs = build_root_system("C2")
    # e2 = -w1 + w2
    assert weight_multiplicity(rs, (1, 0), (-1, 1)) == 1
    assert weight_multiplicity(rs, (1, 0), (0, 0)) == 0
    for lam in box(2, 3):
        assert weight_multiplicity(rs, lam, lam) == 1


def test_is_weight_of_examples():
    rs = build_root_system("C2")
    assert is_weight_of(rs, (1, 0), (-1, 0))
    assert not is_weight_of(rs, (1, 0), (0, 0))
    assert is_weight_of(rs, (2, 1), (2, 1))


@pytest.mark.parametrize("label", ["A2", "B2", "C2", "G2", "C3", "B3"])
def test_is_weight_of_agrees_with_multiplicity(label):
    rs = build_root_system(label)
    for lam in box(rs.rank, 2):
        ch = char_freudenthal(rs, lam)
        bound = ch.max_abs_coord() + 1
        for mu in itertools.product(range(-bound, bound + 1), repeat=rs.rank):
            m = weight_multiplicity(rs, lam, mu)
            assert m == ch[mu]
            assert is_weight_of(rs, lam, mu) == (m > 0)


# -- products ------------------------------------------------------------------


def test_product_identity_element():
    rs = build_root_system("C2")
    b = char_freudenthal(rs, (1, 1))
    assert char_product(char_freudenthal(rs, (0, 0)), b) == b


def test_a1_square():
    rs = build_root_system("A1")
    sq = char_product(char_freudenthal(rs, (1,)), char_freudenthal(rs, (1,)))
    assert dict(sq.items()) == {(2,): 1, (0,): 2, (-2,): 1}


def test_c2_product_mass():
    rs = build_root_system("C2")
    assert char_product(char_freudenthal(rs, (1, 1)), char_freudenthal(rs, (1, 0))).mass == 64


def test_product_rejects_mixed_systems():
    with pytest.raises(InvalidInput):
        char_product(char_freudenthal(build_root_system("C2"), (1, 0)),
                     char_freudenthal(build_root_system("B2"), (1, 0)))


def test_klimyk_examples():
    rs = build_root_system("C2")
    dec = klimyk_tensor(rs, (1, 1), (1, 0))
    assert dec.as_dict() == {(2, 1): 1, (0, 2): 1, (2, 0): 1, (0, 1): 1}
    assert [rs.weyl_dim(w) for w, _ in dec] == [35, 14, 10, 5]
    assert klimyk_tensor(rs, (2, 1), (0, 0)).as_dict() == {(2, 1): 1}
    a1 = build_root_system("A1")
    assert klimyk_tensor(a1, (1,), (1,)).as_dict() == {(2,): 1, (0,): 1}


@pytest.mark.parametrize("a,b", [(1, 1), (3, 2), (4, 4), (5, 0), (2, 7)])
def test_klimyk_against_clebsch_gordan(a, b):
    a1 = build_root_system("A1")
    want = {(k,): m for k, m in oracles.a1_clebsch_gordan(a, b).items()}
    assert klimyk_tensor(a1, (a,), (b,)).as_dict() == want


@st.composite
def system_and_two_weights(draw):
    rs = build_root_system(draw(st.sampled_from(["A2", "B2", "C2", "G2", "A3", "C3"])))
    hi = 2 if rs.rank <= 2 else 1
    w = st.lists(st.integers(0, hi), min_size=rs.rank, max_size=rs.rank).map(tuple)
    return rs, draw(w), draw(w)


@settings(max_examples=40, deadline=None)
@given(system_and_two_weights())
def test_klimyk_reexpands_to_product(data):
    rs, lam, mu = data
    prod = char_product(char_freudenthal(rs, lam), char_freudenthal(rs, mu))
    dec = klimyk_tensor(rs, lam, mu)
    assert dec.to_character() == prod
    assert dec.as_dict() == oracles.numerator_decomposition(rs, prod.terms)
    assert decompose_character(rs, prod).as_dict() == dec.as_dict()


@settings(max_examples=40, deadline=None)
@given(system_and_two_weights())
def test_product_commutes_and_multiplies_mass(data):
    rs, lam, mu = data
    a, b = char_freudenthal(rs, lam), char_freudenthal(rs, mu)
    ab = char_product(a, b)
    assert ab == char_product(b, a)
    assert ab.mass == a.mass * b.mass
    assert ab.is_weyl_invariant()


# -- decomposition ---------------------------------------------------------------


def test_decompose_examples():
    rs = build_root_system("C2")
    assert decompose_character(rs, char_freudenthal(rs, (2, 1))).as_dict() == {(2, 1): 1}
    fp = folded_pair("A3C2")
    assert decompose_character(rs, folded_rho_character(fp, 1)).as_dict() == {
        (2, 1): 1, (0, 2): 1, (2, 0): 1, (0, 1): 1}
    assert decompose_character(rs, char_freudenthal(rs, (0, 0)).scaled(2)).as_dict() == {(0, 0): 2}


def test_decompose_rejects_non_invariant_input():
    rs = build_root_system("C2")
    with pytest.raises(InvalidInput):
        decompose_character(rs, FormalCharacter(rs, {(1, 0): 1}))
    lopsided = char_freudenthal(rs, (1, 0)) + FormalCharacter(rs, {(-1, 1): 1})
    with pytest.raises(InvalidInput):
        decompose_character(rs, lopsided)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["A2", "B2", "C2", "G2"]),
       st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), st.integers(1, 3), max_size=4))
def test_decompose_round_trips(label, mults):
    rs = build_root_system(label)
    dec = IrrDecomposition.from_mapping(rs, mults)
    ch = dec.to_character()
    assert decompose_character(rs, ch).as_dict() == dec.as_dict()
    assert decompose_character(rs, ch).to_character() == ch
    assert dec.total_dim() == ch.mass


def test_decomposition_validation():
    rs = build_root_system("C2")
    with pytest.raises(InvalidInput):
        IrrDecomposition.from_mapping(rs, {(1, -1): 1})
    with pytest.raises(InvalidInput):
        IrrDecomposition.from_mapping(rs, {(1, 0): -1})
    assert IrrDecomposition.from_mapping(rs, {(1, 0): 0}).as_dict() == {}


# -- folded products -------------------------------------------------------------


@pytest.mark.parametrize("pair,d,mass", [("A3C2", 1, 64), ("D4G2", 1, 4096), ("A3C2", 2, 729)])
def test_folded_rho_character_mass_examples(pair, d, mass):
    assert folded_rho_character(folded_pair(pair), d).mass == mass


@pytest.mark.parametrize("pair,d", [(p, d) for p in ["A3C2", "D4B3", "D4G2", "A5C3", "D5B4"]
                                    for d in (1, 2)])
def test_restriction_identity(pair, d):
    fp = folded_pair(pair)
    ch = char_freudenthal(fp.ambient, fp.ambient.rho() * d)
    folded = folded_rho_character(fp, d)
    assert restrict_character(fp, ch) == folded
    assert folded == FormalCharacter(fp.folded, oracles.restricted_ambient_character(fp, d))
    assert folded.mass == (d + 1) ** fp.ambient.n_positive
    assert folded.is_weyl_invariant()


def test_restrict_trivial_and_mismatch():
    fp = folded_pair("A3C2")
    one = char_freudenthal(fp.ambient, fp.ambient.zero())
    assert dict(restrict_character(fp, one).items()) == {(0, 0): 1}
    with pytest.raises(InvalidInput):
        restrict_character(fp, char_freudenthal(fp.folded, (1, 0)))
    with pytest.raises(InvalidInput):
        folded_rho_character(fp, 0)


# -- settings ----------------------------------------------------------------------


def test_term_guard(cold_caches):
    rs = build_root_system("B3")
    with configured(term_guard=10):
        with pytest.raises(ResourceGuardExceeded):
            char_freudenthal(rs, (1, 1, 1))
        with pytest.raises(ResourceGuardExceeded):
            folded_rho_character(folded_pair("D4B3"), 1)


def test_workers_must_be_positive():
    with pytest.raises(InvalidInput):
        with configured(workers=0):
            pass


@pytest.mark.parametrize("pair,d", [("A3C2", 2), ("D4G2", 1), ("A5C3", 1)])
def test_thread_count_does_not_change_results(pair, d, cold_caches):
    fp = folded_pair(pair)
    results = []
    for workers in (1, 4):
        with configured(workers=workers):
            ch = folded_rho_character(fp, d)
            prod = char_product(ch, char_freudenthal(fp.folded, fp.folded.rho()))
        results.append((ch.sorted_items(), prod.sorted_items()))
    assert results[0] == results[1]
