import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import anchor, biderivation, schouten_termwise
from twistdeform.exterior import (
    ExteriorError,
    Multivector,
    SubalgebraBasisSet,
    ad_derivation,
    decomposable_twist,
    is_r_matrix,
    quotient_coordinates,
    quotient_project,
    schouten_square,
    twist,
    twist_matrix,
    wedge,
)
from twistdeform.grassmann import canonical_r_matrix
from twistdeform.lie import bracket, build_abelian, build_su

SU = {n: build_su(n) for n in (2, 3, 4)}
SU2, SU3 = SU[2], SU[3]

# frozen from the termwise oracle (checked again below)
CANONICAL_SU3_SQUARE = (
    '{"grade": 3, "terms": [[[1, 2, 3], "1/72"], [[1, 4, 7], "-1/36"], [[1, 4, 8], "1/36"], '
    '[[1, 5, 6], "1/72"], [[2, 4, 6], "1/72"], [[2, 5, 7], "-1/36"], [[3, 4, 5], "1/72"], '
    '[[3, 6, 8], "-1/36"]]}'
)

rat = st.fractions(min_value=-3, max_value=3, max_denominator=4)


def vec(n):
    return st.lists(rat, min_size=n, max_size=n)


@st.composite
def algebra_and_vectors(draw, k=2):
    n = draw(st.sampled_from([2, 3, 4]))
    g = SU[n]
    return g, [draw(vec(g.dim)) for _ in range(k)]


@st.composite
def bivectors(draw, g=SU3, max_terms=4):
    keys = draw(st.lists(st.tuples(st.integers(0, g.dim - 1), st.integers(0, g.dim - 1)), max_size=max_terms))
    return Multivector(g, 2, {k: draw(rat) for k in keys if k[0] != k[1]})


def e(g, *idx, c=1):
    return Multivector.basis(g, *idx, coeff=c)


# -- wedge -------------------------------------------------------------------


def test_wedge_examples():
    assert not (e(SU3, 0) ^ e(SU3, 0))
    assert (e(SU3, 1) ^ e(SU3, 0)) == -(e(SU3, 0) ^ e(SU3, 1))
    assert ((e(SU3, 0) ^ e(SU3, 2)) ^ e(SU3, 1)) == -e(SU3, 0, 1, 2)


def test_normalisation_of_unsorted_keys():
    m = Multivector(SU3, 2, {(3, 1): Fraction(2), (1, 3): Fraction(2)})
    assert not m
    assert Multivector(SU3, 2, {(2, 2): 5}).terms == {}
    assert e(SU3, 4, 1).coefficient(1, 4) == -1


def test_grade_and_parent_errors():
    with pytest.raises(ExteriorError):
        Multivector(SU3, 2, {(0,): 1})
    with pytest.raises(ExteriorError):
        e(SU3, 0) + e(SU3, 0, 1)
    with pytest.raises(ExteriorError):
        e(SU3, 0) ^ e(SU2, 0)
    with pytest.raises(ExteriorError):
        schouten_square(e(SU3, 0))


@given(bivectors(), bivectors(), bivectors())
def test_wedge_associative(a, b, c):
    assert (a ^ b) ^ c == a ^ (b ^ c)


@given(bivectors(max_terms=3), st.lists(rat, min_size=8, max_size=8))
def test_wedge_graded_commutative(a, X):
    x = Multivector.from_vector(SU3, X)
    assert a ^ x == x ^ a  # (-1)^{2*1}
    y = Multivector.from_vector(SU3, list(reversed(X)))
    assert x ^ y == -(y ^ x)


def test_json_round_trip():
    m = e(SU3, 0, 3, c=Fraction(-2, 7)) + e(SU3, 2, 5, c=3)
    data = json.loads(m.to_json())
    assert data == {"grade": 2, "terms": [[[1, 4], "-2/7"], [[3, 6], "3"]]}
    assert Multivector.from_json(SU3, m.to_json()) == m


# -- Schouten square -------------------------------------------------------------


def test_su2_example():
    assert schouten_square(e(SU2, 0, 1, c=Fraction(1, 2))) == -e(SU2, 0, 1, 2)


def test_oracle_normalisation_matches_anchor():
    # the termwise oracle is itself pinned by the decomposable identity
    X, Y = [1, 2, 0], [0, -1, 3]
    assert schouten_termwise(decomposable_twist(SU2, X, Y)) == anchor(SU2, X, Y)


@given(algebra_and_vectors())
def test_anchor_identity(gv):
    g, (X, Y) = gv
    assert schouten_square(decomposable_twist(g, X, Y)) == anchor(g, X, Y)


@given(bivectors())
def test_component_formula_matches_termwise_oracle(t):
    assert schouten_square(t) == schouten_termwise(t)


@given(bivectors(), rat)
def test_quadratic_scaling(t, a):
    assert schouten_square(t * a) == schouten_square(t) * (a * a)


def test_commuting_pair_gives_zero():
    Z1, Z2 = [0] * 6 + [1, 0], [0] * 6 + [0, 1]
    assert not schouten_square(decomposable_twist(SU3, Z1, Z2, 7))
    Y23 = [0] * 5 + [1, 0, 0]
    assert not schouten_square(decomposable_twist(SU3, Y23, [0] * 6 + [2, -1], Fraction(1, 2)))


def test_affine_pair_gives_zero():
    # sl(2, R): [H, E] = 2E
    from twistdeform.lie import LieAlgebra

    s = LieAlgebra.from_brackets(["H", "E", "F"], {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}})
    X, Y = [1, 3, 0], [0, 2, 0]
    assert bracket(s, X, Y) == (0, 4, 0)
    assert not schouten_square(decomposable_twist(s, X, Y))


def test_canonical_su3_square_frozen():
    t = canonical_r_matrix(3)
    sq = schouten_square(t)
    assert sq.to_json() == CANONICAL_SU3_SQUARE
    assert sq == schouten_termwise(t)


def test_biderivation_antisymmetry_of_oracle():
    X, Y, U, V = [1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0]
    assert biderivation(SU2, (X, Y), (U, V)) == biderivation(SU2, (U, V), (X, Y))


# -- ad action and r-matrices ------------------------------------------------------


def test_ad_on_vectors():
    for i in range(SU3.dim):
        X = [0] * 8
        X[(i + 3) % 8] = 2
        ei = [0] * 8
        ei[i] = 1
        assert ad_derivation(SU3, X, e(SU3, i)) == Multivector.from_vector(SU3, bracket(SU3, X, ei))


def test_volume_element_invariant_on_su2():
    for i in range(3):
        X = [0, 0, 0]
        X[i] = 1
        assert not ad_derivation(SU2, X, e(SU2, 0, 1, 2))


@given(bivectors(max_terms=3), bivectors(max_terms=2), st.lists(rat, min_size=8, max_size=8))
def test_ad_leibniz(a, b, X):
    lhs = ad_derivation(SU3, X, a ^ b)
    rhs = (ad_derivation(SU3, X, a) ^ b) + (a ^ ad_derivation(SU3, X, b))
    assert lhs == rhs


@given(st.lists(rat, min_size=3, max_size=3))
def test_every_su2_twist_is_r_matrix(lams):
    t = twist(SU2, {(0, 1): lams[0], (0, 2): lams[1], (1, 2): lams[2]})
    assert is_r_matrix(t).is_r_matrix


@given(st.lists(rat, min_size=6, max_size=6))
def test_abelian_twists(c):
    g = build_abelian(4)
    t = Multivector(g, 2, {(0, 1): c[0], (0, 2): c[1], (0, 3): c[2], (1, 2): c[3], (1, 3): c[4], (2, 3): c[5]})
    rep = is_r_matrix(t)
    assert rep.is_r_matrix and rep.square_zero


def test_non_r_matrix_residuals():
    t = e(SU3, 0, 1, c=1)  # X12 ^ X13
    rep = is_r_matrix(t)
    assert not rep.is_r_matrix
    assert rep.residuals and all(r.grade == 3 for r in rep.residuals.values())
    assert rep.to_dict()["nonzero_residuals"]


def test_twist_matrix_is_twice_coefficient():
    t = twist(SU3, {(0, 3): Fraction(1, 3)})
    T = twist_matrix(t)
    assert T[0][3] == Fraction(1, 3) and T[3][0] == -Fraction(1, 3)
    assert t.coefficient(0, 3) == Fraction(1, 6)


# -- subalgebras and quotients -----------------------------------------------------


def test_subalgebra_closure():
    SubalgebraBasisSet.from_labels(SU3, ["Z1", "Z2"])
    SubalgebraBasisSet.from_labels(SU3, ["X12", "Y12", "Z1", "Z2"])
    with pytest.raises(ExteriorError):
        SubalgebraBasisSet.from_labels(SU3, ["X12", "Y12", "Z1"])
    with pytest.raises(ExteriorError):
        SubalgebraBasisSet.from_labels(SU3, ["X12", "X13"])
    with pytest.raises(ExteriorError):
        SubalgebraBasisSet.from_vectors(SU3, [[1, 1, 0, 0, 0, 0, 0, 0]])


def test_quotient_examples():
    h = SubalgebraBasisSet.from_labels(SU2, ["Z1"])
    assert not quotient_project(e(SU2, 0, 1, 2), h)
    empty = SubalgebraBasisSet(SU2, frozenset())
    m = e(SU2, 0, 1, 2, c=3)
    assert quotient_project(m, empty) == m


def test_quotient_coordinates_reindex():
    h = SubalgebraBasisSet.from_labels(SU3, ["Z1", "Z2"])
    m = e(SU3, 0, 5) + e(SU3, 1, 6)
    comp, terms = quotient_coordinates(m, h)
    assert comp == (0, 1, 2, 3, 4, 5)
    assert terms == {(0, 5): 1}


@given(bivectors(max_terms=5))
def test_quotient_idempotent(m):
    h = SubalgebraBasisSet.from_labels(SU3, ["X12", "Y12", "Z1", "Z2"])
    once = quotient_project(m, h)
    assert quotient_project(once, h) == once
