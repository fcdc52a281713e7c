from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from twistdeform.admissibility import (
    AdmissibilityError,
    admissibility_det,
    admissibility_det_exact,
    admissible_on,
    affine_case_check,
    affine_form,
    build_A,
    build_A_exact,
    f_t,
    f_t_batch,
    fibonacci_sphere,
    scan_sphere,
    su2_closed_form,
)
from twistdeform.exterior import Multivector, decomposable_twist, twist
from twistdeform.lie import LieAlgebra, bracket, build_su

SU2, SU3 = build_su(2), build_su(3)
SL2 = LieAlgebra.from_brackets(["H", "E", "F"], {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}})
GL2 = LieAlgebra.from_brackets(["H", "E", "F", "I"], {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}})

rat = st.fractions(min_value=-2, max_value=2, max_denominator=5)


def su2_twist(l12, l13, l23):
    return twist(SU2, {(0, 1): l12, (0, 2): l13, (1, 2): l23})


def test_zero_twist_gives_minus_identity():
    for g in (SU2, SU3):
        A = build_A(g, Multivector.zero(g, 2), np.arange(g.dim, dtype=float))
        assert np.array_equal(A, -np.eye(g.dim))
        assert admissibility_det(g, Multivector.zero(g, 2), np.ones(g.dim)) == (-1) ** g.dim


def test_xi_zero_gives_minus_identity():
    t = su2_twist(1, 2, 3)
    assert np.array_equal(build_A(SU2, t, np.zeros(3)), -np.eye(3))


def test_entries_against_definition():
    rng = np.random.default_rng(3)
    t = twist(SU3, {(0, 4): 0.5, (2, 7): -1.25, (3, 5): 2})
    xi = rng.normal(size=8)
    C = SU3.structure_tensor
    T = np.zeros((8, 8))
    for (i, j), v in t.terms.items():
        T[i, j], T[j, i] = 2 * float(v), -2 * float(v)
    ref = np.array([[-(i == l) - sum(T[i, j] * C[l, j, k] * xi[k] for j in range(8) for k in range(8))
                     for l in range(8)] for i in range(8)])
    assert np.allclose(build_A(SU3, t, xi), ref, atol=1e-13)


def displayed_su2_matrix(l12, l13, l23, x1, x2, x3):
    return [
        [1 + 2 * l12 * x3 - 2 * l13 * x2, 2 * l13 * x1, -2 * l12 * x1],
        [-2 * l23 * x2, 1 + 2 * l12 * x3 + 2 * l23 * x1, -2 * l12 * x2],
        [-2 * l23 * x3, 2 * l13 * x3, 1 - 2 * l13 * x2 + 2 * l23 * x1],
    ]


@given(rat, rat, rat, rat, rat, rat)
def test_su2_matrix_is_negative_of_displayed_form(l12, l13, l23, x1, x2, x3):
    A = build_A_exact(SU2, su2_twist(l12, l13, l23), [x1, x2, x3])
    D = displayed_su2_matrix(l12, l13, l23, x1, x2, x3)
    assert [[-a for a in row] for row in A] == D


def test_su2_example_value():
    lam = 0.7
    assert np.isclose(f_t(SU2, su2_twist(lam, 0, 0), [0, 0, 0.5]), (1 + lam) ** 2, atol=1e-14)


@given(rat, rat, rat, rat, rat, rat)
def test_su2_exact_determinant(l12, l13, l23, x1, x2, x3):
    t = su2_twist(l12, l13, l23)
    raw = admissibility_det_exact(SU2, t, [x1, x2, x3])
    assert -raw == (1 + 2 * l23 * x1 - 2 * l13 * x2 + 2 * l12 * x3) ** 2


def test_float_matches_exact_on_su3():
    rng = np.random.default_rng(11)
    for _ in range(100):
        coeffs = {tuple(sorted(rng.choice(8, 2, replace=False))): Fraction(int(rng.integers(-4, 5)), 3)
                  for _ in range(3)}
        t = twist(SU3, coeffs)
        xi = [Fraction(int(v), 4) for v in rng.integers(-4, 5, size=8)]
        exact = admissibility_det_exact(SU3, t, xi)
        assert abs(admissibility_det(SU3, t, [float(x) for x in xi]) - float(exact)) < 1e-9 * max(1, abs(float(exact)))


def test_exact_and_float_matrices_agree():
    t = su2_twist(Fraction(1, 3), 0, Fraction(-2, 5))
    xi = [Fraction(1, 2), Fraction(-1, 3), 2]
    E = np.array([[float(v) for v in row] for row in build_A_exact(SU2, t, xi)])
    assert np.allclose(E, build_A(SU2, t, [float(x) for x in xi]), atol=1e-15)


def test_su2_closed_form_random():
    rng = np.random.default_rng(5)
    for _ in range(200):
        lam, xi = rng.uniform(-2, 2, 3), rng.uniform(-2, 2, 3)
        assert abs(f_t(SU2, su2_twist(*lam), xi) - su2_closed_form(*lam, xi)) < 1e-9


@given(st.lists(rat, min_size=8, max_size=8))
def test_constant_term(c):
    t = twist(SU3, {(i, (i + 3) % 8): v for i, v in enumerate(c) if i != (i + 3) % 8})
    assert admissibility_det(SU3, t, np.zeros(8)) == 1.0
    assert admissibility_det_exact(SU3, t, [0] * 8) == 1


def test_commuting_pair_identity():
    rng = np.random.default_rng(2)
    for _ in range(50):
        a, b = rng.normal(size=2), rng.normal(size=2)
        X = [0] * 6 + list(a)
        Y = [0] * 6 + list(b)
        t = decomposable_twist(SU3, X, Y, 3)
        xi = rng.uniform(-10, 10, 8)
        assert abs(f_t(SU3, t, xi) - 1) < 1e-9


def test_batch_matches_single():
    t = su2_twist(0.4, 0.1, -0.2)
    pts = fibonacci_sphere(50, 0.5)
    assert np.allclose(f_t_batch(SU2, t, pts), [f_t(SU2, t, p) for p in pts])


def test_dimension_errors():
    with pytest.raises(AdmissibilityError):
        build_A(SU2, su2_twist(1, 0, 0), [1, 2])
    with pytest.raises(AdmissibilityError):
        build_A(SU3, su2_twist(1, 0, 0), np.zeros(8))
    with pytest.raises(AdmissibilityError):
        admissible_on(SU2, su2_twist(1, 0, 0), np.zeros((0, 3)))
    with pytest.raises(AdmissibilityError):
        admissible_on(SU2, su2_twist(1, 0, 0), np.zeros((1, 3)), tol=0)


# -- sample sets -------------------------------------------------------------------


def test_fibonacci_sphere():
    pts = fibonacci_sphere(1000, 0.5)
    assert pts.shape == (1006, 3)
    assert np.allclose(np.linalg.norm(pts, axis=1), 0.5)
    assert np.array_equal(pts, fibonacci_sphere(1000, 0.5))
    # roughly uniform: each octant gets about 1/8 of the lattice
    counts = np.unique((pts[:1000] > 0) @ [1, 2, 4], return_counts=True)[1]
    assert counts.min() > 100 and counts.max() < 150


def test_report_invariants_and_exports():
    t = su2_twist(0.5, 0, 0)
    rep = admissible_on(SU2, t, fibonacci_sphere(100, 0.5))
    assert len(rep.values) == len(rep.samples)
    assert rep.verdict == (rep.min_abs > rep.tolerance)
    d = rep.to_dict()
    assert d["n_samples"] == 106 and d["twist"]["terms"] == [[[1, 2], "1/4"]]
    lines = rep.to_csv().splitlines()
    assert lines[0] == "xi1,xi2,xi3,f_t" and len(lines) == 107


def test_zero_twist_report():
    rep = admissible_on(SU2, Multivector.zero(SU2, 2), fibonacci_sphere(10))
    assert rep.verdict and rep.min_abs == 1


@pytest.mark.parametrize("norm,expected", [(0.5, True), (1.5, False)])
def test_scan_sphere_threshold(norm, expected):
    d = np.array([1.0, -2.0, 0.5])
    d /= np.linalg.norm(d)
    rep = scan_sphere(SU2, su2_twist(*(norm * d)), n_samples=2000)
    assert rep.verdict is expected


def test_refinement_is_needed_near_threshold():
    d = np.ones(3) / np.sqrt(3)
    t = su2_twist(*(1.01 * d))
    raw = scan_sphere(SU2, t, refine=0)
    refined = scan_sphere(SU2, t)
    assert raw.min_abs > 1e-9
    assert not refined.verdict and refined.n_refined == 8


def test_scan_sphere_needs_dim_three():
    with pytest.raises(AdmissibilityError):
        scan_sphere(SU3, Multivector.zero(SU3, 2))


# -- affine pairs --------------------------------------------------------------


def random_affine_pair(rng, g):
    """``X, Y`` spanning ``span{H + beta E, E}``, with ``[X, Y] = aX + bY`` exactly."""
    beta, al, de, ga, ep = (Fraction(int(v), 3) for v in rng.integers(-6, 7, size=5))
    if al * ep - de * ga == 0:
        al, ep, de, ga = Fraction(1), Fraction(1), Fraction(0), Fraction(0)
    X0 = [1, beta, 0] + [0] * (g.dim - 3)
    Y0 = [0, 1, 0] + [0] * (g.dim - 3)
    X = [al * a + de * b for a, b in zip(X0, Y0)]
    Y = [ga * a + ep * b for a, b in zip(X0, Y0)]
    return X, Y, -2 * ga, 2 * al


@pytest.mark.parametrize("g", [SL2, GL2], ids=["sl2", "gl2"])
def test_affine_agreement(g):
    rng = np.random.default_rng(7)
    for _ in range(500):
        X, Y, a, b = random_affine_pair(rng, g)
        assert bracket(g, X, Y) == tuple(a * x + b * y for x, y in zip(X, Y))
        t = decomposable_twist(g, X, Y)
        xi = rng.uniform(-3, 3, g.dim)
        assert affine_case_check(g, X, Y, a, b, xi) == (abs(f_t(g, t, xi)) > 1e-9)
        assert np.isclose(f_t(g, t, xi), affine_form(g, X, Y, a, b, xi) ** 2, rtol=1e-9, atol=1e-9)


def test_affine_singular_points():
    rng = np.random.default_rng(8)
    for _ in range(100):
        X, Y, a, b = random_affine_pair(rng, SL2)
        eta = np.array([float(a * x + b * y) for x, y in zip(X, Y)])
        if not eta.any():
            continue
        xi0 = rng.normal(size=3)
        if abs(eta @ xi0) < 1e-3:
            continue
        xi = -xi0 / (eta @ xi0)
        assert not affine_case_check(SL2, X, Y, a, b, xi)
        assert abs(f_t(SL2, decomposable_twist(SL2, X, Y), xi)) < 1e-9


def test_affine_trivial_cases():
    X, Y = [0] * 6 + [1, 0], [0] * 6 + [0, 1]
    xi = np.full(8, 5.0)
    assert affine_case_check(SU3, X, Y, 0, 0, xi)
    assert affine_case_check(SL2, [1, 0, 0], [0, 1, 0], 0, 2, np.zeros(3))


def test_affine_hypothesis_checked():
    with pytest.raises(AdmissibilityError):
        affine_case_check(SU2, [1, 0, 0], [0, 1, 0], 0, 0, np.zeros(3))
