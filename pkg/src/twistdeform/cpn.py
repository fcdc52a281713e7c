"""Chart geometry on the affine chart ``U_1 = {z_1 != 0}`` of CP^n.

A chart point is ``p = (x_1, y_1, ..., x_n, y_n)`` with ``w_i = x_i + i y_i =
z_{i+1}/z_1``.  Two-forms and bivectors are 2n x 2n antisymmetric matrices,
``Omega[a, b] = omega(d_a, d_b)`` and ``Pi[a, b] = pi(dx^a, dx^b)``.

Forms and bivectors are related by ``Pi = Omega^{-1}``.  This is the sign for
which the deformed CP^1 form comes out as
``{(1 + lam/2) r^4 + 2 r^2 + (1 - lam/2)}^{-1} dx ^ dy`` for
``t = lam/2 X12 ^ Y12``.
"""
from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import expm

from .exterior import Multivector
from .lie import LieAlgebra, build_su

__all__ = [
    "DegeneracyError",
    "TwoFormField",
    "BivectorField",
    "chart_point",
    "to_complex",
    "algebra_matrix",
    "fundamental_vector_field",
    "field_matrix",
    "fubini_study",
    "fubini_study_field",
    "invert_form",
    "invert_bivector",
    "twist_field",
    "twist_bivector_field",
    "deform",
    "deformed_bivector",
    "deformed_form",
    "moment_map",
    "moment_map_su",
    "moment_map_torus",
    "group_exp",
    "act",
    "adjoint_matrix",
    "coadjoint_action",
    "interior",
    "moment_residual",
    "closedness_residual",
    "NondegeneracyReport",
    "nondegeneracy_scan",
    "chart_grid",
    "field_csv",
]


class DegeneracyError(ArithmeticError):
    """A form or bivector matrix is singular at the evaluated point."""

    def __init__(self, point, absdet: float):
        self.point = np.array(point, dtype=float)
        self.absdet = float(absdet)
        super().__init__(f"degenerate matrix at {self.point.tolist()} (|det| = {self.absdet:.3e})")


def chart_point(p, n: int | None = None) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size % 2 or p.size == 0:
        raise ValueError(f"chart point needs 2n coordinates, got shape {p.shape}")
    if n is not None and p.size != 2 * n:
        raise ValueError(f"chart point has {p.size} coordinates, expected {2 * n}")
    if not np.all(np.isfinite(p)):
        raise ValueError("chart point has non-finite coordinates")
    return p


def to_complex(p) -> np.ndarray:
    p = chart_point(p)
    return p[0::2] + 1j * p[1::2]


def _to_real(w: np.ndarray) -> np.ndarray:
    out = np.empty(2 * w.size)
    out[0::2] = w.real
    out[1::2] = w.imag
    return out


@dataclass(frozen=True)
class TwoFormField:
    func: Callable[[np.ndarray], np.ndarray]
    n: int
    name: str = "omega"

    def __call__(self, p) -> np.ndarray:
        return self.func(chart_point(p, self.n))


@dataclass(frozen=True)
class BivectorField:
    func: Callable[[np.ndarray], np.ndarray]
    n: int
    name: str = "pi"

    def __call__(self, p) -> np.ndarray:
        return self.func(chart_point(p, self.n))


# --------------------------------------------------------------------------
# fundamental fields


def _require_matrices(g: LieAlgebra):
    if g.matrices is None:
        raise ValueError(f"{g!r} carries no matrix representation")
    return g.matrices


def algebra_matrix(g: LieAlgebra, X: Sequence) -> np.ndarray:
    mats = _require_matrices(g)
    X = np.asarray([float(x) for x in X])
    if X.shape != (g.dim,):
        raise ValueError(f"vector of length {X.size} for {g.dim}-dimensional algebra")
    return np.tensordot(X, np.array(mats), axes=1)


def _field_from_matrix(M: np.ndarray, p: np.ndarray) -> np.ndarray:
    w = to_complex(p)
    if M.shape[0] != w.size + 1:
        raise ValueError(f"{M.shape[0]}x{M.shape[0]} matrices act on CP^{M.shape[0] - 1}, not CP^{w.size}")
    z = np.concatenate([[1.0], w])
    Xz = M @ z
    return _to_real(Xz[1:] - w * Xz[0])


def fundamental_vector_field(g: LieAlgebra, X: Sequence, p) -> np.ndarray:
    """``X_M`` at ``p`` for the action ``[z] -> [exp(sX) z]``."""
    return _field_from_matrix(algebra_matrix(g, X), chart_point(p))


def field_matrix(g: LieAlgebra, p) -> np.ndarray:
    """Rows are the fundamental fields of the basis vectors, shape ``(dim, 2n)``."""
    p = chart_point(p)
    return np.array([_field_from_matrix(M, p) for M in _require_matrices(g)])


# --------------------------------------------------------------------------
# Fubini-Study form and inversion


def _embedding(n: int) -> np.ndarray:
    """Real 2n x n map with ``dw_a = dx_a + i dy_a``."""
    E = np.zeros((2 * n, n), dtype=complex)
    for a in range(n):
        E[2 * a, a] = 1
        E[2 * a + 1, a] = 1j
    return E


def fubini_study(p) -> np.ndarray:
    """``(i/2) d d-bar log(1 + |w|^2)`` as a real 2n x 2n matrix."""
    w = to_complex(p)
    s = 1 + np.vdot(w, w).real
    h = np.eye(w.size) / s - np.outer(w.conj(), w) / s**2
    E = _embedding(w.size)
    return -(E @ h @ E.conj().T).imag


def fubini_study_field(n: int) -> TwoFormField:
    return TwoFormField(fubini_study, n, "omega_FS")


def _invert(M: np.ndarray, p, tol: float) -> np.ndarray:
    d = abs(np.linalg.det(M))
    if not d > tol:
        raise DegeneracyError(p, d)
    inv = np.linalg.inv(M)
    return 0.5 * (inv - inv.T)


def invert_form(field: TwoFormField, tol: float = 1e-14) -> BivectorField:
    """Poisson bivector ``Pi = Omega^{-1}`` of a symplectic form."""
    return BivectorField(lambda p: _invert(field(p), p, tol), field.n, f"pi[{field.name}]")


def invert_bivector(field: BivectorField, tol: float = 1e-14) -> TwoFormField:
    """Symplectic form ``Omega = Pi^{-1}`` of a nondegenerate bivector."""
    return TwoFormField(lambda p: _invert(field(p), p, tol), field.n, f"omega[{field.name}]")


# --------------------------------------------------------------------------
# twists


def _coefficient_matrix(t: Multivector) -> np.ndarray:
    n = t.algebra.dim
    K = np.zeros((n, n))
    for (a, b), v in t.terms.items():
        K[a, b] = float(v)
        K[b, a] = -float(v)
    return K


def twist_field(t: Multivector, p) -> np.ndarray:
    """``t_M`` at ``p``: each ``c e_a ^ e_b`` becomes ``c (v_a v_b^T - v_b v_a^T)``."""
    if t.grade != 2:
        raise ValueError(f"twist must be a bivector, got grade {t.grade}")
    V = field_matrix(t.algebra, p)
    return V.T @ _coefficient_matrix(t) @ V


def twist_bivector_field(t: Multivector, n: int) -> BivectorField:
    return BivectorField(lambda p: twist_field(t, p), n, "t_M")


def deform(pi: BivectorField, t: Multivector, p) -> np.ndarray:
    """``pi(p) - t_M(p)``."""
    return pi(p) - twist_field(t, p)


def deformed_bivector(pi: BivectorField, t: Multivector) -> BivectorField:
    return BivectorField(lambda p: deform(pi, t, p), pi.n, f"{pi.name}-t_M")


def deformed_form(t: Multivector, n: int, base: TwoFormField | None = None) -> TwoFormField:
    """``omega^t``: invert ``base`` (default Fubini-Study), subtract ``t_M``, invert back."""
    base = base if base is not None else fubini_study_field(n)
    return invert_bivector(deformed_bivector(invert_form(base), t))


# --------------------------------------------------------------------------
# moment maps and group action


def moment_map(g: LieAlgebra, p) -> np.ndarray:
    """``<mu(p), e_a> = Im(z^H e_a z) / (2 z^H z)`` for a matrix algebra acting on CP^n."""
    w = to_complex(p)
    z = np.concatenate([[1.0], w])
    mats = np.array(_require_matrices(g))
    return np.einsum("i,aij,j->a", z.conj(), mats, z).imag / (2 * np.vdot(z, z).real)


def moment_map_su(p, n: int | None = None) -> np.ndarray:
    """Moment map of SU(n+1) on CP^n in the basis of :func:`~twistdeform.lie.build_su`."""
    p = chart_point(p, n)
    return moment_map(build_su(p.size // 2 + 1), p)


def moment_map_torus(p, n: int | None = None) -> np.ndarray:
    """``-1/2 (|w_1|^2, ..., |w_n|^2) / (1 + |w|^2)``."""
    w = to_complex(chart_point(p, n))
    return -0.5 * np.abs(w) ** 2 / (1 + np.vdot(w, w).real)


def group_exp(g: LieAlgebra, X: Sequence) -> np.ndarray:
    return expm(algebra_matrix(g, X))


def act(U: np.ndarray, p) -> np.ndarray:
    """``[z] -> [U z]`` in the chart; raises if the image leaves ``U_1``."""
    z = np.concatenate([[1.0], to_complex(p)])
    Uz = U @ z
    if abs(Uz[0]) < 1e-300:
        raise ValueError("image point leaves the chart")
    return _to_real(Uz[1:] / Uz[0])


def _coordinates(g: LieAlgebra, M: np.ndarray) -> np.ndarray:
    mats = np.array(_require_matrices(g)).reshape(g.dim, -1)
    B = np.concatenate([mats.real, mats.imag], axis=1).T
    rhs = np.concatenate([M.real.ravel(), M.imag.ravel()])
    return np.linalg.lstsq(B, rhs, rcond=None)[0]


def adjoint_matrix(g: LieAlgebra, U: np.ndarray) -> np.ndarray:
    """``R`` with ``U e_a U^{-1} = sum_b R[b, a] e_b``."""
    Uinv = np.linalg.inv(U)
    return np.column_stack([_coordinates(g, U @ M @ Uinv) for M in _require_matrices(g)])


def coadjoint_action(g: LieAlgebra, U: np.ndarray, mu) -> np.ndarray:
    """``Ad*_U mu = mu o Ad_{U^{-1}}``."""
    return adjoint_matrix(g, np.linalg.inv(U)).T @ np.asarray(mu, dtype=float)


def interior(v, Omega) -> np.ndarray:
    """Covector ``iota_v omega = omega(v, .)``."""
    return np.asarray(v) @ np.asarray(Omega)


def moment_residual(
    g: LieAlgebra,
    X: Sequence,
    p,
    form: TwoFormField | None = None,
    moment: Callable | None = None,
    h: float = 1e-6,
) -> np.ndarray:
    """``d mu^X - iota_{X_M} omega`` at ``p``, the differential by centred differences."""
    p = chart_point(p)
    form = form if form is not None else fubini_study_field(p.size // 2)
    moment = moment if moment is not None else (lambda q: moment_map(g, q))
    Xv = np.asarray([float(x) for x in X])
    dmu = np.empty(p.size)
    for a in range(p.size):
        e = np.zeros(p.size)
        e[a] = h
        dmu[a] = (Xv @ moment(p + e) - Xv @ moment(p - e)) / (2 * h)
    return dmu - interior(fundamental_vector_field(g, X, p), form(p))


# --------------------------------------------------------------------------
# diagnostics


def closedness_residual(field: TwoFormField, p, h: float = 1e-4) -> float:
    """Max over ``a < b < c`` of the centred-difference ``(d omega)_{abc}``."""
    if not h > 0:
        raise ValueError("step must be positive")
    p = chart_point(p, field.n)
    m = p.size
    if m < 3:
        return 0.0
    dO = np.empty((m, m, m))
    for a in range(m):
        e = np.zeros(m)
        e[a] = h
        dO[a] = (field(p + e) - field(p - e)) / (2 * h)
    d = dO + dO.transpose(1, 2, 0) + dO.transpose(2, 0, 1)
    return float(max(abs(d[a, b, c]) for a, b, c in itertools.combinations(range(m), 3)))


def chart_grid(n: int, lim: float = 3.0, num: int = 40) -> np.ndarray:
    """Tensor grid ``linspace(-lim, lim, num)^{2n}``."""
    if num < 1:
        raise ValueError("empty grid")
    axis = np.linspace(-lim, lim, num)
    return np.array(list(itertools.product(axis, repeat=2 * n)))


@dataclass(frozen=True)
class NondegeneracyReport:
    min_value: float
    argmin: np.ndarray
    n_points: int
    tolerance: float
    flagged: np.ndarray

    @property
    def nondegenerate(self) -> bool:
        return len(self.flagged) == 0

    def to_dict(self) -> dict:
        return {
            "min_sqrt_abs_det": self.min_value,
            "argmin": self.argmin.tolist(),
            "n_points": self.n_points,
            "tolerance": self.tolerance,
            "n_flagged": int(len(self.flagged)),
            "nondegenerate": self.nondegenerate,
        }


def nondegeneracy_scan(field, grid, tol: float = 1e-10) -> NondegeneracyReport:
    """Min of ``|det|^{1/2}`` (a Pfaffian proxy) of ``field`` over ``grid``."""
    grid = np.atleast_2d(np.asarray(grid, dtype=float))
    if grid.size == 0:
        raise ValueError("empty grid")
    vals = np.array([np.sqrt(abs(np.linalg.det(field(p)))) for p in grid])
    i = int(np.argmin(vals))
    return NondegeneracyReport(float(vals[i]), grid[i], len(grid), tol, grid[vals <= tol])


def field_csv(field, points) -> str:
    """Rows of coordinates followed by the upper-triangle matrix entries."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    m = points.shape[1]
    pairs = list(itertools.combinations(range(m), 2))
    coord_names = [f"{c}{k + 1}" for k in range(m // 2) for c in ("x", "y")]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(coord_names + [f"m{a + 1}{b + 1}" for a, b in pairs])
    for p in points:
        M = field(p)
        w.writerow([repr(float(x)) for x in p] + [repr(float(M[a, b])) for a, b in pairs])
    return buf.getvalue()
