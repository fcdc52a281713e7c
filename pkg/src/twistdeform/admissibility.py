"""The matrix ``A_t(xi)`` and admissibility of a twisted complement.

``A[i, l] = -delta_il - sum_{j,k} t^{ij} c_lj^k xi_k``.  Its determinant has
constant term ``(-1)^n``; :func:`f_t` multiplies by ``(-1)^n`` so that the
normalised value is ``1`` at ``xi = 0`` and equals the perfect square
``(1 + 2 lam_23 xi_1 - 2 lam_13 xi_2 + 2 lam_12 xi_3)^2`` on su(2).
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .exterior import Multivector, twist_matrix
from .lie import LieAlgebra, as_fraction, bracket, vector

__all__ = [
    "AdmissibilityError",
    "AdmissibilityReport",
    "build_A",
    "build_A_exact",
    "admissibility_det",
    "admissibility_det_exact",
    "f_t",
    "f_t_batch",
    "admissible_on",
    "fibonacci_sphere",
    "scan_sphere",
    "affine_form",
    "affine_case_check",
    "su2_closed_form",
]


class AdmissibilityError(ValueError):
    pass


def _check_twist(g: LieAlgebra, t: Multivector):
    if t.grade != 2:
        raise AdmissibilityError(f"twist must be a bivector, got grade {t.grade}")
    if t.algebra != g:
        raise AdmissibilityError("twist is not over this algebra")


def _float_twist(t: Multivector) -> np.ndarray:
    return np.array([[float(v) for v in row] for row in twist_matrix(t)]).reshape(
        t.algebra.dim, t.algebra.dim
    )


def _as_points(g: LieAlgebra, xi) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    if xi.shape[-1:] != (g.dim,):
        raise AdmissibilityError(f"dual point has shape {xi.shape}, expected (..., {g.dim})")
    if not np.all(np.isfinite(xi)):
        raise AdmissibilityError("dual point has non-finite entries")
    return xi


def build_A(g: LieAlgebra, t: Multivector, xi) -> np.ndarray:
    """``A_t(xi)``; ``xi`` may carry leading batch axes."""
    _check_twist(g, t)
    xi = _as_points(g, xi)
    T = _float_twist(t)
    Cxi = np.einsum("ljk,...k->...lj", g.structure_tensor, xi)
    return -np.eye(g.dim) - T @ np.swapaxes(Cxi, -1, -2)


def build_A_exact(g: LieAlgebra, t: Multivector, xi: Sequence) -> list[list[Fraction]]:
    _check_twist(g, t)
    xi = vector(g, xi)
    n = g.dim
    T = twist_matrix(t)
    Cxi = [[Fraction(0)] * n for _ in range(n)]
    for (l, j, k), c in g.constants.items():
        if xi[k]:
            Cxi[l][j] += c * xi[k]
    A = [[Fraction(-1 if i == l else 0) for l in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            if T[i][j]:
                for l in range(n):
                    A[i][l] -= T[i][j] * Cxi[l][j]
    return A


def _det_exact(M: list[list[Fraction]]) -> Fraction:
    M = [row[:] for row in M]
    n = len(M)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        det *= M[c][c]
        inv = 1 / M[c][c]
        for r in range(c + 1, n):
            if M[r][c]:
                f = M[r][c] * inv
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return det


def admissibility_det(g: LieAlgebra, t: Multivector, xi) -> np.ndarray | float:
    """Raw ``det A_t(xi)`` (LU with partial pivoting); constant term ``(-1)^n``."""
    d = np.linalg.det(build_A(g, t, xi))
    return float(d) if np.ndim(d) == 0 else d


def admissibility_det_exact(g: LieAlgebra, t: Multivector, xi: Sequence) -> Fraction:
    return _det_exact(build_A_exact(g, t, xi))


def f_t(g: LieAlgebra, t: Multivector, xi) -> float:
    """Normalised determinant ``(-1)^n det A_t(xi) = det(-A_t(xi))``."""
    return (-1) ** g.dim * admissibility_det(g, t, xi)


def f_t_batch(g: LieAlgebra, t: Multivector, xis) -> np.ndarray:
    xis = np.atleast_2d(_as_points(g, xis))
    return (-1) ** g.dim * np.linalg.det(build_A(g, t, xis))


def su2_closed_form(lam12, lam13, lam23, xi) -> float:
    x1, x2, x3 = xi
    return (1 + 2 * lam23 * x1 - 2 * lam13 * x2 + 2 * lam12 * x3) ** 2


# --------------------------------------------------------------------------
# sample sets and reports


def fibonacci_sphere(n_points: int = 10_000, radius: float = 1.0) -> np.ndarray:
    """Fibonacci lattice on the sphere of ``radius`` in R^3, plus the 6 axis points."""
    if n_points < 1:
        raise AdmissibilityError("need at least one lattice point")
    k = np.arange(n_points) + 0.5
    z = 1 - 2 * k / n_points
    rho = np.sqrt(1 - z * z)
    phi = np.pi * (3 - np.sqrt(5)) * k
    pts = np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])
    axes = np.vstack([np.eye(3), -np.eye(3)])
    return radius * np.vstack([pts, axes])


@dataclass(frozen=True)
class AdmissibilityReport:
    twist: Multivector
    samples: np.ndarray
    values: np.ndarray
    tolerance: float
    n_refined: int = 0
    min_abs: float = field(init=False)
    argmin: np.ndarray = field(init=False)
    verdict: bool = field(init=False)

    def __post_init__(self):
        if len(self.samples) != len(self.values):
            raise AdmissibilityError("samples and values differ in length")
        i = int(np.argmin(np.abs(self.values)))
        object.__setattr__(self, "min_abs", float(abs(self.values[i])))
        object.__setattr__(self, "argmin", np.array(self.samples[i]))
        object.__setattr__(self, "verdict", self.min_abs > self.tolerance)

    @property
    def min_value(self) -> float:
        return float(np.min(self.values))

    def to_dict(self) -> dict:
        return {
            "twist": json.loads(self.twist.to_json()),
            "n_samples": int(len(self.samples)),
            "n_refined": self.n_refined,
            "min_abs": self.min_abs,
            "min_value": self.min_value,
            "argmin": [float(x) for x in self.argmin],
            "verdict": self.verdict,
            "tolerance": self.tolerance,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        dim = self.samples.shape[1]
        w.writerow([f"xi{k + 1}" for k in range(dim)] + ["f_t"])
        for p, v in zip(self.samples, self.values):
            w.writerow([repr(float(x)) for x in p] + [repr(float(v))])
        return buf.getvalue()


def admissible_on(
    g: LieAlgebra, t: Multivector, samples, tol: float = 1e-9
) -> AdmissibilityReport:
    """Evaluate ``f_t`` on every sample; verdict is ``min |f_t| > tol``."""
    if not tol > 0:
        raise AdmissibilityError("tolerance must be positive")
    samples = _as_points(g, samples)
    if samples.ndim != 2 or len(samples) == 0:
        raise AdmissibilityError("empty sample set")
    return AdmissibilityReport(t, samples, f_t_batch(g, t, samples), tol)


def _spherical(angles, radius):
    th, ph = angles
    return radius * np.array([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)])


def scan_sphere(
    g: LieAlgebra,
    t: Multivector,
    radius: float = 0.5,
    n_samples: int = 10_000,
    tol: float = 1e-9,
    refine: int = 8,
) -> AdmissibilityReport:
    """Admissibility on a sphere in a 3-dimensional dual.

    Besides the Fibonacci lattice, ``refine`` local minimisations of ``|f_t|``
    are started from the best lattice points and their end points are added to
    the sample set.  ``f_t`` is often a perfect square, so lattice points alone
    never see a sign change and can sit well above ``tol`` near a zero.
    """
    if g.dim != 3:
        raise AdmissibilityError("sphere scans need a 3-dimensional algebra")
    pts = fibonacci_sphere(n_samples, radius)
    vals = f_t_batch(g, t, pts)
    extra = []
    for i in np.argsort(np.abs(vals))[:refine]:
        x, y, z = pts[i] / radius
        start = np.array([np.arccos(np.clip(z, -1, 1)), np.arctan2(y, x)])
        res = minimize(
            lambda a: abs(f_t(g, t, _spherical(a, radius))),
            start,
            method="Nelder-Mead",
            options={"xatol": 1e-13, "fatol": 1e-18, "maxiter": 2000},
        )
        extra.append(_spherical(res.x, radius))
    if extra:
        extra = np.array(extra)
        pts = np.vstack([pts, extra])
        vals = np.concatenate([vals, f_t_batch(g, t, extra)])
    return AdmissibilityReport(t, pts, vals, tol, n_refined=len(extra))


# --------------------------------------------------------------------------
# decomposable twists with [X, Y] = aX + bY


def _check_affine(g, X, Y, a, b):
    X, Y = vector(g, X), vector(g, Y)
    a, b = as_fraction(a), as_fraction(b)
    eta = tuple(a * x + b * y for x, y in zip(X, Y))
    if bracket(g, X, Y) != eta:
        raise AdmissibilityError("[X, Y] != aX + bY")
    return eta


def affine_form(g: LieAlgebra, X, Y, a, b, xi) -> float:
    """``1 + eta . xi`` with ``eta = aX + bY = [X, Y]`` (hypothesis checked exactly)."""
    eta = _check_affine(g, X, Y, a, b)
    xi = _as_points(g, xi)
    return float(1 + np.dot([float(e) for e in eta], xi))


def affine_case_check(g: LieAlgebra, X, Y, a, b, xi, tol: float = 1e-9) -> bool:
    """Regularity of ``A_t(xi)`` for ``t = X^Y/2``, read off ``1 + eta . xi``."""
    return abs(affine_form(g, X, Y, a, b, xi)) > tol
