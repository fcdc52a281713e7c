"""Symplectic volume of the deformed CP^1 and the cohomology scale ``k_lambda``.

The deformed density ``{(1 + lam/2) r^4 + 2 r^2 + (1 - lam/2)}^{-1}`` is
radial, so with ``u = r^2`` the volume is the 1-D integral
``pi * int_0^inf du / ((1 + lam/2) u^2 + 2u + (1 - lam/2))``.  It is evaluated
on ``[0, pi/2)`` after ``u = tan(theta)`` with an adaptive Gauss-Kronrod
(7, 15) rule.
"""
from __future__ import annotations

import csv
import heapq
import io
import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

__all__ = [
    "QuadratureError",
    "VolumeResult",
    "closed_volume",
    "k_lambda",
    "density",
    "gauss_kronrod",
    "integrate_half_line",
    "numeric_volume",
    "pipeline_volume",
    "sweep",
    "sweep_csv",
]

# Kronrod nodes on [0, 1] (mirrored); odd-indexed entries are the Gauss nodes.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])


class QuadratureError(ArithmeticError):
    def __init__(self, n_nodes: int, estimate: float, error: float):
        self.n_nodes = n_nodes
        self.estimate = estimate
        self.error = error
        super().__init__(
            f"no convergence after {n_nodes} nodes: estimate {estimate!r}, error {error:.3e}"
        )


def gauss_kronrod(f: Callable[[np.ndarray], np.ndarray], a: float, b: float):
    """``(kronrod, |kronrod - gauss|)`` on ``[a, b]``; ``f`` is vectorised."""
    c, h = 0.5 * (a + b), 0.5 * (b - a)
    fx = f(c + h * NODES)
    k = h * (KRONROD_WEIGHTS @ fx)
    return k, abs(k - h * (GAUSS_WEIGHTS @ fx))


def _adaptive(f, a, b, abstol, reltol, max_nodes):
    k, e = gauss_kronrod(f, a, b)
    heap = [(-e, a, b, k)]
    total, err, nodes = k, e, 15
    while err > max(abstol, reltol * abs(total)):
        if nodes + 30 > max_nodes:
            raise QuadratureError(nodes, total, err)
        neg_e, lo, hi, k = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        k1, e1 = gauss_kronrod(f, lo, mid)
        k2, e2 = gauss_kronrod(f, mid, hi)
        nodes += 30
        total += k1 + k2 - k
        err += e1 + e2 + neg_e
        heapq.heappush(heap, (-e1, lo, mid, k1))
        heapq.heappush(heap, (-e2, mid, hi, k2))
    # re-sum to shed the running-update rounding
    return math.fsum(item[3] for item in heap), err, nodes


def integrate_half_line(
    g: Callable[[np.ndarray], np.ndarray],
    abstol: float = 1e-13,
    reltol: float = 1e-12,
    max_nodes: int = 10_000,
):
    """``int_0^inf g(u) du`` via ``u = tan(theta)``; returns ``(value, error, nodes)``."""

    def f(theta):
        c = np.cos(theta)
        return g(np.tan(theta)) / (c * c)

    return _adaptive(f, 0.0, 0.5 * math.pi, abstol, reltol, max_nodes)


# --------------------------------------------------------------------------


def closed_volume(lam: float) -> float:
    """``pi`` at 0, else ``(pi/lam) log|(2 + lam)/(2 - lam)|``."""
    lam = float(lam)
    if abs(lam) == 2:
        raise ZeroDivisionError("closed-form volume has a pole at |lambda| = 2")
    return math.pi * k_lambda(lam)


def k_lambda(lam: float) -> float:
    """``(1/lam) log|(2 + lam)/(2 - lam)|``; the limit value 1 at ``lam = 0``."""
    lam = float(lam)
    if lam == 0:
        return 1.0
    if abs(lam) == 2:
        raise ZeroDivisionError("k_lambda has a pole at |lambda| = 2")
    if abs(lam) < 1e-4:
        # log((1 + x)/(1 - x)) / (2x) with x = lam/2, series to avoid cancellation
        x2 = (lam / 2) ** 2
        return 1 + x2 / 3 + x2 * x2 / 5 + x2**3 / 7
    return math.log(abs((2 + lam) / (2 - lam))) / lam


def density(lam: float, r2):
    """Deformed CP^1 density in ``dx ^ dy`` as a function of ``r^2``."""
    r2 = np.asarray(r2, dtype=float)
    return 1.0 / ((1 + lam / 2) * r2 * r2 + 2 * r2 + (1 - lam / 2))


@dataclass(frozen=True)
class VolumeResult:
    lam: float
    numeric_volume: float
    closed_form: float
    rel_error: float
    quadrature_nodes: int
    error_estimate: float
    method: str = "closed-form density"

    @property
    def in_admissible_range(self) -> bool:
        """``|lam| < 1``; the closed form also makes sense up to ``|lam| < 2``."""
        return abs(self.lam) < 1

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "numeric_volume": self.numeric_volume,
            "closed_form": self.closed_form,
            "k_lambda": k_lambda(self.lam),
            "rel_error": self.rel_error,
            "quadrature_nodes": self.quadrature_nodes,
            "error_estimate": self.error_estimate,
            "method": self.method,
            "in_admissible_range": self.in_admissible_range,
        }


def _result(lam, value, err, nodes, method):
    closed = closed_volume(lam)
    rel = abs(value - closed) / abs(closed) if closed else abs(value)
    return VolumeResult(float(lam), value, closed, rel, nodes, err, method)


def numeric_volume(lam: float, max_nodes: int = 10_000, reltol: float = 1e-12) -> VolumeResult:
    """Quadrature of the closed-form deformed density over the plane."""
    lam = float(lam)
    if not abs(lam) < 2:
        raise ValueError("density is not positive for |lambda| >= 2")
    val, err, nodes = integrate_half_line(lambda u: density(lam, u), reltol=reltol, max_nodes=max_nodes)
    return _result(lam, math.pi * val, math.pi * err, nodes, "closed-form density")


def pipeline_volume(lam: float, max_nodes: int = 10_000, reltol: float = 1e-12) -> VolumeResult:
    """Same integral, with the density taken from the chart pipeline.

    The form is ``omega^t`` for ``t = lam/2 X12 ^ Y12`` obtained by inverting
    Fubini-Study, subtracting ``t_M`` and inverting back, evaluated on the
    positive x-axis.
    """
    from .cpn import deformed_form
    from .exterior import twist
    from .lie import build_su

    lam = float(lam)
    omega = deformed_form(twist(build_su(2), {(0, 1): lam}), 1)

    def g(u):
        return np.array([omega([math.sqrt(x), 0.0])[0, 1] for x in np.atleast_1d(u)])

    val, err, nodes = integrate_half_line(g, reltol=reltol, max_nodes=max_nodes)
    return _result(lam, math.pi * val, math.pi * err, nodes, "chart pipeline")


def sweep(lams: Iterable[float], pipeline: bool = False) -> list[VolumeResult]:
    lams = list(lams)
    if not lams:
        raise ValueError("empty lambda range")
    fn = pipeline_volume if pipeline else numeric_volume
    return [fn(l) for l in lams]


def sweep_csv(results: Iterable[VolumeResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lambda", "numeric", "closed", "k_lambda", "rel_error"])
    for r in results:
        w.writerow([repr(r.lam), repr(r.numeric_volume), repr(r.closed_form), repr(k_lambda(r.lam)), repr(r.rel_error)])
    return buf.getvalue()
