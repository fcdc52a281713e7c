"""Algebraic check on Gr(r; C^n) = SU(n)/S(U(r) x U(n-r)).

The canonical r-matrix ``t = 1/(4n) sum_{i<j} X_ij ^ Y_ij`` has ``[t, t] != 0``,
but every term of ``[t, t]`` contains a basis vector of
``h = Lie(S(U(r) x U(n-r)))``, so its image in ``Λ^3(g/h)`` vanishes and the
induced trivector field on the Grassmannian is zero.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .exterior import (
    Multivector,
    SubalgebraBasisSet,
    is_r_matrix,
    quotient_project,
    schouten_square,
)
from .lie import LieAlgebra, basis_vector, bracket, build_su

__all__ = [
    "canonical_r_matrix",
    "h_labels",
    "GrassmannInstance",
    "GrassmannReport",
    "verify_instance",
    "CaseRow",
    "bracket_case_table",
]


def canonical_r_matrix(n: int) -> Multivector:
    if n < 2:
        raise ValueError("need n >= 2")
    g = build_su(n)
    c = Fraction(1, 4 * n)
    terms = {
        (g.index(f"X{i}{j}"), g.index(f"Y{i}{j}")): c
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
    }
    return Multivector(g, 2, terms)


def h_labels(n: int, r: int) -> list[str]:
    """Basis of ``s(u(r) + u(n-r))``: block-diagonal X, Y and every Z."""
    if not 1 <= r < n:
        raise ValueError(f"need 1 <= r < n, got r={r}, n={n}")
    out = []
    for kind in "XY":
        out += [
            f"{kind}{i}{j}"
            for i in range(1, n + 1)
            for j in range(i + 1, n + 1)
            if j <= r or i > r
        ]
    return out + [f"Z{k}" for k in range(1, n)]


@dataclass(frozen=True)
class GrassmannInstance:
    n: int
    r: int
    algebra: LieAlgebra
    h: SubalgebraBasisSet
    t: Multivector

    @classmethod
    def build(cls, n: int, r: int) -> "GrassmannInstance":
        t = canonical_r_matrix(n)
        g = t.algebra
        return cls(n, r, g, SubalgebraBasisSet.from_labels(g, h_labels(n, r)), t)

    @cached_property
    def square(self) -> Multivector:
        return schouten_square(self.t)


@dataclass(frozen=True)
class GrassmannReport:
    n: int
    r: int
    is_r_matrix: bool
    square_nonzero: bool
    quotient_vanishes: bool
    n_terms_square: int
    quotient_norm: Fraction

    @property
    def ok(self) -> bool:
        return self.is_r_matrix and self.square_nonzero and self.quotient_vanishes

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "is_r_matrix": self.is_r_matrix,
            "square_nonzero": self.square_nonzero,
            "quotient_vanishes": self.quotient_vanishes,
            "n_terms_square": self.n_terms_square,
            "quotient_norm": str(self.quotient_norm),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def verify_instance(inst: GrassmannInstance) -> GrassmannReport:
    sq = inst.square
    proj = quotient_project(sq, inst.h)
    return GrassmannReport(
        inst.n,
        inst.r,
        is_r_matrix(inst.t).is_r_matrix,
        bool(sq),
        not proj,
        len(sq),
        proj.max_abs(),
    )


# --------------------------------------------------------------------------
# bracket relations behind the argument


@dataclass(frozen=True)
class CaseRow:
    relation: str
    expected: tuple[Fraction, ...]
    computed: tuple[Fraction, ...]
    in_h: bool | None

    @property
    def holds(self) -> bool:
        return self.expected == self.computed


def _vec(g: LieAlgebra, label: str | None, coeff=1) -> tuple[Fraction, ...]:
    if label is None:
        return (Fraction(0),) * g.dim
    return tuple(coeff * x for x in basis_vector(g, label))


def _add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _in_span(v, g: LieAlgebra, labels: list[str]) -> bool:
    idx = {g.index(s) for s in labels}
    return all(not x or k in idx for k, x in enumerate(v))


def bracket_case_table(n: int) -> list[CaseRow]:
    """Relations used in the term-by-term argument, for every index pattern in su(n).

    Rows with ``i = k, j = l``::

        [X_ij, X_ij] = [Y_ij, Y_ij] = 0,   [X_ij, Y_ij] = 2(Z_i - Z_j),  Z_n = 0

    Rows with ``i = k`` and ``j < l`` (``l < j`` in parentheses)::

        [X_ij, X_il] = [Y_ij, Y_il] = -X_jl   (X_lj)
        [Y_ij, X_il] = [Y_il, X_ij] = -Y_jl   (Y_lj)

    ``in_h`` records whether the computed bracket lies in ``h`` for the
    smallest ``r`` that keeps all four of ``X_ij, Y_ij, X_il, Y_il`` outside
    ``h`` (``r = i``); it is ``None`` for the zero rows.
    """
    g = build_su(n)

    def Z(i):
        return _vec(g, f"Z{i}" if i < n else None)

    rows = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            Xij, Yij = f"X{i}{j}", f"Y{i}{j}"
            h = h_labels(n, i) if i < n else []
            for a in (Xij, Yij):
                rows.append(CaseRow(f"[{a}, {a}] = 0", _vec(g, None), bracket(g, basis_vector(g, a), basis_vector(g, a)), None))
            two_z = _add(_vec(g, None), tuple(2 * (x - y) for x, y in zip(Z(i), Z(j))))
            comp = bracket(g, basis_vector(g, Xij), basis_vector(g, Yij))
            rows.append(CaseRow(f"[{Xij}, {Yij}] = 2(Z{i} - Z{j})", two_z, comp, _in_span(comp, g, h)))
            for l in range(i + 1, n + 1):
                if l == j:
                    continue
                Xil, Yil = f"X{i}{l}", f"Y{i}{l}"
                if j < l:
                    x_exp, y_exp, tag_x, tag_y = _vec(g, f"X{j}{l}", -1), _vec(g, f"Y{j}{l}", -1), f"-X{j}{l}", f"-Y{j}{l}"
                else:
                    x_exp, y_exp, tag_x, tag_y = _vec(g, f"X{l}{j}"), _vec(g, f"Y{l}{j}"), f"X{l}{j}", f"Y{l}{j}"
                for a, b, exp, tag in (
                    (Xij, Xil, x_exp, tag_x),
                    (Yij, Yil, x_exp, tag_x),
                    (Yij, Xil, y_exp, tag_y),
                    (Yil, Xij, y_exp, tag_y),
                ):
                    comp = bracket(g, basis_vector(g, a), basis_vector(g, b))
                    rows.append(CaseRow(f"[{a}, {b}] = {tag}", exp, comp, _in_span(comp, g, h)))
    return rows
