"""Exterior algebra over a structure-constant Lie algebra.

Multivectors are sparse maps from strictly increasing index tuples to exact
rationals.  ``t = 1/2 * lam * e_0 ^ e_1`` is stored as ``{(0, 1): lam/2}``;
the antisymmetric matrix ``t^{ij}`` used in the admissibility matrix is twice
the stored coefficient (see :func:`twist_matrix`).
"""
from __future__ import annotations

import json
import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .lie import LieAlgebra, LieAlgebraError, as_fraction, vector

__all__ = [
    "Multivector",
    "ExteriorError",
    "SubalgebraBasisSet",
    "RMatrixReport",
    "wedge",
    "schouten_square",
    "ad_derivation",
    "is_r_matrix",
    "quotient_project",
    "quotient_coordinates",
    "twist",
    "decomposable_twist",
    "twist_matrix",
]


class ExteriorError(ValueError):
    """Grade or parent-algebra mismatches."""


def _normalize_key(key: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sort ``key`` and return ``(sign, sorted)``; sign 0 on a repeated index."""
    key = list(key)
    sign = 1
    # insertion sort, counting transpositions (keys are short)
    for i in range(1, len(key)):
        j = i
        while j > 0 and key[j - 1] > key[j]:
            key[j - 1], key[j] = key[j], key[j - 1]
            sign = -sign
            j -= 1
    if any(key[i] == key[i + 1] for i in range(len(key) - 1)):
        return 0, ()
    return sign, tuple(key)


@dataclass(frozen=True, eq=False)
class Multivector:
    """Element of Λ^grade(g) with exact coefficients."""

    algebra: LieAlgebra
    grade: int
    terms: Mapping[tuple[int, ...], Fraction]

    def __post_init__(self):
        if self.grade < 0:
            raise ExteriorError("grade must be non-negative")
        n = self.algebra.dim
        clean: dict[tuple[int, ...], Fraction] = {}
        for key, value in self.terms.items():
            key = tuple(int(k) for k in key)
            if len(key) != self.grade:
                raise ExteriorError(f"key {key} does not have grade {self.grade}")
            if any(k < 0 or k >= n for k in key):
                raise ExteriorError(f"index out of range in {key}")
            sign, skey = _normalize_key(key)
            if sign == 0:
                continue
            clean[skey] = clean.get(skey, Fraction(0)) + sign * as_fraction(value)
        object.__setattr__(self, "terms", {k: v for k, v in clean.items() if v})

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, g: LieAlgebra, grade: int) -> "Multivector":
        return cls(g, grade, {})

    @classmethod
    def scalar(cls, g: LieAlgebra, c=1) -> "Multivector":
        return cls(g, 0, {(): as_fraction(c)})

    @classmethod
    def from_vector(cls, g: LieAlgebra, X: Sequence) -> "Multivector":
        X = vector(g, X)
        return cls(g, 1, {(i,): x for i, x in enumerate(X) if x})

    @classmethod
    def basis(cls, g: LieAlgebra, *indices: int | str, coeff=1) -> "Multivector":
        """``coeff * e_{i1} ^ ... ^ e_{ik}``; indices may be labels."""
        idx = tuple(g.index(i) if isinstance(i, str) else int(i) for i in indices)
        return cls(g, len(idx), {idx: as_fraction(coeff)})

    # -- algebra ----------------------------------------------------------
    def _check(self, other: "Multivector", same_grade=True):
        if not isinstance(other, Multivector):
            raise TypeError(f"expected Multivector, got {type(other).__name__}")
        if other.algebra != self.algebra:
            raise ExteriorError("multivectors live over different algebras")
        if same_grade and other.grade != self.grade:
            raise ExteriorError(f"grade mismatch {self.grade} vs {other.grade}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return Multivector(self.algebra, self.grade, out)

    def __neg__(self):
        return Multivector(self.algebra, self.grade, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        if isinstance(c, Multivector):
            return NotImplemented
        c = as_fraction(c)
        return Multivector(self.algebra, self.grade, {k: c * v for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return (
            self.algebra == other.algebra
            and self.grade == other.grade
            and self.terms == other.terms
        )

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def coefficient(self, *indices: int) -> Fraction:
        sign, key = _normalize_key(indices)
        return sign * self.terms.get(key, Fraction(0))

    def max_abs(self) -> Fraction:
        return max((abs(v) for v in self.terms.values()), default=Fraction(0))

    def __repr__(self):
        if not self.terms:
            return f"<Multivector grade={self.grade} 0>"
        labels = self.algebra.labels
        parts = []
        for key in sorted(self.terms):
            name = "^".join(labels[i] for i in key) or "1"
            parts.append(f"{self.terms[key]}*{name}")
        return "<Multivector " + " + ".join(parts) + ">"

    def to_json(self) -> str:
        terms = [[[i + 1 for i in k], str(v)] for k, v in sorted(self.terms.items())]
        return json.dumps({"grade": self.grade, "terms": terms})

    @classmethod
    def from_json(cls, g: LieAlgebra, text: str) -> "Multivector":
        data = json.loads(text)
        grade = int(data["grade"])
        return cls(g, grade, {tuple(i - 1 for i in k): as_fraction(v) for k, v in data["terms"]})


def wedge(a: Multivector, b: Multivector) -> Multivector:
    """Exterior product; grade(a) + grade(b)."""
    a._check(b, same_grade=False)
    out: dict[tuple[int, ...], Fraction] = {}
    for ka, va in a.terms.items():
        sa = set(ka)
        for kb, vb in b.terms.items():
            if sa.intersection(kb):
                continue
            # moving each element of kb left past the larger elements of ka
            inversions = sum(len(ka) - bisect_right(ka, y) for y in kb)
            key = tuple(sorted(ka + kb))
            val = va * vb if inversions % 2 == 0 else -(va * vb)
            out[key] = out.get(key, Fraction(0)) + val
    return Multivector(a.algebra, a.grade + b.grade, out)


# --------------------------------------------------------------------------
# twists


def twist(g: LieAlgebra, lambdas: Mapping[tuple[int, int], object]) -> Multivector:
    """``t = sum_{i<j} 1/2 * lam_ij * e_i ^ e_j`` from ``{(i, j): lam_ij}``."""
    half = Fraction(1, 2)
    return Multivector(g, 2, {(i, j): half * as_fraction(v) for (i, j), v in lambdas.items()})


def decomposable_twist(g: LieAlgebra, X: Sequence, Y: Sequence, coeff=1) -> Multivector:
    """``t = 1/2 * coeff * X ^ Y``."""
    x = Multivector.from_vector(g, X)
    y = Multivector.from_vector(g, Y)
    return (x ^ y) * (Fraction(1, 2) * as_fraction(coeff))


def twist_matrix(t: Multivector) -> list[list[Fraction]]:
    """Antisymmetric ``t^{ij}`` with ``t = 1/2 t^{ij} e_i ^ e_j`` summed over i < j.

    ``t^{ij}`` is twice the stored coefficient of ``e_i ^ e_j``.
    """
    if t.grade != 2:
        raise ExteriorError(f"twist must have grade 2, got {t.grade}")
    n = t.algebra.dim
    T = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), v in t.terms.items():
        T[i][j] = 2 * v
        T[j][i] = -2 * v
    return T


# --------------------------------------------------------------------------
# Schouten square and ad action


def _int_antisym(t: Multivector) -> tuple[np.ndarray, int]:
    """Integer matrix ``T_int`` and ``D`` with ``t^{ij} = T_int / D``."""
    n = t.algebra.dim
    D = 1
    for v in t.terms.values():
        D = math.lcm(D, (2 * v).denominator)
    T = np.zeros((n, n), dtype=object)
    T[...] = 0
    for (i, j), v in t.terms.items():
        x = int(2 * v * D)
        T[i, j] = x
        T[j, i] = -x
    return T, D


def schouten_square(t: Multivector) -> Multivector:
    """Algebraic Schouten bracket ``[t, t]`` of a bivector.

    Normalised so that ``[1/2 X^Y, 1/2 X^Y] = 1/2 X ^ [X, Y] ^ Y``.  With
    ``M^{abc} = t^{ai} t^{bj} c_ij^c`` the result is ``-1/4`` times the full
    antisymmetrisation of ``M``.
    """
    if t.grade != 2:
        raise ExteriorError(f"schouten_square needs a bivector, got grade {t.grade}")
    g = t.algebra
    if not t.terms or not g.constants:
        return Multivector.zero(g, 3)
    T, Dt = _int_antisym(t)
    C, Dc = g.integer_tensor
    U = np.tensordot(T, C, axes=([1], [0]))  # U[a, j, c] = T[a, i] C[i, j, c]
    M = np.tensordot(U, T, axes=([1], [1])).transpose(0, 2, 1)  # M[a, b, c]
    A = (
        M
        - M.transpose(1, 0, 2)
        - M.transpose(2, 1, 0)
        - M.transpose(0, 2, 1)
        + M.transpose(1, 2, 0)
        + M.transpose(2, 0, 1)
    )
    denom = 4 * Dt * Dt * Dc
    n = g.dim
    out = {}
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                v = A[a, b, c]
                if v:
                    out[(a, b, c)] = Fraction(-int(v), denom)
    return Multivector(g, 3, out)


def _ad_columns(g: LieAlgebra, X: Sequence) -> list[dict[int, Fraction]]:
    """``cols[m] = [X, e_m]`` as a sparse dict."""
    X = vector(g, X)
    cols: list[dict[int, Fraction]] = [dict() for _ in range(g.dim)]
    for (i, m, k), c in g.constants.items():
        if X[i]:
            cols[m][k] = cols[m].get(k, Fraction(0)) + X[i] * c
    return cols


def ad_derivation(g: LieAlgebra, X: Sequence, m: Multivector) -> Multivector:
    """Extension of ``ad_X`` to Λg as a degree-0 derivation of the wedge."""
    if m.algebra != g:
        raise ExteriorError("multivector is not over this algebra")
    cols = _ad_columns(g, X)
    out: dict[tuple[int, ...], Fraction] = {}
    for key, v in m.terms.items():
        for s, idx in enumerate(key):
            for k, c in cols[idx].items():
                if k in key and k != idx:
                    continue
                sign, nkey = _normalize_key(key[:s] + (k,) + key[s + 1 :])
                if sign:
                    out[nkey] = out.get(nkey, Fraction(0)) + sign * c * v
    return Multivector(g, m.grade, out)


@dataclass(frozen=True)
class RMatrixReport:
    is_r_matrix: bool
    square: Multivector
    residuals: dict[int, Multivector]

    @property
    def square_zero(self) -> bool:
        return not self.square

    def to_dict(self) -> dict:
        labels = self.square.algebra.labels
        return {
            "is_r_matrix": self.is_r_matrix,
            "square_zero": self.square_zero,
            "n_terms_square": len(self.square),
            "square": json.loads(self.square.to_json()),
            "nonzero_residuals": [labels[i] for i in sorted(self.residuals)],
        }


def is_r_matrix(t: Multivector) -> RMatrixReport:
    """``[t, t]`` is ad-invariant, tested against every basis vector exactly."""
    if t.grade != 2:
        raise ExteriorError(f"r-matrix test needs a bivector, got grade {t.grade}")
    g = t.algebra
    sq = schouten_square(t)
    residuals = {}
    if sq:
        for i in range(g.dim):
            e = [0] * g.dim
            e[i] = 1
            r = ad_derivation(g, e, sq)
            if r:
                residuals[i] = r
    return RMatrixReport(not residuals, sq, residuals)


# --------------------------------------------------------------------------
# subalgebras and quotients


@dataclass(frozen=True)
class SubalgebraBasisSet:
    """Subalgebra spanned by a subset of basis vectors; closure checked exactly."""

    algebra: LieAlgebra
    indices: frozenset[int]

    def __post_init__(self):
        idx = frozenset(int(i) for i in self.indices)
        if any(i < 0 or i >= self.algebra.dim for i in idx):
            raise ExteriorError("subalgebra index out of range")
        object.__setattr__(self, "indices", idx)
        for i in idx:
            for j in idx:
                for k, _ in self.algebra.basis_bracket(i, j):
                    if k not in idx:
                        raise ExteriorError(
                            f"not closed: [{self.algebra.labels[i]}, {self.algebra.labels[j]}]"
                            f" has a {self.algebra.labels[k]} component"
                        )

    @classmethod
    def from_labels(cls, g: LieAlgebra, labels: Iterable[str]) -> "SubalgebraBasisSet":
        return cls(g, frozenset(g.index(s) for s in labels))

    @classmethod
    def from_vectors(cls, g: LieAlgebra, vectors: Iterable[Sequence]) -> "SubalgebraBasisSet":
        """Accepts only (multiples of) basis vectors."""
        idx = set()
        for v in vectors:
            v = vector(g, v)
            support = [i for i, x in enumerate(v) if x]
            if len(support) != 1:
                raise ExteriorError(f"vector {v} is not basis-aligned")
            idx.add(support[0])
        return cls(g, frozenset(idx))

    @property
    def complement(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.algebra.dim) if i not in self.indices)


def quotient_project(m: Multivector, h: SubalgebraBasisSet) -> Multivector:
    """Image of ``m`` under Λg -> Λ(g/h), lifted back onto the complement basis.

    Terms whose index tuple meets ``h`` are dropped.  The result is zero
    exactly when the image in Λ(g/h) is zero, and the map is idempotent.
    """
    if h.algebra != m.algebra:
        raise ExteriorError("subalgebra and multivector live over different algebras")
    keep = {k: v for k, v in m.terms.items() if not h.indices.intersection(k)}
    return Multivector(m.algebra, m.grade, keep)


def quotient_coordinates(
    m: Multivector, h: SubalgebraBasisSet
) -> tuple[tuple[int, ...], dict[tuple[int, ...], Fraction]]:
    """Terms of the projection re-indexed over the complement ``g/h``.

    Returns ``(complement, terms)`` where ``complement[r]`` is the original
    index of the quotient basis vector ``r``.
    """
    comp = h.complement
    where = {i: r for r, i in enumerate(comp)}
    proj = quotient_project(m, h)
    return comp, {tuple(where[i] for i in k): v for k, v in proj.terms.items()}
