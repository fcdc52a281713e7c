"""Real Lie algebras stored as exact structure constants.

An algebra of dimension ``n`` is a sparse map ``(i, j, k) -> c_ij^k`` with
``[e_i, e_j] = sum_k c_ij^k e_k``.  Indices are 0-based in the Python API and
1-based in the JSON form.  Coefficients are :class:`fractions.Fraction`.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "LieAlgebra",
    "LieAlgebraError",
    "ValidationReport",
    "as_fraction",
    "vector",
    "basis_vector",
    "bracket",
    "build_su",
    "build_abelian",
    "build_torus",
    "from_matrix_basis",
    "validate",
]


class LieAlgebraError(ValueError):
    """Raised for malformed algebras, dimension mismatches and bad vectors."""


def as_fraction(x) -> Fraction:
    """Convert ``x`` to an exact rational.

    Floats are converted exactly (their binary value), strings are parsed as
    decimals or ``"p/q"``.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, (float, np.floating)):
        if not math.isfinite(x):
            raise LieAlgebraError(f"non-finite coefficient {x!r}")
        return Fraction(float(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot use {type(x).__name__} as an exact coefficient")


def _lcm_denominator(values: Iterable[Fraction]) -> int:
    d = 1
    for v in values:
        d = math.lcm(d, v.denominator)
    return d


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """Finite-dimensional real Lie algebra with exact structure constants.

    ``constants`` holds every nonzero ``c_ij^k`` for ordered pairs, so both
    ``(i, j, k)`` and ``(j, i, k)`` are present for a valid algebra.
    ``matrices`` optionally carries a faithful complex matrix realisation of
    the basis (used by the chart geometry).
    """

    dim: int
    constants: Mapping[tuple[int, int, int], Fraction]
    labels: tuple[str, ...]
    matrices: tuple[np.ndarray, ...] | None = None
    name: str = ""

    def __post_init__(self):
        if not isinstance(self.dim, (int, np.integer)) or self.dim < 1:
            raise LieAlgebraError(f"dimension must be a positive integer, got {self.dim!r}")
        if len(self.labels) != self.dim:
            raise LieAlgebraError(f"expected {self.dim} labels, got {len(self.labels)}")
        if len(set(self.labels)) != self.dim:
            raise LieAlgebraError("basis labels must be distinct")
        clean = {}
        for key, value in self.constants.items():
            i, j, k = key
            if not all(0 <= a < self.dim for a in key):
                raise LieAlgebraError(f"structure-constant index {key} out of range")
            value = as_fraction(value)
            if value:
                clean[(int(i), int(j), int(k))] = value
        object.__setattr__(self, "constants", clean)
        object.__setattr__(self, "labels", tuple(self.labels))
        if self.matrices is not None:
            if len(self.matrices) != self.dim:
                raise LieAlgebraError("need one matrix per basis vector")
            object.__setattr__(
                self, "matrices", tuple(np.asarray(m, dtype=complex) for m in self.matrices)
            )

    @classmethod
    def from_brackets(
        cls,
        labels: Sequence[str],
        brackets: Mapping[tuple[int, int], Mapping[int, object]],
        **kwargs,
    ) -> "LieAlgebra":
        """Build from ``{(i, j): {k: c}}`` given for ``i < j``; fills ``(j, i)``."""
        constants = {}
        for (i, j), expansion in brackets.items():
            if i == j:
                raise LieAlgebraError("bracket of a basis vector with itself is zero")
            for k, c in expansion.items():
                c = as_fraction(c)
                if c:
                    constants[(i, j, k)] = c
                    constants[(j, i, k)] = -c
        return cls(len(labels), constants, tuple(labels), **kwargs)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.labels == other.labels
            and self.constants == other.constants
        )

    def __hash__(self):
        return hash((self.dim, self.labels))

    def __repr__(self):
        name = self.name or "LieAlgebra"
        return f"<{name} dim={self.dim}>"

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise LieAlgebraError(f"unknown basis label {label!r}") from None

    def c(self, i: int, j: int, k: int) -> Fraction:
        return self.constants.get((i, j, k), Fraction(0))

    @cached_property
    def _bracket_table(self) -> dict[tuple[int, int], list[tuple[int, Fraction]]]:
        table: dict[tuple[int, int], list[tuple[int, Fraction]]] = {}
        for (i, j, k), v in self.constants.items():
            table.setdefault((i, j), []).append((k, v))
        return table

    def basis_bracket(self, i: int, j: int) -> list[tuple[int, Fraction]]:
        """Sparse expansion of ``[e_i, e_j]`` as ``[(k, c_ij^k), ...]``."""
        return self._bracket_table.get((i, j), [])

    @cached_property
    def structure_tensor(self) -> np.ndarray:
        """Dense float array ``C[i, j, k] = c_ij^k``."""
        C = np.zeros((self.dim,) * 3)
        for (i, j, k), v in self.constants.items():
            C[i, j, k] = float(v)
        C.setflags(write=False)
        return C

    @cached_property
    def integer_tensor(self) -> tuple[np.ndarray, int]:
        """``(C_int, D)`` with ``C = C_int / D`` exactly; object dtype of Python ints."""
        D = _lcm_denominator(self.constants.values())
        C = np.zeros((self.dim,) * 3, dtype=object)
        C[...] = 0
        for (i, j, k), v in self.constants.items():
            C[i, j, k] = int(v * D)
        return C, D

    def to_json(self) -> str:
        rows = [
            [i + 1, j + 1, k + 1, str(v)]
            for (i, j, k), v in sorted(self.constants.items())
            if i < j
        ]
        return json.dumps({"dim": self.dim, "labels": list(self.labels), "c": rows})

    @classmethod
    def from_json(cls, text: str) -> "LieAlgebra":
        data = json.loads(text)
        try:
            dim = int(data["dim"])
            labels = data.get("labels") or [f"e{i + 1}" for i in range(dim)]
            if len(labels) != dim:
                raise LieAlgebraError(f"dim {dim} but {len(labels)} labels")
            brackets: dict[tuple[int, int], dict[int, Fraction]] = {}
            for i, j, k, v in data["c"]:
                i, j, k = int(i) - 1, int(j) - 1, int(k) - 1
                if i >= j:
                    raise LieAlgebraError(f"JSON constants must have i < j, got {(i + 1, j + 1)}")
                brackets.setdefault((i, j), {})[k] = as_fraction(v)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, LieAlgebraError):
                raise
            raise LieAlgebraError(f"malformed algebra JSON: {exc}") from exc
        if any(k >= dim or k < 0 for (_, j), e in brackets.items() for k in (j, *e)):
            raise LieAlgebraError("structure-constant index out of range")
        return cls.from_brackets(labels, brackets)


def vector(g: LieAlgebra, coeffs: Sequence) -> tuple[Fraction, ...]:
    """Exact coefficient tuple for an element of ``g``."""
    if len(coeffs) != g.dim:
        raise LieAlgebraError(f"vector of length {len(coeffs)} in algebra of dimension {g.dim}")
    return tuple(as_fraction(c) for c in coeffs)


def basis_vector(g: LieAlgebra, i: int | str) -> tuple[Fraction, ...]:
    if isinstance(i, str):
        i = g.index(i)
    v = [Fraction(0)] * g.dim
    v[i] = Fraction(1)
    return tuple(v)


def bracket(g: LieAlgebra, X: Sequence, Y: Sequence) -> tuple[Fraction, ...]:
    """``[X, Y]^k = sum_ij X^i Y^j c_ij^k`` in exact arithmetic."""
    X = vector(g, X)
    Y = vector(g, Y)
    out = [Fraction(0)] * g.dim
    for (i, j, k), c in g.constants.items():
        xi = X[i]
        if xi:
            yj = Y[j]
            if yj:
                out[k] += xi * yj * c
    return tuple(out)


# --------------------------------------------------------------------------
# builders


def _solve_exact(columns: list[list[Fraction]]):
    """Return a solver ``v -> coefficients`` for the span of ``columns``.

    Columns must be linearly independent; the solver raises when ``v`` is not
    in their span.
    """
    d = len(columns)
    m = len(columns[0])
    rows = [[columns[c][r] for c in range(d)] for r in range(m)]
    # Greedily keep rows that raise the rank (echelon copy kept in `echelon`).
    selected: list[int] = []
    echelon: list[tuple[int, list[Fraction]]] = []
    for r, row in enumerate(rows):
        red = row[:]
        for lead, e in echelon:
            if red[lead]:
                f = red[lead]
                red = [a - f * b for a, b in zip(red, e)]
        lead = next((c for c, x in enumerate(red) if x), None)
        if lead is None:
            continue
        red = [x / red[lead] for x in red]
        echelon.append((lead, red))
        selected.append(r)
        if len(selected) == d:
            break
    if len(selected) < d:
        raise LieAlgebraError("basis matrices are linearly dependent")
    inv = _invert_fraction_matrix([rows[r] for r in selected])

    def solve(v: list[Fraction]) -> list[Fraction]:
        rhs = [v[r] for r in selected]
        x = [sum((inv[a][b] * rhs[b] for b in range(d)), Fraction(0)) for a in range(d)]
        for r in range(m):
            if sum((rows[r][c] * x[c] for c in range(d)), Fraction(0)) != v[r]:
                raise LieAlgebraError("commutator leaves the span of the basis")
        return x

    return solve


def _invert_fraction_matrix(M: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(M)
    aug = [list(M[i]) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise LieAlgebraError("singular matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _matrix_to_fractions(M: np.ndarray) -> list[Fraction]:
    M = np.asarray(M, dtype=complex)
    return [as_fraction(float(z.real)) for z in M.ravel()] + [
        as_fraction(float(z.imag)) for z in M.ravel()
    ]


def from_matrix_basis(
    matrices: Sequence[np.ndarray], labels: Sequence[str], name: str = ""
) -> LieAlgebra:
    """Structure constants of the real span of ``matrices`` via exact commutators.

    Matrix entries must have dyadic-rational real and imaginary parts (small
    integers in practice) so the float-to-rational conversion is exact.
    """
    mats = [np.asarray(m, dtype=complex) for m in matrices]
    if not mats:
        raise LieAlgebraError("empty basis")
    solve = _solve_exact([_matrix_to_fractions(m) for m in mats])
    brackets: dict[tuple[int, int], dict[int, Fraction]] = {}
    for i, j in combinations(range(len(mats)), 2):
        comm = mats[i] @ mats[j] - mats[j] @ mats[i]
        coeffs = solve(_matrix_to_fractions(comm))
        brackets[(i, j)] = {k: c for k, c in enumerate(coeffs) if c}
    return LieAlgebra.from_brackets(labels, brackets, matrices=tuple(mats), name=name)


def su_basis(n: int) -> tuple[list[np.ndarray], list[str]]:
    """Basis X_ij, Y_ij (i < j, lexicographic) then Z_1..Z_{n-1} of su(n)."""
    mats, labels = [], []
    pairs = list(combinations(range(n), 2))
    for i, j in pairs:
        m = np.zeros((n, n), dtype=complex)
        m[i, j], m[j, i] = 1, -1
        mats.append(m)
        labels.append(f"X{i + 1}{j + 1}")
    for i, j in pairs:
        m = np.zeros((n, n), dtype=complex)
        m[i, j] = m[j, i] = 1j
        mats.append(m)
        labels.append(f"Y{i + 1}{j + 1}")
    for k in range(n - 1):
        m = np.zeros((n, n), dtype=complex)
        m[k, k], m[n - 1, n - 1] = 1j, -1j
        mats.append(m)
        labels.append(f"Z{k + 1}")
    return mats, labels


def build_su(n: int) -> LieAlgebra:
    """su(n) in the basis X_ij, Y_ij, Z_k (dimension n^2 - 1)."""
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise LieAlgebraError(f"su(n) needs n >= 2, got {n!r}")
    mats, labels = su_basis(int(n))
    return from_matrix_basis(mats, labels, name=f"su({n})")


def build_abelian(n: int) -> LieAlgebra:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise LieAlgebraError(f"abelian algebra needs n >= 1, got {n!r}")
    return LieAlgebra(int(n), {}, tuple(f"e{i + 1}" for i in range(n)), name=f"abelian({n})")


def build_torus(n: int) -> LieAlgebra:
    """Lie algebra of T^n acting on CP^n by ``z_{i+1} -> e^{i theta_i} z_{i+1}``.

    Abelian, with X_i realised as the diagonal matrix ``i E_{i+1,i+1}`` of
    size n+1.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise LieAlgebraError(f"torus needs n >= 1, got {n!r}")
    mats = []
    for i in range(n):
        m = np.zeros((n + 1, n + 1), dtype=complex)
        m[i + 1, i + 1] = 1j
        mats.append(m)
    return LieAlgebra(
        int(n), {}, tuple(f"X{i + 1}" for i in range(n)), matrices=tuple(mats), name=f"t({n})"
    )


# --------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class ValidationReport:
    antisymmetry: Fraction
    jacobi: Fraction
    antisymmetry_at: tuple[int, int, int] | None
    jacobi_at: tuple[int, int, int, int] | None

    @property
    def ok(self) -> bool:
        return self.antisymmetry == 0 and self.jacobi == 0

    def to_dict(self) -> dict:
        one = lambda t: None if t is None else [a + 1 for a in t]  # noqa: E731
        return {
            "ok": self.ok,
            "antisymmetry_residual": str(self.antisymmetry),
            "jacobi_residual": str(self.jacobi),
            "antisymmetry_violation": one(self.antisymmetry_at),
            "jacobi_violation": one(self.jacobi_at),
        }


def validate(g: LieAlgebra) -> ValidationReport:
    """Exact antisymmetry and Jacobi residuals (max absolute value).

    Violation locations are 0-based index tuples ``(i, j, k)`` and
    ``(i, j, k, l)``; ``None`` when the residual vanishes.
    """
    C, D = g.integer_tensor
    anti = C + C.transpose(1, 0, 2)
    anti_abs = np.abs(anti)
    a_max = max(anti_abs.ravel(), default=0)
    a_at = None
    if a_max:
        a_at = tuple(int(x) for x in np.argwhere(anti_abs != 0)[0])

    n = g.dim
    # J[i,j,k,l] = sum_m c_ij^m c_mk^l + c_jk^m c_mi^l + c_ki^m c_mj^l
    P = np.tensordot(C, C, axes=([2], [0]))  # P[i,j,k,l] = sum_m C[i,j,m] C[m,k,l]
    J = P + P.transpose(1, 2, 0, 3) + P.transpose(2, 0, 1, 3)
    J_abs = np.abs(J)
    j_max = max(J_abs.ravel(), default=0) if n else 0
    j_at = None
    if j_max:
        j_at = tuple(int(x) for x in np.argwhere(J_abs != 0)[0])
    return ValidationReport(
        antisymmetry=Fraction(int(a_max), D),
        jacobi=Fraction(int(j_max), D * D),
        antisymmetry_at=a_at,
        jacobi_at=j_at,
    )
