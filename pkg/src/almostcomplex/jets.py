"""Tensor fields of type (1,1) on R^{2n}, almost-complex structures and their 1-jets.

Index convention: ``S[i][j]`` is the component with upper index ``i`` (row)
and lower index ``j`` (column).  The 1-jet derivative data ``du[k]`` is the
matrix of partials with respect to ``x{k+1}``, so ``du[k][i][j]`` is
``u^i_{j,k}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .linalg import DimensionError, mat_add, mat_mul, matrix, vector
from .polynomial import Polynomial, dot, polynomials

__all__ = [
    "InvalidStructureError",
    "Chart",
    "TensorField",
    "ACS",
    "Jet1",
    "standard_complex_matrix",
    "standard_structure",
    "acs_verify",
    "acs_defect",
    "jet1_at",
    "jet1_in_J1pi",
    "is_complex_point",
    "poly_mat_mul",
    "require_J1pi",
    "require_complex_point",
]


class InvalidStructureError(ValueError):
    """A tensor field or jet fails the almost-complex conditions."""


@dataclass(frozen=True)
class Chart:
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"half-dimension must be a positive integer, got {self.n!r}")

    @property
    def dim(self) -> int:
        return 2 * self.n

    @property
    def names(self) -> tuple:
        return tuple(f"x{i + 1}" for i in range(self.dim))


def standard_complex_matrix(n: int) -> tuple:
    """The block matrix ``[[0, -I], [I, 0]]`` of size ``2n``."""
    d = 2 * n
    rows = [[0] * d for _ in range(d)]
    for i in range(n):
        rows[i][n + i] = -1
        rows[n + i][i] = 1
    return matrix(rows)


def poly_mat_mul(a, b):
    d = len(b[0])
    nv = a[0][0].nvars
    return tuple(
        tuple(dot(((x, b[k][j]) for k, x in enumerate(row)), nv) for j in range(d)) for row in a
    )


@dataclass(frozen=True)
class TensorField:
    """A (1,1)-tensor field with polynomial components on R^{2n}."""

    chart: Chart
    S: tuple

    def __post_init__(self):
        d = self.chart.dim
        if len(self.S) != d or any(len(row) != d for row in self.S):
            raise DimensionError(f"tensor field must be a {d}x{d} matrix")
        for row in self.S:
            for p in row:
                if not isinstance(p, Polynomial) or p.nvars != d:
                    raise DimensionError(f"entries must be polynomials in {d} variables")

    @classmethod
    def from_entries(cls, n: int, rows: Sequence[Sequence]) -> "TensorField":
        chart = Chart(n)
        S = tuple(tuple(polynomials(row, chart.dim)) for row in rows)
        return cls(chart, S)

    @property
    def n(self) -> int:
        return self.chart.n

    @property
    def dim(self) -> int:
        return self.chart.dim

    def at(self, p: Sequence) -> tuple:
        return tuple(tuple(e.evaluate(p) for e in row) for row in self.S)

    def partial(self, k: int) -> tuple:
        return tuple(tuple(e.diff(k) for e in row) for row in self.S)

    def square(self) -> tuple:
        return poly_mat_mul(self.S, self.S)

    def __str__(self):
        return "\n".join("[" + ", ".join(str(e) for e in row) + "]" for row in self.S)


def acs_defect(field: TensorField):
    """First ``(i, j, entry)`` where ``S*S + I`` is nonzero, or ``None``."""
    sq = field.square()
    for i, row in enumerate(sq):
        for j, e in enumerate(row):
            if i == j:
                e = e + 1
            if not e.is_zero():
                return i, j, e
    return None


def acs_verify(field: TensorField) -> bool:
    return acs_defect(field) is None


class ACS(TensorField):
    """A tensor field whose square is ``-Identity`` as a polynomial identity."""

    def __post_init__(self):
        super().__post_init__()
        bad = acs_defect(self)
        if bad is not None:
            i, j, e = bad
            raise InvalidStructureError(
                f"S^2 + I has nonzero entry ({i + 1},{j + 1}): {e}"
            )

    @classmethod
    def unchecked(cls, chart: Chart, S: tuple) -> "ACS":
        """Wrap a field already known to square to ``-I``."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "chart", chart)
        object.__setattr__(obj, "S", tuple(tuple(row) for row in S))
        return obj

    @classmethod
    def from_field(cls, field: TensorField) -> "ACS":
        if isinstance(field, ACS):
            return field
        return cls(field.chart, field.S)


def standard_structure(n: int) -> ACS:
    d = 2 * n
    J = standard_complex_matrix(n)
    return ACS(Chart(n), tuple(tuple(Polynomial.constant(d, x) for x in row) for row in J))


@dataclass(frozen=True)
class Jet1:
    """A point ``(x, u, u_{,k})`` of J^1 of the (1,1)-tensor bundle."""

    p: tuple
    u: tuple
    du: tuple

    def __post_init__(self):
        d = len(self.p)
        if d == 0 or d % 2:
            raise DimensionError("base point must have even positive length")
        object.__setattr__(self, "p", vector(self.p))
        object.__setattr__(self, "u", matrix(self.u))
        object.__setattr__(self, "du", tuple(matrix(m) for m in self.du))
        if len(self.u) != d or any(len(r) != d for r in self.u):
            raise DimensionError(f"u must be {d}x{d}")
        if len(self.du) != d:
            raise DimensionError(f"need {d} derivative matrices, got {len(self.du)}")
        for m in self.du:
            if len(m) != d or any(len(r) != d for r in m):
                raise DimensionError(f"derivative matrices must be {d}x{d}")

    @property
    def dim(self) -> int:
        return len(self.p)

    @property
    def n(self) -> int:
        return len(self.p) // 2

    def to_json(self) -> dict:
        return {
            "p": [str(x) for x in self.p],
            "u": [[str(x) for x in r] for r in self.u],
            "du": [[[str(x) for x in r] for r in m] for m in self.du],
        }


def jet1_at(field: TensorField, p: Sequence) -> Jet1:
    if len(p) != field.dim:
        raise DimensionError(f"point has {len(p)} coordinates, expected {field.dim}")
    p = vector(p)
    u = field.at(p)
    du = tuple(
        tuple(tuple(e.diff(k).evaluate(p) for e in row) for row in field.S)
        for k in range(field.dim)
    )
    return Jet1(p, u, du)


def is_complex_point(u) -> bool:
    d = len(u)
    sq = mat_mul(u, u)
    return all(sq[i][j] == (-1 if i == j else 0) for i in range(d) for j in range(d))


def jet1_in_J1pi(j: Jet1) -> bool:
    if not is_complex_point(j.u):
        return False
    for m in j.du:
        s = mat_add(mat_mul(m, j.u), mat_mul(j.u, m))
        if any(x for row in s for x in row):
            return False
    return True


def require_J1pi(j: Jet1) -> None:
    if not jet1_in_J1pi(j):
        raise InvalidStructureError("jet does not satisfy u^2 = -I and du_k u + u du_k = 0")


def require_complex_point(u) -> None:
    if not is_complex_point(u):
        raise InvalidStructureError("point is not almost-complex: u^2 != -I")

