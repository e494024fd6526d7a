"""Exact dense linear algebra over the rationals.

Matrices are tuples of row tuples of :class:`~fractions.Fraction`.  Subspaces
are kept in reduced row echelon form so that two equal subspaces have equal
bases, coefficient for coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "DimensionError",
    "SingularMatrixError",
    "SubspaceBasis",
    "Solution",
    "matrix",
    "vector",
    "identity",
    "zeros",
    "mat_mul",
    "mat_add",
    "mat_sub",
    "mat_scale",
    "mat_vec",
    "transpose",
    "mat_inv",
    "rref",
    "rank",
    "kernel_basis",
    "solve_linear",
    "span",
    "subspace_intersect",
    "subspace_sum",
    "is_zero_matrix",
]

ONE = Fraction(1)
ZERO = Fraction(0)


class DimensionError(ValueError):
    """Operand shapes do not agree."""


class SingularMatrixError(ValueError):
    """A matrix that must be invertible is singular."""


def vector(values: Iterable) -> tuple:
    return tuple(v if isinstance(v, Fraction) else Fraction(v) for v in values)


def matrix(rows: Iterable[Iterable]) -> tuple:
    m = tuple(vector(r) for r in rows)
    if m and any(len(r) != len(m[0]) for r in m):
        raise DimensionError("ragged matrix")
    return m


def identity(d: int) -> tuple:
    return tuple(tuple(ONE if i == j else ZERO for j in range(d)) for i in range(d))


def zeros(rows: int, cols: int) -> tuple:
    return tuple((ZERO,) * cols for _ in range(rows))


def is_zero_matrix(m) -> bool:
    return all(not x for row in m for x in row)


def transpose(m) -> tuple:
    return tuple(zip(*m)) if m else ()


def mat_mul(a, b) -> tuple:
    if a and len(a[0]) != len(b):
        raise DimensionError(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x?")
    bt = transpose(b)
    out = []
    for row in a:
        nz = [(k, x) for k, x in enumerate(row) if x]
        out.append(tuple(sum((x * col[k] for k, x in nz), ZERO) for col in bt))
    return tuple(out)


def mat_add(a, b) -> tuple:
    if len(a) != len(b) or (a and len(a[0]) != len(b[0])):
        raise DimensionError("shape mismatch in addition")
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a, b))


def mat_sub(a, b) -> tuple:
    if len(a) != len(b) or (a and len(a[0]) != len(b[0])):
        raise DimensionError("shape mismatch in subtraction")
    return tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(a, b))


def mat_scale(a, c) -> tuple:
    c = Fraction(c)
    return tuple(tuple(x * c for x in r) for r in a)


def mat_vec(a, v) -> tuple:
    if a and len(a[0]) != len(v):
        raise DimensionError("matrix/vector length mismatch")
    return tuple(sum((x * y for x, y in zip(row, v) if x), ZERO) for row in a)


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form.

    Returns ``(reduced_rows, pivot_columns)``; zero rows are dropped.
    """
    work = [list(r) for r in rows]
    if ncols is None:
        ncols = len(work[0]) if work else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(work)):
            if work[i][c]:
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        prow = work[r]
        inv = ONE / prow[c]
        if inv != 1:
            for k in range(c, ncols):
                if prow[k]:
                    prow[k] *= inv
        nz = [k for k in range(c, ncols) if prow[k]]
        for i in range(len(work)):
            if i == r:
                continue
            row = work[i]
            f = row[c]
            if f:
                for k in nz:
                    row[k] -= f * prow[k]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return [tuple(row) for row in work[:r]], pivots


def rank(m) -> int:
    return len(rref(m)[1])


@dataclass(frozen=True)
class SubspaceBasis:
    """A subspace of Q^ambient, stored as a reduced row echelon basis."""

    ambient: int
    vectors: tuple
    pivots: tuple

    @classmethod
    def from_vectors(cls, vectors: Iterable[Sequence], ambient: int) -> "SubspaceBasis":
        vecs = [vector(v) for v in vectors]
        for v in vecs:
            if len(v) != ambient:
                raise DimensionError(f"vector of length {len(v)} in ambient dimension {ambient}")
        rows, piv = rref(vecs, ambient)
        return cls(ambient, tuple(rows), tuple(piv))

    @classmethod
    def zero(cls, ambient: int) -> "SubspaceBasis":
        return cls(ambient, (), ())

    @classmethod
    def full(cls, ambient: int) -> "SubspaceBasis":
        return cls(ambient, identity(ambient), tuple(range(ambient)))

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def coordinates(self, v: Sequence):
        """Coordinates of ``v`` in this basis, or ``None`` if ``v`` is not in the span."""
        if len(v) != self.ambient:
            raise DimensionError("vector/ambient mismatch")
        v = list(vector(v))
        coords = []
        for row, p in zip(self.vectors, self.pivots):
            c = v[p]
            coords.append(c)
            if c:
                for k, x in enumerate(row):
                    if x:
                        v[k] -= c * x
        if any(v):
            return None
        return tuple(coords)

    def contains(self, v: Sequence) -> bool:
        return self.coordinates(v) is not None

    def contains_subspace(self, other: "SubspaceBasis") -> bool:
        return all(self.contains(v) for v in other.vectors)

    def combination(self, coords: Sequence) -> tuple:
        if len(coords) != self.dim:
            raise DimensionError("coordinate count does not match dimension")
        out = [ZERO] * self.ambient
        for c, row in zip(coords, self.vectors):
            if c:
                for k, x in enumerate(row):
                    if x:
                        out[k] += c * x
        return tuple(out)


@dataclass(frozen=True)
class Solution:
    """One exact solution of ``m x = b`` together with the homogeneous solution space."""

    particular: tuple
    kernel: SubspaceBasis


def _kernel_vectors(reduced, pivots, ncols):
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, p in zip(reduced, pivots):
            if row[f]:
                v[p] = -row[f]
        basis.append(v)
    return basis


def kernel_basis(m, ncols: int | None = None) -> SubspaceBasis:
    """Null space of ``m``.  ``ncols`` is needed when ``m`` has no rows."""
    if ncols is None:
        if not m:
            raise DimensionError("column count required for an empty matrix")
        ncols = len(m[0])
    reduced, pivots = rref(m, ncols)
    return SubspaceBasis.from_vectors(_kernel_vectors(reduced, pivots, ncols), ncols)


def solve_linear(m, b: Sequence, ncols: int | None = None) -> Solution | None:
    """Exact solution of ``m x = b``; ``None`` when the system is inconsistent."""
    if len(b) != len(m):
        raise DimensionError(f"right-hand side has length {len(b)}, matrix has {len(m)} rows")
    if ncols is None:
        if not m:
            raise DimensionError("column count required for an empty matrix")
        ncols = len(m[0])
    aug = [tuple(row) + (Fraction(bi),) for row, bi in zip(m, b)]
    reduced, pivots = rref(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [ZERO] * ncols
    for row, p in zip(reduced, pivots):
        x[p] = row[ncols]
    coeff_rows = [row[:ncols] for row in reduced]
    kernel = SubspaceBasis.from_vectors(_kernel_vectors(coeff_rows, pivots, ncols), ncols)
    return Solution(tuple(x), kernel)


def mat_inv(a) -> tuple:
    d = len(a)
    if any(len(r) != d for r in a):
        raise DimensionError("only square matrices can be inverted")
    aug = [tuple(r) + ident for r, ident in zip(a, identity(d))]
    reduced, pivots = rref(aug, 2 * d)
    if pivots[:d] != list(range(d)) or len(pivots) < d:
        raise SingularMatrixError("matrix is singular")
    return tuple(row[d:] for row in reduced)


def span(vectors: Iterable[Sequence], ambient: int) -> SubspaceBasis:
    return SubspaceBasis.from_vectors(vectors, ambient)


def subspace_sum(a: SubspaceBasis, b: SubspaceBasis) -> SubspaceBasis:
    if a.ambient != b.ambient:
        raise DimensionError("ambient dimensions differ")
    return SubspaceBasis.from_vectors(a.vectors + b.vectors, a.ambient)


def subspace_intersect(a: SubspaceBasis, b: SubspaceBasis) -> SubspaceBasis:
    """Intersection via the kernel of ``[A^T | -B^T]``."""
    if a.ambient != b.ambient:
        raise DimensionError("ambient dimensions differ")
    if not a.dim or not b.dim:
        return SubspaceBasis.zero(a.ambient)
    # columns: basis vectors of a, then negated basis vectors of b
    cols = list(a.vectors) + [tuple(-x for x in v) for v in b.vectors]
    system = transpose(cols)
    ker = kernel_basis(system, len(cols))
    vecs = [a.combination(k[: a.dim]) for k in ker.vectors]
    return SubspaceBasis.from_vectors(vecs, a.ambient)


def complement_in(sub: SubspaceBasis, whole: SubspaceBasis) -> SubspaceBasis:
    """A canonical complement of ``sub`` inside ``whole``.

    Greedily keeps the reduced basis vectors of ``whole`` that are not already
    spanned, so the result depends only on the two subspaces.
    """
    if sub.ambient != whole.ambient:
        raise DimensionError("ambient dimensions differ")
    acc = sub
    chosen = []
    for v in whole.vectors:
        if not acc.contains(v):
            chosen.append(v)
            acc = SubspaceBasis.from_vectors(acc.vectors + (v,), acc.ambient)
    return SubspaceBasis.from_vectors(chosen, whole.ambient)
