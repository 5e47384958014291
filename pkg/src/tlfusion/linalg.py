"""Dense matrices over a configured :class:`~tlfusion.scalars.Field`.

Prime-field matrices are int64 arrays reduced into ``[0, p)`` and use the
accelerated kernels; exact and cyclotomic matrices are object arrays of
scalars and use plain Gauss-Jordan elimination.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from . import _accel
from .scalars import ConfigError, DegenerateScalar, Field, Scalar


class Matrix:
    __slots__ = ("field", "a")

    def __init__(self, field: Field, a: np.ndarray):
        self.field = field
        self.a = a

    # construction -----------------------------------------------------------
    @staticmethod
    def zeros(field: Field, rows: int, cols: int) -> "Matrix":
        if field.backend == "modp":
            return Matrix(field, np.zeros((rows, cols), np.int64))
        a = np.empty((rows, cols), dtype=object)
        a.fill(field.zero)
        return Matrix(field, a)

    @staticmethod
    def eye(field: Field, n: int) -> "Matrix":
        out = Matrix.zeros(field, n, n)
        for k in range(n):
            out.a[k, k] = _raw(field, field.one)
        return out

    @staticmethod
    def scalar_matrix(field: Field, n: int, c) -> "Matrix":
        out = Matrix.zeros(field, n, n)
        c = _raw(field, field.scalar(c))
        for k in range(n):
            out.a[k, k] = c
        return out

    @staticmethod
    def from_rows(field: Field, rows: Sequence[Sequence]) -> "Matrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        out = Matrix.zeros(field, len(rows), ncols)
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                out.a[i, j] = _raw(field, field.scalar(x))
        return out

    @staticmethod
    def from_columns(field: Field, cols: Sequence["Matrix"], nrows: int | None = None) -> "Matrix":
        if not cols:
            return Matrix.zeros(field, nrows or 0, 0)
        return Matrix.hstack(list(cols))

    @staticmethod
    def hstack(mats: Sequence["Matrix"]) -> "Matrix":
        return Matrix(mats[0].field, np.hstack([m.a for m in mats]))

    @staticmethod
    def vstack(mats: Sequence["Matrix"]) -> "Matrix":
        return Matrix(mats[0].field, np.vstack([m.a for m in mats]))

    @staticmethod
    def block_diag(field: Field, mats: Sequence["Matrix"]) -> "Matrix":
        r = sum(m.shape[0] for m in mats)
        c = sum(m.shape[1] for m in mats)
        out = Matrix.zeros(field, r, c)
        i = j = 0
        for m in mats:
            out.a[i:i + m.shape[0], j:j + m.shape[1]] = m.a
            i += m.shape[0]
            j += m.shape[1]
        return out

    def kron(self, other: "Matrix") -> "Matrix":
        if self.field.backend == "modp":
            p = self.field.p
            r1, c1 = self.shape
            r2, c2 = other.shape
            out = np.zeros((r1 * r2, c1 * c2), np.int64)
            for i in range(r1):
                for j in range(c1):
                    x = self.a[i, j]
                    if x:
                        out[i * r2:(i + 1) * r2, j * c2:(j + 1) * c2] = other.a * x % p
            return Matrix(self.field, out)
        return Matrix(self.field, np.kron(self.a, other.a))

    # basics -------------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    def copy(self) -> "Matrix":
        return Matrix(self.field, self.a.copy())

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, np.ascontiguousarray(self.a.T))

    def __getitem__(self, idx):
        out = self.a[idx]
        if isinstance(out, np.ndarray):
            if out.ndim == 1:
                out = out.reshape(1, -1) if isinstance(idx, tuple) and isinstance(idx[0], (int, np.integer)) else out.reshape(-1, 1)
            return Matrix(self.field, out)
        return _scalar(self.field, out)

    def entry(self, i: int, j: int) -> Scalar:
        return _scalar(self.field, self.a[i, j])

    def set_entry(self, i: int, j: int, value) -> None:
        self.a[i, j] = _raw(self.field, self.field.scalar(value))

    def column(self, j: int) -> "Matrix":
        return Matrix(self.field, self.a[:, j:j + 1].copy())

    def _check(self, other: "Matrix"):
        if not isinstance(other, Matrix):
            raise TypeError("expected a Matrix")
        if other.field.key() != self.field.key():
            raise ConfigError("matrices over different fields")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.field.backend == "modp":
            return Matrix(self.field, (self.a + other.a) % self.field.p)
        return Matrix(self.field, self.a + other.a)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.field.backend == "modp":
            return Matrix(self.field, (self.a - other.a) % self.field.p)
        return Matrix(self.field, self.a - other.a)

    def __neg__(self) -> "Matrix":
        if self.field.backend == "modp":
            return Matrix(self.field, (-self.a) % self.field.p)
        return Matrix(self.field, -self.a)

    def scale(self, c) -> "Matrix":
        c = self.field.scalar(c)
        if self.field.backend == "modp":
            return Matrix(self.field, self.a * c.v % self.field.p)
        if c.is_zero():
            return Matrix.zeros(self.field, *self.shape)
        return Matrix(self.field, self.a * c)

    def __mul__(self, c) -> "Matrix":
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if self.field.backend == "modp":
            return Matrix(self.field, _accel.matmul_modp(self.a, other.a, self.field.p))
        if self.shape[1] == 0:
            return Matrix.zeros(self.field, self.shape[0], other.shape[1])
        return Matrix(self.field, _object_matmul(self.field, self.a, other.a))

    def __pow__(self, k: int) -> "Matrix":
        if k < 0:
            return self.inv() ** (-k)
        result = Matrix.eye(self.field, self.shape[0])
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def is_zero(self) -> bool:
        if self.field.backend == "modp":
            return not self.a.any()
        return all(x.is_zero() for x in self.a.flat)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        return (self - other).is_zero()

    __hash__ = None

    def trace(self) -> Scalar:
        acc = self.field.zero
        for k in range(min(self.shape)):
            acc = acc + self.entry(k, k)
        return acc

    def is_scalar(self) -> Scalar | None:
        """Return c when the matrix equals c times the identity, else None."""
        n = self.shape[0]
        if n == 0 or self.shape[0] != self.shape[1]:
            return None
        c = self.entry(0, 0)
        return c if self == Matrix.scalar_matrix(self.field, n, c) else None

    def tolist(self) -> list[list[Scalar]]:
        return [[self.entry(i, j) for j in range(self.shape[1])] for i in range(self.shape[0])]

    def to_strings(self) -> list[list[str]]:
        return [[str(x) for x in row] for row in self.tolist()]

    def __repr__(self):
        return f"Matrix({self.field.backend}, shape={self.shape})"

    # elimination ---------------------------------------------------------------
    def rref(self) -> tuple["Matrix", list[int]]:
        """Reduced row echelon form and pivot columns."""
        A = self.a.copy()
        if self.field.backend == "modp":
            r, piv = _accel.rref_modp(A, self.field.p)
            return Matrix(self.field, A[:r].copy()), [int(c) for c in piv]
        R, piv = _object_rref(self.field, A)
        return Matrix(self.field, R), piv

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> "Matrix":
        """Columns spanning the right kernel."""
        R, piv = self.rref()
        n = self.shape[1]
        free = [j for j in range(n) if j not in set(piv)]
        out = Matrix.zeros(self.field, n, len(free))
        one = _raw(self.field, self.field.one)
        for t, f in enumerate(free):
            out.a[f, t] = one
            for row, pc in enumerate(piv):
                out.a[pc, t] = _raw(self.field, -_scalar(self.field, R.a[row, f]))
        return out

    def column_space(self) -> "Matrix":
        """A basis of the column space, chosen among the original columns."""
        _, piv = self.rref()
        return Matrix(self.field, self.a[:, piv].copy())

    def row_space(self) -> "Matrix":
        return self.rref()[0]

    def inv(self) -> "Matrix":
        n = self.shape[0]
        if self.shape != (n, n):
            raise ValueError("inverse of a non-square matrix")
        aug = Matrix.hstack([self, Matrix.eye(self.field, n)])
        R, piv = aug.rref()
        if piv[:n] != list(range(n)) or len(piv) < n:
            raise DegenerateScalar("singular matrix")
        return Matrix(self.field, R.a[:, n:].copy())

    def solve(self, B: "Matrix") -> "Matrix | None":
        """Some X with self @ X = B, or None when inconsistent."""
        n = self.shape[1]
        aug = Matrix.hstack([self, B])
        R, piv = aug.rref()
        if any(c >= n for c in piv):
            return None
        X = Matrix.zeros(self.field, n, B.shape[1])
        for row, pc in enumerate(piv):
            X.a[pc, :] = R.a[row, n:]
        return X

    def specialize(self, target: Field) -> "Matrix":
        """Apply the ring map from the exact backend entrywise."""
        out = Matrix.zeros(target, *self.shape)
        for i in range(self.shape[0]):
            for j in range(self.shape[1]):
                out.a[i, j] = _raw(target, target.scalar(self.entry(i, j)))
        return out


def _raw(field: Field, x: Scalar):
    return x.v if field.backend == "modp" else x


def _scalar(field: Field, x) -> Scalar:
    if field.backend == "modp":
        return field.scalar(int(x))
    return x


def _object_matmul(field, A, B):
    out = np.empty((A.shape[0], B.shape[1]), dtype=object)
    zero = field.zero
    Bcols = [[(k, B[k, j]) for k in range(B.shape[0]) if not B[k, j].is_zero()]
             for j in range(B.shape[1])]
    for i in range(A.shape[0]):
        row = A[i]
        for j, col in enumerate(Bcols):
            acc = zero
            for k, b in col:
                a = row[k]
                if not a.is_zero():
                    acc = acc + a * b
            out[i, j] = acc
    return out


def _object_rref(field, A):
    rows, cols = A.shape
    piv = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        k = next((i for i in range(r, rows) if not A[i, c].is_zero()), None)
        if k is None:
            continue
        if k != r:
            A[[r, k]] = A[[k, r]]
        inv = A[r, c].inverse()
        A[r] = [x * inv if not x.is_zero() else x for x in A[r]]
        nz_cols = [j for j in range(c, cols) if not A[r, j].is_zero()]
        for i in range(rows):
            if i != r and not A[i, c].is_zero():
                f = A[i, c]
                for j in nz_cols:
                    A[i, j] = A[i, j] - f * A[r, j]
        piv.append(c)
        r += 1
    return A[:r].copy(), piv


def stack_vectors(field: Field, vecs: Iterable[Matrix], dim: int) -> Matrix:
    vecs = list(vecs)
    if not vecs:
        return Matrix.zeros(field, dim, 0)
    return Matrix.hstack(vecs)


def invariant_closure(field: Field, start: Matrix, ops: Sequence[Matrix]) -> Matrix:
    """Smallest subspace containing the columns of ``start`` and stable under ``ops``.

    Returns a matrix whose columns form a basis (in reduced form).
    """
    dim = start.shape[0]
    basis = _column_basis(start)
    while True:
        images = [basis] + [op @ basis for op in ops] if basis.shape[1] else [basis]
        new = _column_basis(Matrix.hstack(images))
        if new.shape[1] == basis.shape[1]:
            return new
        basis = new
        if basis.shape[1] == dim:
            return basis


def _column_basis(M: Matrix) -> Matrix:
    if M.shape[1] == 0:
        return M
    R, piv = M.T.rref()
    return R.T
