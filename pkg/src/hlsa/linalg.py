"""Dense exact linear algebra over a :class:`~hlsa.field.FieldSpec`.

Vectors are 1-D code arrays, matrices 2-D code arrays (column ``j`` holds the
image of basis vector ``j``).  Elimination always takes the first nonzero
entry in column order, so echelon forms, kernels and particular solutions are
reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, NotSquare
from .field import FieldSpec


@dataclass(frozen=True)
class SuperSpace:
    """A Z/2-graded coordinate space; ``parities[i]`` is the degree of ``e_i``."""

    parities: tuple[int, ...]

    def __post_init__(self) -> None:
        par = tuple(int(b) for b in self.parities)
        if any(b not in (0, 1) for b in par):
            raise ValueError(f"parities must be 0 or 1, got {par}")
        object.__setattr__(self, "parities", par)

    @property
    def n(self) -> int:
        return len(self.parities)

    @property
    def even(self) -> tuple[int, ...]:
        return tuple(i for i, b in enumerate(self.parities) if b == 0)

    @property
    def odd(self) -> tuple[int, ...]:
        return tuple(i for i, b in enumerate(self.parities) if b == 1)

    def parity_of(self, v) -> int | None:
        """Parity of a homogeneous vector, ``None`` if mixed (0 counts as even)."""
        support = np.flatnonzero(np.asarray(v))
        degs = {self.parities[i] for i in support}
        if len(degs) > 1:
            return None
        return degs.pop() if degs else 0

    def __add__(self, other: "SuperSpace") -> "SuperSpace":
        return SuperSpace(self.parities + other.parities)


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.int64, copy=True)
    a.setflags(write=False)
    return a


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def is_even_map(dom: Sequence[int], cod: Sequence[int], M) -> tuple[int, int] | None:
    """First ``(i, j)`` with ``M[i, j] != 0`` across parities, else ``None``."""
    M = np.asarray(M)
    mask = np.not_equal.outer(np.asarray(cod), np.asarray(dom)) & (M != 0)
    bad = np.argwhere(mask)
    return (int(bad[0][0]), int(bad[0][1])) if len(bad) else None


def rref(F: FieldSpec, A, pivot_cols: int | None = None) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row-echelon form and pivot columns.

    Only the first ``pivot_cols`` columns are eligible as pivots (used for
    augmented systems); row operations still act on the full width.
    """
    R = np.array(A, dtype=np.int64, copy=True)
    if R.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {R.shape}")
    rows, cols = R.shape
    limit = cols if pivot_cols is None else pivot_cols
    pivots: list[int] = []
    r = 0
    for c in range(limit):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        if R[r, c] != 1:
            R[r] = F.mul(R[r], F.inv(R[r, c]))
        col = R[:, c].copy()
        col[r] = 0
        if col.any():
            R = F.sub(R, F.mul(col[:, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, tuple(pivots)


def rank(F: FieldSpec, A) -> int:
    return len(rref(F, A)[1])


def solve(F: FieldSpec, A, b) -> np.ndarray | None:
    """Particular solution of ``A x = b`` (free variables zero), or ``None``."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if A.ndim != 2 or b.shape != (A.shape[0],):
        raise DimensionMismatch(f"cannot solve {A.shape} system with rhs {b.shape}")
    aug = np.concatenate([A, b[:, None]], axis=1)
    R, piv = rref(F, aug, pivot_cols=A.shape[1])
    if R[len(piv):, -1].any():
        return None
    x = np.zeros(A.shape[1], dtype=np.int64)
    for row, c in enumerate(piv):
        x[c] = R[row, -1]
    return x


def inverse(F: FieldSpec, M) -> np.ndarray | None:
    """Inverse of a square matrix, or ``None`` if singular."""
    M = np.asarray(M, dtype=np.int64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NotSquare(f"cannot invert shape {M.shape}")
    n = M.shape[0]
    R, piv = rref(F, np.concatenate([M, identity(n)], axis=1), pivot_cols=n)
    if len(piv) < n:
        return None
    return R[:, n:]


def kernel(F: FieldSpec, A, parities: Sequence[int] | None = None) -> "Subspace":
    """Null space ``{v : A v = 0}`` as a canonical :class:`Subspace`."""
    A = np.asarray(A, dtype=np.int64)
    if A.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {A.shape}")
    n = A.shape[1]
    space = SuperSpace(tuple(parities) if parities is not None else (0,) * n)
    if space.n != n:
        raise DimensionMismatch("parity list does not match the number of columns")
    R, piv = rref(F, A)
    free = [c for c in range(n) if c not in piv]
    vecs = []
    for f in free:
        v = np.zeros(n, dtype=np.int64)
        v[f] = 1
        for row, c in enumerate(piv):
            v[c] = F.neg(R[row, f])
        vecs.append(v)
    return Subspace.span(F, space, vecs)


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace stored by its reduced row-echelon basis (rows of ``basis``)."""

    field: FieldSpec
    ambient: SuperSpace
    basis: np.ndarray
    pivots: tuple[int, ...]

    @classmethod
    def span(cls, F: FieldSpec, ambient: SuperSpace, vectors: Iterable) -> "Subspace":
        vecs = [np.asarray(v, dtype=np.int64) for v in vectors]
        n = ambient.n
        for v in vecs:
            if v.shape != (n,):
                raise DimensionMismatch(f"vector of shape {v.shape} in {n}-dimensional space")
        if not vecs:
            return cls(F, ambient, _readonly(np.zeros((0, n), dtype=np.int64)), ())
        R, piv = rref(F, np.stack(vecs))
        return cls(F, ambient, _readonly(R[: len(piv)]), piv)

    @classmethod
    def whole(cls, F: FieldSpec, ambient: SuperSpace) -> "Subspace":
        return cls(F, ambient, _readonly(identity(ambient.n)), tuple(range(ambient.n)))

    @classmethod
    def zero(cls, F: FieldSpec, ambient: SuperSpace) -> "Subspace":
        return cls.span(F, ambient, [])

    @property
    def dim(self) -> int:
        return len(self.pivots)

    @property
    def n(self) -> int:
        return self.ambient.n

    def __len__(self) -> int:
        return self.dim

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.field == other.field
            and self.ambient == other.ambient
            and self.pivots == other.pivots
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self) -> int:
        return hash((self.field, self.ambient, self.pivots, self.basis.tobytes()))

    def coords(self, X) -> np.ndarray:
        """Coordinates in the echelon basis; read off at the pivot columns."""
        X = np.asarray(X, dtype=np.int64)
        return X[..., list(self.pivots)]

    def combine(self, C) -> np.ndarray:
        """Vectors with the given coordinate rows (last axis = basis index)."""
        C = np.asarray(C, dtype=np.int64)
        if self.dim == 0:
            return np.zeros(C.shape[:-1] + (self.n,), dtype=np.int64)
        return self.field.matmul(C.reshape(-1, self.dim), self.basis).reshape(C.shape[:-1] + (self.n,))

    def residual(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.int64)
        return self.field.sub(X, self.combine(self.coords(X)))

    def contains(self, X) -> np.ndarray | bool:
        """Membership; vectorised over leading axes."""
        res = self.residual(X).any(axis=-1)
        return bool(not res) if np.ndim(res) == 0 else ~res

    def contains_all(self, X) -> bool:
        X = np.asarray(X, dtype=np.int64)
        if X.size == 0:
            return True
        return not self.residual(X).any()

    def is_subspace_of(self, other: "Subspace") -> bool:
        return other.contains_all(self.basis)

    def annihilator(self) -> np.ndarray:
        """Rows ``W`` with ``self = {v : W v = 0}``."""
        if self.dim == 0:
            return identity(self.n)
        K = kernel(self.field, self.basis)
        return np.array(K.basis)

    def intersect(self, other: "Subspace") -> "Subspace":
        W = np.concatenate([self.annihilator(), other.annihilator()], axis=0)
        if W.shape[0] == 0:
            return self
        return kernel(self.field, W, self.ambient.parities)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.field, self.ambient, list(self.basis) + list(other.basis))

    def even_part(self) -> "Subspace":
        return self.intersect(Subspace.span(self.field, self.ambient, [identity(self.n)[i] for i in self.ambient.even]))

    def is_graded(self) -> bool:
        return all(self.ambient.parity_of(b) is not None for b in self.basis)

    def basis_parities(self) -> tuple[int, ...]:
        return tuple(self.ambient.parity_of(b) for b in self.basis)

    def enumerate(self) -> np.ndarray:
        """All elements, ordered lexicographically by coordinates."""
        return self.combine(all_coordinates(self.field, self.dim))

    def size(self) -> int:
        return self.field.q**self.dim

    def image(self, M, ambient: SuperSpace) -> "Subspace":
        M = np.asarray(M, dtype=np.int64)
        return Subspace.span(self.field, ambient, [self.field.matmul(M, b) for b in self.basis])


def all_coordinates(F: FieldSpec, m: int) -> np.ndarray:
    """Every coordinate tuple in F^m, lexicographic in code order; shape (q^m, m)."""
    if m == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((F.q,) * m, dtype=np.int64)
    return grids.reshape(m, -1).T.copy()


def coordinate_index(F: FieldSpec, C) -> np.ndarray:
    """Inverse of :func:`all_coordinates`: row index of each coordinate tuple."""
    C = np.asarray(C, dtype=np.int64)
    m = C.shape[-1]
    weights = F.q ** np.arange(m - 1, -1, -1, dtype=np.int64)
    return C @ weights


class PolyMatrix:
    """Matrix with entries in F[lambda]; ``coeffs[d]`` is the lambda^d coefficient.

    ``degree`` is the tracked bound on entry degrees (the stored length minus one).
    """

    def __init__(self, F: FieldSpec, coeffs) -> None:
        c = np.asarray(coeffs, dtype=np.int64)
        if c.ndim != 3:
            raise DimensionMismatch(f"expected (degree+1, rows, cols), got {c.shape}")
        self.field = F
        self.coeffs = c

    @classmethod
    def constant(cls, F: FieldSpec, M) -> "PolyMatrix":
        return cls(F, np.asarray(M, dtype=np.int64)[None])

    @classmethod
    def linear(cls, F: FieldSpec, M1, M0) -> "PolyMatrix":
        """``lambda * M1 + M0``."""
        return cls(F, np.stack([np.asarray(M0, dtype=np.int64), np.asarray(M1, dtype=np.int64)]))

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def shape(self) -> tuple[int, int]:
        return self.coeffs.shape[1], self.coeffs.shape[2]

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        F = self.field
        if self.shape[1] != other.shape[0]:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        out = np.zeros((self.degree + other.degree + 1, self.shape[0], other.shape[1]), dtype=np.int64)
        # convolution over lambda-degrees
        prod = F.einsum("aij,bjk->abik", self.coeffs, other.coeffs)
        for a in range(self.degree + 1):
            out[a : a + other.degree + 1] = F.add(out[a : a + other.degree + 1], prod[a])
        return PolyMatrix(F, out)

    def apply(self, v) -> np.ndarray:
        """Polynomial vector ``M v`` for a constant vector ``v``; shape (degree+1, rows)."""
        return self.field.einsum("dij,j->di", self.coeffs, np.asarray(v, dtype=np.int64))

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        d = max(a.shape[0], b.shape[0])
        pad = lambda c: np.concatenate([c, np.zeros((d - c.shape[0],) + c.shape[1:], dtype=np.int64)])  # noqa: E731
        return self.field == other.field and np.array_equal(pad(a), pad(b))

    __hash__ = None  # type: ignore[assignment]


def poly_matrix_power(M: PolyMatrix, e: int) -> PolyMatrix:
    """``M**e`` by repeated multiplication; the degree bound becomes ``e * degree``."""
    rows, cols = M.shape
    if rows != cols:
        raise NotSquare(f"cannot power a {rows}x{cols} matrix")
    if e < 0:
        raise ValueError("exponent must be >= 0")
    result = PolyMatrix.constant(M.field, identity(rows))
    for _ in range(e):
        result = result @ M
    return result


def coefficient_extract(v, degree: int) -> np.ndarray:
    """lambda^degree coefficients of a polynomial vector of shape (degree+1, n)."""
    v = np.asarray(v, dtype=np.int64)
    if degree < 0:
        raise ValueError("degree must be >= 0")
    if degree >= v.shape[0]:
        return np.zeros(v.shape[1:], dtype=np.int64)
    return v[degree].copy()
