"""Hom-Lie superalgebras given by structure constants.

``structure[i, j, k]`` is the coefficient of ``e_k`` in ``[e_i, e_j]`` and
column ``j`` of ``alpha`` is ``alpha(e_j)``.  Axioms are checked on basis
tuples only (sufficient by multilinearity), so verification cost is
polynomial in the dimension and independent of the field size.
"""

from __future__ import annotations

import warnings
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DimensionMismatch, FieldMismatch, NotASubalgebra, NotGraded, TheoremViolation
from .field import FieldSpec
from .linalg import Subspace, SuperSpace, identity, is_even_map, kernel
from .report import VerificationReport


class NotFixedWarning(UserWarning):
    """``ad_alpha`` was applied to an element outside the fixed even subspace."""


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=np.int64, copy=True)
    a.setflags(write=False)
    return a


class HomLieSuperalgebra:
    """A triple (L, [,], alpha) stored by its structure-constant tensor.

    The constructor checks shapes and code ranges only; the algebraic axioms
    are left to :func:`verify_axioms` so that broken candidates can still be
    represented and reported on.
    """

    def __init__(
        self,
        field: FieldSpec,
        parities: Sequence[int],
        structure,
        alpha=None,
        names: Sequence[str] | None = None,
    ) -> None:
        self.field = field
        self.space = SuperSpace(tuple(parities))
        n = self.space.n
        c = np.asarray(structure, dtype=np.int64)
        if c.shape != (n, n, n):
            raise DimensionMismatch(f"structure tensor has shape {c.shape}, expected {(n, n, n)}")
        a = identity(n) if alpha is None else np.asarray(alpha, dtype=np.int64)
        if a.shape != (n, n):
            raise DimensionMismatch(f"alpha has shape {a.shape}, expected {(n, n)}")
        for arr in (c, a):
            if arr.size and (arr.min() < 0 or arr.max() >= field.q):
                raise ValueError("entries must be field codes in [0, q)")
        self.structure = _frozen(c)
        self.alpha = _frozen(a)
        self.names = tuple(names) if names is not None else tuple(f"e{i + 1}" for i in range(n))
        if len(self.names) != n:
            raise DimensionMismatch("one name per basis vector is required")

    @classmethod
    def from_brackets(
        cls,
        field: FieldSpec,
        parities: Sequence[int],
        brackets: Mapping[tuple[int, int], Sequence[int]],
        alpha=None,
        names: Sequence[str] | None = None,
    ) -> "HomLieSuperalgebra":
        """Build from brackets given for ``i <= j`` (0-based); the rest by super skew-symmetry."""
        n = len(parities)
        c = np.zeros((n, n, n), dtype=np.int64)
        for (i, j), vec in brackets.items():
            v = np.asarray(vec, dtype=np.int64) % field.q
            c[i, j] = v
            if i != j:
                c[j, i] = field.mul(_sign_code(field, parities[i] * parities[j]), field.neg(v))
        return cls(field, parities, c, alpha, names)

    # ------------------------------------------------------------------ basics
    @property
    def n(self) -> int:
        return self.space.n

    @property
    def parities(self) -> tuple[int, ...]:
        return self.space.parities

    def __repr__(self) -> str:
        return f"HomLieSuperalgebra({self.field}, dim={self.n}, parities={self.parities})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomLieSuperalgebra):
            return NotImplemented
        return (
            self.field == other.field
            and self.parities == other.parities
            and np.array_equal(self.structure, other.structure)
            and np.array_equal(self.alpha, other.alpha)
        )

    def __hash__(self) -> int:
        return hash((self.field, self.parities, self.structure.tobytes(), self.alpha.tobytes()))

    def basis_vector(self, i: int) -> np.ndarray:
        return identity(self.n)[i]

    def vector(self, values: Iterable) -> np.ndarray:
        v = np.array([self.field(x).code for x in values], dtype=np.int64)
        if v.shape != (self.n,):
            raise DimensionMismatch(f"expected {self.n} coordinates")
        return v

    def apply_alpha(self, X) -> np.ndarray:
        """alpha applied along the last axis."""
        X = np.asarray(X, dtype=np.int64)
        if self.is_untwisted:
            return X.copy()
        return self.field.matmul(X, self.alpha.T)

    @cached_property
    def sign_matrix(self) -> np.ndarray:
        """Codes of (-1)^{|e_a||e_b|}."""
        par = np.asarray(self.parities)
        return np.where(np.outer(par, par) == 1, self.field.neg(1), 1).astype(np.int64)

    # -------------------------------------------------------------- brackets
    def ad_matrices(self, X) -> np.ndarray:
        """``ad(x)`` (b -> [x, b]) for each row of ``X``; shape (..., n, n)."""
        X = np.asarray(X, dtype=np.int64)
        flat = X.reshape(-1, self.n)
        M = self.field.einsum("ni,ijk->nkj", flat, self.structure)
        return M.reshape(X.shape[:-1] + (self.n, self.n))

    def ad_alpha_matrices(self, X) -> np.ndarray:
        """``ad_alpha(x)`` (b -> [x, alpha(b)]) for each row of ``X``."""
        return self.field.matmul(self.ad_matrices(X), self.alpha)

    def bracket_left(self, X, W) -> np.ndarray:
        """``[x_r, w]`` for ``X`` of shape (N, n) and ``W`` of shape (N, D, n)."""
        T = self.field.einsum("ni,ijk->njk", X, self.structure)
        return self.field.matmul(W, T)

    def bracket(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        return self.field.einsum("i,j,ijk->k", x, y, self.structure)

    @cached_property
    def is_multiplicative(self) -> bool:
        return _multiplicativity_defect(self) is None

    @cached_property
    def is_untwisted(self) -> bool:
        return bool(np.array_equal(self.alpha, identity(self.n)))


def _sign_code(F: FieldSpec, both_odd) -> int:
    return int(F.neg(1)) if both_odd else 1


def _check_vector(L: HomLieSuperalgebra, v, what: str = "vector") -> np.ndarray:
    v = np.asarray(v, dtype=np.int64)
    if v.shape[-1:] != (L.n,):
        raise DimensionMismatch(f"{what} of shape {v.shape} in {L.n}-dimensional algebra")
    if v.size and (v.min() < 0 or v.max() >= L.field.q):
        raise FieldMismatch(f"{what} has entries outside {L.field}")
    return v


def as_subspace(L: HomLieSuperalgebra, S) -> Subspace:
    if isinstance(S, Subspace):
        if S.field != L.field:
            raise FieldMismatch("subspace over a different field")
        if S.n != L.n:
            raise DimensionMismatch("subspace of a different ambient space")
        return S
    return Subspace.span(L.field, L.space, [_check_vector(L, v) for v in S])


def whole_space(L: HomLieSuperalgebra) -> Subspace:
    return Subspace.whole(L.field, L.space)


def bracket(L: HomLieSuperalgebra, x, y) -> np.ndarray:
    """Bilinear extension of the structure constants."""
    return L.bracket(_check_vector(L, x), _check_vector(L, y))


def label(L: HomLieSuperalgebra, idx: Sequence[int]) -> str:
    return "(" + ",".join(L.names[i] for i in idx) + ")"


# ------------------------------------------------------------------ axioms
def _first(mask: np.ndarray) -> tuple[int, ...] | None:
    hits = np.argwhere(mask)
    return tuple(int(v) for v in hits[0]) if len(hits) else None


def _grading_defect(L: HomLieSuperalgebra):
    par = np.asarray(L.parities)
    expected = (par[:, None, None] + par[None, :, None]) % 2
    return _first((L.structure != 0) & (expected != par[None, None, :]))


def _skew_defect(L: HomLieSuperalgebra):
    F, c = L.field, L.structure
    swapped = np.transpose(c, (1, 0, 2))
    total = F.add(swapped, F.mul(L.sign_matrix[:, :, None], c))
    found = _first(total.any(axis=2))
    return found


def jacobiator(L: HomLieSuperalgebra) -> np.ndarray:
    """Hom-superJacobi sum for every basis triple; shape (n, n, n, n)."""
    F, c, A, S = L.field, L.structure, L.alpha, L.sign_matrix
    # B[a,b,c] = [alpha(e_a), [e_b, e_c]]
    inner = F.einsum("ia,ijk->ajk", A, c)  # inner[a, j, k] = coefficient in [alpha e_a, e_j]
    B = F.einsum("bcj,ajk->abck", c, inner)
    t1 = F.mul(S[:, None, :, None], B)  # x,y,z -> s(x,z) B[x,y,z]
    t2 = F.mul(np.transpose(S, (1, 0))[None, :, :, None], np.transpose(B, (1, 2, 0, 3)))  # s(z,y) B[z,x,y]
    t3 = F.mul(np.transpose(S)[:, :, None, None], np.transpose(B, (2, 0, 1, 3)))  # s(y,x) B[y,z,x]
    return F.add(F.add(t1, t2), t3)


def _multiplicativity_defect(L: HomLieSuperalgebra):
    F, c, A = L.field, L.structure, L.alpha
    lhs = F.einsum("ijl,kl->ijk", c, A)
    rhs = F.einsum("ai,bj,abk->ijk", A, A, c)
    return _first((lhs != rhs).any(axis=2))


def verify_axioms(L: HomLieSuperalgebra) -> VerificationReport:
    """Grading, super skew-symmetry, Hom-superJacobi, multiplicativity, evenness of alpha."""
    rep = VerificationReport()
    w = _grading_defect(L)
    rep.add("grading", w is None, w, label(L, w) if w else "",
            "bracket is even" if w is None else f"[{L.names[w[0]]},{L.names[w[1]]}] has a {L.names[w[2]]} component of the wrong parity")
    w = _skew_defect(L)
    rep.add("skew", w is None, w, label(L, w) if w else "", "super skew-symmetry on all basis pairs")
    J = jacobiator(L)
    w = _first(J.any(axis=3))
    detail = f"{L.n ** 3} basis triples"
    if w is not None:
        detail = "Jacobiator = " + L.field.format_vector(J[w])
    rep.add("jacobi", w is None, w, label(L, w) if w else "", detail)
    w = _multiplicativity_defect(L)
    rep.add("multiplicative", w is None, w, label(L, w) if w else "", "alpha[x,y] = [alpha x, alpha y]")
    w = is_even_map(L.parities, L.parities, L.alpha)
    rep.add("alpha-even", w is None, w, f"alpha[{w[0] + 1},{w[1] + 1}]" if w else "", "alpha preserves parity")
    return rep


def recheck_witness(L: HomLieSuperalgebra, check: str, witness: Sequence[int]) -> bool:
    """Re-evaluate a reported failure from basis vectors; True when it is a real violation."""
    F, e = L.field, L.basis_vector
    par = L.parities

    def sgn(a, b):
        return F.neg(1) if par[a] and par[b] else 1

    if check == "grading":
        i, j, k = witness
        return L.bracket(e(i), e(j))[k] != 0 and par[k] != (par[i] + par[j]) % 2
    if check == "skew":
        i, j = witness
        return bool(F.add(L.bracket(e(j), e(i)), F.mul(sgn(i, j), L.bracket(e(i), e(j)))).any())
    if check == "jacobi":
        x, y, z = witness
        A = L.apply_alpha
        t1 = F.mul(sgn(x, z), L.bracket(A(e(x)), L.bracket(e(y), e(z))))
        t2 = F.mul(sgn(z, y), L.bracket(A(e(z)), L.bracket(e(x), e(y))))
        t3 = F.mul(sgn(y, x), L.bracket(A(e(y)), L.bracket(e(z), e(x))))
        return bool(F.add(F.add(t1, t2), t3).any())
    if check == "multiplicative":
        i, j = witness
        lhs = L.apply_alpha(L.bracket(e(i), e(j)))
        rhs = L.bracket(L.apply_alpha(e(i)), L.apply_alpha(e(j)))
        return not np.array_equal(lhs, rhs)
    if check == "alpha-even":
        i, j = witness
        return L.alpha[i, j] != 0 and par[i] != par[j]
    raise KeyError(check)


# --------------------------------------------------------- derived subspaces
def fixed_even_subspace(L: HomLieSuperalgebra) -> Subspace:
    """L^0 = {x in L_0 : alpha(x) = x} in canonical echelon form."""
    cached = L.__dict__.get("_fixed_even")
    if cached is not None:
        return cached
    F, n = L.field, L.n
    rows = [F.sub(L.alpha, identity(n))]
    odd = L.space.odd
    if odd:
        rows.append(identity(n)[list(odd)])
    L0 = kernel(F, np.concatenate(rows, axis=0), L.parities)
    if L.is_multiplicative and not is_subalgebra(L, L0):
        raise TheoremViolation("fixed even subspace is not closed under bracket and alpha")
    L.__dict__["_fixed_even"] = L0
    return L0


def in_fixed_even(L: HomLieSuperalgebra, X) -> np.ndarray | bool:
    return fixed_even_subspace(L).contains(X)


def ad_alpha(L: HomLieSuperalgebra, a, warn: bool = True) -> np.ndarray:
    """Matrix of b -> [a, alpha(b)]; warns with :class:`NotFixedWarning` if a is not in L^0."""
    a = _check_vector(L, a)
    if warn and not fixed_even_subspace(L).contains(a):
        warnings.warn("ad_alpha of an element outside L^0", NotFixedWarning, stacklevel=2)
    return L.ad_alpha_matrices(a[None])[0]


def centralizer(L: HomLieSuperalgebra, S) -> Subspace:
    """alpha-centralizer {x : [x, alpha(y)] = 0 for y spanning S}."""
    S = as_subspace(L, S)
    if S.dim == 0:
        return whole_space(L)
    F = L.field
    aS = L.apply_alpha(S.basis)
    # M[s, k, i] = coefficient of e_k in [e_i, alpha(y_s)]
    M = F.einsum("ijk,sj->ski", L.structure, aS)
    return kernel(F, M.reshape(-1, L.n), L.parities)


def center(L: HomLieSuperalgebra) -> Subspace:
    cached = L.__dict__.get("_center")
    if cached is None:
        cached = centralizer(L, whole_space(L))
        L.__dict__["_center"] = cached
    return cached


def _closed(L: HomLieSuperalgebra, H: Subspace, partners: np.ndarray) -> bool:
    if H.dim == 0:
        return True
    if not H.contains_all(L.apply_alpha(H.basis)):
        return False
    if partners.shape[0] == 0:
        return True
    T = L.field.einsum("ai,bj,ijk->abk", H.basis, partners, L.structure)
    return H.contains_all(T.reshape(-1, L.n))


def is_subalgebra(L: HomLieSuperalgebra, H) -> bool:
    """alpha(H) in H and [H, H] in H, on basis pairs."""
    H = as_subspace(L, H)
    return _closed(L, H, H.basis)


def is_ideal(L: HomLieSuperalgebra, U) -> bool:
    """alpha(U) in U and [U, L] in U, on basis pairs."""
    U = as_subspace(L, U)
    return _closed(L, U, identity(L.n))


def restrict(L: HomLieSuperalgebra, H, names: Sequence[str] | None = None) -> HomLieSuperalgebra:
    """The subalgebra H as a standalone algebra in the coordinates of its echelon basis."""
    H = as_subspace(L, H)
    if not H.is_graded():
        raise NotGraded("subspace is not spanned by homogeneous vectors")
    if not is_subalgebra(L, H):
        raise NotASubalgebra("subspace is not closed under bracket and alpha")
    F, r = L.field, H.dim
    T = F.einsum("ai,bj,ijk->abk", H.basis, H.basis, L.structure)
    c = H.coords(T) if r else np.zeros((0, 0, 0), dtype=np.int64)
    a = H.coords(L.apply_alpha(H.basis)).T if r else np.zeros((0, 0), dtype=np.int64)
    return HomLieSuperalgebra(F, H.basis_parities(), c, a, names)
