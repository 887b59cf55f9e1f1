"""Builders: direct sums, Yau twists, commutator algebras and basis changes."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .algebra import HomLieSuperalgebra, fixed_even_subspace, verify_axioms
from .errors import (
    EmptyList,
    FieldMismatch,
    NotEndomorphism,
    NotGraded,
    NotHomAssociative,
    NotInL0,
    NotUntwisted,
    PMapEscapesFixedSpace,
    PMapMismatch,
    TheoremViolation,
    TwistNotRestricted,
)
from .field import FieldSpec
from .linalg import SuperSpace, identity, inverse, is_even_map
from .report import VerificationReport
from .restriction import PMap, max_exhaustive, pmap_eval_batch, pmap_verified, verify_pmap


# ------------------------------------------------ Hom-associative algebras
class HomAssociativeSuperalgebra:
    """(A, mu, alpha) stored by the product tensor ``m[i, j, k]`` (coefficient of e_k in e_i e_j)."""

    def __init__(self, field: FieldSpec, parities: Sequence[int], product, alpha=None, names=None) -> None:
        self.field = field
        self.space = SuperSpace(tuple(parities))
        n = self.space.n
        m = np.asarray(product, dtype=np.int64)
        if m.shape != (n, n, n):
            raise ValueError(f"product tensor has shape {m.shape}, expected {(n, n, n)}")
        a = identity(n) if alpha is None else np.asarray(alpha, dtype=np.int64)
        self.product = m.copy()
        self.product.setflags(write=False)
        self.alpha = a.copy()
        self.alpha.setflags(write=False)
        self.names = tuple(names) if names is not None else tuple(f"e{i + 1}" for i in range(n))

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def parities(self) -> tuple[int, ...]:
        return self.space.parities

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomAssociativeSuperalgebra):
            return NotImplemented
        return (
            self.field == other.field
            and self.parities == other.parities
            and np.array_equal(self.product, other.product)
            and np.array_equal(self.alpha, other.alpha)
        )

    __hash__ = None  # type: ignore[assignment]


def verify_hom_associative(A: HomAssociativeSuperalgebra) -> VerificationReport:
    F, m, a = A.field, A.product, A.alpha
    par = np.asarray(A.parities)
    rep = VerificationReport()
    expected = (par[:, None, None] + par[None, :, None]) % 2
    bad = np.argwhere((m != 0) & (expected != par[None, None, :]))
    rep.add("grading", bad.size == 0, tuple(int(v) for v in bad[0]) if bad.size else None,
            _names(A.names, bad[0][:2]) + f" -> {A.names[bad[0][2]]}" if bad.size else "")
    bad = is_even_map(A.parities, A.parities, a)
    rep.add("alpha-even", bad is None, bad, f"alpha[{bad[0] + 1},{bad[1] + 1}]" if bad else "")
    am = F.einsum("ia,ijk->ajk", a, m)
    lhs = F.einsum("yzj,xjk->xyzk", m, am)
    ma = F.einsum("jlk,lz->jzk", m, a)
    rhs = F.einsum("xyj,jzk->xyzk", m, ma)
    bad = np.argwhere((lhs != rhs).any(axis=-1))
    rep.add("hom-associative", bad.size == 0, tuple(int(v) for v in bad[0]) if bad.size else None,
            _names(A.names, bad[0]) if bad.size else "", f"{A.n ** 3} basis triples")
    return rep


def _names(names, idx) -> str:
    return "(" + ",".join(names[int(i)] for i in idx) + ")"


def matrix_superalgebra(F: FieldSpec, index_parities: Sequence[int]) -> HomAssociativeSuperalgebra:
    """Matrix units E_ab (row-major) with parity |a| + |b| and the usual product."""
    r = len(index_parities)
    n = r * r
    m = np.zeros((n, n, n), dtype=np.int64)
    for a in range(r):
        for b in range(r):
            for d in range(r):
                m[a * r + b, b * r + d, a * r + d] = 1
    parities = [(index_parities[a] + index_parities[b]) % 2 for a in range(r) for b in range(r)]
    names = [f"E{a + 1}{b + 1}" for a in range(r) for b in range(r)]
    return HomAssociativeSuperalgebra(F, parities, m, names=names)


def commutator_superalgebra(A: HomAssociativeSuperalgebra) -> HomLieSuperalgebra:
    """A^(-) with [x, y] = xy - (-1)^{|x||y|} yx and the same twist."""
    rep = verify_hom_associative(A)
    if not rep.passed:
        raise NotHomAssociative(f"input fails {rep.failures[0].name}")
    F = A.field
    par = np.asarray(A.parities)
    sign = np.where(np.outer(par, par) == 1, F.neg(1), 1)
    swapped = np.transpose(A.product, (1, 0, 2))
    c = F.sub(A.product, F.mul(sign[:, :, None], swapped))
    L = HomLieSuperalgebra(F, A.parities, c, A.alpha, A.names)
    out = verify_axioms(L)
    if not out.passed:
        raise TheoremViolation("commutator algebra of a Hom-associative superalgebra fails the axioms", out)
    return L


# ------------------------------------------------------------ direct sums
def _sum_names(a: Sequence[str], b: Sequence[str]) -> tuple[str, ...] | None:
    names = tuple(a) + tuple(b)
    return names if len(set(names)) == len(names) else None


def direct_sum(L: HomLieSuperalgebra, G: HomLieSuperalgebra) -> HomLieSuperalgebra:
    """L ⊕ G with L's basis first; block structure constants and block twist."""
    if L.field != G.field:
        raise FieldMismatch("direct sum of algebras over different fields")
    n, k = L.n, G.n
    c = np.zeros((n + k,) * 3, dtype=np.int64)
    c[:n, :n, :n] = L.structure
    c[n:, n:, n:] = G.structure
    a = np.zeros((n + k, n + k), dtype=np.int64)
    a[:n, :n] = L.alpha
    a[n:, n:] = G.alpha
    S = HomLieSuperalgebra(L.field, L.parities + G.parities, c, a, _sum_names(L.names, G.names))
    if fixed_even_subspace(S).dim != fixed_even_subspace(L).dim + fixed_even_subspace(G).dim:
        raise TheoremViolation("fixed even subspace of a direct sum is not the sum of the parts")
    return S


def _split(n: int, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return X[:, :n], X[:, n:]


def direct_sum_pmap(P1: PMap, P2: PMap, S: HomLieSuperalgebra | None = None, check: bool = True) -> PMap:
    """Componentwise p-map (u, v) -> (P1 u, P2 v) on the direct sum."""
    L, G = P1.algebra, P2.algebra
    if P1.base.dim != L.n or P2.base.dim != G.n:
        raise PMapMismatch("direct sums take p-maps defined on whole algebras")
    S = direct_sum(L, G) if S is None else S
    dom = fixed_even_subspace(S)
    u, v = _split(L.n, np.asarray(dom.basis))
    images = np.concatenate([pmap_eval_batch(P1, u), pmap_eval_batch(P2, v)], axis=1)
    P = PMap(S, images)
    if check:
        if not (pmap_verified(P1) and pmap_verified(P2)):
            raise PMapMismatch("direct_sum_pmap needs verified p-maps on both summands")
        rep = verify_pmap(S, P)
        if not rep.passed:
            raise TheoremViolation("componentwise p-map on a direct sum fails verification", rep)
    return P


def direct_sum_n(
    algebras: Sequence[HomLieSuperalgebra], pmaps: Sequence[PMap] | None = None, check: bool = True
) -> tuple[HomLieSuperalgebra, PMap | None]:
    """Left fold of :func:`direct_sum` (and of the p-maps, if given)."""
    if not algebras:
        raise EmptyList("direct_sum_n needs at least one algebra")
    if pmaps is not None and len(pmaps) != len(algebras):
        raise ValueError("one p-map per algebra is required")
    S, P = algebras[0], (pmaps[0] if pmaps is not None else None)
    for i in range(1, len(algebras)):
        T = direct_sum(S, algebras[i])
        if P is not None:
            P = direct_sum_pmap(P, pmaps[i], T, check=False)
        S = T
    if len(algebras) > 2:
        right = algebras[-1]
        for A in reversed(algebras[:-1]):
            right = direct_sum(A, right)
        if not (np.array_equal(S.structure, right.structure) and np.array_equal(S.alpha, right.alpha)):
            raise TheoremViolation("direct-sum fold is not associative")
    if P is not None and check:
        rep = verify_pmap(S, P)
        if not rep.passed:
            raise TheoremViolation("componentwise p-map on an n-ary direct sum fails verification", rep)
    return S, P


# ------------------------------------------------------------- Yau twist
def endomorphism_defect(L: HomLieSuperalgebra, endo) -> tuple[int, int] | None:
    """First basis pair (i, j) with endo[e_i, e_j] != [endo e_i, endo e_j]."""
    F = L.field
    E = np.asarray(endo, dtype=np.int64)
    lhs = F.einsum("ijl,kl->ijk", L.structure, E)
    rhs = F.einsum("ai,bj,abk->ijk", E, E, L.structure)
    bad = np.argwhere((lhs != rhs).any(axis=-1))
    return (int(bad[0][0]), int(bad[0][1])) if bad.size else None


def check_endomorphism(L: HomLieSuperalgebra, endo) -> np.ndarray:
    E = np.asarray(endo, dtype=np.int64)
    if E.shape != (L.n, L.n):
        raise NotEndomorphism(f"endomorphism has shape {E.shape}, expected {(L.n, L.n)}")
    if E.size and (E.min() < 0 or E.max() >= L.field.q):
        raise FieldMismatch("endomorphism entries outside the field")
    bad = is_even_map(L.parities, L.parities, E)
    if bad is not None:
        raise NotEndomorphism(f"map is not even: entry ({bad[0] + 1},{bad[1] + 1}) crosses parity")
    bad = endomorphism_defect(L, E)
    if bad is not None:
        raise NotEndomorphism(f"map does not preserve the bracket of ({L.names[bad[0]]},{L.names[bad[1]]})")
    return E


def twist_structure(L: HomLieSuperalgebra, endo) -> np.ndarray:
    """c'[i, j, :] = endo applied to c[i, j, :]."""
    return L.field.einsum("ijl,kl->ijk", L.structure, np.asarray(endo, dtype=np.int64))


def yau_twist(L: HomLieSuperalgebra, endo, P: PMap) -> tuple[HomLieSuperalgebra, PMap]:
    """(L, endo∘[,], endo) with the p-map restricted to the new fixed even subspace.

    Requires endo(P(x)) = P(x) for x in the new L^0.  The result is verified;
    a twisted p-map failing the axioms raises :class:`TwistNotRestricted`.
    """
    if not L.is_untwisted:
        raise NotUntwisted("the Yau twist takes an algebra with alpha = id")
    if P.algebra != L or P.base.dim != L.n:
        raise PMapMismatch("p-map must be defined on the whole input algebra")
    E = check_endomorphism(L, endo)
    F = L.field
    T = HomLieSuperalgebra(F, L.parities, twist_structure(L, E), E, L.names)
    new0 = fixed_even_subspace(T)
    if new0.dim:
        test = new0.basis if new0.size() > max_exhaustive() else new0.enumerate()
        vals = pmap_eval_batch(P, test)
        moved = np.flatnonzero((F.matmul(vals, E.T) != vals).any(axis=1))
        if moved.size:
            x = test[moved[0]]
            raise PMapEscapesFixedSpace(
                f"endo does not fix the p-th power of the fixed element [{F.format_vector(x)}]"
            )
        images = pmap_eval_batch(P, new0.basis)
    else:
        images = np.zeros((0, L.n), dtype=np.int64)
    Q = PMap(T, images)
    rep = verify_axioms(T)
    rep.extend(verify_pmap(T, Q))
    if not rep.passed:
        raise TwistNotRestricted("twisted structure fails the restricted Hom axioms", rep)
    return T, Q


# ---------------------------------------------------------- basis changes
def change_basis(L: HomLieSuperalgebra, B, P: PMap | None = None) -> tuple[HomLieSuperalgebra, PMap | None]:
    """Rewrite L in the basis given by the columns of B (an even invertible matrix).

    The new algebra is isomorphic to L via x' -> B x'.
    """
    F = L.field
    B = np.asarray(B, dtype=np.int64)
    if B.shape != (L.n, L.n):
        raise ValueError("basis change must be square")
    if is_even_map(L.parities, L.parities, B) is not None:
        raise NotGraded("basis change must preserve parity")
    Binv = inverse(F, B)
    if Binv is None:
        raise ValueError("basis change is singular")
    T = F.einsum("ai,bj,abl->ijl", B, B, L.structure)
    c = F.einsum("ijl,kl->ijk", T, Binv)
    a = F.matmul(F.matmul(Binv, L.alpha), B)
    M = HomLieSuperalgebra(F, L.parities, c, a)
    if P is None:
        return M, None
    dom = fixed_even_subspace(M)
    if dom.dim == 0:
        return M, PMap(M, np.zeros((0, L.n), dtype=np.int64))
    X = F.matmul(dom.basis, B.T)
    if not P.domain.contains_all(X):
        raise NotInL0("basis change does not carry L^0 onto L^0")
    images = F.matmul(pmap_eval_batch(P, X), Binv.T)
    return M, PMap(M, images)
