"""Morphisms, restricted morphisms, graphs and transport of p-maps."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import HomLieSuperalgebra, as_subspace, fixed_even_subspace, is_subalgebra, label
from .constructions import direct_sum, direct_sum_pmap, yau_twist
from .errors import (
    DimensionMismatch,
    FieldMismatch,
    NotInjective,
    PMapMismatch,
    PreconditionFailed,
    TargetOutsideImage,
    TheoremViolation,
)
from .linalg import Subspace, all_coordinates, kernel, rank, solve
from .report import VerificationReport
from .restriction import (
    Mode,
    PMap,
    _plan,
    _vec_text,
    pmap_eval_batch,
    pmap_verified,
    verify_pmap,
)


@dataclass(frozen=True, eq=False)
class Morphism:
    """Linear map ``domain -> codomain``; column j is the image of e_j."""

    domain: HomLieSuperalgebra
    codomain: HomLieSuperalgebra
    matrix: np.ndarray

    def __post_init__(self) -> None:
        if self.domain.field != self.codomain.field:
            raise FieldMismatch("morphism between algebras over different fields")
        M = np.array(self.matrix, dtype=np.int64, copy=True)
        if M.shape != (self.codomain.n, self.domain.n):
            raise DimensionMismatch(f"morphism matrix has shape {M.shape}, expected {(self.codomain.n, self.domain.n)}")
        if M.size and (M.min() < 0 or M.max() >= self.domain.field.q):
            raise FieldMismatch("morphism entries outside the field")
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)

    def __call__(self, X) -> np.ndarray:
        """Apply along the last axis."""
        return self.domain.field.matmul(np.asarray(X, dtype=np.int64), self.matrix.T)

    def compose(self, other: "Morphism") -> "Morphism":
        """self ∘ other."""
        if other.codomain != self.domain:
            raise DimensionMismatch("morphisms are not composable")
        return Morphism(other.domain, self.codomain, self.domain.field.matmul(self.matrix, other.matrix))

    @property
    def is_injective(self) -> bool:
        return rank(self.domain.field, self.matrix) == self.domain.n


def identity_morphism(L: HomLieSuperalgebra) -> Morphism:
    return Morphism(L, L, np.eye(L.n, dtype=np.int64))


def verify_morphism(phi: Morphism) -> VerificationReport:
    """Evenness, bracket preservation on basis pairs, and phi∘alpha = beta∘phi."""
    L, G, M = phi.domain, phi.codomain, phi.matrix
    F = L.field
    rep = VerificationReport()
    cross = np.not_equal.outer(np.asarray(G.parities), np.asarray(L.parities)) & (M != 0)
    bad = np.argwhere(cross)
    rep.add("even", bad.size == 0, tuple(int(v) for v in bad[0]) if bad.size else None,
            f"{L.names[bad[0][1]]} -> coefficient on {G.names[bad[0][0]]}" if bad.size else "")
    lhs = F.einsum("ijl,kl->ijk", L.structure, M)
    rhs = F.einsum("ai,bj,abk->ijk", M, M, G.structure)
    bad = np.argwhere((lhs != rhs).any(axis=-1))
    rep.add("bracket-preserving", bad.size == 0, tuple(int(v) for v in bad[0]) if bad.size else None,
            label(L, bad[0]) if bad.size else "", f"{L.n * L.n} basis pairs")
    diff = F.matmul(M, L.alpha) != F.matmul(G.alpha, M)
    bad = np.argwhere(diff)
    rep.add("intertwining", bad.size == 0, (int(bad[0][1]),) if bad.size else None,
            L.names[bad[0][1]] if bad.size else "", "phi alpha = beta phi")
    return rep


def verify_restricted_morphism(phi: Morphism, PL: PMap, PG: PMap, mode: Mode = "auto") -> VerificationReport:
    """Morphism checks plus phi(P_L(x)) = P_G(phi(x)) on L^0.

    The restricted check is SKIPPED when phi is not a morphism.
    """
    L, G = phi.domain, phi.codomain
    if PL.algebra != L or PG.algebra != G or PL.base.dim != L.n or PG.base.dim != G.n:
        raise PMapMismatch("p-maps must live on the whole domain and codomain")
    if not (pmap_verified(PL) and pmap_verified(PG)):
        raise PMapMismatch("restricted-morphism check needs verified p-maps")
    rep = verify_morphism(phi)
    if not rep.passed:
        rep.add("restricted", None, detail="skipped: not a morphism")
        return rep
    F, L0, G0 = L.field, PL.domain, PG.domain
    if not G0.contains_all(phi(L0.basis)):
        raise TheoremViolation("morphism does not carry L^0 into the codomain's L^0")
    m = L0.dim
    exhaustive, sampler = _plan(mode, F.q**m, salt=6)
    C = all_coordinates(F, m) if exhaustive else F.random(sampler.rng(6), (sampler.count, m))
    C = np.concatenate([np.eye(m, dtype=np.int64), C]) if m else C
    X = L0.combine(C)
    lhs = phi(pmap_eval_batch(PL, X))
    rhs = pmap_eval_batch(PG, phi(X))
    hit = np.flatnonzero((lhs != rhs).any(axis=1))
    rep.add("restricted", hit.size == 0, (tuple(X[hit[0]]),) if hit.size else None,
            _vec_text(F, X[hit[0]]) if hit.size else "",
            f"basis and {'all' if exhaustive else 'sampled'} {X.shape[0] - m} elements")
    return rep


# ----------------------------------------------------------------- graph
def graph(phi: Morphism) -> Subspace:
    """Span of (b, phi(b)) over the domain basis, inside L ⊕ G."""
    L, G = phi.domain, phi.codomain
    rows = np.concatenate([np.eye(L.n, dtype=np.int64), phi.matrix.T], axis=1)
    S = direct_sum(L, G)
    return Subspace.span(L.field, S.space, list(rows))


def graph_p_subalgebra(phi: Morphism, PL: PMap, PG: PMap, mode: Mode = "auto") -> VerificationReport:
    """G_phi graded, closed under bracket and gamma, and closed under the componentwise p-map."""
    L, G = phi.domain, phi.codomain
    S = direct_sum(L, G)
    H = graph(phi)
    rep = VerificationReport()
    graded = H.is_graded()
    rep.add("graph-graded", graded)
    sub = graded and is_subalgebra(S, H)
    rep.add("graph-subalgebra", sub if graded else None, detail="" if graded else "skipped: not graded")
    if not sub:
        rep.add("graph-p-closed", None, detail="skipped: not a subalgebra")
        return rep
    PS = direct_sum_pmap(PL, PG, S, check=False)
    H0 = H.intersect(PS.domain)
    F = S.field
    exhaustive, sampler = _plan(mode, H0.size(), salt=7)
    if H0.dim == 0:
        X = np.zeros((0, S.n), dtype=np.int64)
    elif exhaustive:
        X = H0.enumerate()
    else:
        X = np.concatenate([H0.basis, H0.combine(F.random(sampler.rng(7), (sampler.count, H0.dim)))])
    vals = pmap_eval_batch(PS, X) if X.shape[0] else X
    ok = np.asarray(H0.contains(vals)) if X.shape[0] else np.zeros(0, dtype=bool)
    hit = np.flatnonzero(~ok)
    rep.add("graph-p-closed", hit.size == 0, (tuple(X[hit[0]]),) if hit.size else None,
            _vec_text(F, X[hit[0]]) if hit.size else "", f"{X.shape[0]} graph elements")
    return rep


def graph_criterion(phi: Morphism, PL: PMap, PG: PMap, mode: Mode = "auto") -> VerificationReport:
    """Restricted morphism versus restricted graph, with the biconditional recorded."""
    a = verify_restricted_morphism(phi, PL, PG, mode)
    b = graph_p_subalgebra(phi, PL, PG, mode)
    rep = VerificationReport()
    rep.extend(a)
    rep.extend(b)
    rep.add("biconditional", a.passed == b.passed,
            detail=f"restricted morphism {'yes' if a.passed else 'no'}, restricted graph {'yes' if b.passed else 'no'}")
    return rep


# -------------------------------------------------------------- transport
def _require_injective_morphism(phi: Morphism) -> None:
    if not phi.is_injective:
        raise NotInjective("morphism has a nontrivial kernel")
    rep = verify_morphism(phi)
    if not rep.passed:
        raise PreconditionFailed("input is not a morphism", rep)


def _base_arg(L: HomLieSuperalgebra, H: Subspace) -> Subspace | None:
    return None if H.dim == L.n else H


def pullback_restricted(phi: Morphism, PC: PMap, C=None) -> tuple[Subspace, PMap]:
    """p-map x -> phi^{-1}(P_C(phi x)) on phi^{-1}(C)."""
    _require_injective_morphism(phi)
    L, G = phi.domain, phi.codomain
    if PC.algebra != G:
        raise PMapMismatch("p-map does not live on the codomain")
    C = PC.base if C is None else as_subspace(G, C)
    if not C.is_subspace_of(PC.base):
        raise PMapMismatch("C is not inside the p-map's base")
    if not is_subalgebra(G, C):
        raise PreconditionFailed("C is not a subalgebra")
    F = L.field
    ann = C.annihilator()
    D = kernel(F, F.matmul(ann, phi.matrix), L.parities) if ann.shape[0] else Subspace.whole(F, L.space)
    D0 = D.intersect(fixed_even_subspace(L))
    images = np.zeros((D0.dim, L.n), dtype=np.int64)
    if D0.dim:
        targets = pmap_eval_batch(PC, phi(D0.basis))
        for j, t in enumerate(targets):
            y = solve(F, phi.matrix, t)
            if y is None or not D.contains(y):
                raise TargetOutsideImage(f"p-th power [{F.format_vector(t)}] has no preimage in phi^-1(C)")
            images[j] = y
    P = PMap(L, images, _base_arg(L, D))
    rep = verify_pmap(L, P)
    if not rep.passed:
        raise TheoremViolation("pulled-back p-map fails verification", rep)
    return D, P


def pushforward_restricted(phi: Morphism, P: PMap) -> tuple[Subspace, PMap]:
    """p-map phi(x) -> phi(P(x)) on the image phi(H), H the base of P."""
    _require_injective_morphism(phi)
    L, G = phi.domain, phi.codomain
    if P.algebra != L:
        raise PMapMismatch("p-map does not live on the domain")
    if not G.is_multiplicative:
        raise PreconditionFailed("codomain is not multiplicative")
    F = L.field
    I = Subspace.span(F, G.space, list(phi(P.base.basis)))
    I0 = I.intersect(fixed_even_subspace(G))
    images = np.zeros((I0.dim, G.n), dtype=np.int64)
    for j, w in enumerate(I0.basis):
        x = solve(F, phi.matrix, w)
        images[j] = phi(pmap_eval_batch(P, x[None]))[0]
    Q = PMap(G, images, _base_arg(G, I))
    rep = verify_pmap(G, Q)
    if not rep.passed:
        raise TheoremViolation("pushed-forward p-map fails verification", rep)
    return I, Q


# -------------------------------------------------------- twisted morphisms
def twisted_morphism_check(f: Morphism, PL: PMap, PG: PMap, endoL, endoG) -> VerificationReport:
    """Twist both sides and check f stays a restricted morphism."""
    F = f.domain.field
    pre = verify_restricted_morphism(f, PL, PG)
    if not pre.passed:
        raise PreconditionFailed("f is not a restricted morphism of the untwisted algebras", pre)
    eL = np.asarray(endoL, dtype=np.int64)
    eG = np.asarray(endoG, dtype=np.int64)
    if not np.array_equal(F.matmul(f.matrix, eL), F.matmul(eG, f.matrix)):
        rep = VerificationReport()
        bad = np.argwhere(F.matmul(f.matrix, eL) != F.matmul(eG, f.matrix))[0]
        rep.add("endo-intertwining", False, (int(bad[1]),), f.domain.names[bad[1]])
        raise PreconditionFailed("f does not intertwine the two endomorphisms", rep)
    TL, QL = yau_twist(f.domain, eL, PL)
    TG, QG = yau_twist(f.codomain, eG, PG)
    return verify_restricted_morphism(Morphism(TL, TG, f.matrix), QL, QG)

