"""p-maps on the fixed even subspace L^0 and everything built on them.

A :class:`PMap` is stored by its values on the canonical echelon basis of
``H^0 = H ∩ L^0`` (``H`` the base subalgebra, usually all of ``L``).  Values
elsewhere follow one fixed rule: peel off the lowest-index basis term ``u`` of
``x = u + r`` and use ``P(x) = frob(c) P(b) + P(r) + sum_i s_i(u, r)``.  The
sum formula for arbitrary pairs is therefore checked by :func:`verify_pmap`,
never assumed.
"""

from __future__ import annotations

import os
import weakref
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Iterator, Union

import numpy as np

from .algebra import (
    HomLieSuperalgebra,
    _check_vector,
    as_subspace,
    center,
    centralizer,
    fixed_even_subspace,
    is_ideal,
    is_subalgebra,
    restrict,
    whole_space,
)
from .errors import (
    BasisMismatch,
    CodomainNotCentral,
    DimensionMismatch,
    FieldMismatch,
    NotASubalgebra,
    NotCentral,
    NotDirectSum,
    NotIdeals,
    NotInL0,
    NotMultiplicative,
    TheoremViolation,
)
from .field import FieldSpec
from .linalg import (
    PolyMatrix,
    Subspace,
    SuperSpace,
    all_coordinates,
    coefficient_extract,
    coordinate_index,
    poly_matrix_power,
    solve,
)
from .report import VerificationReport

DEFAULT_MAX_EXHAUSTIVE = 100_000
DEFAULT_SAMPLES = 1000
CHUNK = 4096


_LIMIT_STACK: list[int] = []


@contextmanager
def exhaustive_limit(limit: int) -> Iterator[None]:
    """Temporarily replace the enumeration threshold (innermost wins)."""
    _LIMIT_STACK.append(int(limit))
    try:
        yield
    finally:
        _LIMIT_STACK.pop()


def max_exhaustive() -> int:
    """Enumeration threshold; ``HLSA_MAX_EXHAUSTIVE`` overrides the default 10^5."""
    if _LIMIT_STACK:
        return _LIMIT_STACK[-1]
    raw = os.environ.get("HLSA_MAX_EXHAUSTIVE")
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_EXHAUSTIVE
    return int(raw)


@dataclass(frozen=True)
class Sampled:
    """Seeded sampling mode for verifiers (PCG64 via ``numpy.random.default_rng``)."""

    seed: int = 0
    count: int = DEFAULT_SAMPLES

    def rng(self, salt: int = 0) -> np.random.Generator:
        return np.random.default_rng([self.seed, salt])


Mode = Union[str, Sampled]


def _plan(mode: Mode, size: int, salt: int) -> tuple[bool, Sampled]:
    """(exhaustive?, sampler) for an enumeration of ``size`` items."""
    if mode == "exhaustive":
        return True, Sampled()
    if isinstance(mode, Sampled):
        return False, mode
    if mode != "auto":
        raise ValueError(f"unknown verification mode {mode!r}")
    return size <= max_exhaustive(), Sampled(seed=salt)


# -------------------------------------------------------------- s_i terms
def _require_multiplicative(L: HomLieSuperalgebra) -> None:
    if not L.is_multiplicative:
        raise NotMultiplicative("the algebra is not multiplicative")


def ad_poly_orbit(L: HomLieSuperalgebra, X, Y) -> np.ndarray:
    """lambda-coefficients of ad_alpha(lambda x + y)^(p-1)(x), rows batched.

    Returns shape (N, p, n); index ``d`` on axis 1 is the lambda^d coefficient.
    Iterated application to the vector is equivalent to powering the
    polynomial matrix first (see :func:`s_coefficients`) and much cheaper.
    """
    F, p = L.field, L.field.p
    X = np.asarray(X, dtype=np.int64).reshape(-1, L.n)
    Y = np.asarray(Y, dtype=np.int64).reshape(-1, L.n)
    N, n = X.shape
    TX = F.einsum("ni,ijk->njk", X, L.structure)
    TY = F.einsum("ni,ijk->njk", Y, L.structure)
    V = np.zeros((N, p, n), dtype=np.int64)
    V[:, 0] = X
    for step in range(p - 1):
        AV = L.apply_alpha(V[:, : step + 1])
        new = np.zeros_like(V)
        new[:, : step + 1] = F.matmul(AV, TY)
        new[:, 1 : step + 2] = F.add(new[:, 1 : step + 2], F.matmul(AV, TX))
        V = new
    return V


def s_terms(L: HomLieSuperalgebra, X, Y) -> np.ndarray:
    """(s_1, ..., s_{p-1}) for each row pair; shape (N, p-1, n)."""
    F, p = L.field, L.field.p
    V = ad_poly_orbit(L, X, Y)
    inv = F.inv(np.arange(1, p, dtype=np.int64) % p)
    return F.mul(inv[None, :, None], V[:, : p - 1])


def jacobson_sum(L: HomLieSuperalgebra, X, Y) -> np.ndarray:
    """sum_i s_i(x, y) per row pair; shape (N, n)."""
    return L.field.sum(s_terms(L, X, Y), axis=1)


def s_coefficients(L: HomLieSuperalgebra, x, y) -> list[np.ndarray]:
    """[s_1(x, y), ..., s_{p-1}(x, y)] via the polynomial matrix ad_alpha(lambda x + y)^(p-1)."""
    _require_multiplicative(L)
    x = _check_vector(L, x)
    y = _check_vector(L, y)
    L0 = fixed_even_subspace(L)
    if not (L0.contains(x) and L0.contains(y)):
        raise NotInL0("s_coefficients needs both arguments in L^0")
    F, p = L.field, L.field.p
    ads = L.ad_alpha_matrices(np.stack([x, y]))
    M = PolyMatrix.linear(F, ads[0], ads[1])
    orbit = poly_matrix_power(M, p - 1).apply(x)
    return [F.mul(F.inv(i % p), coefficient_extract(orbit, i - 1)) for i in range(1, p)]


# ------------------------------------------------------------------ p-maps
def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=np.int64, copy=True)
    a.setflags(write=False)
    return a


class PMap:
    """Candidate p-map on ``H^0``, stored by images of the canonical basis of ``H^0``."""

    def __init__(self, algebra: HomLieSuperalgebra, images, base: Subspace | None = None) -> None:
        self.algebra = algebra
        self.base = whole_space(algebra) if base is None else as_subspace(algebra, base)
        L0 = fixed_even_subspace(algebra)
        self.domain = L0 if base is None else self.base.intersect(L0)
        imgs = np.asarray(images, dtype=np.int64).reshape(self.domain.dim, algebra.n)
        if imgs.size and (imgs.min() < 0 or imgs.max() >= algebra.field.q):
            raise FieldMismatch("image entries outside the field")
        if not self.domain.contains_all(imgs):
            raise NotInL0("p-map images must lie in the fixed even subspace of the base")
        self.images = _frozen(imgs)

    @classmethod
    def zero(cls, algebra: HomLieSuperalgebra, base: Subspace | None = None) -> "PMap":
        dom = fixed_even_subspace(algebra) if base is None else as_subspace(algebra, base).intersect(fixed_even_subspace(algebra))
        return cls(algebra, np.zeros((dom.dim, algebra.n), dtype=np.int64), base)

    @classmethod
    def from_pairs(cls, algebra: HomLieSuperalgebra, X, Y, base: Subspace | None = None) -> "PMap":
        """From values ``x_i -> y_i`` where the ``x_i`` span the domain.

        The first maximal independent prefix of the ``x_i`` is used as an
        evaluation basis; remaining pairs must agree with the induced map.
        """
        X = np.asarray(X, dtype=np.int64).reshape(-1, algebra.n)
        Y = np.asarray(Y, dtype=np.int64).reshape(-1, algebra.n)
        probe = cls.zero(algebra, base)
        dom, F = probe.domain, algebra.field
        if not dom.contains_all(X):
            raise NotInL0("p-map arguments must lie in the fixed even subspace")
        chosen: list[int] = []
        for i in range(X.shape[0]):
            trial = Subspace.span(F, algebra.space, [X[j] for j in chosen + [i]])
            if trial.dim > len(chosen):
                chosen.append(i)
        if len(chosen) != dom.dim:
            raise BasisMismatch(f"p-map arguments span dimension {len(chosen)}, L^0 has dimension {dom.dim}")
        basis, images = X[chosen], Y[chosen]
        # coordinates of the canonical basis in the chosen basis
        coords_of = lambda V: np.stack([solve(F, basis.T, v) for v in V]) if len(V) else np.zeros((0, len(chosen)), dtype=np.int64)  # noqa: E731
        P = cls(algebra, _evaluate(algebra, basis, images, coords_of(dom.basis)), base)
        rest = [i for i in range(X.shape[0]) if i not in chosen]
        if rest and not np.array_equal(pmap_eval_batch(P, X[rest]), Y[rest]):
            raise BasisMismatch("redundant p-map pairs are inconsistent with the basis values")
        return P

    @property
    def field(self) -> FieldSpec:
        return self.algebra.field

    def __eq__(self, other) -> bool:
        if not isinstance(other, PMap):
            return NotImplemented
        return (
            self.algebra == other.algebra
            and self.base == other.base
            and np.array_equal(self.images, other.images)
        )

    def __hash__(self) -> int:
        return hash((self.algebra, self.base, self.images.tobytes()))

    def __repr__(self) -> str:
        F = self.field
        pairs = ", ".join(f"[{F.format_vector(b)}]->[{F.format_vector(y)}]" for b, y in zip(self.domain.basis, self.images))
        return f"PMap({pairs})"

    def with_images(self, images) -> "PMap":
        return PMap(self.algebra, images, self.base if self.base.dim != self.algebra.n else None)


def _evaluate(L: HomLieSuperalgebra, basis, images, coords) -> np.ndarray:
    """Evaluation rule over an ordered basis, batched over coordinate rows."""
    F = L.field
    coords = np.asarray(coords, dtype=np.int64)
    N, m = coords.shape
    out = np.zeros((N, L.n), dtype=np.int64)
    for start in range(0, N, CHUNK):
        C = coords[start : start + CHUNK]
        acc = np.zeros((C.shape[0], L.n), dtype=np.int64)
        suffix = np.zeros_like(acc)
        for t in range(m - 1, -1, -1):
            u = F.mul(C[:, t, None], basis[t][None, :])
            acc = F.add(acc, F.mul(F.frob(C[:, t])[:, None], images[t][None, :]))
            if suffix.any() and u.any():
                acc = F.add(acc, jacobson_sum(L, u, suffix))
            suffix = F.add(suffix, u)
        out[start : start + CHUNK] = acc
    return out


def pmap_eval_batch(P: PMap, X) -> np.ndarray:
    X = np.asarray(X, dtype=np.int64).reshape(-1, P.algebra.n)
    if not P.domain.contains_all(X):
        raise NotInL0("argument outside the p-map's domain")
    return _evaluate(P.algebra, P.domain.basis, P.images, P.domain.coords(X))


def pmap_eval(P: PMap, x) -> np.ndarray:
    x = _check_vector(P.algebra, x)
    return pmap_eval_batch(P, x[None])[0]


def _ad_power_apply(L: HomLieSuperalgebra, X, tests, e: int) -> np.ndarray:
    """(ad_alpha x)^e applied to each test vector; shape (N, r, n)."""
    X = np.asarray(X, dtype=np.int64)
    V = np.broadcast_to(tests, (X.shape[0],) + tests.shape).copy()
    T = L.field.einsum("ni,ijk->njk", X, L.structure)
    for _ in range(e):
        V = L.field.matmul(L.apply_alpha(V), T)
    return V


def _axiom_i_defect(L: HomLieSuperalgebra, P: PMap, X, PX) -> int | None:
    """Index of the first x with (ad_alpha x)^p != ad_alpha(P(x)) on the base."""
    tests = np.asarray(P.base.basis)
    for start in range(0, X.shape[0], CHUNK):
        xs, px = X[start : start + CHUNK], PX[start : start + CHUNK]
        lhs = _ad_power_apply(L, xs, tests, L.field.p)
        rhs = _ad_power_apply(L, px, tests, 1)
        bad = np.flatnonzero((lhs != rhs).any(axis=(1, 2)))
        if bad.size:
            return start + int(bad[0])
    return None


def _vec_text(F: FieldSpec, v) -> str:
    return "[" + F.format_vector(v) + "]"


def _pair_iter(size: int, exhaustive: bool, sampler: Sampled, m: int, F: FieldSpec) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Blocks of coordinate pairs (x, y)."""
    if exhaustive:
        allc = all_coordinates(F, m)
        rows_per = max(1, CHUNK // max(1, size))
        for i0 in range(0, size, rows_per):
            xi = np.repeat(allc[i0 : i0 + rows_per], size, axis=0)
            yi = np.tile(allc, (min(rows_per, size - i0), 1))
            yield xi, yi
    else:
        rng = sampler.rng(3)
        cx = F.random(rng, (sampler.count, m))
        cy = F.random(rng, (sampler.count, m))
        for s in range(0, sampler.count, CHUNK):
            yield cx[s : s + CHUNK], cy[s : s + CHUNK]


def verify_pmap(L: HomLieSuperalgebra, P: PMap, mode: Mode = "auto") -> VerificationReport:
    """Check the three p-map axioms on the domain of ``P``.

    ``auto`` enumerates an axiom's whole test set when it has at most
    ``max_exhaustive()`` items (elements for (i), element-scalar pairs for
    (ii), element pairs for (iii)) and samples otherwise; ``"exhaustive"``
    always enumerates.  Axiom (i) is also checked on every basis vector.
    """
    if P.algebra != L:
        raise BasisMismatch("p-map belongs to a different algebra")
    _require_multiplicative(L)
    F, dom, m = L.field, P.domain, P.domain.dim
    rep = VerificationReport()
    size = F.q**m
    T = max_exhaustive()

    # element set shared by (i) and the lookups of (ii)/(iii)
    elem_all, sampler = _plan(mode, size, salt=1)
    if elem_all:
        C = all_coordinates(F, m)
    else:
        C = F.random(sampler.rng(1), (sampler.count, m))
    X = dom.combine(C)
    PX = _evaluate(L, dom.basis, P.images, C)
    table = PX if elem_all else None

    def lookup(coords) -> np.ndarray:
        if table is not None:
            return table[coordinate_index(F, coords)]
        return _evaluate(L, dom.basis, P.images, coords)

    # (i) on the basis, then on the element set
    bad = _axiom_i_defect(L, P, dom.basis, np.asarray(P.images)) if m else None
    rep.add("pmap-i-basis", bad is None, (bad,) if bad is not None else None,
            _vec_text(F, dom.basis[bad]) if bad is not None else "", f"{m} basis vectors")
    bad = _axiom_i_defect(L, P, X, PX) if m else None
    rep.add("pmap-i", bad is None, (tuple(X[bad]),) if bad is not None else None,
            _vec_text(F, X[bad]) if bad is not None else "",
            f"{'all' if elem_all else 'sampled'} {X.shape[0]} elements")

    # (ii) for scalars k: P(k x) = k^p P(x)
    scalars = F.elements() if F.q <= 169 else F.random(np.random.default_rng([2, F.q]), 169)
    ii_all, ii_sampler = _plan(mode, size * len(scalars), salt=2)
    if ii_all:
        Cii = all_coordinates(F, m)
    elif m:
        n_el = min(ii_sampler.count, max(32, 10 * ii_sampler.count // len(scalars)), size)
        Cii = F.random(ii_sampler.rng(2), (n_el, m))
    else:
        Cii = np.zeros((1, 0), dtype=np.int64)
    Cii = np.concatenate([np.eye(m, dtype=np.int64), Cii]) if m else Cii
    witness = None
    hit = np.zeros((0, 2), dtype=np.int64)
    if m:
        base_vals = lookup(Cii)
        KC = F.mul(np.asarray(scalars)[:, None, None], Cii[None, :, :])
        lhs = lookup(KC.reshape(-1, m)).reshape(len(scalars), Cii.shape[0], L.n)
        rhs = F.mul(F.frob(np.asarray(scalars))[:, None, None], base_vals[None])
        hit = np.argwhere((lhs != rhs).any(axis=-1))
    if hit.size:
        a, b = hit[0]
        witness = (int(scalars[a]), tuple(dom.combine(Cii[b])))
    rep.add("pmap-ii", witness is None, witness,
            f"k={F.format(witness[0])} x={_vec_text(F, witness[1])}" if witness else "",
            f"{len(scalars)} scalars x {Cii.shape[0]} elements")

    # (iii) P(x+y) = P(x) + P(y) + sum s_i(x, y)
    iii_all, iii_sampler = _plan(mode, size * size, salt=3)
    witness = None
    count = 0
    if m:
        for cx, cy in _pair_iter(size, iii_all, iii_sampler, m, F):
            count += cx.shape[0]
            xs, ys = dom.combine(cx), dom.combine(cy)
            lhs = lookup(F.add(cx, cy))
            rhs = F.add(F.add(lookup(cx), lookup(cy)), jacobson_sum(L, xs, ys))
            hit = np.flatnonzero((lhs != rhs).any(axis=1))
            if hit.size:
                witness = (tuple(xs[hit[0]]), tuple(ys[hit[0]]))
                break
    rep.add("pmap-iii", witness is None, witness,
            f"x={_vec_text(F, witness[0])} y={_vec_text(F, witness[1])}" if witness else "",
            f"{'all' if iii_all else 'sampled'} {count} pairs")
    return rep


_VERIFIED: "weakref.WeakKeyDictionary[PMap, bool]" = weakref.WeakKeyDictionary()


def pmap_verified(P: PMap) -> bool:
    """Cached outcome of ``verify_pmap(P.algebra, P)`` in auto mode."""
    hit = _VERIFIED.get(P)
    if hit is None:
        hit = P.algebra.is_multiplicative and verify_pmap(P.algebra, P).passed
        _VERIFIED[P] = hit
    return hit


# ------------------------------------------------------ p-semilinear maps
@dataclass(frozen=True, eq=False)
class SemilinearMap:
    """f(sum c_j b_j) = sum frob(c_j) f(b_j) over the canonical basis ``b_j`` of ``domain``."""

    algebra: HomLieSuperalgebra
    domain: Subspace
    images: np.ndarray
    codomain: Subspace
    report: VerificationReport | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        imgs = np.asarray(self.images, dtype=np.int64).reshape(self.domain.dim, self.algebra.n)
        if not self.codomain.contains_all(imgs):
            raise CodomainNotCentral("semilinear map images leave the declared codomain")
        object.__setattr__(self, "images", _frozen(imgs))

    @classmethod
    def from_pairs(cls, algebra: HomLieSuperalgebra, domain: Subspace, X, Y, codomain: Subspace) -> "SemilinearMap":
        """From values ``x_i -> y_i`` with the ``x_i`` spanning ``domain``; extra pairs must be consistent."""
        F = algebra.field
        X = np.asarray(X, dtype=np.int64).reshape(-1, algebra.n)
        Y = np.asarray(Y, dtype=np.int64).reshape(-1, algebra.n)
        if not domain.contains_all(X):
            raise NotInL0("semilinear map arguments must lie in the domain")
        chosen: list[int] = []
        for i in range(X.shape[0]):
            if Subspace.span(F, algebra.space, [X[j] for j in chosen + [i]]).dim > len(chosen):
                chosen.append(i)
        if len(chosen) != domain.dim:
            raise BasisMismatch(f"arguments span dimension {len(chosen)}, domain has dimension {domain.dim}")
        # x_i in canonical coordinates; invert to express each b_j in the chosen basis
        K = domain.coords(X[chosen])
        images = np.zeros((domain.dim, algebra.n), dtype=np.int64)
        for j in range(domain.dim):
            a = solve(F, K.T, np.eye(domain.dim, dtype=np.int64)[j])
            images[j] = F.matmul(F.frob(a), Y[chosen]) if domain.dim else images[j]
        f = cls(algebra, domain, images, codomain)
        rest = [i for i in range(X.shape[0]) if i not in chosen]
        if rest and not np.array_equal(f.eval_batch(X[rest]), Y[rest]):
            raise BasisMismatch("redundant pairs are inconsistent with p-semilinearity")
        return f

    def __call__(self, x) -> np.ndarray:
        return self.eval_batch(np.asarray(x)[None])[0]

    def eval_batch(self, X) -> np.ndarray:
        F = self.algebra.field
        X = np.asarray(X, dtype=np.int64)
        if not self.domain.contains_all(X):
            raise NotInL0("argument outside the semilinear map's domain")
        C = F.frob(self.domain.coords(X))
        if self.domain.dim == 0:
            return np.zeros_like(X)
        return F.matmul(C, self.images)

    def is_zero(self) -> bool:
        return not self.images.any()


def central_codomain(L: HomLieSuperalgebra, P: PMap) -> Subspace:
    """C_L(H) for the base H of ``P``."""
    return centralizer(L, P.base)


def shift_pmap(L: HomLieSuperalgebra, P: PMap, f: SemilinearMap) -> PMap:
    """The p-map b_j -> P(b_j) + f(b_j) for a p-semilinear f with central values."""
    if f.domain != P.domain:
        raise BasisMismatch("semilinear map and p-map have different domain bases")
    C = central_codomain(L, P)
    if not f.codomain.is_subspace_of(C) or not C.contains_all(f.images):
        raise CodomainNotCentral("shift values must lie in the alpha-centralizer of the base")
    if not P.domain.contains_all(f.images):
        raise NotInL0("shift values must lie in the fixed even subspace")
    F = L.field
    Q = PMap(L, F.add(P.images, f.images), P.base if P.base.dim != L.n else None)
    rep = verify_pmap(L, Q)
    if not rep.passed:
        raise TheoremViolation("shifted map fails the p-map axioms", rep)
    return Q


def pmap_difference(L: HomLieSuperalgebra, P1: PMap, P2: PMap, mode: Mode = "auto") -> SemilinearMap:
    """f = P1 - P2 on the basis, checked central and p-semilinear on elements."""
    if P1.domain != P2.domain or P1.base != P2.base:
        raise BasisMismatch("p-maps live on different domains")
    F = L.field
    diff = F.sub(P1.images, P2.images)
    C = central_codomain(L, P1)
    if not C.contains_all(diff):
        raise NotCentral("difference of the two maps is not central; one is not a p-map")
    dom, m = P1.domain, P1.domain.dim
    f = SemilinearMap(L, dom, diff, C)
    exhaustive, sampler = _plan(mode, F.q**m, salt=4)
    Cs = all_coordinates(F, m) if exhaustive else F.random(sampler.rng(4), (sampler.count, m))
    X = dom.combine(Cs)
    lhs = F.sub(_evaluate(L, dom.basis, P1.images, Cs), _evaluate(L, dom.basis, P2.images, Cs))
    rhs = f.eval_batch(X)
    hit = np.flatnonzero((lhs != rhs).any(axis=1))
    rep = VerificationReport()
    rep.add("difference-central", True, detail=f"values in a {C.dim}-dimensional centralizer")
    rep.add("difference-semilinear", hit.size == 0, (tuple(X[hit[0]]),) if hit.size else None,
            _vec_text(F, X[hit[0]]) if hit.size else "", f"{X.shape[0]} elements")
    if not rep.passed:
        raise TheoremViolation("difference of p-maps is not p-semilinear", rep)
    return SemilinearMap(L, dom, diff, C, report=rep)


def central_part(L: HomLieSuperalgebra, P: PMap) -> Subspace:
    """Elements of the domain that are alpha-central in the base."""
    return central_codomain(L, P).intersect(P.domain)


def normalize_pmap_on_center(L: HomLieSuperalgebra, P: PMap, mode: Mode = "auto") -> PMap:
    """A p-map vanishing on the central part of L^0 (differs from P by a central shift)."""
    F = L.field
    dom, m = P.domain, P.domain.dim
    Z = central_part(L, P)
    if Z.dim == 0:
        return P
    # adapted basis of the domain: Z's basis then the echelon complement
    zc = Subspace.span(F, SuperSpace((0,) * m), list(dom.coords(Z.basis)))
    comp = [j for j in range(m) if j not in zc.pivots]
    new_basis_coords = np.concatenate([zc.basis, np.eye(m, dtype=np.int64)[comp]]) if comp else np.array(zc.basis)
    z_vecs = dom.combine(zc.basis)
    f_new = np.zeros((m, L.n), dtype=np.int64)
    f_new[: Z.dim] = pmap_eval_batch(P, z_vecs)
    # canonical basis b_j in the adapted basis, then semilinear transfer
    a = np.stack([solve(F, new_basis_coords.T, np.eye(m, dtype=np.int64)[j]) for j in range(m)])
    f_canon = F.matmul(F.frob(a), f_new)
    Q = P.with_images(F.sub(P.images, f_canon))
    exhaustive, sampler = _plan(mode, F.q**Z.dim, salt=5)
    Cz = all_coordinates(F, Z.dim) if exhaustive else F.random(sampler.rng(5), (sampler.count, Z.dim))
    vals = pmap_eval_batch(Q, Z.combine(Cz))
    if vals.any():
        raise TheoremViolation("normalized map does not vanish on the central part")
    rep = verify_pmap(L, Q, mode)
    if not rep.passed:
        raise TheoremViolation("normalized map fails the p-map axioms", rep)
    return Q


# --------------------------------------------------------- restrictability
def _matrix_power(F: FieldSpec, M, e: int) -> np.ndarray:
    M = np.asarray(M, dtype=np.int64)
    R = np.broadcast_to(np.eye(M.shape[-1], dtype=np.int64), M.shape).copy()
    base = M.copy()
    while e:
        if e & 1:
            R = F.matmul(R, base)
        base = F.matmul(base, base)
        e >>= 1
    return R


@dataclass(frozen=True, eq=False)
class RestrictabilityCertificate:
    restrictable: bool
    pmap: PMap | None = None
    witness_index: int | None = None
    witness_element: np.ndarray | None = None
    rhs: np.ndarray | None = None
    report: VerificationReport | None = None

    def describe(self, L: HomLieSuperalgebra) -> str:
        F = L.field
        if self.restrictable:
            return "restrictable; " + repr(self.pmap)
        where = f"L^0 basis vector {self.witness_index + 1}" if self.witness_index is not None else "element"
        return (
            f"not restrictable: (ad_alpha x)^p is not in ad_alpha L^0 for {where} "
            f"x={_vec_text(F, self.witness_element)}"
        )


def _ad_system(L: HomLieSuperalgebra) -> tuple[Subspace, np.ndarray, np.ndarray]:
    L0 = fixed_even_subspace(L)
    ads = L.ad_alpha_matrices(L0.basis) if L0.dim else np.zeros((0, L.n, L.n), dtype=np.int64)
    A = ads.reshape(L0.dim, L.n * L.n).T
    return L0, ads, A


def restrictability_certificate(L: HomLieSuperalgebra, mode: Mode = "auto") -> RestrictabilityCertificate:
    """Solve ad_alpha(y_j) = (ad_alpha b_j)^p for each basis vector b_j of L^0.

    All solvable: the p-map b_j -> y_j (echelon particular solutions), verified.
    Otherwise the first unsolvable basis index is the witness.
    """
    _require_multiplicative(L)
    F, p = L.field, L.field.p
    L0, ads, A = _ad_system(L)
    m = L0.dim
    powers = _matrix_power(F, ads, p) if m else ads
    ys = []
    for j in range(m):
        rhs = powers[j].reshape(-1)
        y = solve(F, A, rhs)
        if y is None:
            return RestrictabilityCertificate(False, witness_index=j, witness_element=np.array(L0.basis[j]), rhs=powers[j])
        ys.append(y)
    if m and F.q**m <= max_exhaustive():
        span = Subspace.span(F, SuperSpace((0,) * (L.n * L.n)), list(A.T))
        X = L0.enumerate()
        for start in range(0, X.shape[0], CHUNK):
            xs = X[start : start + CHUNK]
            pw = _matrix_power(F, L.ad_alpha_matrices(xs), p).reshape(xs.shape[0], -1)
            bad = np.flatnonzero(~np.asarray(span.contains(pw)))
            if bad.size:
                x = xs[bad[0]]
                return RestrictabilityCertificate(False, witness_element=x, rhs=pw[bad[0]].reshape(L.n, L.n))
    images = L0.combine(np.array(ys).reshape(m, m)) if m else np.zeros((0, L.n), dtype=np.int64)
    P = PMap(L, images)
    rep = verify_pmap(L, P, mode)
    if not rep.passed:
        raise TheoremViolation("solver p-map fails verification although every (ad x)^p is inner", rep)
    return RestrictabilityCertificate(True, pmap=P, report=rep)


def certificate_is_sound(L: HomLieSuperalgebra, cert: RestrictabilityCertificate) -> bool:
    """Re-derive the certificate's claim independently of how it was produced."""
    F, p = L.field, L.field.p
    if cert.restrictable:
        return verify_pmap(L, cert.pmap).passed
    _, _, A = _ad_system(L)
    x = cert.witness_element
    rhs = _matrix_power(F, L.ad_alpha_matrices(x[None]), p)[0].reshape(-1)
    return solve(F, A, rhs) is None and np.array_equal(rhs, np.asarray(cert.rhs).reshape(-1))


# ---------------------------------------------------------- sub-structures
def is_p_subalgebra(L: HomLieSuperalgebra, P: PMap, H) -> bool:
    """True iff P(b) lies in H^0 for each canonical basis vector b of H^0."""
    H = as_subspace(L, H)
    if not is_subalgebra(L, H):
        raise NotASubalgebra("H is not a Hom-Lie subsuperalgebra")
    H0 = H.intersect(P.domain)
    if H0.dim == 0:
        return True
    on_basis = H0.contains_all(pmap_eval_batch(P, H0.basis))
    if H0.size() <= max_exhaustive():
        everywhere = H0.contains_all(pmap_eval_batch(P, H0.enumerate()))
        if everywhere != on_basis:
            raise TheoremViolation("basis criterion for p-subalgebras disagrees with enumeration")
    return on_basis


def restrict_pmap(P: PMap, H) -> PMap:
    """P as a p-map on the p-subalgebra H (same host algebra)."""
    L = P.algebra
    H = as_subspace(L, H)
    dom = H.intersect(P.domain)
    return PMap(L, pmap_eval_batch(P, dom.basis) if dom.dim else np.zeros((0, L.n), dtype=np.int64), H)


def ideal_decomposition_check(L: HomLieSuperalgebra, U, W) -> VerificationReport:
    """Restrictability of L versus its ideal summands U and W."""
    U = as_subspace(L, U)
    W = as_subspace(L, W)
    if not (is_ideal(L, U) and is_ideal(L, W)):
        raise NotIdeals("U and W must both be Hom-Lie ideals")
    if U.dim + W.dim != L.n or U.intersect(W).dim != 0:
        raise NotDirectSum("L is not the direct sum of U and W")
    rep = VerificationReport()
    rep.add("direct-sum", True, detail=f"dim U = {U.dim}, dim W = {W.dim}")
    certs = {}
    for name, alg in (("L", L), ("U", restrict(L, U)), ("W", restrict(L, W))):
        cert = restrictability_certificate(alg)
        certs[name] = cert
        rep.add(f"certificate-{name}", certificate_is_sound(alg, cert),
                detail="restrictable" if cert.restrictable else "not restrictable")
    lhs = certs["L"].restrictable
    rhs = certs["U"].restrictable and certs["W"].restrictable
    rep.add("biconditional", lhs == rhs, detail=f"L {'is' if lhs else 'is not'} restrictable; U and W {'are' if rhs else 'are not both'}")
    if not lhs:
        x = certs["L"].witness_element
        in_u, in_w = bool(U.contains(x)), bool(W.contains(x))
        bad = [s for s, inside in (("U", in_u), ("W", in_w)) if inside and certs[s].restrictable]
        if bad:
            rep.add("witness-localized", False, (tuple(x),), _vec_text(L.field, x), f"witness lies in restrictable summand {bad[0]}")
        elif in_u or in_w:
            rep.add("witness-localized", True, detail=f"witness lies in {'U' if in_u else 'W'}")
        else:
            rep.add("witness-localized", None, detail="witness is not inside a single summand")
    return rep
