"""Seeded property harness over instances built by construction.

Instance ``i`` of a run with seed ``s`` draws from
``numpy.random.default_rng(SeedSequence([s, i]))`` (PCG64), so any single
instance can be replayed with ``--start i --count 1``.  An instance is a
direct sum of catalog pieces, rewritten in a random even basis and, with
probability 1/3, Yau-twisted along a blockwise diagonal endomorphism whose
eigenvalues lie in the prime field.  Raw structure tensors are never sampled.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass, field

import numpy as np

from .algebra import HomLieSuperalgebra, center, fixed_even_subspace, verify_axioms
from .catalog import catalog_get
from .constructions import change_basis, direct_sum, direct_sum_n, direct_sum_pmap, yau_twist
from .errors import HlsaError
from .field import FieldSpec
from .fileformat import HlsaDocument, parse_hlsa, serialize_hlsa
from .linalg import Subspace, inverse
from .morphisms import Morphism, graph_criterion, pullback_restricted, pushforward_restricted
from .restriction import (
    PMap,
    SemilinearMap,
    ad_poly_orbit,
    certificate_is_sound,
    exhaustive_limit,
    ideal_decomposition_check,
    jacobson_sum,
    normalize_pmap_on_center,
    pmap_difference,
    restrictability_certificate,
    shift_pmap,
    verify_pmap,
)

FUZZ_LIMIT = 3125
FAMILIES = {
    "catalog": ("sl2", "gl11", "superheis", "borel2", "abelian(1,0)", "abelian(1,1)", "r3"),
    "sl2": ("sl2", "borel2", "abelian(1,0)"),
}
PROPERTIES = (
    "axioms", "pmap", "jacobson-symmetry", "top-vanishing", "solver-sound", "pmap-difference",
    "shift", "normalize", "direct-sum", "graph", "transport", "roundtrip", "ideal-decomposition",
)


@dataclass
class Instance:
    index: int
    description: str
    algebra: HomLieSuperalgebra
    pmap: PMap | None
    blocks: list[tuple[int, int]]
    basis: np.ndarray
    twisted: bool = False
    mutation: str = ""


@dataclass
class FuzzResult:
    lines: list[str] = field(default_factory=list)
    exit_code: int = 0

    @property
    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def _rng(seed: int, i: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, i]))


def _random_even_basis(F: FieldSpec, parities, rng) -> np.ndarray:
    n = len(parities)
    B = np.zeros((n, n), dtype=np.int64)
    for par in (0, 1):
        idx = [i for i in range(n) if parities[i] == par]
        if not idx:
            continue
        while True:
            M = F.random(rng, (len(idx), len(idx)))
            if inverse(F, M) is not None:
                break
        B[np.ix_(idx, idx)] = M
    return B


def _block_endo(F: FieldSpec, names: list[str], rng) -> np.ndarray:
    mats = []
    for name in names:
        entry = catalog_get(name, F.p, F.k)
        t = int(rng.integers(1, F.p))
        mats.append(entry.endo(f"alpha_t:{t}") if entry.endo_family != "id" else entry.endo("id"))
    n = sum(m.shape[0] for m in mats)
    E = np.zeros((n, n), dtype=np.int64)
    off = 0
    for m in mats:
        E[off:off + m.shape[0], off:off + m.shape[0]] = m
        off += m.shape[0]
    return E


def build_instance(seed: int, i: int, F: FieldSpec, family: str, dims: tuple[int, int]) -> Instance:
    rng = _rng(seed, i)
    pool = FAMILIES[family]
    lo, hi = dims
    names: list[str] = []
    total = 0
    target = int(rng.integers(lo, hi + 1))
    first = "sl2" if family == "sl2" else None
    while True:
        name = first or pool[int(rng.integers(len(pool)))]
        first = None
        d = catalog_get(name, F.p, F.k).algebra.n
        if total + d > hi:
            if names:
                break
            continue
        names.append(name)
        total += d
        if total >= target or len(names) == 3:
            break
    entries = [catalog_get(nm, F.p, F.k) for nm in names]
    blocks, off = [], 0
    for e in entries:
        blocks.append((off, off + e.algebra.n))
        off += e.algebra.n
    restrictable = all(e.pmap is not None for e in entries)
    L, P = direct_sum_n([e.algebra for e in entries], [e.pmap for e in entries] if restrictable else None, check=False)
    B = _random_even_basis(F, L.parities, rng)
    twisted = restrictable and rng.random() < 1 / 3
    E = _block_endo(F, names, rng) if twisted else None
    L, P = change_basis(L, B, P)
    if twisted:
        Binv = inverse(F, B)
        L, P = yau_twist(L, F.matmul(F.matmul(Binv, E), B), P)
    desc = " + ".join(names) + (" (twisted)" if twisted else "")
    return Instance(i, desc, L, P, blocks, B, twisted)


# ------------------------------------------------------------- properties
def _sample_pairs(F: FieldSpec, L0: Subspace, rng, count: int = 64) -> tuple[np.ndarray, np.ndarray]:
    X = L0.combine(F.random(rng, (count, L0.dim)))
    Y = L0.combine(F.random(rng, (count, L0.dim)))
    return X, Y


def _inclusion(L: HomLieSuperalgebra) -> Morphism:
    A = catalog_get("abelian(1,0)", L.field.p, L.field.k).algebra
    S = direct_sum(L, A)
    M = np.zeros((S.n, L.n), dtype=np.int64)
    M[: L.n] = np.eye(L.n, dtype=np.int64)
    return Morphism(L, S, M)


def run_properties(inst: Instance, rng) -> "OrderedDict[str, bool | None]":
    """Outcome per property: True pass, False counterexample, None not applicable."""
    L, P, F = inst.algebra, inst.pmap, inst.algebra.field
    out: "OrderedDict[str, bool | None]" = OrderedDict((name, None) for name in PROPERTIES)

    def run(name, fn):
        try:
            out[name] = bool(fn())
        except HlsaError:
            out[name] = False

    run("axioms", lambda: verify_axioms(L).passed)
    if not out["axioms"]:
        return out
    L0 = fixed_even_subspace(L)
    if P is not None:
        run("pmap", lambda: verify_pmap(L, P).passed)
    if L0.dim:
        X, Y = _sample_pairs(F, L0, rng)
        run("jacobson-symmetry", lambda: np.array_equal(jacobson_sum(L, X, Y), jacobson_sum(L, Y, X)))
        run("top-vanishing", lambda: not ad_poly_orbit(L, X, Y)[:, F.p - 1].any())
    holder = {}

    def solver():
        cert = restrictability_certificate(L)
        holder["cert"] = cert
        return certificate_is_sound(L, cert) and cert.restrictable == (P is not None)

    run("solver-sound", solver)
    if P is None:
        if len(inst.blocks) > 1:
            run("ideal-decomposition", lambda: _decomp(inst).passed)
        run("roundtrip", lambda: _roundtrip(L, None))
        return out
    cert = holder.get("cert")
    if cert is not None and cert.restrictable:
        run("pmap-difference", lambda: pmap_difference(L, P, cert.pmap) is not None)
    Z = center(L).intersect(L0)
    if Z.dim:
        def shift():
            coeffs = F.random(rng, (L0.dim, Z.dim))
            f = SemilinearMap(L, L0, Z.combine(coeffs), Z)
            Q = shift_pmap(L, P, f)
            return pmap_difference(L, Q, P).images.tolist() == f.images.tolist()
        run("shift", shift)
    run("normalize", lambda: normalize_pmap_on_center(L, P) is not None)

    def dsum():
        other = catalog_get("superheis", F.p, F.k)
        S = direct_sum(L, other.algebra)
        dim_ok = fixed_even_subspace(S).dim == L0.dim + fixed_even_subspace(other.algebra).dim
        Q = direct_sum_pmap(P, other.pmaps[int(rng.integers(len(other.pmaps)))], S, check=False)
        return dim_ok and verify_pmap(S, Q).passed
    run("direct-sum", dsum)

    def graphs():
        ident = Morphism(L, L, np.eye(L.n, dtype=np.int64))
        junk = Morphism(L, L, _random_even_basis(F, L.parities, rng))
        return all(graph_criterion(phi, P, P)["biconditional"].ok for phi in (ident, junk))
    run("graph", graphs)

    def transport():
        iota = _inclusion(L)
        _, Q = pushforward_restricted(iota, P)
        # extend Q to the whole sum by the zero map on the abelian line
        S = iota.codomain
        PS = direct_sum_pmap(P, catalog_get("abelian(1,0)", F.p, F.k).pmap, S, check=False)
        _, back = pullback_restricted(iota, PS, Q.base)
        return np.array_equal(back.images, P.images)
    run("transport", transport)
    run("roundtrip", lambda: _roundtrip(L, P))
    if len(inst.blocks) > 1:
        run("ideal-decomposition", lambda: _decomp(inst).passed)
    return out


def _roundtrip(L: HomLieSuperalgebra, P: PMap | None) -> bool:
    text = serialize_hlsa(HlsaDocument.from_algebra(L, P))
    doc = parse_hlsa(text)
    again = doc.algebra()
    ok = serialize_hlsa(doc) == text and again == L
    if P is not None and P.domain.dim:
        ok = ok and doc.pmap_object(again) == PMap(again, P.images)
    return ok


def _decomp(inst: Instance):
    L, F = inst.algebra, inst.algebra.field
    Binv = inverse(F, inst.basis)
    a, b = inst.blocks[0]
    U = [Binv[:, j] for j in range(a, b)]
    W = [Binv[:, j] for j in range(b, L.n)]
    return ideal_decomposition_check(L, U, W)


# ------------------------------------------------------------- mutation
def mutate(inst: Instance, rng) -> Instance:
    """One detectable corruption: a raw constant, a non-central p-map shift, or an odd alpha entry."""
    L, P, F = inst.algebra, inst.pmap, inst.algebra.field
    kinds = ["bracket"]
    L0 = fixed_even_subspace(L)
    Z = center(L)
    movers = [b for b in L0.basis if not Z.contains(b)] if P is not None else []
    if movers:
        kinds.append("pmap")
    if 0 < sum(L.parities) < L.n:
        kinds.append("alpha")
    kind = kinds[int(rng.integers(len(kinds)))]
    if kind == "pmap":
        imgs = np.array(P.images)
        j = int(rng.integers(L0.dim))
        imgs[j] = F.add(imgs[j], movers[int(rng.integers(len(movers)))])
        return Instance(inst.index, inst.description, L, PMap(L, imgs), inst.blocks, inst.basis, inst.twisted, kind)
    c = np.array(L.structure)
    a = np.array(L.alpha)
    if kind == "alpha":
        evens = [i for i in range(L.n) if L.parities[i] == 0]
        odds = [i for i in range(L.n) if L.parities[i] == 1]
        i, j = evens[int(rng.integers(len(evens)))], odds[int(rng.integers(len(odds)))]
        a[i, j] = F.add(a[i, j], int(rng.integers(1, F.q)))
    else:
        i, j = rng.choice(L.n, size=2, replace=False) if L.n > 1 else (0, 0)
        k = int(rng.integers(L.n))
        c[i, j, k] = F.add(c[i, j, k], int(rng.integers(1, F.q)))
    M = HomLieSuperalgebra(F, L.parities, c, a, L.names)
    return Instance(inst.index, inst.description, M, None, inst.blocks, inst.basis, inst.twisted, kind)


def mutant_caught(inst: Instance) -> bool:
    L = inst.algebra
    try:
        if not verify_axioms(L).passed:
            return True
        if inst.mutation == "pmap":
            return not verify_pmap(L, inst.pmap).passed
    except HlsaError:
        return True
    return False


# ------------------------------------------------------------------ driver
def fuzz(
    seed: int,
    count: int,
    F: FieldSpec,
    dims: tuple[int, int] = (1, 6),
    family: str = "catalog",
    mutate_mode: bool = False,
    start: int = 0,
) -> FuzzResult:
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    res = FuzzResult()
    res.lines.append(f"fuzz seed={seed} count={count} start={start} field={F} family={family} dims={dims[0]}-{dims[1]}"
                     + (" mutate" if mutate_mode else ""))
    passes = OrderedDict((name, [0, 0]) for name in PROPERTIES)
    caught = 0
    with exhaustive_limit(FUZZ_LIMIT):
        for i in range(start, start + count):
            inst = build_instance(seed, i, F, family, dims)
            rng = _rng(seed, i)
            rng.integers(1 << 30, size=64)  # decouple from the construction stream
            if mutate_mode:
                m = mutate(inst, rng)
                ok = mutant_caught(m)
                caught += ok
                if not ok:
                    res.lines.append(f"MISSED\tinstance {i}\t{m.mutation} mutation of {inst.description}\treplay: --seed {seed} --start {i} --count 1 --mutate")
                continue
            outcome = run_properties(inst, rng)
            for name, val in outcome.items():
                if val is None:
                    continue
                passes[name][1] += 1
                passes[name][0] += val
                if not val:
                    res.lines.append(f"COUNTEREXAMPLE\tinstance {i}\t{name}\t{inst.description}\treplay: --seed {seed} --start {i} --count 1")
    if mutate_mode:
        res.lines.append(f"mutants-caught\t{caught}/{count}")
        res.exit_code = 0 if caught == count else 1
    else:
        for name, (ok, tot) in passes.items():
            res.lines.append(f"{name}\t{ok}/{tot}")
        res.exit_code = 0 if all(ok == tot for ok, tot in passes.values()) else 1
    res.lines.append("result\t" + ("PASS" if res.exit_code == 0 else "FAIL"))
    return res
