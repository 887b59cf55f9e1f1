import numpy as np
import pytest
from hypothesis import given, strategies as st

from hlsa import (
    HomAssociativeSuperalgebra,
    HomLieSuperalgebra,
    PMap,
    catalog_get,
    change_basis,
    commutator_superalgebra,
    direct_sum,
    direct_sum_n,
    direct_sum_pmap,
    fixed_even_subspace,
    make_field,
    matrix_superalgebra,
    restrictability_certificate,
    verify_axioms,
    verify_hom_associative,
    verify_pmap,
    yau_twist,
)
from hlsa.constructions import check_endomorphism, twist_structure
from hlsa.errors import (
    EmptyList,
    NotEndomorphism,
    NotHomAssociative,
    NotUntwisted,
    PMapEscapesFixedSpace,
    PMapMismatch,
    TwistNotRestricted,
)
from hlsa.linalg import inverse
from hlsa.restriction import pmap_eval_batch

from oracles import NaiveField, apply


# ------------------------------------------------------------ direct sums
def test_sum_with_zero_algebra(sl2):
    F = sl2.field
    Z = HomLieSuperalgebra(F, (), np.zeros((0, 0, 0), dtype=np.int64))
    S = direct_sum(sl2.algebra, Z)
    assert S == sl2.algebra


def test_sl2_plus_heis(sl2, heis):
    S = direct_sum(sl2.algebra, heis.algebra)
    assert S.n == 5 and S.parities == (0, 0, 0, 0, 1)
    assert fixed_even_subspace(S).dim == 4
    P = direct_sum_pmap(sl2.pmap, heis.pmap, S)
    assert verify_pmap(S, P).passed
    assert verify_axioms(S).passed


def test_abelian_sum_zero_pmap():
    A = catalog_get("abelian(2,1)", 5, 1)
    P = direct_sum_pmap(A.pmap, A.pmap)
    assert not P.images.any()


def test_direct_sum_pmap_needs_verified_inputs(sl2):
    L = sl2.algebra
    bad = PMap(L, np.zeros((3, 3), dtype=np.int64))
    with pytest.raises(PMapMismatch):
        direct_sum_pmap(bad, sl2.pmap)


def test_direct_sum_n_examples(sl2, heis):
    line = catalog_get("abelian(1,0)", 5, 1)
    S, P = direct_sum_n([sl2.algebra], [sl2.pmap])
    assert S == sl2.algebra and P == sl2.pmap
    S, P = direct_sum_n([line.algebra] * 3, [line.pmap] * 3)
    assert S == catalog_get("abelian(3,0)", 5, 1).algebra and not P.images.any()
    r3 = catalog_get("r3", 5, 1).algebra
    S, _ = direct_sum_n([sl2.algebra, heis.algebra, r3])
    cert = restrictability_certificate(S)
    assert not cert.restrictable and cert.witness_element[:5].tolist() == [0] * 5
    with pytest.raises(EmptyList):
        direct_sum_n([])


# --------------------------------------------------------------- twists
def test_twist_identity_is_noop(sl2):
    T, Q = yau_twist(sl2.algebra, np.eye(3, dtype=np.int64), sl2.pmap)
    assert T == sl2.algebra and Q == sl2.pmap


def test_twist_sl2_alpha_2(sl2):
    E = sl2.endo("alpha_t:2")
    T, Q = yau_twist(sl2.algebra, E, sl2.pmap)
    # [h,e]' = alpha(2e) = 4e, [h,f]' = alpha(-2f) = 4f
    assert T.bracket(T.basis_vector(0), T.basis_vector(1)).tolist() == [0, 4, 0]
    assert T.bracket(T.basis_vector(0), T.basis_vector(2)).tolist() == [0, 0, 4]
    N = NaiveField(5)
    for i in range(3):
        for j in range(3):
            assert T.structure[i, j].tolist() == apply(N, E.tolist(), sl2.algebra.structure[i, j].tolist())
    assert fixed_even_subspace(T).basis.tolist() == [[1, 0, 0]]
    assert Q.images.tolist() == [[1, 0, 0]]


def test_twist_superheis_empty_pmap(heis):
    E = np.diag([4, 2])
    T, Q = yau_twist(heis.algebra, E, heis.pmap)
    assert verify_axioms(T).passed
    assert fixed_even_subspace(T).dim == 0 and Q.images.shape == (0, 2)


def test_twist_outside_prime_subfield_is_not_restricted():
    # on e, (ad' h)^5 = (2t^2)^5 and ad'(h) = 2t^2 agree iff t^8 = 1
    entry = catalog_get("sl2", 5, 2)
    F = entry.field
    t = next(c for c in range(F.q) if c and F.power(c, 8) != 1)
    with pytest.raises(TwistNotRestricted) as info:
        yau_twist(entry.algebra, entry.endo(f"alpha_t:{F.format(t)}"), entry.pmap)
    assert not info.value.report["pmap-i-basis"].ok


def test_twist_with_eighth_root_of_unity_is_restricted():
    # t with t^2 = 2 lies outside GF(5) but t^8 = 1
    entry = catalog_get("sl2", 5, 2)
    F = entry.field
    t = F.parse("0,1")
    assert F.power(t, 8) == 1 and t >= F.p
    T, Q = yau_twist(entry.algebra, entry.endo("alpha_t:0,1"), entry.pmap)
    assert verify_pmap(T, Q).passed


def test_twist_preconditions(sl2):
    L = sl2.algebra
    with pytest.raises(NotEndomorphism):
        yau_twist(L, np.diag([1, 2, 2]), sl2.pmap)
    T, Q = yau_twist(L, sl2.endo("alpha_t:2"), sl2.pmap)
    with pytest.raises(NotUntwisted):
        yau_twist(T, np.eye(3, dtype=np.int64), Q)
    A = catalog_get("abelian(2,0)", 5, 1).algebra
    P = PMap(A, [[0, 1], [0, 0]])
    assert verify_pmap(A, P).passed
    with pytest.raises(PMapEscapesFixedSpace):
        yau_twist(A, np.diag([1, 2]), P)


def test_endomorphism_check(heis):
    check_endomorphism(heis.algebra, np.diag([4, 2]))
    with pytest.raises(NotEndomorphism):
        check_endomorphism(heis.algebra, np.diag([2, 2]))
    with pytest.raises(NotEndomorphism):
        check_endomorphism(heis.algebra, np.array([[1, 1], [0, 1]]))


# ------------------------------------------------------------ commutators
def test_commutative_algebra_gives_abelian():
    F = make_field(5)
    # F[x]/(x^2): 1*1 = 1, 1*x = x*1 = x
    prod = np.zeros((2, 2, 2), dtype=np.int64)
    prod[0, 0, 0] = prod[0, 1, 1] = prod[1, 0, 1] = 1
    A = HomAssociativeSuperalgebra(F, (0, 0), prod)
    assert verify_hom_associative(A).passed
    L = commutator_superalgebra(A)
    assert not L.structure.any()


def test_gl2_and_gl11():
    F = make_field(5)
    gl2 = commutator_superalgebra(matrix_superalgebra(F, (0, 0)))
    assert verify_axioms(gl2).passed
    gl11 = commutator_superalgebra(matrix_superalgebra(F, (0, 1)))
    assert gl11.parities == (0, 1, 1, 0)
    assert gl11.bracket(gl11.basis_vector(1), gl11.basis_vector(2)).tolist() == [1, 0, 0, 1]
    assert verify_axioms(gl11).passed


def test_non_associative_product_rejected():
    F = make_field(5)
    prod = np.zeros((2, 2, 2), dtype=np.int64)
    prod[0, 0, 1] = prod[1, 0, 0] = 1  # a*a = b, b*a = a, a*b = 0
    A = HomAssociativeSuperalgebra(F, (0, 0), prod)
    assert not verify_hom_associative(A).passed
    with pytest.raises(NotHomAssociative):
        commutator_superalgebra(A)


# ----------------------------------------------------------- basis change
@st.composite
def even_basis(draw):
    name = draw(st.sampled_from(["sl2", "gl11", "superheis", "borel2"]))
    entry = catalog_get(name, 5, 1)
    L = entry.algebra
    rng = np.random.default_rng(draw(st.integers(0, 2**32)))
    while True:
        B = np.zeros((L.n, L.n), dtype=np.int64)
        for par in (0, 1):
            idx = [i for i, p in enumerate(L.parities) if p == par]
            B[np.ix_(idx, idx)] = rng.integers(0, L.field.q, (len(idx), len(idx)))
        if inverse(L.field, B) is not None:
            return entry, B


@given(even_basis())
def test_change_basis_preserves_structure(args):
    entry, B = args
    L = entry.algebra
    M, Q = change_basis(L, B, entry.pmap)
    assert verify_axioms(M).passed
    assert verify_pmap(M, Q).passed
    F = L.field
    # B is an isomorphism M -> L
    rng = np.random.default_rng(0)
    for _ in range(5):
        x, y = rng.integers(0, F.q, (2, L.n))
        assert np.array_equal(F.matmul(B, M.bracket(x, y)), L.bracket(F.matmul(B, x), F.matmul(B, y)))
    X = fixed_even_subspace(M).basis
    if len(X):
        assert np.array_equal(F.matmul(pmap_eval_batch(Q, X), B.T), pmap_eval_batch(entry.pmap, F.matmul(X, B.T)))


def test_twist_structure_is_pointwise(sl2):
    E = sl2.endo("alpha_t:3")
    c = twist_structure(sl2.algebra, E)
    assert c.shape == (3, 3, 3)
    assert c[1, 2].tolist() == [1, 0, 0]
