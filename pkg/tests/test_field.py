import numpy as np
import pytest
from hypothesis import given, strategies as st

from hlsa import field_arith, frobenius, make_field
from hlsa.errors import (
    BadCharacteristic,
    DivisionByZero,
    ElementSyntaxError,
    FieldMismatch,
    NoBuiltinModulus,
    NonPrime,
    ReducibleModulus,
    UnsupportedDegree,
)
from hlsa.field import BUILTIN_MODULI

from oracles import NaiveField

FIELDS = [(5, 1), (7, 1), (13, 1), (5, 2), (7, 2), (5, 3), (7, 3), (13, 3)]


def naive(F):
    return NaiveField(F.p, F.k, F.modulus or None)


def test_prime_field_needs_no_modulus():
    F = make_field(5)
    assert F.q == 5 and F.modulus == ()
    assert str(F) == "GF(5)"


def test_gf25_with_t2_plus_3():
    F = make_field(5, 2, (3, 0, 1))
    assert F.q == 25
    t = F("0,1")
    assert t * t == F(2)
    assert str(frobenius(t)) == "0,4"


@pytest.mark.parametrize("p", [4, 9, 1, 0])
def test_non_prime(p):
    with pytest.raises(NonPrime):
        make_field(p)


@pytest.mark.parametrize("p", [2, 3])
def test_excluded_characteristic(p):
    with pytest.raises(BadCharacteristic):
        make_field(p)


def test_degree_limit():
    with pytest.raises(UnsupportedDegree):
        make_field(5, 4, (2, 0, 0, 0, 1))
    with pytest.raises(NoBuiltinModulus):
        make_field(17, 2)


def test_reducible_modulus():
    with pytest.raises(ReducibleModulus):
        make_field(5, 2, (4, 0, 1))  # t^2 - 1
    with pytest.raises(ReducibleModulus):
        make_field(5, 2, (1, 2))  # wrong length


@pytest.mark.parametrize("key", sorted(BUILTIN_MODULI))
def test_builtin_moduli_irreducible(key):
    p, k = key
    mod = BUILTIN_MODULI[key]
    assert all(sum(c * x**i for i, c in enumerate(mod)) % p for x in range(p))


def test_scalar_examples():
    F = make_field(5)
    assert field_arith(F(3), F(4), "mul") == F(2)
    assert frobenius(F(2)) == F(2)
    assert frobenius(F(0)) == F(0)
    assert all(field_arith(F(a), 0, "pow") == F(1) for a in range(1, 5))
    assert field_arith(F(1), F(2), "div") == F(3)
    with pytest.raises(DivisionByZero):
        F(1) / F(0)


def test_cross_field_rejected():
    with pytest.raises(FieldMismatch):
        make_field(5)(1) + make_field(7)(1)


@pytest.mark.parametrize("text", ["5", "1,2", "01", "-1", "1,", "x", ""])
def test_parse_rejects(text):
    with pytest.raises(ElementSyntaxError):
        make_field(5).parse(text)


def test_parse_format_roundtrip():
    F = make_field(5, 3)
    for code in range(F.q):
        assert F.parse(F.format(code)) == code
    with pytest.raises(ElementSyntaxError):
        F.parse("1,0")


@pytest.mark.parametrize("p,k", FIELDS)
def test_tables_match_naive(p, k):
    F = make_field(p, k)
    N = naive(F)
    rng = np.random.default_rng(p * 10 + k)
    a = rng.integers(0, F.q, 400)
    b = rng.integers(0, F.q, 400)
    assert list(F.add(a, b)) == [N.add(x, y) for x, y in zip(a, b)]
    assert list(F.sub(a, b)) == [N.sub(x, y) for x, y in zip(a, b)]
    assert list(F.mul(a, b)) == [N.mul(x, y) for x, y in zip(a, b)]
    assert list(F.frob(a)) == [N.power(x, p) for x in a]
    nz = a[a != 0][:50]
    assert list(F.inv(nz)) == [N.inv(x) for x in nz]


@pytest.mark.parametrize("p,k", [(5, 1), (5, 2), (7, 3)])
def test_matmul_and_einsum_match_naive(p, k):
    F = make_field(p, k)
    N = naive(F)
    rng = np.random.default_rng(1)
    A = rng.integers(0, F.q, (4, 3))
    B = rng.integers(0, F.q, (3, 5))
    want = [[0] * 5 for _ in range(4)]
    for i in range(4):
        for j in range(5):
            for t in range(3):
                want[i][j] = N.add(want[i][j], N.mul(A[i, t], B[t, j]))
    assert F.matmul(A, B).tolist() == want
    assert F.einsum("ij,jk->ik", A, B).tolist() == want
    C = rng.integers(0, F.q, (5,))
    three = F.einsum("ij,jk,k->i", A, B, C)
    assert three.tolist() == F.matmul(F.matmul(A, B), C).tolist()


@st.composite
def field_and_elements(draw, count=3):
    p, k = draw(st.sampled_from(FIELDS))
    F = make_field(p, k)
    return (F,) + tuple(draw(st.integers(0, F.q - 1)) for _ in range(count))


@given(field_and_elements())
def test_ring_axioms(args):
    F, a, b, c = args
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, b) == F.mul(b, a)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.add(a, F.neg(a)) == 0


@given(field_and_elements())
def test_frobenius_is_additive_and_multiplicative(args):
    F, a, b, _ = args
    assert F.frob(F.add(a, b)) == F.add(F.frob(a), F.frob(b))
    assert F.frob(F.mul(a, b)) == F.mul(F.frob(a), F.frob(b))
    # order k automorphism
    x = a
    for _ in range(F.k):
        x = F.frob(x)
    assert x == a


@given(field_and_elements())
def test_inverse_and_power(args):
    F, a, _, _ = args
    if a:
        assert F.mul(a, F.inv(a)) == 1
        assert F.power(a, F.q - 1) == 1
    assert F.power(a, F.q) == a
