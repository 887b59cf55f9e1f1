"""Exact arithmetic in GF(p^k) for primes p >= 5 and k <= 3.

Elements are encoded as integer *codes* ``c_0 + c_1 p + ... + c_{k-1} p^{k-1}``
where ``c_i`` is the coefficient of ``t^i`` in the residue polynomial.  Arrays
of codes (any shape, ``int64``) are the working representation of vectors,
matrices and tensors; :class:`FieldElement` wraps a single code for scalar
use and for the textual syntax.

Textual syntax: comma-separated base-p residues, least significant first,
trailing zero coefficients dropped (``3`` is 3, ``3,4`` is 3+4t, ``0,4`` is 4t).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BadCharacteristic,
    DivisionByZero,
    ElementSyntaxError,
    FieldMismatch,
    NoBuiltinModulus,
    NonPrime,
    ReducibleModulus,
    UnsupportedDegree,
)

# monic moduli, coefficients listed from t^0 up to t^k
BUILTIN_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (5, 2): (3, 0, 1),
    (7, 2): (4, 0, 1),
    (11, 2): (9, 0, 1),
    (13, 2): (11, 0, 1),
    (5, 3): (1, 1, 0, 1),
    (7, 3): (2, 0, 0, 1),
    (11, 3): (4, 1, 0, 1),
    (13, 3): (2, 0, 0, 1),
}

_RESIDUE = re.compile(r"0|[1-9][0-9]*")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def _poly_eval(coeffs: Sequence[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def _polymulmod(a: Sequence[int], b: Sequence[int], modulus: Sequence[int], p: int) -> list[int]:
    k = len(modulus) - 1
    prod = [0] * (2 * k - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            for i in range(k + 1):
                prod[d - k + i] = (prod[d - k + i] - c * modulus[i]) % p
    return prod[:k]


@dataclass(frozen=True)
class FieldSpec:
    """GF(p^k); construct through :func:`make_field`, which validates."""

    p: int
    k: int = 1
    modulus: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        if not _is_prime(self.p):
            raise NonPrime(f"{self.p} is not prime")
        if self.p in (2, 3):
            raise BadCharacteristic(f"characteristic {self.p} is excluded; need p >= 5")
        if self.k < 1:
            raise UnsupportedDegree(f"extension degree must be >= 1, got {self.k}")
        if self.k > 3:
            raise UnsupportedDegree(f"extension degree {self.k} > 3 is not supported")
        if self.k == 1:
            object.__setattr__(self, "modulus", ())
            return
        mod = tuple(int(c) for c in self.modulus)
        if len(mod) != self.k + 1 or mod[-1] != 1 or any(not 0 <= c < self.p for c in mod):
            raise ReducibleModulus(
                f"modulus must be {self.k + 1} residues mod {self.p} ending in 1 (monic), got {mod}"
            )
        # degree <= 3: irreducible iff no root in Z_p
        for x in range(self.p):
            if _poly_eval(mod, x, self.p) == 0:
                raise ReducibleModulus(f"modulus {mod} has root {x} mod {self.p}")
        object.__setattr__(self, "modulus", mod)

    # ------------------------------------------------------------------ basics
    @property
    def q(self) -> int:
        return self.p**self.k

    def __str__(self) -> str:
        return f"GF({self.p})" if self.k == 1 else f"GF({self.p}^{self.k})"

    @cached_property
    def _pw(self) -> np.ndarray:
        return np.array([self.p**i for i in range(self.k)], dtype=np.int64)

    @cached_property
    def _digit_table(self) -> np.ndarray:
        codes = np.arange(self.q, dtype=np.int64)
        return (codes[:, None] // self._pw) % self.p

    @cached_property
    def _add_table(self) -> np.ndarray:
        d = self._digit_table
        return self.undigits(d[:, None, :] + d[None, :, :])

    @cached_property
    def _neg_table(self) -> np.ndarray:
        return self.undigits(-self._digit_table)

    def digits(self, a) -> np.ndarray:
        """Coefficient digits of codes, as a trailing axis of length k."""
        return self._digit_table[np.asarray(a, dtype=np.int64)]

    def undigits(self, d) -> np.ndarray:
        return (np.asarray(d, dtype=np.int64) % self.p) @ self._pw

    @cached_property
    def _tables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        p, k, q = self.p, self.k, self.q
        if k == 1:
            def mul(a, b):
                return [(a[0] * b[0]) % p]
        else:
            def mul(a, b):
                return _polymulmod(a, b, self.modulus, p)
        to_code = lambda d: sum(c * p**i for i, c in enumerate(d))  # noqa: E731
        from_code = lambda c: [(c // p**i) % p for i in range(k)]  # noqa: E731
        for g in range(2, q):
            exp = np.zeros(q - 1, dtype=np.int64)
            cur = [1] + [0] * (k - 1)
            gd = from_code(g)
            seen_one = False
            for e in range(q - 1):
                code = to_code(cur)
                if e > 0 and code == 1:
                    seen_one = True
                    break
                exp[e] = code
                cur = mul(cur, gd)
            if not seen_one:
                break
        log = np.zeros(q, dtype=np.int64)
        log[exp] = np.arange(q - 1)
        inv = np.zeros(q, dtype=np.int64)
        inv[exp] = exp[(-np.arange(q - 1)) % (q - 1)]
        frob = np.zeros(q, dtype=np.int64)
        frob[exp] = exp[(np.arange(q - 1) * p) % (q - 1)]
        return exp, log, inv, frob

    @cached_property
    def _mult_tensor(self) -> np.ndarray:
        # T[u, v, w] = coefficient of t^w in t^u * t^v
        k = self.k
        T = np.zeros((k, k, k), dtype=np.int64)
        for u in range(k):
            for v in range(k):
                a = [0] * k
                b = [0] * k
                a[u] = 1
                b[v] = 1
                T[u, v] = _polymulmod(a, b, self.modulus, self.p) if k > 1 else [1]
        return T

    # ----------------------------------------------------------- array arithmetic
    def asarray(self, a) -> np.ndarray:
        return np.asarray(a, dtype=np.int64)

    def add(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return (a + b) % self.p
        return self._add_table[a, b]

    def neg(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.k == 1:
            return (-a) % self.p
        return self._neg_table[a]

    def sub(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return (a - b) % self.p
        return self._add_table[a, self._neg_table[b]]

    def mul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return (a * b) % self.p
        exp, log, _, _ = self._tables
        r = exp[(log[a] + log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, r)

    def inv(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise DivisionByZero("inverse of zero")
        return self._tables[2][a]

    def div(self, a, b) -> np.ndarray:
        return self.mul(a, self.inv(b))

    def power(self, a, e: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if e < 0:
            raise ValueError("negative exponents are not supported")
        if e == 0:
            return np.ones_like(a)
        exp, log, _, _ = self._tables
        r = exp[(log[a] * e) % (self.q - 1)]
        return np.where(a == 0, 0, r)

    def frob(self, a) -> np.ndarray:
        """x -> x^p elementwise (the identity on the prime field)."""
        a = np.asarray(a, dtype=np.int64)
        if self.k == 1:
            return a.copy()
        return self._tables[3][a]

    def sum(self, a, axis=None) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.k == 1:
            return a.sum(axis=axis) % self.p
        d = self.digits(a)
        if axis is None:
            return self.undigits(d.reshape(-1, self.k).sum(axis=0))
        axes = (axis,) if isinstance(axis, int) else tuple(axis)
        axes = tuple(ax if ax >= 0 else ax - 1 for ax in axes)
        return self.undigits(d.sum(axis=axes))

    def einsum(self, subscripts: str, *operands) -> np.ndarray:
        """Field-valued ``np.einsum`` for explicit lowercase subscripts."""
        ops = [np.asarray(o, dtype=np.int64) for o in operands]
        if self.k == 1:
            if len(ops) <= 2:
                return np.einsum(subscripts, *ops) % self.p
            return self._fold_einsum(subscripts, ops, self._einsum2_prime)
        return self._fold_einsum(subscripts, ops, self._einsum2_ext)

    def _einsum2_prime(self, s1: str, s2: str, out: str, a, b) -> np.ndarray:
        return np.einsum(f"{s1},{s2}->{out}", a, b) % self.p

    def _einsum2_ext(self, s1: str, s2: str, out: str, a, b) -> np.ndarray:
        return self._digit_product(a, b, lambda x, y: np.einsum(f"{s1},{s2}->{out}", x, y))

    @cached_property
    def _reduction(self) -> np.ndarray:
        # R[d] = digits of t^d reduced by the modulus, d < 2k - 1
        k = self.k
        R = np.zeros((2 * k - 1, k), dtype=np.int64)
        for u in range(k):
            for v in range(k):
                R[u + v] = self._mult_tensor[u, v]
        return R

    def _digit_product(self, a, b, contract) -> np.ndarray:
        """Bilinear ``contract`` over GF(p^k): integer contractions per digit pair, then reduction."""
        da = self.digits(a)
        db = self.digits(b)
        k = self.k
        conv: list = [None] * (2 * k - 1)
        for u in range(k):
            au = da[..., u]
            if not au.any():
                continue
            for v in range(k):
                bv = db[..., v]
                if bv.any():
                    r = contract(au, bv)
                    conv[u + v] = r if conv[u + v] is None else conv[u + v] + r
        present = [c for c in conv if c is not None]
        zero = np.zeros_like(present[0]) if present else contract(da[..., 0], db[..., 0])
        stacked = np.stack([zero if c is None else c for c in conv], axis=-1) % self.p
        return self.undigits(stacked @ self._reduction)

    def _fold_einsum(self, subscripts: str, ops, pair) -> np.ndarray:
        lhs, out = subscripts.replace(" ", "").split("->")
        terms = lhs.split(",")
        if len(terms) != len(ops):
            raise ValueError("operand count does not match subscripts")
        if len(ops) == 1:
            if self.k == 1:
                return np.einsum(subscripts, ops[0]) % self.p
            d = self.digits(ops[0])
            return self.undigits(np.einsum(f"{terms[0]}U->{out}U", d))
        cur, cur_s = ops[0], terms[0]
        for idx in range(1, len(ops)):
            later = set("".join(terms[idx + 1:])) | set(out)
            s2 = terms[idx]
            keep = "".join(dict.fromkeys(ch for ch in cur_s + s2 if ch in later))
            if idx == len(ops) - 1:
                keep = out
            cur = pair(cur_s, s2, keep, cur, ops[idx])
            cur_s = keep
        return cur

    def matmul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return (a @ b) % self.p
        return self._digit_product(a, b, np.matmul)

    def scale(self, s, a) -> np.ndarray:
        return self.mul(np.asarray(s, dtype=np.int64), a)

    def random(self, rng: np.random.Generator, shape) -> np.ndarray:
        return rng.integers(0, self.q, size=shape, dtype=np.int64)

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    def from_int(self, n: int) -> int:
        """Image of an integer in the prime subfield, as a code."""
        return int(n) % self.p

    # --------------------------------------------------------------- elements
    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.spec != self:
                raise FieldMismatch(f"element of {value.spec} used in {self}")
            return value
        if isinstance(value, str):
            return FieldElement(self, self.parse(value))
        if isinstance(value, (list, tuple)):
            return FieldElement(self, self._code_from_coeffs(value))
        return FieldElement(self, int(value) % self.p)

    def _code_from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.k:
            raise ElementSyntaxError(f"{len(coeffs)} coefficients for degree-{self.k} field")
        return sum((int(c) % self.p) * self.p**i for i, c in enumerate(coeffs))

    def parse(self, text: str) -> int:
        """Parse the comma syntax into a code; rejects non-canonical spellings."""
        parts = text.split(",")
        if len(parts) > self.k:
            raise ElementSyntaxError(f"{text!r}: more than {self.k} coefficients")
        vals = []
        for part in parts:
            if not _RESIDUE.fullmatch(part):
                raise ElementSyntaxError(f"{text!r}: bad residue {part!r}")
            v = int(part)
            if v >= self.p:
                raise ElementSyntaxError(f"{text!r}: residue {v} not reduced mod {self.p}")
            vals.append(v)
        if len(vals) > 1 and vals[-1] == 0:
            raise ElementSyntaxError(f"{text!r}: trailing zero coefficient")
        return self._code_from_coeffs(vals)

    def format(self, code) -> str:
        code = int(code)
        coeffs = [(code // self.p**i) % self.p for i in range(self.k)]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        return ",".join(str(c) for c in coeffs)

    def format_vector(self, v: Iterable[int]) -> str:
        return " ".join(self.format(c) for c in np.asarray(v).ravel())


@dataclass(frozen=True)
class FieldElement:
    """A single element of a :class:`FieldSpec`; immutable."""

    spec: FieldSpec
    code: int

    def __post_init__(self) -> None:
        if not 0 <= self.code < self.spec.q:
            raise ElementSyntaxError(f"code {self.code} out of range for {self.spec}")
        object.__setattr__(self, "code", int(self.code))

    @property
    def coeffs(self) -> tuple[int, ...]:
        p = self.spec.p
        return tuple((self.code // p**i) % p for i in range(self.spec.k))

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise FieldMismatch(f"cannot combine {self.spec} with {other.spec}")
            return other
        if isinstance(other, (int, np.integer)):
            return FieldElement(self.spec, int(other) % self.spec.p)
        return NotImplemented

    def _wrap(self, code) -> "FieldElement":
        return FieldElement(self.spec, int(code))

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.spec.add(self.code, o.code))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.spec.sub(self.code, o.code))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return self._wrap(self.spec.neg(self.code))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.spec.mul(self.code, o.code))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.spec.div(self.code, o.code))

    def __pow__(self, e: int):
        return self._wrap(self.spec.power(self.code, int(e)))

    def inverse(self) -> "FieldElement":
        return self._wrap(self.spec.inv(self.code))

    def is_zero(self) -> bool:
        return self.code == 0

    def __bool__(self) -> bool:
        return self.code != 0

    def __int__(self) -> int:
        return self.code

    def __str__(self) -> str:
        return self.spec.format(self.code)

    def __repr__(self) -> str:
        return f"FieldElement({self.spec}, {self})"


@lru_cache(maxsize=None)
def _cached_field(p: int, k: int, modulus: tuple[int, ...]) -> FieldSpec:
    return FieldSpec(p, k, modulus)


def make_field(p: int, k: int = 1, modulus: Sequence[int] | None = None) -> FieldSpec:
    """Validated GF(p^k); the modulus defaults to the built-in table when k > 1."""
    if not _is_prime(p):
        raise NonPrime(f"{p} is not prime")
    if p in (2, 3):
        raise BadCharacteristic(f"characteristic {p} is excluded; need p >= 5")
    if k == 1:
        return _cached_field(p, 1, ())
    if modulus is None:
        if (p, k) not in BUILTIN_MODULI:
            raise NoBuiltinModulus(f"no built-in modulus for GF({p}^{k}); supply one")
        modulus = BUILTIN_MODULI[(p, k)]
    return _cached_field(p, k, tuple(int(c) for c in modulus))


def frobenius(x: FieldElement) -> FieldElement:
    return FieldElement(x.spec, int(x.spec.frob(x.code)))


def field_arith(a: FieldElement, b, op: str) -> FieldElement:
    """Dispatch ``add``, ``sub``, ``mul``, ``div`` or ``pow`` (b an int for pow)."""
    if op == "pow":
        return a ** int(b)
    if isinstance(b, FieldElement) and b.spec != a.spec:
        raise FieldMismatch(f"cannot combine {a.spec} with {b.spec}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")
