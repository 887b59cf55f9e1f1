"""HLSA v1 text format: parse, validate, and serialize canonically.

Grammar (line oriented, ``#`` starts a comment, tokens separated by spaces)::

    hlsa 1
    field p <p> k <k> [modulus <c0> ... <ck>]
    dim <n>
    parity <b1> ... <bn>
    names <s1> ... <sn>              (optional)
    alpha                            (then n rows of n elements)
    bracket <i> <j> : <c1> ... <cn>  (1-based; i < j, or i = j for odd e_i)
    product <i> <j> : <c1> ... <cn>  (Hom-associative documents instead of brackets)
    pmap <x1> ... <xn> : <y1> ... <yn>
    morphism <m>                     (then m rows of n elements)

Missing bracket or product entries are zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import HomLieSuperalgebra
from .constructions import HomAssociativeSuperalgebra
from .errors import (
    BasisMismatch,
    ElementSyntaxError,
    FieldError,
    HlsaSyntaxError,
    InvariantViolation,
    NotInL0,
    UnsupportedVersion,
)
from .field import FieldSpec, make_field
from .linalg import is_even_map
from .restriction import PMap


@dataclass(eq=False)
class HlsaDocument:
    field: FieldSpec
    parities: tuple[int, ...]
    alpha: np.ndarray
    structure: np.ndarray
    kind: str = "lie"
    names: tuple[str, ...] | None = None
    pmap: list[tuple[np.ndarray, np.ndarray]] | None = None
    morphism: np.ndarray | None = None
    version: int = 1
    extra: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.parities)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HlsaDocument):
            return NotImplemented
        return serialize_hlsa(self) == serialize_hlsa(other)

    def algebra(self) -> HomLieSuperalgebra:
        if self.kind != "lie":
            raise InvariantViolation("document describes a Hom-associative superalgebra, not a Hom-Lie one")
        return HomLieSuperalgebra(self.field, self.parities, self.structure, self.alpha, self.names)

    def associative(self) -> HomAssociativeSuperalgebra:
        if self.kind != "assoc":
            raise InvariantViolation("document has no product entries")
        return HomAssociativeSuperalgebra(self.field, self.parities, self.structure, self.alpha, self.names)

    def pmap_object(self, L: HomLieSuperalgebra | None = None) -> PMap | None:
        if self.pmap is None:
            return None
        L = self.algebra() if L is None else L
        X = np.array([x for x, _ in self.pmap], dtype=np.int64).reshape(-1, L.n)
        Y = np.array([y for _, y in self.pmap], dtype=np.int64).reshape(-1, L.n)
        return PMap.from_pairs(L, X, Y)

    @classmethod
    def from_algebra(cls, L: HomLieSuperalgebra, P: PMap | None = None, morphism=None, keep_names: bool = True) -> "HlsaDocument":
        pm = None
        if P is not None:
            pm = [(np.array(b), np.array(y)) for b, y in zip(P.domain.basis, P.images)]
        default = tuple(f"e{i + 1}" for i in range(L.n))
        names = L.names if keep_names and L.names != default else None
        return cls(L.field, L.parities, np.array(L.alpha), np.array(L.structure), "lie", names, pm,
                   None if morphism is None else np.array(morphism, dtype=np.int64))

    @classmethod
    def from_associative(cls, A: HomAssociativeSuperalgebra) -> "HlsaDocument":
        default = tuple(f"e{i + 1}" for i in range(A.n))
        return cls(A.field, A.parities, np.array(A.alpha), np.array(A.product), "assoc",
                   A.names if A.names != default else None)


# ------------------------------------------------------------------ parse
def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield no, body.split()


def _int(tok: str, no: int, what: str) -> int:
    try:
        if not tok.lstrip("-").isdigit():
            raise ValueError
        return int(tok)
    except ValueError:
        raise HlsaSyntaxError(no, f"expected an integer for {what}, got {tok!r}") from None


def _elts(F: FieldSpec, toks, no: int, count: int, what: str) -> np.ndarray:
    if len(toks) != count:
        raise HlsaSyntaxError(no, f"{what} needs {count} elements, got {len(toks)}")
    try:
        return np.array([F.parse(t) for t in toks], dtype=np.int64)
    except ElementSyntaxError as exc:
        raise HlsaSyntaxError(no, f"bad field element in {what}: {exc}") from None


def parse_hlsa(text: str) -> HlsaDocument:
    """Parse and validate one HLSA v1 document."""
    it = iter(list(_lines(text)))

    def take(expect: str | None = None):
        try:
            no, toks = next(it)
        except StopIteration:
            raise HlsaSyntaxError(0, f"unexpected end of document{'; expected ' + expect if expect else ''}") from None
        if expect is not None and toks[0] != expect:
            raise HlsaSyntaxError(no, f"expected '{expect}', got {toks[0]!r}")
        return no, toks

    no, toks = take("hlsa")
    if len(toks) != 2:
        raise HlsaSyntaxError(no, "header is 'hlsa <version>'")
    version = _int(toks[1], no, "version")
    if version != 1:
        raise UnsupportedVersion(f"line {no}: HLSA version {version} is not supported")

    no, toks = take("field")
    if len(toks) < 5 or toks[1] != "p" or toks[3] != "k":
        raise HlsaSyntaxError(no, "field line is 'field p <p> k <k> [modulus ...]'")
    p, k = _int(toks[2], no, "p"), _int(toks[4], no, "k")
    modulus = None
    if len(toks) > 5:
        if toks[5] != "modulus":
            raise HlsaSyntaxError(no, f"unexpected token {toks[5]!r}")
        modulus = [_int(t, no, "modulus coefficient") for t in toks[6:]]
    F = make_field(p, k, modulus)  # field errors propagate with their own type

    no, toks = take("dim")
    if len(toks) != 2:
        raise HlsaSyntaxError(no, "dim line is 'dim <n>'")
    n = _int(toks[1], no, "dim")
    if n < 0:
        raise HlsaSyntaxError(no, "dimension must be non-negative")

    no, toks = take("parity")
    if len(toks) != n + 1 or any(t not in ("0", "1") for t in toks[1:]):
        raise HlsaSyntaxError(no, f"parity line needs {n} entries from {{0, 1}}")
    parities = tuple(int(t) for t in toks[1:])

    names = None
    no, toks = take()
    if toks[0] == "names":
        if len(toks) != n + 1 or len(set(toks[1:])) != n:
            raise HlsaSyntaxError(no, f"names line needs {n} distinct names")
        names = tuple(toks[1:])
        no, toks = take()
    if toks[0] != "alpha" or len(toks) != 1:
        raise HlsaSyntaxError(no, "expected 'alpha'")
    alpha = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        no, toks = take()
        alpha[i] = _elts(F, toks, no, n, "alpha row")
    bad = is_even_map(parities, parities, alpha)
    if bad is not None:
        raise InvariantViolation(f"alpha is not even: entry ({bad[0] + 1},{bad[1] + 1}) crosses parity")

    c = np.zeros((n, n, n), dtype=np.int64)
    seen: dict[tuple[int, int], int] = {}
    kind = None
    pairs: list[tuple[np.ndarray, np.ndarray]] | None = None
    morphism = None
    sign = lambda i, j: F.neg(1) if parities[i] and parities[j] else 1  # noqa: E731
    for no, toks in it:
        head = toks[0]
        if head in ("bracket", "product"):
            if pairs is not None or morphism is not None:
                raise HlsaSyntaxError(no, f"{head} entries must precede pmap and morphism blocks")
            if kind is not None and kind != head:
                raise HlsaSyntaxError(no, "a document has either bracket or product entries, not both")
            kind = head
            if len(toks) < 4 or toks[3] != ":":
                raise HlsaSyntaxError(no, f"{head} line is '{head} <i> <j> : <c1> ... <cn>'")
            i, j = _int(toks[1], no, "i") - 1, _int(toks[2], no, "j") - 1
            if not (0 <= i < n and 0 <= j < n):
                raise HlsaSyntaxError(no, f"index out of range 1..{n}")
            if (i, j) in seen:
                raise HlsaSyntaxError(no, f"duplicate entry for ({i + 1},{j + 1}); first on line {seen[(i, j)]}")
            seen[(i, j)] = no
            vec = _elts(F, toks[4:], no, n, head)
            for kk in np.flatnonzero(vec):
                if (parities[i] + parities[j]) % 2 != parities[kk]:
                    raise InvariantViolation(
                        f"line {no}: {head} ({i + 1},{j + 1}) has a coefficient on e_{kk + 1} of the wrong parity"
                        f" (i,j,k) = ({i + 1},{j + 1},{kk + 1})"
                    )
            c[i, j] = vec
        elif head == "pmap":
            if morphism is not None:
                raise HlsaSyntaxError(no, "pmap entries must precede the morphism block")
            if ":" not in toks:
                raise HlsaSyntaxError(no, "pmap line is 'pmap <x1> ... <xn> : <y1> ... <yn>'")
            cut = toks.index(":")
            x = _elts(F, toks[1:cut], no, n, "pmap argument")
            y = _elts(F, toks[cut + 1:], no, n, "pmap value")
            pairs = (pairs or []) + [(x, y)]
        elif head == "morphism":
            if morphism is not None:
                raise HlsaSyntaxError(no, "only one morphism block is allowed")
            if len(toks) != 2:
                raise HlsaSyntaxError(no, "morphism line is 'morphism <m>'")
            m = _int(toks[1], no, "morphism rows")
            rows = []
            for _ in range(m):
                rno, rtoks = next(it, (no, None))
                if rtoks is None:
                    raise HlsaSyntaxError(no, "morphism block ends early")
                rows.append(_elts(F, rtoks, rno, n, "morphism row"))
            morphism = np.array(rows, dtype=np.int64).reshape(m, n)
        else:
            raise HlsaSyntaxError(no, f"unknown directive {head!r}")

    if kind != "product":
        # fill skew halves and check explicit lower entries agree
        for (i, j), no in seen.items():
            if i == j and parities[i] == 0 and c[i, i].any():
                raise InvariantViolation(f"line {no}: bracket of even e_{i + 1} with itself must be zero")
        for (i, j), no in sorted(seen.items()):
            if i < j:
                implied = F.mul(sign(i, j), F.neg(c[i, j]))
                if (j, i) in seen and not np.array_equal(c[j, i], implied):
                    raise InvariantViolation(f"line {seen[(j, i)]}: bracket ({j + 1},{i + 1}) contradicts skew-symmetry")
                c[j, i] = implied
            elif i > j and (j, i) not in seen:
                c[j, i] = F.mul(sign(i, j), F.neg(c[i, j]))
    doc = HlsaDocument(F, parities, alpha, c, "assoc" if kind == "product" else "lie", names, pairs, morphism, version)
    if pairs is not None:
        if doc.kind != "lie":
            raise InvariantViolation("pmap entries need a Hom-Lie document")
        try:
            doc.pmap_object()
        except (BasisMismatch, NotInL0) as exc:
            raise InvariantViolation(f"pmap block: {exc}") from None
    return doc


# -------------------------------------------------------------- serialize
def serialize_hlsa(doc: HlsaDocument) -> str:
    F, n = doc.field, doc.n
    fmt = lambda v: " ".join(F.format(int(x)) for x in v)  # noqa: E731
    out = ["hlsa 1"]
    head = f"field p {F.p} k {F.k}"
    if F.k > 1:
        head += " modulus " + " ".join(str(c) for c in F.modulus)
    out += [head, f"dim {n}", "parity " + " ".join(str(b) for b in doc.parities) if n else "parity"]
    if doc.names is not None:
        out.append("names " + " ".join(doc.names))
    out.append("alpha")
    out += [fmt(row) for row in np.asarray(doc.alpha).reshape(n, n)]
    c = np.asarray(doc.structure).reshape(n, n, n)
    word = "product" if doc.kind == "assoc" else "bracket"
    for i in range(n):
        for j in range(n):
            if doc.kind == "lie" and (j < i or (i == j and doc.parities[i] == 0)):
                continue
            if c[i, j].any():
                out.append(f"{word} {i + 1} {j + 1} : {fmt(c[i, j])}")
    for x, y in doc.pmap or []:
        out.append(f"pmap {fmt(x)} : {fmt(y)}")
    if doc.morphism is not None:
        M = np.asarray(doc.morphism)
        out.append(f"morphism {M.shape[0]}")
        out += [fmt(row) for row in M]
    return "\n".join(out) + "\n"


def load_hlsa(path: str) -> HlsaDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_hlsa(fh.read())


__all__ = ["HlsaDocument", "parse_hlsa", "serialize_hlsa", "load_hlsa", "FieldError"]
