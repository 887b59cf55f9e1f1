"""Built-in reference algebras with their p-maps, endomorphisms and expected outcomes."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .algebra import HomLieSuperalgebra, verify_axioms
from .constructions import check_endomorphism, commutator_superalgebra, matrix_superalgebra
from .errors import FieldError, TheoremViolation, UnknownName, UnsupportedField
from .field import FieldSpec, make_field
from .restriction import PMap, verify_pmap

NAMES = ("abelian(n0,n1)", "sl2", "gl11", "superheis", "r3", "borel2")
_ABELIAN = re.compile(r"abelian\((\d+),(\d+)\)$")


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    name: str
    algebra: HomLieSuperalgebra
    pmaps: tuple[PMap, ...]
    endo_family: str = "id"
    notes: dict = field(default_factory=dict)

    @property
    def field(self) -> FieldSpec:
        return self.algebra.field

    @property
    def pmap(self) -> PMap | None:
        return self.pmaps[0] if self.pmaps else None

    def endo(self, spec: str) -> np.ndarray:
        """``id`` or ``alpha_t:<t>`` (t a nonzero field element in comma syntax)."""
        F, n = self.field, self.algebra.n
        if spec == "id":
            return np.eye(n, dtype=np.int64)
        if not spec.startswith("alpha_t:") or self.endo_family == "id":
            raise UnknownName(f"{self.name} has no endomorphism {spec!r}")
        t = F(spec[len("alpha_t:"):]).code
        if t == 0:
            raise UnknownName("alpha_t needs a nonzero t")
        return _alpha_t(F, self.endo_family, t)

    @property
    def endos(self) -> dict[str, np.ndarray]:
        out = {"id": self.endo("id")}
        if self.endo_family != "id":
            for t in range(1, self.field.q):
                name = f"alpha_t:{self.field.format(t)}"
                out[name] = self.endo(name)
        return out


def _alpha_t(F: FieldSpec, family: str, t: int) -> np.ndarray:
    if family == "sl2":
        return np.diag([1, t, int(F.inv(t))]).astype(np.int64)
    if family == "borel2":
        return np.diag([1, t]).astype(np.int64)
    if family == "superheis":
        return np.diag([int(F.mul(t, t)), t]).astype(np.int64)
    raise UnknownName(family)


def _vec(*vals) -> list[int]:
    return [int(v) for v in vals]


def _build(name: str, F: FieldSpec) -> CatalogEntry:
    m = _ABELIAN.match(name)
    if m:
        n0, n1 = int(m.group(1)), int(m.group(2))
        n = n0 + n1
        L = HomLieSuperalgebra(F, (0,) * n0 + (1,) * n1, np.zeros((n, n, n), dtype=np.int64))
        P = PMap(L, np.zeros((n0, n), dtype=np.int64))
        return CatalogEntry(name, L, (P,), notes={"restrictable": True, "center_dim": n})
    two, m2 = F.from_int(2), F.neg(F.from_int(2))
    if name == "sl2":
        L = HomLieSuperalgebra.from_brackets(
            F, (0, 0, 0), {(0, 1): _vec(0, two, 0), (0, 2): _vec(0, 0, m2), (1, 2): _vec(1, 0, 0)}, names="hef"
        )
        P = PMap(L, [[1, 0, 0], [0, 0, 0], [0, 0, 0]])
        return CatalogEntry(name, L, (P,), "sl2", {"restrictable": True, "center_dim": 0, "unique_pmap": True})
    if name == "borel2":
        L = HomLieSuperalgebra.from_brackets(F, (0, 0), {(0, 1): _vec(0, two)}, names="he")
        P = PMap(L, [[1, 0], [0, 0]])
        return CatalogEntry(name, L, (P,), "borel2", {"restrictable": True, "center_dim": 0, "unique_pmap": True})
    if name == "gl11":
        L = commutator_superalgebra(matrix_superalgebra(F, (0, 1)))
        P = PMap(L, [[1, 0, 0, 0], [0, 0, 0, 1]])
        return CatalogEntry(name, L, (P,), notes={"restrictable": True, "center_dim": 1})
    if name == "superheis":
        L = HomLieSuperalgebra.from_brackets(F, (0, 1), {(1, 1): _vec(1, 0)}, names="zu")
        pmaps = tuple(PMap(L, [[c, 0]]) for c in range(F.p))
        return CatalogEntry(name, L, pmaps, "superheis", {"restrictable": True, "center_dim": 1})
    if name == "r3":
        L = HomLieSuperalgebra.from_brackets(
            F, (0, 0, 0), {(0, 1): _vec(0, 1, 0), (0, 2): _vec(0, 1, 1)}, names="xyz"
        )
        return CatalogEntry(name, L, (), notes={"restrictable": False, "center_dim": 0, "witness_index": 0})
    raise UnknownName(f"unknown catalog algebra {name!r}; known: {', '.join(NAMES)}")


@lru_cache(maxsize=None)
def catalog_get(name: str, p: int = 5, k: int = 1) -> CatalogEntry:
    """Validated catalog entry over GF(p^k)."""
    try:
        F = make_field(p, k)
    except FieldError as exc:
        raise UnsupportedField(f"GF({p}^{k}) is not supported: {exc}") from exc
    entry = _build(name.replace(" ", ""), F)
    L = entry.algebra
    rep = verify_axioms(L)
    if not rep.passed:
        raise TheoremViolation(f"catalog entry {name} fails the axioms", rep)
    for P in entry.pmaps:
        rep = verify_pmap(L, P)
        if not rep.passed:
            raise TheoremViolation(f"catalog p-map of {name} fails verification", rep)
    names = list(entry.endos) if F.q <= 169 else ["id"] + [f"alpha_t:{F.format(t)}" for t in range(1, F.q, F.q // 16)]
    for e in names if entry.endo_family != "id" else ["id"]:
        check_endomorphism(L, entry.endo(e))
    return entry


def catalog_names() -> tuple[str, ...]:
    return NAMES
