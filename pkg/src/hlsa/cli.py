"""Command-line front end.

Exit codes: 0 when every check passes or a construction succeeds, 1 for a
verified failure (a witness is printed), 2 for input errors.  Output is
buffered, so an exit-2 run writes nothing to stdout or to ``--output``.
"""

from __future__ import annotations

import argparse
import re
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .algebra import HomLieSuperalgebra, centralizer, fixed_even_subspace, verify_axioms
from .catalog import NAMES, catalog_get
from .constructions import commutator_superalgebra, direct_sum, direct_sum_pmap, yau_twist
from .errors import (
    CodomainNotCentral,
    HlsaError,
    NotCentral,
    NotEndomorphism,
    PMapEscapesFixedSpace,
    PreconditionFailed,
    TargetOutsideImage,
    TheoremViolation,
)
from .field import make_field
from .fileformat import HlsaDocument, load_hlsa, parse_hlsa, serialize_hlsa
from .fuzz import FAMILIES, fuzz
from .morphisms import (
    Morphism,
    graph_criterion,
    pullback_restricted,
    pushforward_restricted,
    verify_morphism,
    verify_restricted_morphism,
)
from .report import VerificationReport
from .restriction import (
    PMap,
    Sampled,
    SemilinearMap,
    ideal_decomposition_check,
    normalize_pmap_on_center,
    pmap_difference,
    pmap_eval,
    restrictability_certificate,
    shift_pmap,
    verify_pmap,
)

# errors that report a verified failure rather than bad input
FAIL_ERRORS = (NotEndomorphism, PMapEscapesFixedSpace, PreconditionFailed, NotCentral, CodomainNotCentral, TargetOutsideImage)


class UsageError(HlsaError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


class Outcome:
    def __init__(self) -> None:
        self.chunks: list[str] = []
        self.files: dict[str, str] = {}
        self.code = 0

    def write(self, text: str) -> None:
        self.chunks.append(text if text.endswith("\n") else text + "\n")

    def report(self, rep: VerificationReport, fmt: str) -> None:
        self.chunks.append(rep.render(fmt))
        if not rep.passed:
            self.code = 1


# ---------------------------------------------------------------- helpers
def _doc(path: str) -> HlsaDocument:
    try:
        return load_hlsa(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _algebra_and_pmap(path: str, need_pmap: bool = False) -> tuple[HlsaDocument, HomLieSuperalgebra, PMap | None]:
    doc = _doc(path)
    L = doc.algebra()
    P = doc.pmap_object(L)
    if need_pmap and P is None:
        raise UsageError(f"{path} has no pmap block")
    return doc, L, P


def _vector(L: HomLieSuperalgebra, tokens: Sequence[str], what: str) -> np.ndarray:
    if len(tokens) != L.n:
        raise UsageError(f"{what} needs {L.n} coordinates, got {len(tokens)}")
    return np.array([L.field.parse(t) for t in tokens], dtype=np.int64)


def _vectors(L: HomLieSuperalgebra, items: Sequence[str] | None, what: str) -> list[np.ndarray]:
    return [_vector(L, item.split(), what) for item in items or []]


def _mode(args):
    if args.mode == "sampled":
        return Sampled(args.sample_seed, args.samples)
    return args.mode


def _emit_doc(out: Outcome, args, doc: HlsaDocument) -> None:
    text = serialize_hlsa(doc)
    if getattr(args, "output", None):
        out.files[args.output] = text
    else:
        out.write(text.rstrip("\n"))


def _catalog_endo(L: HomLieSuperalgebra, spec: str) -> np.ndarray:
    if spec == "id":
        return np.eye(L.n, dtype=np.int64)
    F = L.field
    for name in ("sl2", "borel2", "superheis"):
        entry = catalog_get(name, F.p, F.k)
        A = entry.algebra
        if A.parities == L.parities and np.array_equal(A.structure, L.structure) and np.array_equal(A.alpha, L.alpha):
            return entry.endo(spec)
    raise UsageError(f"--endo {spec} needs a catalog algebra with a named endomorphism family; use --endo-matrix")


def _matrix_file(path: str, L: HomLieSuperalgebra) -> np.ndarray:
    try:
        with open(path, encoding="utf-8") as fh:
            rows = [ln.split("#", 1)[0].split() for ln in fh]
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    rows = [r for r in rows if r]
    if len(rows) != L.n:
        raise UsageError(f"{path}: expected {L.n} rows")
    return np.stack([_vector(L, r, "matrix row") for r in rows])


def _field_arg(text: str):
    m = re.fullmatch(r"(\d+)(?:\^(\d+))?", text.strip())
    if not m:
        raise UsageError(f"--field expects p or p^k, got {text!r}")
    return make_field(int(m.group(1)), int(m.group(2) or 1))


def _dims_arg(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"(\d+)(?:-(\d+))?", text.strip())
    if not m:
        raise UsageError(f"--dims expects n or lo-hi, got {text!r}")
    lo = int(m.group(1))
    hi = int(m.group(2) or m.group(1))
    if not 1 <= lo <= hi:
        raise UsageError("--dims needs 1 <= lo <= hi")
    return lo, hi


def _pairs(L: HomLieSuperalgebra, groups) -> tuple[np.ndarray, np.ndarray]:
    X, Y = [], []
    for g in groups or []:
        if ":" not in g:
            raise UsageError("--pair is 'x1 .. xn : y1 .. yn'")
        cut = g.index(":")
        X.append(_vector(L, g[:cut], "pair argument"))
        Y.append(_vector(L, g[cut + 1:], "pair value"))
    return np.array(X, dtype=np.int64).reshape(-1, L.n), np.array(Y, dtype=np.int64).reshape(-1, L.n)


def _vtext(L: HomLieSuperalgebra, v) -> str:
    return "[" + L.field.format_vector(v) + "]"


# ---------------------------------------------------------------- commands
def cmd_verify(args, out: Outcome) -> None:
    _, L, P = _algebra_and_pmap(args.file)
    rep = verify_axioms(L)
    if P is not None:
        if L.is_multiplicative:
            rep.extend(verify_pmap(L, P, _mode(args)))
        else:
            rep.add("pmap", None, detail="skipped: not multiplicative")
    out.report(rep, args.format)


def cmd_restrictable(args, out: Outcome) -> None:
    doc, L, _ = _algebra_and_pmap(args.file)
    cert = restrictability_certificate(L, _mode(args))
    rep = VerificationReport()
    F = L.field
    if cert.restrictable:
        pairs = "; ".join(f"{_vtext(L, b)} -> {_vtext(L, y)}" for b, y in zip(cert.pmap.domain.basis, cert.pmap.images))
        rep.add("restrictable", True, detail=f"p-map {pairs}" if pairs else "empty L^0")
        rep.extend(cert.report)
    else:
        where = f"L^0 basis index {cert.witness_index + 1}" if cert.witness_index is not None else "element"
        rhs = "; ".join(F.format_vector(r) for r in np.asarray(cert.rhs))
        rep.add("restrictable", False, (cert.witness_index,), f"{where} x={_vtext(L, cert.witness_element)}",
                f"ad_alpha y = (ad_alpha x)^p has no solution y in L^0; rhs rows [{rhs}]")
    out.report(rep, args.format)
    if cert.restrictable and args.output:
        out.files[args.output] = serialize_hlsa(HlsaDocument.from_algebra(L, cert.pmap))


def cmd_pmap_eval(args, out: Outcome) -> None:
    _, L, P = _algebra_and_pmap(args.file, need_pmap=True)
    y = pmap_eval(P, _vector(L, args.x, "--x"))
    out.write(L.field.format_vector(y))


def cmd_pmap_shift(args, out: Outcome) -> None:
    _, L, P = _algebra_and_pmap(args.file, need_pmap=True)
    X, Y = _pairs(L, args.pair)
    f = SemilinearMap.from_pairs(L, P.domain, X, Y, centralizer(L, P.base))
    _emit_doc(out, args, HlsaDocument.from_algebra(L, shift_pmap(L, P, f)))


def cmd_pmap_diff(args, out: Outcome) -> None:
    _, L, P1 = _algebra_and_pmap(args.first, need_pmap=True)
    _, L2, P2 = _algebra_and_pmap(args.second, need_pmap=True)
    if L2 != L:
        raise UsageError("the two documents describe different algebras")
    f = pmap_difference(L, P1, PMap(L, P2.images), _mode(args))
    rep = f.report
    for b, y in zip(f.domain.basis, f.images):
        rep.add(f"f{_vtext(L, b)}", True, detail=_vtext(L, y))
    out.report(rep, args.format)


def cmd_normalize(args, out: Outcome) -> None:
    _, L, P = _algebra_and_pmap(args.file, need_pmap=True)
    _emit_doc(out, args, HlsaDocument.from_algebra(L, normalize_pmap_on_center(L, P, _mode(args))))


def cmd_twist(args, out: Outcome) -> None:
    _, L, P = _algebra_and_pmap(args.file, need_pmap=True)
    if (args.endo is None) == (args.endo_matrix is None):
        raise UsageError("give exactly one of --endo and --endo-matrix")
    E = _catalog_endo(L, args.endo) if args.endo else _matrix_file(args.endo_matrix, L)
    T, Q = yau_twist(L, E, P)
    _emit_doc(out, args, HlsaDocument.from_algebra(T, Q))


def cmd_dsum(args, out: Outcome) -> None:
    _, L, P = _algebra_and_pmap(args.first)
    _, G, Q = _algebra_and_pmap(args.second)
    S = direct_sum(L, G)
    PS = direct_sum_pmap(P, Q, S) if P is not None and Q is not None else None
    _emit_doc(out, args, HlsaDocument.from_algebra(S, PS))


def cmd_commutator(args, out: Outcome) -> None:
    doc = _doc(args.file)
    _emit_doc(out, args, HlsaDocument.from_algebra(commutator_superalgebra(doc.associative())))


def _morphism(args) -> tuple[Morphism, PMap | None, PMap | None]:
    doc, L, P = _algebra_and_pmap(args.domain)
    _, G, Q = _algebra_and_pmap(args.codomain)
    if doc.morphism is None:
        raise UsageError(f"{args.domain} has no morphism block")
    return Morphism(L, G, doc.morphism), P, Q


def cmd_morphism(args, out: Outcome) -> None:
    phi, P, Q = _morphism(args)
    if P is not None and Q is not None:
        out.report(verify_restricted_morphism(phi, P, Q, _mode(args)), args.format)
    else:
        out.report(verify_morphism(phi), args.format)


def cmd_graph(args, out: Outcome) -> None:
    phi, P, Q = _morphism(args)
    if P is None or Q is None:
        raise UsageError("graph needs pmap blocks in both documents")
    out.report(graph_criterion(phi, P, Q, _mode(args)), args.format)


def _transport_report(out: Outcome, args, name: str, L: HomLieSuperalgebra, H, P: PMap) -> None:
    rep = VerificationReport()
    rep.add(name, True, detail=f"subspace of dimension {H.dim}, p-map on dimension {P.domain.dim}")
    for b in H.basis:
        rep.add("basis", True, detail=_vtext(L, b))
    for b, y in zip(P.domain.basis, P.images):
        rep.add("pmap", True, detail=f"{_vtext(L, b)} -> {_vtext(L, y)}")
    out.report(rep, args.format)


def cmd_pullback(args, out: Outcome) -> None:
    phi, _, Q = _morphism(args)
    if Q is None:
        raise UsageError(f"{args.codomain} has no pmap block")
    C = _vectors(phi.codomain, args.span, "--span") if args.span else None
    D, P = pullback_restricted(phi, Q, C)
    _transport_report(out, args, "pullback", phi.domain, D, P)


def cmd_pushforward(args, out: Outcome) -> None:
    phi, P, _ = _morphism(args)
    if P is None:
        raise UsageError(f"{args.domain} has no pmap block")
    I, Q = pushforward_restricted(phi, P)
    _transport_report(out, args, "pushforward", phi.codomain, I, Q)


def cmd_decomp(args, out: Outcome) -> None:
    _, L, _ = _algebra_and_pmap(args.file)
    out.report(ideal_decomposition_check(L, _vectors(L, args.u, "--u"), _vectors(L, args.w, "--w")), args.format)


def cmd_catalog(args, out: Outcome) -> None:
    if args.list or args.name is None:
        for name in NAMES:
            out.write(name)
        return
    entry = catalog_get(args.name, args.p, args.k)
    _emit_doc(out, args, HlsaDocument.from_algebra(entry.algebra, entry.pmap))


def cmd_fuzz(args, out: Outcome) -> None:
    res = fuzz(args.seed, args.count, _field_arg(args.field), _dims_arg(args.dims), args.family, args.mutate, args.start)
    out.write(res.text.rstrip("\n"))
    out.code = res.exit_code


# ------------------------------------------------------------------ parser
def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "tsv"), default="text")
    common.add_argument("--mode", choices=("auto", "exhaustive", "sampled"), default="auto")
    common.add_argument("--samples", type=int, default=1000, help="sample count in sampled mode")
    common.add_argument("--sample-seed", type=int, default=0, help="seed for sampled mode")
    common.add_argument("--output", "-o", help="write the resulting document here instead of stdout")

    parser = _Parser(prog="hlsa", description="Restricted Hom-Lie superalgebras over GF(p^k).")
    parser.add_argument("--version", action="version", version=f"hlsa {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_text, *files):
        p = sub.add_parser(name, parents=[common], help=help_text)
        for f in files:
            p.add_argument(f)
        p.set_defaults(func=fn)
        return p

    add("verify", cmd_verify, "check the Hom-Lie axioms (and the p-map, if present)", "file")
    add("restrictable", cmd_restrictable, "solve for a p-map or print a witness", "file")
    p = add("pmap-eval", cmd_pmap_eval, "evaluate the document's p-map", "file")
    p.add_argument("--x", nargs="+", required=True, metavar="C")
    p = add("pmap-shift", cmd_pmap_shift, "add a central p-semilinear map to the p-map", "file")
    p.add_argument("--pair", nargs="+", action="append", required=True, metavar="TOK",
                   help="x1 .. xn : y1 .. yn, repeated to give f on a basis of L^0")
    add("pmap-diff", cmd_pmap_diff, "first p-map minus second, on one algebra", "first", "second")
    add("normalize-center", cmd_normalize, "p-map vanishing on the central part of L^0", "file")
    p = add("twist", cmd_twist, "Yau twist along an even endomorphism", "file")
    p.add_argument("--endo", help="id or alpha_t:<t> for catalog algebras")
    p.add_argument("--endo-matrix", help="file with n rows of n field elements")
    add("dsum", cmd_dsum, "direct sum of two documents", "first", "second")
    add("commutator", cmd_commutator, "commutator algebra of a Hom-associative document", "file")
    add("morphism", cmd_morphism, "check the morphism block of DOMAIN", "domain", "codomain")
    add("graph", cmd_graph, "graph criterion for the morphism block", "domain", "codomain")
    p = add("pullback", cmd_pullback, "pull the codomain p-map back along the morphism", "domain", "codomain")
    p.add_argument("--span", nargs="+", metavar="VEC", help="quoted vectors spanning C (default: whole codomain)")
    add("pushforward", cmd_pushforward, "push the domain p-map forward along the morphism", "domain", "codomain")
    p = add("decomp-check", cmd_decomp, "restrictability of L versus ideal summands U and W", "file")
    p.add_argument("--u", nargs="+", required=True, metavar="VEC")
    p.add_argument("--w", nargs="+", required=True, metavar="VEC")
    p = add("catalog", cmd_catalog, "print a built-in algebra")
    p.add_argument("name", nargs="?")
    p.add_argument("--p", type=int, default=5)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--list", action="store_true")
    p = add("fuzz", cmd_fuzz, "seeded property suite over constructed instances")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--dims", default="1-6")
    p.add_argument("--field", default="5")
    p.add_argument("--family", choices=tuple(FAMILIES), default="catalog")
    p.add_argument("--mutate", action="store_true")
    return parser


def run_command(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    out = Outcome()
    try:
        try:
            args = build_parser().parse_args(argv)
        except SystemExit as exc:  # --help / --version
            return int(exc.code or 0)
        args.func(args, out)
    except TheoremViolation as exc:
        out.write(f"FAIL: {exc}")
        if exc.report is not None:
            out.chunks.append(exc.report.render(getattr(args, "format", "text")))
        out.code = 1
    except FAIL_ERRORS as exc:
        out.write(f"FAIL: {type(exc).__name__}: {exc}")
        rep = getattr(exc, "report", None)
        if rep is not None:
            out.chunks.append(rep.render(getattr(args, "format", "text")))
        out.code = 1
    except (HlsaError, ValueError, KeyError) as exc:
        stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 2
    for path, text in out.files.items():
        try:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            stderr.write(f"error: cannot write {path}: {exc.strerror}\n")
            return 2
    stdout.write("".join(out.chunks))
    return out.code


def main() -> None:
    sys.exit(run_command())


__all__ = ["run_command", "main", "build_parser", "parse_hlsa"]
