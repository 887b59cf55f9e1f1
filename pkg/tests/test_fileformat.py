import numpy as np
import pytest

from hlsa import catalog_get, make_field, matrix_superalgebra, parse_hlsa, serialize_hlsa
from hlsa.errors import (
    BadCharacteristic,
    HlsaSyntaxError,
    InvariantViolation,
    UnsupportedVersion,
)
from hlsa.fileformat import HlsaDocument

SL2 = """hlsa 1
field p 5 k 1
dim 3
parity 0 0 0
names h e f
alpha
1 0 0
0 1 0
0 0 1
bracket 1 2 : 0 2 0
bracket 1 3 : 0 0 3
bracket 2 3 : 1 0 0
pmap 1 0 0 : 1 0 0
pmap 0 1 0 : 0 0 0
pmap 0 0 1 : 0 0 0
"""

NAMES = ["abelian(2,1)", "sl2", "gl11", "superheis", "r3", "borel2"]


def test_sl2_canonical_text(sl2):
    text = serialize_hlsa(HlsaDocument.from_algebra(sl2.algebra, sl2.pmap))
    assert text == SL2
    doc = parse_hlsa(text)
    assert doc.algebra() == sl2.algebra and doc.pmap_object() == sl2.pmap


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("p,k", [(5, 1), (7, 2), (5, 3)])
def test_catalog_roundtrip(name, p, k):
    entry = catalog_get(name, p, k)
    text = serialize_hlsa(HlsaDocument.from_algebra(entry.algebra, entry.pmap))
    doc = parse_hlsa(text)
    assert serialize_hlsa(doc) == text
    assert doc.algebra() == entry.algebra
    if entry.pmap is not None:
        assert doc.pmap_object() == entry.pmap


def test_comments_and_skew_fill():
    text = SL2.replace("bracket 1 2", "# a comment\nbracket 1 2").replace("0 0 1\nbracket", "0 0 1   # trailing\nbracket")
    doc = parse_hlsa(text.replace("pmap", "bracket 3 2 : 4 0 0\npmap", 1))
    assert doc.structure[2, 1].tolist() == [4, 0, 0]


def test_grading_violation_names_indices():
    bad = SL2.replace("parity 0 0 0", "parity 0 0 1").replace("pmap 0 0 1 : 0 0 0\n", "")
    # [e,f] = h is even although e f is odd
    with pytest.raises(InvariantViolation, match=r"\(i,j,k\) = \(2,3,1\)"):
        parse_hlsa(bad)


def test_excluded_characteristic():
    with pytest.raises(BadCharacteristic):
        parse_hlsa(SL2.replace("field p 5", "field p 3"))


@pytest.mark.parametrize(
    "edit,line",
    [
        (("dim 3", "dim x"), 3),
        (("bracket 2 3 : 1 0 0", "bracket 2 3 : 1 0"), 12),
        (("bracket 2 3 : 1 0 0", "bracket 2 4 : 1 0 0"), 12),
        (("bracket 2 3 : 1 0 0", "bracket 2 3 : 7 0 0"), 12),
        (("bracket 2 3 : 1 0 0", "brocket 2 3 : 1 0 0"), 12),
        (("bracket 2 3 : 1 0 0", "bracket 1 2 : 0 2 0"), 12),
    ],
)
def test_syntax_errors_report_line(edit, line):
    with pytest.raises(HlsaSyntaxError) as info:
        parse_hlsa(SL2.replace(*edit))
    assert info.value.line == line and str(info.value).startswith(f"line {line}:")


def test_version():
    with pytest.raises(UnsupportedVersion):
        parse_hlsa(SL2.replace("hlsa 1", "hlsa 2"))


def test_invariants():
    with pytest.raises(InvariantViolation, match="skew"):
        parse_hlsa(SL2.replace("pmap 1 0 0", "bracket 2 1 : 0 2 0\npmap 1 0 0", 1))
    with pytest.raises(InvariantViolation, match="itself"):
        parse_hlsa(SL2.replace("bracket 2 3", "bracket 1 1 : 1 0 0\nbracket 2 3"))
    with pytest.raises(InvariantViolation, match="pmap"):
        parse_hlsa(SL2.replace("pmap 0 0 1 : 0 0 0\n", ""))
    odd_alpha = SL2.replace("parity 0 0 0", "parity 0 0 1").replace("0 1 0\n0 0 1", "0 1 1\n0 0 1")
    with pytest.raises(InvariantViolation, match="alpha"):
        parse_hlsa(odd_alpha)


def test_extension_field_elements():
    H = catalog_get("superheis", 5, 2)
    text = serialize_hlsa(HlsaDocument.from_algebra(H.algebra, H.pmap))
    assert "modulus 3 0 1" in text
    tw = text.replace("alpha\n1 0\n0 1", "alpha\n2 0\n0 0,1").split("pmap")[0]
    doc = parse_hlsa(tw)
    assert doc.alpha.tolist() == [[2, 0], [0, 5]]


def test_associative_document():
    A = matrix_superalgebra(make_field(5), (0, 1))
    text = serialize_hlsa(HlsaDocument.from_associative(A))
    doc = parse_hlsa(text)
    assert doc.kind == "assoc" and np.array_equal(doc.associative().product, A.product)
    with pytest.raises(InvariantViolation):
        doc.algebra()


def test_morphism_block(sl2):
    text = SL2 + "morphism 3\n1 0 0\n0 1 0\n0 0 1\n"
    doc = parse_hlsa(text)
    assert doc.morphism.tolist() == np.eye(3, dtype=int).tolist()
    assert serialize_hlsa(doc) == text
    with pytest.raises(HlsaSyntaxError):
        parse_hlsa(SL2 + "morphism 3\n1 0 0\n")
