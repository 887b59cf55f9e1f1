import io
import subprocess
import sys

import pytest

from hlsa.cli import run_command

NAMES = ["abelian(2,1)", "sl2", "gl11", "superheis", "r3", "borel2"]


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command([str(a) for a in argv], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name in NAMES + ["abelian(1,0)"]:
        code, text, _ = run("catalog", name)
        assert code == 0
        path = tmp_path / f"{name}.hlsa"
        path.write_text(text)
        paths[name] = path
    return paths


@pytest.mark.parametrize("name", NAMES)
def test_catalog_entries_verify(files, name):
    code, out, _ = run("verify", files[name])
    assert code == 0, out


def test_verify_sl2_report(files):
    code, out, _ = run("verify", files["sl2"])
    assert code == 0
    for check in ("grading", "skew", "jacobi", "multiplicative", "pmap-i", "pmap-ii", "pmap-iii"):
        assert any(line.split()[:2] == ["PASS", check] for line in out.splitlines()), check


def test_tsv_rows(files):
    code, out, _ = run("verify", files["sl2"], "--format", "tsv")
    rows = [line.split("\t") for line in out.splitlines()]
    assert code == 0 and all(len(r) == 4 for r in rows)
    assert rows[0][:2] == ["grading", "PASS"]


def test_restrictable_r3_witness(files):
    code, out, _ = run("restrictable", files["r3"])
    assert code == 1
    assert "FAIL" in out and "basis index 1" in out and "x=[1 0 0]" in out and "rhs rows" in out


def test_restrictable_writes_pmap(files, tmp_path):
    bare = tmp_path / "bare.hlsa"
    bare.write_text(files["sl2"].read_text().split("pmap")[0])
    out_path = tmp_path / "solved.hlsa"
    code, _, _ = run("restrictable", bare, "-o", out_path)
    assert code == 0 and out_path.read_text() == files["sl2"].read_text()


def test_twist_pipeline(files, tmp_path):
    dest = tmp_path / "tw.hlsa"
    code, out, _ = run("twist", files["sl2"], "--endo", "alpha_t:2", "--output", dest)
    assert code == 0 and out == ""
    assert "bracket 1 2 : 0 4 0" in dest.read_text()
    assert run("verify", dest)[0] == 0


def test_twist_not_restricted_exits_1(tmp_path):
    path = tmp_path / "sl2_25.hlsa"
    path.write_text(run("catalog", "sl2", "--k", "2")[1])
    code, out, _ = run("twist", path, "--endo", "alpha_t:1,1")
    assert code == 1 and out.startswith("FAIL:") and "pmap-i-basis" in out


def test_twist_matrix_file(files, tmp_path):
    m = tmp_path / "endo.txt"
    m.write_text("4 0\n0 2\n")
    code, out, _ = run("twist", files["superheis"], "--endo-matrix", m)
    assert code == 0 and "alpha\n4 0\n0 2" in out
    m.write_text("2 0\n0 2\n")
    code, out, _ = run("twist", files["superheis"], "--endo-matrix", m)
    assert code == 1 and "NotEndomorphism" in out


def test_input_errors_exit_2_without_output(files, tmp_path):
    dest = tmp_path / "never.hlsa"
    assert run("verify", tmp_path / "missing.hlsa")[:2] == (2, "")
    bad = tmp_path / "bad.hlsa"
    bad.write_text(files["sl2"].read_text().replace("dim 3", "dim three"))
    code, out, err = run("twist", bad, "--endo", "id", "-o", dest)
    assert (code, out) == (2, "") and "line 3" in err and not dest.exists()
    assert run("bogus")[0] == 2
    assert run("pmap-eval", files["sl2"], "--x", "1", "2")[0] == 2
    p3 = tmp_path / "p3.hlsa"
    p3.write_text(files["sl2"].read_text().replace("field p 5", "field p 3"))
    code, _, err = run("verify", p3)
    assert code == 2 and "BadCharacteristic" in err


def test_mutated_input_never_exits_0(files, tmp_path):
    bad = tmp_path / "mut.hlsa"
    bad.write_text(files["sl2"].read_text().replace("pmap 1 0 0 : 1 0 0", "pmap 1 0 0 : 0 0 0"))
    code, out, _ = run("verify", bad)
    assert code == 1 and "FAIL    pmap-i-basis" in out
    bad.write_text(files["gl11"].read_text().replace("bracket 2 3 : 1 0 0 1", "bracket 2 3 : 1 0 0 2"))
    code, out, _ = run("verify", bad)
    assert code == 1 and "FAIL    jacobi" in out


def test_pmap_eval(files):
    assert run("pmap-eval", files["sl2"], "--x", 2, 0, 0)[1] == "2 0 0\n"
    assert run("pmap-eval", files["sl2"], "--x", 1, 1, 0)[1] == "1 1 0\n"


def test_shift_diff_normalize(files, tmp_path):
    shifted = tmp_path / "s.hlsa"
    assert run("pmap-shift", files["superheis"], "--pair", 1, 0, ":", 1, 0, "-o", shifted)[0] == 0
    assert "pmap 1 0 : 1 0" in shifted.read_text()
    code, out, _ = run("pmap-diff", shifted, files["superheis"])
    assert code == 0 and "f[1 0]" in out and "[1 0]" in out
    code, out, _ = run("normalize-center", shifted)
    assert code == 0 and "pmap 1 0 : 0 0" in out
    code, out, _ = run("pmap-shift", files["superheis"], "--pair", 1, 0, ":", 0, 1)
    assert code == 1 and "CodomainNotCentral" in out
    assert run("pmap-diff", files["sl2"], files["superheis"])[0] == 2


def test_dsum_and_decomp(files, tmp_path):
    s = tmp_path / "s.hlsa"
    assert run("dsum", files["r3"], files["abelian(1,0)"], "-o", s)[0] == 0
    code, out, _ = run("decomp-check", s, "--u", "1 0 0 0", "0 1 0 0", "0 0 1 0", "--w", "0 0 0 1")
    assert code == 0 and "witness lies in U" in out
    code, _, err = run("decomp-check", s, "--u", "1 0 0 0", "--w", "0 0 0 1")
    assert code == 2


def test_commutator(tmp_path):
    from hlsa import make_field, matrix_superalgebra, serialize_hlsa
    from hlsa.fileformat import HlsaDocument

    a = tmp_path / "m.hlsa"
    a.write_text(serialize_hlsa(HlsaDocument.from_associative(matrix_superalgebra(make_field(5), (0, 1)))))
    code, out, _ = run("commutator", a)
    assert code == 0 and "bracket 2 3 : 1 0 0 1" in out


def test_morphism_commands(files, tmp_path):
    dom = tmp_path / "borel.hlsa"
    dom.write_text(files["borel2"].read_text() + "morphism 3\n1 0\n0 1\n0 0\n")
    for cmd in ("morphism", "graph", "pullback", "pushforward"):
        code, out, _ = run(cmd, dom, files["sl2"])
        assert code == 0, (cmd, out)
    code, out, _ = run("pullback", dom, files["sl2"], "--span", "1 0 0", "0 1 0")
    assert code == 0 and "[1 0] -> [1 0]" in out
    bad = tmp_path / "bad.hlsa"
    bad.write_text(files["borel2"].read_text() + "morphism 3\n1 0\n0 0\n0 1\n")
    code, out, _ = run("graph", bad, files["sl2"])
    assert code == 1 and "PASS    biconditional" in out
    code, out, _ = run("pushforward", bad, files["sl2"])
    assert code == 1 and "PreconditionFailed" in out
    assert run("morphism", files["sl2"], files["sl2"])[0] == 2


def test_catalog_list_and_fields():
    code, out, _ = run("catalog", "--list")
    assert code == 0 and out.split() == ["abelian(n0,n1)", "sl2", "gl11", "superheis", "r3", "borel2"]
    code, out, _ = run("catalog", "gl11", "--p", 7, "--k", 3)
    assert code == 0 and "field p 7 k 3 modulus 2 0 0 1" in out
    assert run("catalog", "nope")[0] == 2


def test_fuzz_command_deterministic():
    a = run("fuzz", "--seed", 3, "--count", 4)
    b = run("fuzz", "--seed", 3, "--count", 4)
    assert a == b and a[0] == 0 and a[1].splitlines()[-1] == "result\tPASS"
    code, out, _ = run("fuzz", "--seed", 3, "--count", 4, "--mutate")
    assert code == 0 and "mutants-caught\t4/4" in out
    assert run("fuzz", "--field", "5^x")[0] == 2
    assert run("fuzz", "--dims", "3-1")[0] == 2


def test_module_entry_point(files):
    res = subprocess.run([sys.executable, "-m", "hlsa", "verify", str(files["sl2"])], capture_output=True, text=True)
    assert res.returncode == 0 and "PASS    jacobi" in res.stdout
    res = subprocess.run([sys.executable, "-m", "hlsa", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("hlsa ")
