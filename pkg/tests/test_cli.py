from pathlib import Path

import pytest

from expeq.cli import EXIT_EMPIRICAL, EXIT_FAIL, EXIT_OK, EXIT_REFUSED, EXIT_USAGE, main

GROUPS = Path(__file__).resolve().parent.parent / "groupfiles"
DINF = str(GROUPS / "dinf.grp")
FREE2 = str(GROUPS / "free2.grp")
INTS = str(GROUPS / "integers.grp")
ZC2 = str(GROUPS / "z_c2.grp")
FOUR = "a^x1 * b^x2 * a^-x3 * b^-x4 = 1"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_dihedral(capsys):
    code, out, _ = run(capsys, "solve", "t * h^x1 * t * h^x2 = 1", "--group", DINF)
    assert code == EXIT_OK
    lines = out.splitlines()
    i = lines.index("EXACT")
    assert lines[i + 1] == "base (0,0) + Z*(1,1)" and lines[i + 2] == "DECOMPOSITION"
    assert "# sampled soundness: ok" in out


def test_solve_parity_is_empty(capsys):
    code, out, _ = run(capsys, "solve", "h * (h^2)^x1 = 1", "--group", INTS)
    assert code == EXIT_FAIL and "EXACT\nEMPTY" in out


def test_solve_mixed_loxodromic_is_empirical(capsys):
    eq = "(a b)^x1 * a (a b b)^x2 * (a b)^x3 = 1"
    code, out, _ = run(capsys, "solve", eq, "--group", FREE2, "--box=-3:3")
    assert code == EXIT_EMPIRICAL and "EMPIRICAL box=-3:3,-3:3,-3:3 verified=" in out
    code, out, _ = run(capsys, "solve", eq, "--group", FREE2, "--mode", "exact")
    assert code == EXIT_EMPIRICAL and "not computed" in out


def test_common_root_is_exact(capsys):
    code, out, _ = run(capsys, "solve", "(a b)^x1 * b^-1 a^-1 ^x2 = 1", "--group", FREE2)
    assert code == EXIT_OK and "loxodromic=[1,2] elliptic=[]" in out


def test_usage_errors(capsys):
    assert run(capsys, "solve", "a^x1 * b^x2 * a^-1^x3 = 1", "--group", FREE2)[0] == EXIT_USAGE
    code, _, err = run(capsys, "solve", "c^x1 = 1", "--group", FREE2)
    assert code == EXIT_USAGE and "unknown symbol" in err
    assert run(capsys, "solve", "a^x1 = 1", "--group", "/nonexistent.grp")[0] == EXIT_USAGE
    assert run(capsys, "solve", "a^x1 = 1", "--group", str(GROUPS / "bad_c3.grp"))[0] == EXIT_USAGE
    assert run(capsys, "frobnicate")[0] == EXIT_USAGE
    assert run(capsys, "solve", "a^x1 = 1", "--group", FREE2, "--box=1:2,3:4")[0] == EXIT_USAGE


def test_box_refused(capsys):
    code, _, err = run(capsys, "compare", FOUR, "--group", FREE2, "--box=-100:100")
    assert code == EXIT_REFUSED and "refused" in err


def test_compare_pass_and_empty(capsys):
    code, out, _ = run(capsys, "compare", FOUR, "--group", FREE2, "--box=-3:3")
    assert code == EXIT_OK and out.rstrip().endswith("PASS")
    code, out, _ = run(capsys, "compare", "h * (h^2)^x1 = 1", "--group", INTS)
    assert code == EXIT_OK and "oracle solutions: 0" in out


def test_compare_corrupted_fixture_fails(capsys, tmp_path):
    fixture = tmp_path / "expected.txt"
    # the second piece is wrong: it should be (0,t,0,t)
    fixture.write_text("base (0,0,0,0) + Z*(1,0,1,0)\nbase (0,0,0,0) + Z*(0,1,0,-1)\n")
    code, out, _ = run(capsys, "compare", FOUR, "--group", FREE2, "--box=-2:2", "--expected", str(fixture))
    assert code == EXIT_FAIL
    assert "missing 0,1,0,1" in out and "extra 0,1,0,-1" in out
    assert "FAIL (4 missing, 4 extra)" in out


def test_certify(capsys):
    code, out, _ = run(capsys, "certify", FOUR, "--group", FREE2, "--solution", "2,0,2,0")
    assert code == EXIT_OK and "pairing {{1,3},{2},{4}}" in out and "CERTIFIED" in out
    code, out, _ = run(capsys, "certify", FOUR, "--group", FREE2, "--solution", "0,0,0,0")
    assert code == EXIT_OK and "pairing {{1},{2},{3},{4}}" in out
    code, out, _ = run(capsys, "certify", FOUR, "--group", FREE2, "--solution", "1,1,1,1")
    assert code == EXIT_FAIL and "NOT A SOLUTION" in out and "a b a^-1 b^-1" in out
    code, out, _ = run(capsys, "certify", "a^x1 * t^x2 * a^x3 = 1", "--group", ZC2, "--solution", "1,2,-1")
    assert code == EXIT_OK and "pairing {{1,3},{2}}" in out
    assert run(capsys, "certify", FOUR, "--group", FREE2, "--solution", "1,2")[0] == EXIT_USAGE
    assert run(capsys, "certify", "h^x1 = 1", "--group", DINF, "--solution", "0")[0] == EXIT_USAGE


def test_catalan_and_validate(capsys):
    code, out, _ = run(capsys, "catalan", "3")
    assert code == EXIT_OK and "count 5 (C_3 = 5)" in out
    code, out, _ = run(capsys, "validate-group", str(GROUPS / "bad_c3.grp"))
    assert code == EXIT_FAIL and "C3: INVALID" in out
    code, out, _ = run(capsys, "validate-group", DINF)
    assert code == EXIT_OK and "Dinf: ok" in out


@pytest.mark.parametrize("argv", [
    ("solve", "(a b)^x1 * a (a b b)^x2 * (a b)^x3 = 1", "--group", FREE2, "--box=-3:3", "--seed", "7"),
    ("solve", "t * h^x1 * t * h^x2 = 1", "--group", DINF, "--seed", "3"),
    ("certify", FOUR, "--group", FREE2, "--solution", "2,0,2,0"),
])
def test_reports_are_reproducible(capsys, argv):
    first = run(capsys, *argv, "--timing")
    second = run(capsys, *argv, "--timing")
    assert first[:2] == second[:2]
    assert "elapsed" in first[2] and "elapsed" not in first[1]
