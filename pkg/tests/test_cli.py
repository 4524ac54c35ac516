import json
import subprocess
import sys

import pytest

from weylalg.cli import main


def run(capsys, *argv):
    code = main(["--format", "json", *argv])
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


def test_gb(capsys):
    code, res, _ = run(capsys, "gb", "x1*d1; d1^2")
    assert code == 0 and res["basis"] == ["d1"]


def test_member_and_verify(capsys, tmp_path):
    code, res, _ = run(capsys, "member", "d1*d2 + x1*d2", "d2; d1")
    assert code == 0 and res["member"]
    cert = tmp_path / "m.json"
    cert.write_text(json.dumps(res))
    code, res, _ = run(capsys, "verify", str(cert))
    assert code == 0 and res["valid"]


def test_tampered_certificate_fails(capsys, tmp_path):
    _, res, _ = run(capsys, "ore", "x1", "d1")
    res["a"] = "d1"
    cert = tmp_path / "ore.json"
    cert.write_text(json.dumps(res))
    code, res, _ = run(capsys, "verify", str(cert))
    assert code == 1 and res["valid"] is False


@pytest.mark.parametrize("argv", [
    ("simplicity", "x1*d1^2 + d2"),
    ("ore", "--right", "x1", "d1"),
    ("syz", "d1; x1*d1"),
    ("intersect", "d1", "x1*d1 - 1"),
    ("ann", "(x1, 1)", "(d1, 0); (0, d1)"),
    ("nf", "x1*d1^2 + x1", "d1"),
    ("gb", "(d1, x1); (x1, 0)"),
    ("cyclic", "(1,0,0); (0,1,0); (0,0,1)", "(d1,0,0); (0,d1,0); (0,0,d1)"),
    ("stafford", "--generators", "d1; d2; d3"),
    ("stafford", "--a1-fast", "--generators", "d1^3; x1*d1 - 2"),
    ("verify-equal", "d1; d2 + x1*d3", "d1; d2; d3"),
])
def test_round_trip(capsys, tmp_path, argv):
    code, res, _ = run(capsys, *argv)
    assert code == 0
    cert = tmp_path / "c.json"
    cert.write_text(json.dumps(res))
    code, chk, _ = run(capsys, "verify", str(cert))
    assert code == 0 and chk["valid"]


def test_cyclic_three_copies(capsys):
    code, res, _ = run(capsys, "cyclic", "(1,0,0); (0,1,0); (0,0,1)", "(d1,0,0); (0,d1,0); (0,0,d1)")
    assert code == 0
    code, ann, _ = run(capsys, "ann", "(" + ", ".join(res["gamma"]) + ")", "(d1,0,0); (0,d1,0); (0,0,d1)")
    assert ann["annihilator"] == ["d1^3"]


def test_list_files_and_comments(capsys, tmp_path):
    f = tmp_path / "gens.txt"
    f.write_text("# generators\nd1\n\nd2  # second\n")
    code, res, _ = run(capsys, "gb", str(f))
    assert code == 0 and res["n"] == 2 and sorted(res["basis"]) == ["d1", "d2"]


def test_exit_codes(capsys):
    code, _, err = run(capsys, "gb", "d0")
    assert code == 1 and "error" in err
    code, _, err = run(capsys, "gb", "x1 +")
    assert code == 1
    code, res, _ = run(capsys, "verify-equal", "d1", "d2")
    assert code == 1 and res["equal"] is False
    code, _, err = run(capsys, "--max-iter", "1", "gb", "x1^2*d2 + d1^3 + x2; d2^2*x1 + x2^3 - d1; x1*x2*d1*d2 + 1 + d2^3")
    assert code == 2 and "error" in err


def test_random_is_deterministic(capsys):
    _, a, _ = run(capsys, "--n", "2", "--seed", "7", "random", "--count", "4")
    _, b, _ = run(capsys, "--n", "2", "--seed", "7", "random", "--count", "4")
    _, c, _ = run(capsys, "--n", "2", "--seed", "8", "random", "--count", "4")
    assert a == b and a != c


def test_orders(capsys):
    _, g1, _ = run(capsys, "--order", "elim:d1", "gb", "d1 - x2; x1")
    _, g2, _ = run(capsys, "--order", "lex", "gb", "d1 - x2; x1")
    assert g1["order"] == "elim:d1" and g2["order"] == "lex"
    code, _, _ = run(capsys, "--order", "bogus", "gb", "d1")
    assert code == 1


def test_text_output(capsys):
    assert main(["simplicity", "d1"]) == 0
    out = capsys.readouterr().out
    assert "pairs:" in out and "element: d1" in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "weylalg", "--format", "json", "ore", "x1", "d1"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["a"] == "d1^2"


def test_term_over_position(capsys):
    code, res, _ = run(capsys, "--order", "grevlex:top", "gb", "(d1, x1); (x1, 0)")
    assert code == 0 and res["order"] == "grevlex:top"
