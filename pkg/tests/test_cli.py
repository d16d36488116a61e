from __future__ import annotations

import io
import json
from pathlib import Path

from braidmon.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, main

HERE = Path(__file__).parent
INPUTS = HERE / "inputs"
GOLDEN = HERE / "golden"
DATA = HERE.parent / "src" / "braidmon" / "data"

def run(*argv: str) -> tuple[int, str]:
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()

def test_parse_round_trip(tmp_path):
    code, text = run("parse", DATA / "parasitic_D.mt")
    assert code == EXIT_OK
    again = tmp_path / "d.mt"
    again.write_text(text)
    assert run("parse", again) == (EXIT_OK, text)

def test_parse_empty_file(tmp_path):
    empty = tmp_path / "empty.mt"
    empty.write_text("")
    assert run("parse", empty) == (EXIT_OK, "Id\n")

def test_parse_error_has_position(capsys):
    code, _ = run("parse", INPUTS / "bad_marker.mt")
    assert code == EXIT_INPUT
    assert "line 2, column 9" in capsys.readouterr().err

def test_missing_file_is_input_error(tmp_path):
    assert run("parse", tmp_path / "nope.mt")[0] == EXIT_INPUT

def test_degree_bundle():
    code, text = run("degree", "--bundle", "--residual", "54")
    assert code == EXIT_OK
    assert text.splitlines()[-1] == "residual n=54: 0"
    assert "2862" in text

def test_degree_parasitic_only():
    code, text = run("degree", DATA / "parasitic_D.mt", DATA / "parasitic_C.mt", "--symbol", "C",
                     "--format", "records")
    assert code == EXIT_OK
    recs = {r["group"]: r for r in map(json.loads, text.splitlines())}
    assert recs["*total*"]["degree"] == 1728
    assert recs["*total*"]["by_exponent"] == {"2": 864}
    assert recs["*residual*"]["residual"] == 1134

def test_degree_empty(tmp_path):
    empty = tmp_path / "empty.mt"
    empty.write_text("")
    code, text = run("degree", empty, "--residual", "54")
    assert code == EXIT_OK
    assert text.splitlines()[-1] == "residual n=54: 2862"

def test_check_pass_and_fail(tmp_path):
    assert run("check", INPUTS / "arrangement3.mt", "--config", "n=3")[0] == EXIT_OK
    short = tmp_path / "short.mt"
    short.write_text("factorization L = Z^2_{1,2} * Z^2_{2,3}\n")
    code, text = run("check", short, "--config", "n=3")
    assert code == EXIT_FAIL
    assert text.startswith("FAIL")

def test_check_refuses_stubs(capsys):
    code, _ = run("check", DATA / "hv_heads.mt", "--config", "12p", "--symbol", "H_V2")
    assert code == EXIT_INPUT
    assert "stub" in capsys.readouterr().err

def test_vankampen_golden():
    code, text = run("vankampen", DATA / "hv_heads.mt", "--config", "12p", "--symbol", "H_V2",
                     "--omit-stubs")
    assert code == EXIT_OK
    assert text == (GOLDEN / "hv2_presentation.txt").read_text()

def test_vankampen_stub_needs_flag():
    code, _ = run("vankampen", DATA / "hv_heads.mt", "--config", "12p", "--symbol", "H_V2")
    assert code == EXIT_INPUT

def test_vankampen_empty_and_quotient():
    code, text = run("vankampen", "--config", "n=3")
    assert (code, text) == (EXIT_OK, "gen: 1 2 3\n")
    code, text = run("vankampen", "--config", "54p", "--mode", "quotient")
    lines = text.splitlines()
    assert len(lines) == 1 + 54
    assert lines[1] == "rel: 1 1 = e"

def test_group_commands():
    s3 = INPUTS / "s3.txt"
    assert run("group", "abelianize", s3)[1].strip().endswith("Z/2")
    assert run("group", "tc", s3, "--subgroup", "a")[1].strip() == "index 3"
    code, text = run("group", "rs", s3, "--subgroup", "a")
    assert code == EXIT_OK and "gen: 0.a" in text
    code, text = run("group", "tc", s3, "--subgroup", "a", "--format", "records")
    assert json.loads(text.splitlines()[0])["index"] == 3

def test_group_overflow_is_reported(tmp_path):
    free = tmp_path / "free.txt"
    free.write_text("gen: a b\n")
    code, text = run("group", "tc", free, "--coset-bound", "40")
    assert code == EXIT_FAIL
    assert "overflow" in text

def test_chern():
    code, text = run("chern", "18", "54", "1080", "216", "54")
    assert code == EXIT_OK
    assert "576 * 18!" in text and "282 * 18!" in text and "4 * 18!" in text
    assert "positive" in text
    code, text = run("chern", "4", "8", "30", "0", "0")
    assert "tau" in text and "zero" in text

def test_chern_rejects_non_integral(capsys):
    assert run("chern", "1", "7", "0", "0", "0")[0] == EXIT_INPUT

def test_side_convention_is_restored():
    from braidmon.bands import side_convention

    run("--side-convention", "below", "chern", "4", "8", "0", "0", "0")
    assert side_convention() == "above"

def test_deterministic_output():
    a = run("degree", "--bundle", "--grouping", "origin")
    b = run("degree", "--bundle", "--grouping", "origin")
    assert a == b
