"""The command-line interface and its exit codes."""

import json
import subprocess
import sys

import pytest

from mtprove.cli import CliConfig, UsageError, parse_interval, parse_relation, parse_splits, run
from mtprove.corpus import CASE_TEXT, HALF_PI
from fractions import Fraction


def test_argument_helpers():
    assert parse_interval("(0, pi/2)") == (0, HALF_PI)
    assert parse_interval("(1/10,1)") == (Fraction(1, 10), 1)
    for bad in ("0,1", "(0;1)", "(pi/2,1)", "(0,e)"):
        with pytest.raises(UsageError):
            parse_interval(bad)
    assert parse_relation(">0") == "strictly-positive"
    assert parse_relation("<0") == "strictly-negative"
    with pytest.raises(UsageError):
        parse_relation(">=0")
    assert parse_splits("default") == "default"
    assert parse_splits("27/20,9/25") == (Fraction(27, 20), Fraction(9, 25))
    with pytest.raises(UsageError):
        parse_splits("1")


def test_config_defaults_and_env(monkeypatch):
    c = CliConfig()
    assert (c.precision_bits, c.max_taylor_degree, c.grid_size) == (60, 20, 2048)
    monkeypatch.setenv("MTPROVE_PRECISION_BITS", "90")
    monkeypatch.setenv("MTPROVE_MAX_DEGREE", "12")
    c = CliConfig.from_env()
    assert (c.precision_bits, c.max_taylor_degree) == (90, 12)


def test_prove_simple(capsys):
    assert run(["prove", "x - sin(x)", "--interval", "(0,pi/2)", "--relation", ">0"]) == 0
    assert "proved" in capsys.readouterr().out


def test_prove_disproved_and_usage(capsys):
    assert run(["prove", "x - sin(x)", "--interval", "(0,1)", "--relation", "<0"]) == 1
    assert run(["prove", "x - sin(x)", "--interval", "(0,3)"]) == 3
    assert run(["prove", "x +", "--interval", "(0,1)"]) == 3
    with pytest.raises(SystemExit) as info:
        run(["nonsense"])
    assert info.value.code == 3


def test_prove_gave_up(capsys):
    # a true inequality with too small a degree cap: gave up, not disproved
    assert run(["--max-degree", "1", "prove", CASE_TEXT["f2"], "--relation", "<0"]) == 2
    assert "gave up" in capsys.readouterr().out


def test_prove_file_and_json_output(tmp_path, capsys):
    src = tmp_path / "f.txt"
    src.write_text("x - sin(x)\n")
    out = tmp_path / "cert.json"
    assert run(["--format", "json", "prove", str(src), "--out", str(out)]) == 0
    printed = capsys.readouterr().out
    assert json.loads(printed) == json.loads(out.read_text())
    assert run(["check", str(out)]) == 0


def test_check_rejects_tampered(tmp_path, capsys):
    out = tmp_path / "cert.json"
    assert run(["prove", "x - sin(x)", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    del data["pieces"][0]
    out.write_text(json.dumps(data))
    assert run(["check", str(out)]) == 1
    assert "REJECTED" in capsys.readouterr().out
    assert run(["check", str(tmp_path / "missing.json")]) == 3


def test_corpus(tmp_path, capsys):
    assert run(["corpus", "--out-dir", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "8/8 proved" in out
    assert len(list(tmp_path.glob("certificate_*.json"))) == 8


def test_bounds_figures(tmp_path, capsys):
    assert run(["bounds", "--figures", "--grid", "64", "--out-dir", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "hierarchy on grid 64: holds" in out
    assert len(list(tmp_path.glob("figure*_*.csv"))) == 4


def test_lemmas_command(capsys):
    assert run(["lemmas", "--grid", "50"]) == 0
    assert "FAIL" not in capsys.readouterr().out


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "mtprove", "prove", "x - sin(x)"], capture_output=True, text=True)
    assert r.returncode == 0 and "proved" in r.stdout
