import csv
import io
import json
import subprocess
import sys

import pytest

from polarbounds import cli
from polarbounds.cli import RunConfig, build_parser, config_from_args, run
from polarbounds.errors import NumericFailure

KEYS = {"kind", "value", "nodes", "weights", "multiplicities", "witness", "diagnostics"}


def test_run_config_round_trip():
    argv = ["puub", "--n", "4", "--tau", "5", "--N", "24", "--s", "0.9", "--potential", "riesz:2",
            "--output", "csv", "--seed", "7"]
    cfg = config_from_args(build_parser().parse_args(argv))
    assert cfg.s == 0.9 and cfg.seed == 7 and cfg.output == "csv"
    assert RunConfig.from_json(cfg.to_json()) == cfg
    for c in (RunConfig("pulb", 3, 3, 8), RunConfig("code-info", code="cell600", maxdeg=12)):
        assert RunConfig.from_json(c.to_json()) == c


def test_pulb_json():
    code, text = run(["pulb", "--n", "4", "--tau", "5", "--N", "24", "--potential", "riesz:2"])
    assert code == 0
    rec = json.loads(text)
    assert set(rec) == KEYS
    assert rec["kind"] == "PULB" and abs(rec["value"] - 18) < 1e-9
    assert rec["multiplicities"] == pytest.approx([6, 12, 6])
    assert rec["diagnostics"]["admissibility"]["passed"]


def test_pulb_negative_flag():
    code, _ = run(["pulb", "--n", "3", "--tau", "3", "--N", "8", "--potential", "gauss", "--negative"])
    assert code == 2


def test_puub_json():
    code, text = run(["puub", "--n", "4", "--tau", "5", "--N", "24", "--s", "1", "--potential", "gauss"])
    assert code == 0
    rec = json.loads(text)
    assert rec["kind"] == "PUUB_S1" and abs(rec["value"] - 5.17499) < 5e-6


def test_fl():
    code, text = run(["fl", "--n", "3", "--tau", "3"])
    assert code == 0 and abs(json.loads(text)["value"] - 3 ** -0.5) < 1e-12


def test_code_info_cell600():
    code, text = run(["code-info", "--code", "cell600"])
    assert code == 0
    d = json.loads(text)["diagnostics"]
    assert d["strength"] == 11 and d["N"] == 120
    assert d["zero_moments"] == [i for i in range(1, 20) if i != 12]
    assert d["nonzero_moments"] == [12]


def test_code_info_from_csv(tmp_path):
    path = tmp_path / "cube.csv"
    path.write_text("\n".join(",".join(str(v / 3 ** 0.5) for v in (a, b, c))
                              for a in (-1, 1) for b in (-1, 1) for c in (-1, 1)) + "\n")
    code, text = run(["code-info", "--code", str(path)])
    assert code == 0 and json.loads(text)["diagnostics"]["strength"] == 3


def test_polarize():
    code, text = run(["polarize", "--code", "cube3", "--potential", "riesz:1", "--kind", "min"])
    assert code == 0
    rec = json.loads(text)
    assert rec["kind"] == "min" and abs(rec["value"] - 6.6027) < 1e-4
    assert rec["diagnostics"]["label"] == "numerical"
    code, text = run(["polarize", "--code", "cube3", "--potential", "riesz:1"])
    recs = json.loads(text)
    assert [r["kind"] for r in recs] == ["min", "max"] and recs[1]["value"] == "inf"


def test_cell600_command():
    code, text = run(["cell600", "--potential", "gauss"])
    assert code == 0
    rec = json.loads(text)
    assert rec["kind"] == "CELL600" and rec["diagnostics"]["dominates"]
    code, _ = run(["cell600", "--potential", "riesz:2"])
    assert code == 2


def test_precondition_exit_code(capsys):
    assert run(["pulb", "--n", "4", "--tau", "5", "--N", "10"])[0] == 2
    assert run(["pulb", "--n", "4", "--tau", "5"])[0] == 2
    assert run(["puub", "--n", "4", "--tau", "5", "--N", "24", "--s", "0.2"])[0] == 2
    assert run(["pulb", "--n", "3", "--tau", "3", "--N", "8", "--potential", "coulomb"])[0] == 2
    assert run(["code-info", "--code", "dodecahedron"])[0] == 2
    assert "error:" in capsys.readouterr().err


def test_numeric_failure_exit_code(monkeypatch):
    def boom(*args):
        raise NumericFailure("root bracketing failed")
    monkeypatch.setattr(cli.bounds, "pulb", boom)
    assert run(["pulb", "--n", "3", "--tau", "3", "--N", "8"])[0] == 3


def test_csv_output():
    code, text = run(["pulb", "--n", "3", "--tau", "3", "--N", "8", "--output", "csv"])
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["kind", "node", "weight", "multiplicity", "value"]
    assert len(rows) == 3
    assert abs(float(rows[1][1]) + 3 ** -0.5) < 1e-15 and float(rows[1][3]) == pytest.approx(4)


def test_human_output():
    code, text = run(["pulb", "--n", "3", "--tau", "3", "--N", "8", "--output", "human"])
    assert code == 0 and text.startswith("PULB: ") and "multiplicities" in text


def test_emit_curve(tmp_path):
    path = tmp_path / "curve.csv"
    code, _ = run(["puub", "--n", "3", "--tau", "3", "--N", "8", "--s", "0.8", "--potential", "riesz:1",
                   "--emit-curve", str(path)])
    assert code == 0
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["t", "h", "interpolant"]
    assert len(rows) == cli.CURVE_POINTS + 1
    assert float(rows[1][0]) == -1.0 and float(rows[-1][0]) == pytest.approx(0.8)
    # the upper interpolant dominates h on [-1, s]
    assert all(float(r[2]) >= float(r[1]) - 1e-9 for r in rows[1:])


def test_reproduce_reports_table():
    code, text = run(["reproduce"])
    lines = text.strip().splitlines()
    assert len(lines) == len(cli.golden_checks()) + 1
    assert lines[-1].endswith("passed")
    assert code == (0 if all(l.startswith("PASS") for l in lines[:-1]) else 1)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "polarbounds", "fl", "--n", "4", "--tau", "4"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert abs(json.loads(proc.stdout)["value"] - (1 + 7 ** 0.5) / 6) < 1e-12
