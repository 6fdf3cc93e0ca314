import json
import math
import re
import subprocess
import sys

import numpy as np
import pytest

from dxa import CurveKind, FluctuationCurve, scale_grid
from dxa.cli import main
from dxa.io import ColumnSpec, read_series, write_curve


def run(args, capsys):
    code = main([str(a) for a in args])
    out, err = capsys.readouterr()
    return code, out, err


def exponent(text, name):
    return float(re.search(rf"{name} = (-?[0-9.]+)", text).group(1))


@pytest.fixture
def pair_file(tmp_path, capsys):
    path = tmp_path / "pair.csv"
    code, _, _ = run(["gen-arfima", "--rho", 0.1, "--rho2", 0.4, "--coupling", "same",
                      "--n", 4096, "--truncation", 2000, "--seed", 3, "--out", path], capsys)
    assert code == 0
    return path


def test_gen_arfima_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert run(["gen-arfima", "--rho", 0.4, "--n", 1024, "--seed", 7, "--out", path], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().splitlines()[0] == "y"
    assert len(a.read_text().splitlines()) == 1025


@pytest.mark.parametrize("flags, flag", [
    (["--rho", 0.6], "--rho"),
    (["--rho", 0.2, "--rho2", 0.0, "--coupling", "same"], "--rho2"),
    (["--rho", 0.2, "--n", 0], "--n"),
    (["--rho", 0.2, "--rho2", 0.3], "--coupling"),
])
def test_gen_arfima_validation(flags, flag, capsys):
    code, out, err = run(["gen-arfima", *flags], capsys)
    assert code != 0
    assert flag in err
    assert out == ""


def test_rho_message(capsys):
    _, _, err = run(["gen-arfima", "--rho", 0.6], capsys)
    assert "rho out of (0,0.5)" in err


def test_negated_pair_gives_negative_curve(tmp_path, capsys):
    path = tmp_path / "neg.csv"
    run(["gen-arfima", "--rho", 0.1, "--rho2", 0.4, "--coupling", "negated", "--n", 4096,
         "--truncation", 2000, "--out", path], capsys)
    curve_path = tmp_path / "neg.json"
    code, out, _ = run(["dxa", path, "--column2", 1, "--out", curve_path], capsys)
    assert code == 0
    doc = json.loads(curve_path.read_text())
    assert all(v < 0 for v in doc["f2"])
    assert doc["fit"]["negative_fraction"] == 1.0


def test_dxa_self_pair_equals_dfa(pair_file, capsys):
    _, dfa_out, _ = run(["dfa", pair_file, "--column", 1], capsys)
    _, dxa_out, _ = run(["dxa", pair_file, pair_file, "--column", 1], capsys)
    assert exponent(dfa_out, "H") == exponent(dxa_out, "lambda")
    assert "diagnosis = UniquePowerLaw" in dxa_out


def test_dxa_writes_provenance(pair_file, tmp_path, capsys):
    out = tmp_path / "c.json"
    code, text, _ = run(["dxa", pair_file, "--column2", 1, "--min-scale", 8, "--points", 20,
                         "--fit-min", 16, "--out", out], capsys)
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["kind"] == "DXA"
    assert doc["series_length"] == 4096
    assert doc["scales"][0] == 8
    assert doc["fit"]["range"][0] >= 16  # first grid scale inside the requested range
    assert doc["params"]["fit_range"] == [16, 1024]
    assert doc["params"]["grid"] == [8, 1024, 20]
    assert doc["params"]["diagnosis"] in text


def test_dfa_csv_format(pair_file, tmp_path, capsys):
    out = tmp_path / "c.csv"
    run(["dfa", pair_file, "--points", 5, "--format", "csv", "--out", out], capsys)
    lines = out.read_text().splitlines()
    assert lines[0] == "scale,f2,f_signed"
    assert len(lines) == 6


def test_fit_on_exact_power_law_file(tmp_path, capsys):
    grid = scale_grid(4, 256, 12)
    n = grid.scales.astype(float)
    curve = FluctuationCurve(grid, (2.0 * n**0.625) ** 2, CurveKind.DFA, 2000)
    path = tmp_path / "exact.json"
    write_curve(curve, None, path)
    code, out, _ = run(["fit", path], capsys)
    assert code == 0
    assert "exponent = 0.625000" in out


def test_acorr_lag_zero(pair_file, capsys):
    code, out, _ = run(["acorr", pair_file, "--max-lag", 3], capsys)
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "lag,value"
    assert lines[1] == "0,1.0"
    assert len(lines) == 5


def test_xcorr(pair_file, capsys):
    code, out, _ = run(["xcorr", pair_file, "--column2", 1, "--max-lag", 2], capsys)
    assert code == 0
    assert float(out.splitlines()[1].split(",")[1]) > 0.5


def test_transform_chain(tmp_path, capsys):
    prices = tmp_path / "p.csv"
    prices.write_text("date,close\n1,100\n2,105\n3,98\n")
    out = tmp_path / "v.csv"
    code, _, _ = run(["transform", prices, "--column", 1, "--chain", "log-diff,abs", "--out", out], capsys)
    assert code == 0
    got = read_series(ColumnSpec(out)).samples
    assert got.tolist() == pytest.approx([abs(math.log(105 / 100)), abs(math.log(98 / 105))], rel=1e-14)


def test_transform_stage_error(tmp_path, capsys):
    data = tmp_path / "d.csv"
    data.write_text("1\n3\n2\n")
    code, _, err = run(["transform", data, "--chain", "diff,log-diff"], capsys)
    assert code == 1
    assert "stage 2 (log-diff)" in err


def test_parse_error_exit(tmp_path, capsys):
    data = tmp_path / "bad.csv"
    data.write_text("1\nx\n")
    code, _, err = run(["dfa", data], capsys)
    assert code == 1
    assert "row 2" in err


def test_grid_validation(pair_file, capsys):
    code, _, err = run(["dfa", pair_file, "--max-scale", 99999], capsys)
    assert code == 2 and "--max-scale" in err
    code, _, err = run(["dfa", pair_file, "--min-scale", 2], capsys)
    assert code == 2 and "--min-scale" in err


def test_config_file_sets_defaults(pair_file, tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\npoints = 5\nmin-scale=32\n")
    out = tmp_path / "c.json"
    code, _, _ = run(["--config", cfg, "dfa", pair_file, "--out", out], capsys)
    assert code == 0
    doc = json.loads(out.read_text())
    assert len(doc["scales"]) == 5
    assert doc["scales"][0] == 32


def test_reproduce_validation(capsys):
    code, _, err = run(["reproduce", "fig1a", "--realizations", 0], capsys)
    assert code == 2
    assert "--realizations" in err


def test_reproduce_small_run(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _, err = run(["reproduce", "fig1b", "--realizations", 2, "--n", 2048,
                        "--truncation", 500, "--out", out], capsys)
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["experiment"] == "fig1b"
    assert len(doc["pairs"]) == 2
    assert "fig1b:" in err


def test_module_entry_point(tmp_path):
    out = tmp_path / "y.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "dxa", "gen-arfima", "--rho", "0.2", "--n", "16", "--truncation", "4",
         "--out", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert np.loadtxt(out, skiprows=1).size == 16
