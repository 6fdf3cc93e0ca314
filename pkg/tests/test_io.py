import json

import numpy as np
import pytest

from dxa import CurveKind, FluctuationCurve, InvalidInput, ParseError, fit_power_law, scale_grid
from dxa.errors import IoError
from dxa.io import ColumnSpec, read_curve, read_series, write_curve, write_series


@pytest.fixture
def write(tmp_path):
    def _write(text, name="data.csv"):
        path = tmp_path / name
        path.write_text(text)
        return path
    return _write


def test_header_auto_skip(write):
    s = read_series(ColumnSpec(write("a\n1\n2\n")))
    assert s.samples.tolist() == [1, 2]


def test_column_selection_and_blank_lines(write):
    s = read_series(ColumnSpec(write("1,10\n\n2,20\n"), column=1))
    assert s.samples.tolist() == [10, 20]


def test_scientific_notation_and_delimiter(write):
    s = read_series(ColumnSpec(write("t;v\n0;1.5e-3\n1;-2E2\n"), column=1, delimiter=";"))
    assert s.samples.tolist() == [1.5e-3, -200.0]


def test_header_modes(write):
    path = write("5\n6\n")
    assert read_series(ColumnSpec(path, skip_header="true")).samples.tolist() == [6]
    assert read_series(ColumnSpec(path, skip_header="false")).samples.tolist() == [5, 6]
    with pytest.raises(ParseError) as err:
        read_series(ColumnSpec(write("x\n1\n"), skip_header="false"))
    assert err.value.row == 1


def test_parse_errors(write):
    with pytest.raises(ParseError) as err:
        read_series(ColumnSpec(write("1\nx\n")))
    assert err.value.row == 2
    with pytest.raises(ParseError, match="missing column"):
        read_series(ColumnSpec(write("1,2\n3\n"), column=1))
    with pytest.raises(ParseError):
        read_series(ColumnSpec(write("1\nnan\n")))
    with pytest.raises(InvalidInput):
        read_series(ColumnSpec(write("header\n")))
    with pytest.raises(IoError):
        read_series(ColumnSpec("/nonexistent/file.csv"))
    with pytest.raises(InvalidInput):
        ColumnSpec("x", column=-1)


@pytest.fixture
def curve():
    f2 = np.array([1.0 / 3, -2.718281828459045e-7, 12345.678901234567])
    return FluctuationCurve(scale_grid(4, 16, 3), f2, CurveKind.DXA, 100)


def test_json_round_trip(tmp_path, curve):
    fit = fit_power_law(curve)
    path = tmp_path / "c.json"
    write_curve(curve, fit, path, "json", params={"seed": 7})
    doc = json.loads(path.read_text())
    assert set(doc) == {"kind", "series_length", "scales", "f2", "f_signed", "fit", "params"}
    assert set(doc["fit"]) == {"exponent", "amplitude", "stderr", "r_squared", "range", "negative_fraction"}
    back, fit_back, params = read_curve(path)
    assert np.array_equal(back.f2, curve.f2)
    assert back.kind is CurveKind.DXA
    assert back.series_length == 100
    assert fit_back.exponent == fit.exponent
    assert params == {"seed": 7}


def test_json_without_fit(tmp_path, curve):
    path = tmp_path / "c.json"
    write_curve(curve, None, path)
    doc = json.loads(path.read_text())
    assert "fit" not in doc
    assert read_curve(path)[1] is None


def test_csv_output(tmp_path, curve):
    path = tmp_path / "c.csv"
    write_curve(curve, None, path, "csv")
    lines = path.read_text().splitlines()
    assert len(lines) == 4
    assert lines[0] == "scale,f2,f_signed"
    back, _, _ = read_curve(path)
    assert np.allclose(back.f2, curve.f2, rtol=1e-12, atol=0)
    assert back.scales.scales.tolist() == [4, 8, 16]


def test_unknown_format(tmp_path, curve):
    with pytest.raises(InvalidInput):
        write_curve(curve, None, tmp_path / "c.txt", "xml")


def test_write_series_round_trip(tmp_path, rng):
    y = rng.standard_normal(50)
    path = tmp_path / "s.csv"
    write_series({"y": y, "y2": -y}, path)
    assert np.array_equal(read_series(ColumnSpec(path, 1)).samples, -y)
