"""Tests for the figure renderer: determinism, the four analogues, errors."""

import os
import subprocess
import sys

import pytest

HERE = os.path.dirname(os.path.abspath(__file__))
PLOTS = os.path.dirname(HERE)
DATA = os.path.join(PLOTS, "data")

sys.path.insert(0, PLOTS)

from make_figures import figure_specs          # noqa: E402
from render_fig import (FigureSpec, RenderError, read_table,  # noqa: E402
                        render)


def run_cli(*argv):
    return subprocess.run(
        [sys.executable, os.path.join(PLOTS, "render_fig.py"), *argv],
        capture_output=True, text=True)


def test_four_analogues_render(tmp_path):
    for spec in figure_specs(str(tmp_path)):
        render(spec)
        out = spec.out_path
        assert os.path.exists(out)
        head = open(out).read(200)
        assert "<svg" in head
    assert len(os.listdir(tmp_path)) == 4


def test_byte_identical_double_render(tmp_path):
    for spec in figure_specs(str(tmp_path)):
        render(spec)
        first = open(spec.out_path, "rb").read()
        render(spec)
        assert open(spec.out_path, "rb").read() == first


def test_cli_conjecture_and_sweep(tmp_path):
    out = tmp_path / "fig2.svg"
    res = run_cli("--kind", "conjecture",
                  "--in", os.path.join(DATA, "conjecture_sample.csv"),
                  "--out", str(out))
    assert res.returncode == 0, res.stderr
    assert out.exists()
    out2 = tmp_path / "fig5.svg"
    res = run_cli("--kind", "sweep",
                  "--in", os.path.join(DATA, "w_asym_sweep.csv"),
                  "--out", str(out2),
                  "--series", "D_A:B:C,D_pairsum_max")
    assert res.returncode == 0, res.stderr
    assert out2.exists()


def test_missing_column_error(tmp_path):
    res = run_cli("--kind", "sweep",
                  "--in", os.path.join(DATA, "w_asym_sweep.csv"),
                  "--out", str(tmp_path / "x.svg"),
                  "--series", "D_nope")
    assert res.returncode == 2
    assert "D_nope" in res.stderr


def test_empty_csv_error(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("# qcorr-csv v1\n")
    res = run_cli("--kind", "sweep", "--in", str(empty),
                  "--out", str(tmp_path / "x.svg"), "--series", "a")
    assert res.returncode == 2
    assert "no data rows" in res.stderr
    header_only = tmp_path / "h.csv"
    header_only.write_text("# qcorr-csv v1\na,b\n")
    res = run_cli("--kind", "sweep", "--in", str(header_only),
                  "--out", str(tmp_path / "x.svg"), "--series", "a")
    assert res.returncode == 2


def test_conjecture_points_above_reference():
    table = read_table(os.path.join(DATA, "conjecture_sample.csv"))
    lhs = table.column("lhs")
    rhs = table.column("rhs")
    assert all(y >= x - 1e-6 for x, y in zip(rhs, lhs))


def test_crossing_marker_parsed():
    table = read_table(os.path.join(DATA, "w_asym_sweep.csv"))
    assert table.crossings
    assert 0.7 <= table.crossings[0] <= 0.9
