#!/usr/bin/env python3
"""Render figure analogues from qcorr CSV output.

Usage:
    render_fig.py --kind {conjecture,sweep} --in data.csv --out fig.svg \
                  [--series col1,col2,...] [--title TITLE]

``conjecture`` draws a scatter of the bound's left-hand side against its
right-hand side with the y=x reference line; ``sweep`` draws the named
columns versus the first (parameter) column, marking any ``# crossing``
comment lines from the CSV as vertical dashed lines.

The output is a deterministic SVG: fixed style, fixed hash salt, no
timestamps, so re-rendering an identical CSV yields byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("svg")
import matplotlib.pyplot as plt  # noqa: E402

matplotlib.rcParams["svg.hashsalt"] = "qcorr-plots"
matplotlib.rcParams["svg.fonttype"] = "path"

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
_STYLES = ("-", "--", "-.", ":", "-", "--")


class RenderError(Exception):
    """Bad input CSV or figure specification."""


@dataclass(frozen=True)
class FigureSpec:
    """One figure: where the data lives and what to draw from it."""

    csv_path: str
    kind: str                      # "scatter" or "curves"
    series: tuple[str, ...]        # column names to plot
    out_path: str
    title: str = ""
    labels: dict = field(default_factory=dict)   # column -> legend label


@dataclass(frozen=True)
class CsvTable:
    columns: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]
    crossings: tuple[float, ...]   # values parsed from "# crossing" comments

    def column(self, name: str) -> list[float]:
        if name not in self.columns:
            raise RenderError(f"column {name!r} not in CSV header "
                              f"{list(self.columns)}")
        i = self.columns.index(name)
        try:
            return [float(r[i]) for r in self.rows]
        except ValueError as exc:
            raise RenderError(f"column {name!r} is not numeric: {exc}") \
                from exc


def read_table(path: str) -> CsvTable:
    crossings = []
    data_lines = []
    try:
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    if line.startswith("# crossing") and "=" in line:
                        crossings.append(float(line.split("=")[1]))
                    continue
                data_lines.append(line)
    except OSError as exc:
        raise RenderError(f"cannot read {path}: {exc}") from exc
    if not data_lines:
        raise RenderError(f"{path}: no data rows")
    reader = csv.reader(data_lines)
    header = tuple(next(reader))
    rows = [tuple(rec) for rec in reader]
    if not rows:
        raise RenderError(f"{path}: header only, no data rows")
    return CsvTable(header, tuple(rows), tuple(crossings))


def _save(fig, out_path: str) -> None:
    fig.savefig(out_path, format="svg", metadata={"Date": None})
    plt.close(fig)


def render_scatter(spec: FigureSpec, table: CsvTable) -> None:
    xcol, ycol = spec.series
    x = table.column(xcol)
    y = table.column(ycol)
    fig, ax = plt.subplots(figsize=(4.8, 4.8))
    lim = max(max(x), max(y)) * 1.05 or 1.0
    ax.plot([0, lim], [0, lim], color="#888888", lw=1.0,
            label="reference y = x")
    ax.scatter(x, y, s=8, color=_COLORS[0], alpha=0.6, linewidths=0)
    ax.set_xlim(0, lim)
    ax.set_ylim(0, lim)
    ax.set_xlabel(spec.labels.get(xcol, xcol))
    ax.set_ylabel(spec.labels.get(ycol, ycol))
    if spec.title:
        ax.set_title(spec.title)
    ax.legend(loc="lower right", frameon=False)
    _save(fig, spec.out_path)


def render_curves(spec: FigureSpec, table: CsvTable) -> None:
    xcol = table.columns[0]
    x = table.column(xcol)
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    for i, col in enumerate(spec.series):
        ax.plot(x, table.column(col), _STYLES[i % len(_STYLES)],
                color=_COLORS[i % len(_COLORS)], lw=1.4,
                label=spec.labels.get(col, col))
    for v in table.crossings:
        ax.axvline(v, color="#555555", ls=":", lw=1.0)
        ax.annotate(f"p* = {v:.3f}", xy=(v, ax.get_ylim()[0]),
                    xytext=(3, 4), textcoords="offset points", fontsize=8)
    ax.set_xlabel(xcol)
    if spec.title:
        ax.set_title(spec.title)
    ax.legend(frameon=False, fontsize=9)
    _save(fig, spec.out_path)


def render(spec: FigureSpec) -> None:
    table = read_table(spec.csv_path)
    for col in spec.series:
        if col not in table.columns:
            raise RenderError(f"column {col!r} not in CSV header "
                              f"{list(table.columns)}")
    if spec.kind == "scatter":
        render_scatter(spec, table)
    elif spec.kind == "curves":
        render_curves(spec, table)
    else:
        raise RenderError(f"unknown figure kind {spec.kind!r}")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="render_fig", description=__doc__)
    ap.add_argument("--kind", required=True,
                    choices=("conjecture", "sweep"))
    ap.add_argument("--in", dest="csv_in", required=True)
    ap.add_argument("--out", required=True)
    ap.add_argument("--series", default="")
    ap.add_argument("--title", default="")
    args = ap.parse_args(argv)
    series = tuple(c for c in args.series.split(",") if c)
    if args.kind == "conjecture":
        if not series:
            series = ("rhs", "lhs")
        if len(series) != 2:
            print("render_fig: conjecture kind needs exactly two series "
                  "(x, y)", file=sys.stderr)
            return 2
        kind = "scatter"
    else:
        kind = "curves"
        if not series:
            print("render_fig: sweep kind needs --series", file=sys.stderr)
            return 2
    spec = FigureSpec(args.csv_in, kind, series, args.out, title=args.title)
    try:
        render(spec)
    except RenderError as exc:
        print(f"render_fig: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
