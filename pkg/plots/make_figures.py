#!/usr/bin/env python3
"""Render the four standard figure analogues from the committed CSVs.

The CSVs under ``data/`` were produced with the qcorr CLI:

    qcorr sample --n 300 --seed 1 --out data/conjecture_sample.csv
    qcorr scan --family ghz_plus --measures D,E --grid 0.05:0.95:0.05 \
        --starts 8 --columns D_A:B:C,D_split_sum,D_pair_sum,E_A:B:C,\
E_split_sum,E_pair_sum --out data/ghz_plus_sweep.csv
    qcorr scan --family w_general --measures D --grid 0.05:0.95:0.05 \
        --starts 8 --columns D_A:B:C,D_pairsum_min,D_pairsum_max \
        --out data/w_general_sweep.csv
    qcorr scan --family w_asym --measures D --grid 0.05:0.95:0.05 \
        --starts 8 --crossing --columns D_A:B:C,D_pairsum_min,D_pairsum_max \
        --out data/w_asym_sweep.csv

Usage: make_figures.py [OUTPUT_DIR]   (default: ./out)
"""

from __future__ import annotations

import os
import sys

from render_fig import FigureSpec, render

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, "data")


def figure_specs(out_dir: str) -> list[FigureSpec]:
    return [
        FigureSpec(
            os.path.join(DATA, "conjecture_sample.csv"), "scatter",
            ("rhs", "lhs"), os.path.join(out_dir, "conjecture_scatter.svg"),
            title="Sampled pure states: bound vs. max pair discord",
            labels={"rhs": "max{D(B:C), D(A:C)}", "lhs": "D(AB:C)"}),
        FigureSpec(
            os.path.join(DATA, "ghz_plus_sweep.csv"), "curves",
            ("E_A:B:C", "E_split_sum", "E_pair_sum",
             "D_A:B:C", "D_split_sum", "D_pair_sum"),
            os.path.join(out_dir, "ghz_plus_additivity.svg"),
            title="Additivity of E and D, sqrt(p)|000> + sqrt(1-p)|+11>"),
        FigureSpec(
            os.path.join(DATA, "w_general_sweep.csv"), "curves",
            ("D_A:B:C", "D_pairsum_min", "D_pairsum_max"),
            os.path.join(out_dir, "w_general_bounds.svg"),
            title="Discord bounds, generalized W states"),
        FigureSpec(
            os.path.join(DATA, "w_asym_sweep.csv"), "curves",
            ("D_A:B:C", "D_pairsum_min", "D_pairsum_max"),
            os.path.join(out_dir, "w_asym_threshold.svg"),
            title="Noisy W mixture: additivity threshold"),
    ]


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    out_dir = argv[0] if argv else os.path.join(HERE, "out")
    os.makedirs(out_dir, exist_ok=True)
    for spec in figure_specs(out_dir):
        render(spec)
        print(f"wrote {spec.out_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
