"""Command-line interface for the qcorr toolkit.

Subcommands
-----------
measure   compute {S, T, D, E, C} for one state and partition (JSON/CSV)
check     evaluate all additivity relations and gate on theorem violations
scan      sweep a single-parameter family over a grid, emit per-partition CSV
sample    random pure-state campaign for the conjectured discord bound

All numeric output carries 12 significant digits, and CSV artifacts are
schema-versioned with a leading ``# qcorr-csv v1`` comment line.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time

import numpy as np

from .config import OptimizerConfig
from .discord import discord, discord_pure_bipartite, pair_discord
from .entanglement import ree_closed_form, ree_upper_bound
from .errors import (CatalogMiss, DomainError, FormatError, ParamError,
                     QcorrError, StateValidationError)
from .measures import (classical_correlation, total_mutual_information,
                       von_neumann_entropy)
from .relations import campaign_csv, conjecture_campaign, evaluate
from .states import MultipartiteState, Partition, load_state, named_state

CSV_SCHEMA = "# qcorr-csv v1"
ALL_MEASURES = ("S", "T", "D", "E", "C")
PARTITIONS7 = ("A:B:C", "AB:C", "AC:B", "BC:A", "A:B", "A:C", "B:C")

# default swept parameter for each single-parameter family
FAMILY_PARAM = {
    "ghz_general": "alpha2",
    "w_general": "alpha2",
    "ghz_plus": "p",
    "w_white": "p",
    "ghz_white": "p",
    "w_asym": "p",
    "counterexample": "p",
}


def _sig12(x: float) -> float:
    """Round a float to 12 significant digits (stable text output)."""
    if not math.isfinite(x):
        return x
    return float(f"{x:.12g}")


def _jsonify(obj):
    if isinstance(obj, float):
        return _sig12(obj)
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    return obj


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def parse_params(text: str | None) -> dict[str, float]:
    """Parse ``k=v,k=v`` parameter strings into a float dict."""
    out: dict[str, float] = {}
    if not text:
        return out
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise ParamError(f"bad parameter assignment {item!r}, expected k=v")
        key, _, val = item.partition("=")
        try:
            out[key.strip()] = float(val)
        except ValueError as exc:
            raise ParamError(f"non-numeric value for {key.strip()!r}: {val!r}") from exc
    return out


def build_config(args: argparse.Namespace) -> OptimizerConfig:
    """Flag > config file > built-in default."""
    cfg = OptimizerConfig()
    if getattr(args, "config", None):
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise FormatError(f"cannot read config file {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise FormatError("config file must hold a JSON object")
        known = {"starts", "seed", "tol", "max_iter", "ree_iters", "ree_terms",
                 "cluster_value_tol", "cluster_state_tol", "tight_polish"}
        bad = set(data) - known
        if bad:
            raise FormatError(f"unknown config keys: {sorted(bad)}")
        cfg = cfg.with_(**data)
    overrides = {}
    for field in ("seed", "starts", "tol"):
        val = getattr(args, field, None)
        if val is not None:
            overrides[field] = val
    if overrides:
        cfg = cfg.with_(**overrides)
    if getattr(args, "threads", None) is not None and args.threads < 1:
        raise ParamError("--threads must be >= 1")
    return cfg


def load_input_state(args: argparse.Namespace) -> MultipartiteState:
    if getattr(args, "state", None):
        return load_state(args.state)
    if getattr(args, "family", None):
        return named_state(args.family, parse_params(getattr(args, "params", None)))
    raise ParamError("provide --state FILE or --family NAME")


def _measure_one(s: MultipartiteState, part: Partition, name: str,
                 cfg: OptimizerConfig, family: str | None,
                 params: dict | None, cache: dict) -> dict:
    """One measure entry: value, bound flag, and optimizer metadata."""
    if name == "S":
        sub = s if part.parties == tuple(range(s.n_parties)) else s.reduced(part.parties)
        return {"value": von_neumann_entropy(sub).value, "bound": "exact"}
    if name == "T":
        return {"value": total_mutual_information(s, part), "bound": "exact"}
    if name in ("D", "C"):
        key = ("D", part.blocks)
        if key not in cache:
            sub = s if part.parties == tuple(range(s.n_parties)) else s.reduced(part.parties)
            res = discord(s, part, cfg)
            if len(part.blocks) == 2 and sub.is_pure():
                value, bound = discord_pure_bipartite(s, part), "exact"
            else:
                value, bound = res.value, "upper_bound"
            cache[key] = {"value": value, "bound": bound, "chi": res.chi,
                          "starts_used": res.starts_used,
                          "converged": res.converged}
        ent = cache[key]
        if name == "D":
            return {"value": ent["value"], "bound": ent["bound"],
                    "starts_used": ent["starts_used"], "converged": ent["converged"]}
        return {"value": classical_correlation(s, part, ent["chi"]),
                "bound": ent["bound"]}
    if name == "E":
        if family:
            try:
                return {"value": ree_closed_form(family, params, part),
                        "bound": "exact", "source": "catalog"}
            except CatalogMiss:
                pass
        res = ree_upper_bound(s, part, cfg)
        return {"value": res.value, "bound": "upper_bound",
                "source": "estimator", "seeded_from": res.seeded_from,
                "converged": res.converged}
    raise ParamError(f"unknown measure {name!r}, choose from {','.join(ALL_MEASURES)}")


def _parse_measures(text: str | None, default: str) -> list[str]:
    names = [m.strip().upper() for m in (text or default).split(",") if m.strip()]
    for m in names:
        if m not in ALL_MEASURES:
            raise ParamError(f"unknown measure {m!r}, choose from {','.join(ALL_MEASURES)}")
    return names


def cmd_measure(args: argparse.Namespace) -> int:
    s = load_input_state(args)
    part = Partition.parse(args.partition)
    cfg = build_config(args)
    names = _parse_measures(args.measures, "S,T,D,E,C")
    cache: dict = {}
    fam = getattr(args, "family", None)
    params = parse_params(getattr(args, "params", None)) if fam else None
    results = {m: _measure_one(s, part, m, cfg, fam, params, cache) for m in names}
    doc = {"label": s.label, "partition": str(part), "seed": cfg.seed,
           "starts": cfg.starts, "measures": results}
    if args.format == "csv":
        buf = io.StringIO()
        buf.write(CSV_SCHEMA + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["measure", "partition", "value", "bound"])
        for m in names:
            writer.writerow([m, str(part), f"{results[m]['value']:.12g}",
                             results[m]["bound"]])
        _emit(buf.getvalue(), args.out)
    else:
        _emit(json.dumps(_jsonify(doc), indent=2), args.out)
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    s = load_input_state(args)
    cfg = build_config(args)
    names = _parse_measures(args.measures, "T,D,E")
    requested = set(names) | {"SSA"} if "T" in names else set(names)
    report = evaluate(s, frozenset(requested), cfg)
    if args.format == "csv":
        buf = io.StringIO()
        buf.write(CSV_SCHEMA + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["relation", "permutation", "lhs", "rhs", "residual", "verdict"])
        for row in report.rows:
            writer.writerow([row.relation, row.permutation, f"{row.lhs:.12g}",
                             f"{row.rhs:.12g}", f"{row.residual:.12g}", row.verdict])
        _emit(buf.getvalue(), args.out)
    else:
        doc = report.to_dict()
        doc["gate_violations"] = [r.to_dict() for r in report.gate_violations()]
        _emit(json.dumps(_jsonify(doc), indent=2), args.out)
    return 1 if report.gate_violations() else 0


def _scan_columns(names: list[str]) -> list[str]:
    cols: list[str] = []
    for q in names:
        cols.extend(f"{q}_{p}" for p in PARTITIONS7)
        cols.extend([f"{q}_split_sum", f"{q}_pair_sum",
                     f"{q}_pairsum_min", f"{q}_pairsum_max"])
    return cols


def scan_point(family: str, param: str, value: float, names: list[str],
               cfg: OptimizerConfig, base_params: dict | None = None) -> dict[str, float]:
    """All scan columns for one grid point."""
    params = dict(base_params or {})
    params[param] = value
    s = named_state(family, params)
    cache: dict = {}
    row: dict[str, float] = {}
    for q in names:
        for pstr in PARTITIONS7:
            part = Partition.parse(pstr)
            if q == "D" and len(part.blocks) == 2 and len(part.parties) == 2:
                rho = s.reduced(part.parties).rho
                row[f"{q}_{pstr}"] = pair_discord(rho, cfg, precise=True)
            else:
                row[f"{q}_{pstr}"] = _measure_one(
                    s, part, q, cfg, family, params, cache)["value"]
        row[f"{q}_split_sum"] = row[f"{q}_BC:A"] + row[f"{q}_AC:B"]
        row[f"{q}_pair_sum"] = row[f"{q}_A:B"] + row[f"{q}_A:C"]
        pairsums = (row[f"{q}_A:B"] + row[f"{q}_B:C"],
                    row[f"{q}_A:B"] + row[f"{q}_A:C"],
                    row[f"{q}_A:C"] + row[f"{q}_B:C"])
        row[f"{q}_pairsum_min"] = min(pairsums)
        row[f"{q}_pairsum_max"] = max(pairsums)
    return row


def crossing_residual(family: str, param: str, value: float,
                      cfg: OptimizerConfig, measure: str = "D") -> float:
    """r(p) = Q(A:B:C) − max over permutations of Q(X:Y)+Q(Y:Z)."""
    row = scan_point(family, param, value, [measure], cfg)
    return row[f"{measure}_A:B:C"] - row[f"{measure}_pairsum_max"]


def find_crossing(family: str, param: str, lo: float, hi: float,
                  cfg: OptimizerConfig, measure: str = "D",
                  xtol: float = 1e-3) -> float | None:
    """Bisect for the sign change of the additivity residual in [lo, hi]."""
    r_lo = crossing_residual(family, param, lo, cfg, measure)
    r_hi = crossing_residual(family, param, hi, cfg, measure)
    if r_lo == 0.0:
        return lo
    if r_hi == 0.0:
        return hi
    if (r_lo > 0) == (r_hi > 0):
        return None
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        r_mid = crossing_residual(family, param, mid, cfg, measure)
        if r_mid == 0.0:
            return mid
        if (r_mid > 0) == (r_lo > 0):
            lo, r_lo = mid, r_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def cmd_scan(args: argparse.Namespace) -> int:
    family = args.family.lower()
    cfg = build_config(args)
    names = _parse_measures(args.measures, "D")
    param = args.param or FAMILY_PARAM.get(family)
    if param is None:
        raise ParamError(f"family {family!r} is not single-parameter; pass --param")
    if args.values:
        try:
            grid = [float(v) for v in args.values.split(",") if v.strip()]
        except ValueError as exc:
            raise ParamError(f"bad --values list: {args.values!r}") from exc
    else:
        spec = args.grid or "0.02:0.98:0.02"
        try:
            lo, hi, step = (float(x) for x in spec.split(":"))
        except ValueError as exc:
            raise ParamError(f"bad --grid spec {spec!r}, expected lo:hi:step") from exc
        if step <= 0 or hi < lo:
            raise ParamError(f"bad --grid spec {spec!r}")
        count = int(round((hi - lo) / step))
        grid = [lo + i * step for i in range(count + 1)]
    all_cols = _scan_columns(names)
    if args.columns:
        wanted = [c.strip() for c in args.columns.split(",") if c.strip()]
        unknown = [c for c in wanted if c not in all_cols]
        if unknown:
            raise ParamError(f"unknown columns requested: {unknown} "
                             f"(available: {all_cols})")
        cols = wanted
    else:
        cols = all_cols
    buf = io.StringIO()
    buf.write(CSV_SCHEMA + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([param] + cols)
    rows = []
    for value in grid:
        row = scan_point(family, param, value, names, cfg)
        rows.append((value, row))
        writer.writerow([f"{value:.12g}"] + [f"{row[c]:.12g}" for c in cols])
    if args.crossing:
        q = "D" if "D" in names else names[0]
        residuals = [(v, r[f"{q}_A:B:C"] - r[f"{q}_pairsum_max"]) for v, r in rows]
        found = []
        for (v0, r0), (v1, r1) in zip(residuals, residuals[1:]):
            if (r0 > 0) != (r1 > 0):
                pstar = find_crossing(family, param, v0, v1, cfg, q)
                if pstar is not None:
                    found.append(pstar)
        for pstar in found:
            buf.write(f"# crossing {q} {param}* = {pstar:.12g}\n")
        if not found:
            buf.write("# crossing: no sign change on grid\n")
    _emit(buf.getvalue(), args.out)
    return 0


def cmd_sample(args: argparse.Namespace) -> int:
    if args.n < 1:
        raise ParamError("--n must be >= 1")
    cfg = build_config(args)
    t0 = time.time()
    summary = conjecture_campaign(args.n, seed=cfg.seed, method=args.method, cfg=cfg)
    text = campaign_csv(summary)
    doc = summary.to_dict()
    doc["wall_time_s"] = time.time() - t0
    if args.out:
        _emit(text, args.out)
        sys.stdout.write(json.dumps(_jsonify(doc), indent=2) + "\n")
    else:
        sys.stdout.write(text)
        sys.stderr.write(json.dumps(_jsonify(doc), indent=2) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--seed", type=int, default=None, help="optimizer RNG seed")
    shared.add_argument("--starts", type=int, default=None, help="random optimizer starts")
    shared.add_argument("--tol", type=float, default=None, help="optimizer tolerance")
    shared.add_argument("--threads", type=int, default=None, help="worker threads (>=1)")
    shared.add_argument("--config", help="JSON config file (flag > file > default)")
    shared.add_argument("--out", help="output file (default stdout)")
    shared.add_argument("--format", choices=("json", "csv"), default="json")

    state_src = argparse.ArgumentParser(add_help=False)
    state_src.add_argument("--state", help="state JSON file")
    state_src.add_argument("--family", help="named state family")
    state_src.add_argument("--params", help="family parameters, k=v,k=v")

    parser = argparse.ArgumentParser(
        prog="qcorr",
        description="Relative-entropy correlation measures for up to three qubits.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", parents=[shared, state_src],
                       help="compute measures for one state and partition")
    p.add_argument("--partition", default="A:B:C", help='e.g. "A:B:C", "AB:C"')
    p.add_argument("--measures", help="subset of S,T,D,E,C (default all)")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("check", parents=[shared, state_src],
                       help="evaluate additivity relations; exit 1 on gated violation")
    p.add_argument("--measures", help="subset of T,D,E (default all)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("scan", parents=[shared],
                       help="sweep a single-parameter family over a grid")
    p.add_argument("--family", required=True)
    p.add_argument("--param", help="swept parameter name (default per family)")
    p.add_argument("--grid", help="lo:hi:step (default 0.02:0.98:0.02)")
    p.add_argument("--values", help="explicit comma-separated grid values")
    p.add_argument("--measures", help="subset of S,T,D,E,C (default D)")
    p.add_argument("--columns", help="comma-separated output column subset")
    p.add_argument("--crossing", action="store_true",
                   help="bisect for the additivity residual sign change")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("sample", parents=[shared],
                       help="random pure-state campaign for the conjectured bound")
    p.add_argument("--n", type=int, required=True, help="number of samples")
    p.add_argument("--method", choices=("acin_uniform", "haar"),
                   default="acin_uniform")
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, StateValidationError, ParamError, DomainError) as exc:
        sys.stderr.write(f"qcorr: error: {exc}\n")
        return 2
    except FileNotFoundError as exc:
        sys.stderr.write(f"qcorr: error: {exc}\n")
        return 2
    except QcorrError as exc:
        sys.stderr.write(f"qcorr: internal error: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
