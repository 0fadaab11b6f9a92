"""Command-line entry point: scans, threshold fits, code inspection.

Exit codes: 0 success, 2 usage error, 3 infeasible configuration,
4 fit failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .codes import build_xyz2, build_yzzy
from .errors import CapacityError, FitFailure, InfeasibleError, UsageError
from .harness import (RunConfig, fit_threshold, read_results_csv, run_point,
                      write_fit_json, write_results_csv)
from .noise import channel_from_bias, shot_rng
from .pipeline import ShotDecoder

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_FIT = 4


def _parse_eta(text: str) -> float:
    if text.strip().lower() == "inf":
        return float("inf")
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"invalid eta {text!r}") from None


def _parse_grid(text: str) -> list[float]:
    """'a:b:n' inclusive linear grid, or a single value."""
    parts = text.split(":")
    if len(parts) == 1:
        return [float(parts[0])]
    if len(parts) != 3:
        raise UsageError(f"grid must be 'a:b:n', got {text!r}")
    a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    if n < 1:
        raise UsageError("grid point count must be >= 1")
    return [float(x) for x in np.linspace(a, b, n)]


def _parse_dlist(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"invalid distance list {text!r}") from None


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="xyz2dec",
                                 description="Sequential decoder simulations for the XYZ^2 code")
    ap.add_argument("--version", action="version", version=f"xyz2dec {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    sc = sub.add_parser("scan", help="Monte Carlo failure-rate scan over a (d, p) grid")
    sc.add_argument("--code", default="xyz2", choices=["xyz2"])
    sc.add_argument("--decoder", default="matching",
                    choices=["matching", "belief-matching", "mld"])
    sc.add_argument("--model", default="code-capacity",
                    choices=["code-capacity", "phenomenological"])
    sc.add_argument("--eta", default="0.5", help="noise bias (>= 0.5, or 'inf')")
    sc.add_argument("--d", required=True, help="comma-separated distances, e.g. 3,5,7")
    sc.add_argument("--p", required=True, help="error-rate grid 'a:b:n' (inclusive) or single value")
    sc.add_argument("--q", type=float, default=None,
                    help="measurement error rate (default: q = p)")
    sc.add_argument("--rounds", type=int, default=None,
                    help="noisy measurement rounds (default: d)")
    sc.add_argument("--bp-iterations", type=int, default=None,
                    help="belief-propagation iterations (default: d)")
    sc.add_argument("--shots", type=int, default=50000)
    sc.add_argument("--seed", type=int, default=0)
    sc.add_argument("--workers", type=int, default=1)
    sc.add_argument("--out", required=True, help="output CSV path")
    sc.add_argument("--debug-shot", type=int, default=None, metavar="K",
                    help="dump the shot-K pipeline trace for the first grid point "
                         "as JSON to stdout instead of scanning")

    ft = sub.add_parser("fit", help="finite-size-scaling threshold fit from a scan CSV")
    ft.add_argument("--in", dest="inp", required=True, help="scan CSV path")
    ft.add_argument("--out", required=True, help="output JSON path")
    ft.add_argument("--window", default=None, help="restrict fit to p-range 'a:b'")

    ins = sub.add_parser("inspect", help="dump a code description as JSON")
    ins.add_argument("--code", default="xyz2", choices=["xyz2", "yzzy"])
    ins.add_argument("--d", type=int, required=True)
    return ap


def _cmd_scan(args) -> int:
    eta = _parse_eta(args.eta)
    distances = _parse_dlist(args.d)
    grid = _parse_grid(args.p)
    configs = [RunConfig(d=d, p=p, eta=eta, model=args.model, decoder=args.decoder,
                         q=args.q, rounds=args.rounds, bp_iterations=args.bp_iterations)
               for d in distances for p in grid]

    if args.debug_shot is not None:
        cfg = configs[0]
        dec = ShotDecoder(cfg.d, cfg.decoder, cfg.model, channel_from_bias(cfg.p, cfg.eta),
                          q=cfg.resolved_q, rounds=cfg.resolved_rounds,
                          bp_iterations=cfg.bp_iterations)
        dec.trace = {"config": vars(args) | {"eta": eta}, "shot": args.debug_shot}
        dec.run_shot(shot_rng(args.seed, cfg.point_id(), args.debug_shot))
        json.dump(dec.trace, sys.stdout, indent=2, default=str)
        sys.stdout.write("\n")
        return EXIT_OK

    results = [run_point(cfg, args.shots, args.seed, workers=args.workers)
               for cfg in configs]
    echo = json.dumps({
        "code": args.code, "decoder": args.decoder, "model": args.model,
        "eta": "inf" if eta == float("inf") else eta, "d": distances, "p": grid,
        "q": args.q, "rounds": args.rounds, "bp_iterations": args.bp_iterations,
        "shots": args.shots, "seed": args.seed,
    }, sort_keys=True)
    write_results_csv(args.out, results, header_extra=[f"config: {echo}"])
    print(f"wrote {len(results)} rows to {args.out}")
    return EXIT_OK


def _cmd_fit(args) -> int:
    results = read_results_csv(args.inp)
    if not results:
        raise UsageError(f"no result rows in {args.inp}")
    window = None
    if args.window:
        parts = args.window.split(":")
        if len(parts) != 2:
            raise UsageError(f"window must be 'a:b', got {args.window!r}")
        window = (float(parts[0]), float(parts[1]))
    fit = fit_threshold(results, window=window)
    write_fit_json(args.out, fit, source=args.inp)
    print(f"p_th = {fit.p_th:.6g} +/- {fit.sigma:.2g} (nu = {fit.nu:.3g}) -> {args.out}")
    return EXIT_OK


def _cmd_inspect(args) -> int:
    if args.code == "xyz2":
        code, cmap = build_xyz2(args.d)
        doc = code.to_json_dict(cmap)
    else:
        doc = build_yzzy(args.d).to_json_dict()
    doc["version"] = __version__
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


def main(argv=None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        if args.command == "scan":
            return _cmd_scan(args)
        if args.command == "fit":
            return _cmd_fit(args)
        return _cmd_inspect(args)
    except FitFailure as exc:
        print(f"fit failure: {exc}", file=sys.stderr)
        return EXIT_FIT
    except (UsageError, InfeasibleError, CapacityError) as exc:
        print(f"infeasible configuration: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
