"""Command line entry point.

    tcfv run CONFIG [--out DIR] [--max-iters N] [--tol RN]
    tcfv sweep DIR  [--out DIR] [--jobs N] ...
    tcfv validate-vortex [--grids 100 200] [--t-final T]

On failure a single JSON line ``{"error": ..., "message": ...}`` goes to
stderr and the exit status is nonzero.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .errors import ConfigurationError, DivergedSolutionError
from .harness.config import RunConfig, load_config
from .harness.runner import run, sweep
from .metrics import order_of_accuracy, write_rows_csv

CONFIG_SUFFIXES = (".cfg", ".conf", ".txt")
EXIT_CONFIG = 2
EXIT_DIVERGED = 3
EXIT_OTHER = 1


def _overrides(cfg, args):
    changes = {}
    if args.max_iters is not None:
        changes["max_iterations"] = args.max_iters
    if args.tol is not None:
        changes["tol"] = args.tol
    return cfg.replace(**changes) if changes else cfg


def _progress(every):
    if not every:
        return None

    def report(it, value):
        if it % every == 0:
            print(f"  {it:6d}  {value:.3e}", file=sys.stderr, flush=True)
    return report


def cmd_run(args):
    cfg = _overrides(load_config(args.config), args)
    out = Path(args.out) / cfg.run_name
    result = run(cfg, out, _progress(args.progress))
    row = result.metrics_row()
    print(json.dumps({"run": cfg.run_name, "out": str(out),
                      **{k: v for k, v in row.items()}}, default=float))
    return 0


def cmd_sweep(args):
    folder = Path(args.directory)
    if not folder.is_dir():
        raise ConfigurationError(f"sweep: {folder} is not a directory")
    paths = sorted(p for p in folder.iterdir() if p.suffix in CONFIG_SUFFIXES)
    configs = []
    for p in paths:
        try:
            configs.append(_overrides(load_config(p), args))
        except ConfigurationError:
            configs.append(p)      # fails again inside the sweep and lands in its row
    rows = sweep(configs, args.out, _progress(args.progress), jobs=args.jobs)
    failed = sum(r["status"] != "ok" for r in rows)
    print(json.dumps({"sweep": str(folder), "runs": len(rows), "failed": failed,
                      "table": str(Path(args.out) / "sweep.csv")}))
    return 0


def cmd_validate_vortex(args):
    grids = sorted(args.grids)
    if len(grids) < 2:
        raise ConfigurationError("validate-vortex: need at least two grids")
    rows = []
    for n in grids:
        cfg = RunConfig(case="isentropic-vortex", nx=n, ny=n, t_final=args.t_final,
                        max_iterations=args.max_iters or 10 ** 6)
        result = run(cfg, Path(args.out) / cfg.run_name, _progress(args.progress))
        l2, linf = result.field_norms
        row = {"grid": f"{n}x{n}", "h": 10.0 / n, "L2": l2, "Linf": linf,
               "order_L2": "", "order_Linf": ""}
        if rows:
            prev = rows[-1]
            row["order_L2"] = order_of_accuracy(prev["L2"], l2, prev["h"], row["h"])
            row["order_Linf"] = order_of_accuracy(prev["Linf"], linf, prev["h"], row["h"])
        rows.append(row)
        print(json.dumps(row))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_rows_csv(out / "vortex_order.csv",
                   ["grid", "h", "L2", "Linf", "order_L2", "order_Linf"], rows)
    return 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default="out", help="output directory (default: out)")
    common.add_argument("--max-iters", type=int, default=None,
                        help="iteration (steady) or step (unsteady) cap")
    common.add_argument("--tol", type=float, default=None,
                        help="steady convergence threshold on RN")
    common.add_argument("--progress", type=int, default=0, metavar="N",
                        help="print RN every N iterations to stderr")

    parser = argparse.ArgumentParser(prog="tcfv", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", parents=[common], help="run one configuration file")
    p.add_argument("config")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", parents=[common], help="run every config file in a directory")
    p.add_argument("directory")
    p.add_argument("--jobs", type=int, default=1, help="parallel runs (default 1)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate-vortex", parents=[common],
                       help="isentropic vortex order-of-accuracy table")
    p.add_argument("--grids", type=int, nargs="+", default=[100, 200])
    p.add_argument("--t-final", type=float, default=None,
                   help="end time (default 20)")
    p.set_defaults(func=cmd_validate_vortex)
    return parser


def _fail(kind, exc, code):
    print(json.dumps({"error": kind, "message": str(exc)}), file=sys.stderr)
    return code


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigurationError as exc:
        return _fail("configuration", exc, EXIT_CONFIG)
    except DivergedSolutionError as exc:
        return _fail("diverged", exc, EXIT_DIVERGED)
    except (ValueError, OSError, RuntimeError) as exc:
        return _fail(type(exc).__name__, exc, EXIT_OTHER)


if __name__ == "__main__":
    sys.exit(main())
