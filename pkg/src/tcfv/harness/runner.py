"""Run orchestration: case -> march -> metrics -> CSV artifacts.

Each run writes into its own directory:

* ``residual_history.csv``  ``iter, RN``
* ``profile.csv``           ``x, rho_num, rho_exact``  (shock cases)
* ``metrics.csv``           ``case, config, L2, Linf, TV, mu_pre, mu_post,
  mu_overall, converged, iters``
* ``mask.csv``              ``i, j, flag`` of the limiter mask in force at the end
* ``config.txt``            the resolved configuration
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import DivergedSolutionError
from ..gasdyn import cons_to_prim, prim_to_cons
from ..marching import advance, march_to_steady
from ..metrics import (METRICS_COLUMNS, field_error_norms, monotonicity_mu,
                       write_history_csv, write_rows_csv)
from ..recon import TroubleMask
from .cases import build_case
from .config import dump_config, load_config

log = logging.getLogger(__name__)

SWEEP_COLUMNS = ["case", "mach", "beta", "flow_angle", "grid", "config", "L2", "Linf",
                 "TV", "mu_pre", "mu_post", "mu_overall", "converged", "iters",
                 "status", "error"]


@dataclass
class RunResult:
    cfg: object
    case: object
    w: np.ndarray
    history: np.ndarray
    converged: bool
    iterations: int
    mask: TroubleMask | None
    report: object = None
    profile: object = None
    field_norms: tuple | None = None
    out_dir: Path | None = None

    def metrics_row(self):
        row = {"case": self.cfg.case, "config": self.cfg.mask_label,
               "converged": self.converged, "iters": self.iterations}
        if self.report is not None:
            row.update(self.report.row())
        elif self.field_norms is not None:
            row["L2"], row["Linf"] = self.field_norms
        return row


def run(cfg, out_dir=None, progress=None):
    """Build, march and evaluate one configuration.

    ``progress(iteration, rn)`` is called every iteration (steady) or step
    (unsteady).  If ``out_dir`` is given the CSV artifacts are written there.
    """
    case = build_case(cfg)
    mask = case.mask
    if case.unsteady:
        last = {}

        def mask_at(step, q, t):
            flags = case.mask_provider(step, q, t)
            last["flags"] = flags
            return flags

        def on_step(step, t, q):
            if progress is not None:
                progress(step, t)

        res = advance(case.disc, prim_to_cons(case.w0), case.t_final,
                      mask_at if case.mask_provider else mask.flags, case.settings,
                      on_step)
        if case.mask_provider is not None:
            mask = TroubleMask(last["flags"], "indicator-final")
        w = cons_to_prim(res.q)
        result = RunResult(cfg, case, w, res.history, True, res.steps, mask)
        if case.w_exact is not None:
            result.field_norms = field_error_norms(w, case.w_exact)
    else:
        res = march_to_steady(case.disc, prim_to_cons(case.w0), mask, case.settings,
                              progress)
        w = cons_to_prim(res.q)
        result = RunResult(cfg, case, w, res.history, res.converged, res.iterations, mask)
        result.profile = case.profile(w)
        result.report = monotonicity_mu(result.profile, window=cfg.window,
                                        **case.window_args)
    if out_dir is not None:
        write_artifacts(result, out_dir)
    return result


def write_artifacts(result, out_dir):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_history_csv(out / "residual_history.csv", result.history)
    if result.profile is not None:
        result.profile.to_csv(out / "profile.csv")
    if result.mask is not None:
        result.mask.to_csv(out / "mask.csv")
    write_rows_csv(out / "metrics.csv", METRICS_COLUMNS, [result.metrics_row()])
    (out / "config.txt").write_text(dump_config(result.cfg))
    result.out_dir = out


def _sweep_key(row):
    def num(v):
        return float(v) if v not in ("", None) else -np.inf
    return (row["case"], num(row.get("mach")), num(row.get("beta")),
            num(row.get("flow_angle")), row.get("grid", ""), str(row.get("config", "")),
            row.get("source", ""))


def _sweep_one(item, out, progress=None):
    base = {"source": str(item)}
    try:
        cfg = load_config(item) if isinstance(item, (str, Path)) else item
    except Exception as exc:  # noqa: BLE001 - recorded per row
        return {**base, "case": "", "status": "error",
                "error": f"{type(exc).__name__}: {exc}"}
    base.update(case=cfg.case, mach=_opt(cfg.mach), beta=_opt(cfg.beta),
                flow_angle=_opt(cfg.flow_angle),
                grid=f"{cfg.nx}x{cfg.ny}" if cfg.nx else cfg.grid,
                config=cfg.mask_label)
    try:
        result = run(cfg, Path(out) / cfg.run_name, progress)
    except (DivergedSolutionError, ValueError, RuntimeError) as exc:
        log.warning("run %s failed: %s", cfg.run_name, exc)
        return {**base, "status": "error", "error": f"{type(exc).__name__}: {exc}"}
    return {**base, **result.metrics_row(), "status": "ok", "error": ""}


def sweep(configs, out_dir, progress=None, jobs=1):
    """Run many configurations; one failure does not stop the others.

    ``configs`` is a list of ``RunConfig`` or of paths to config files.
    With ``jobs > 1`` runs go to a process pool (``progress`` is then not
    called).  Writes ``sweep.csv`` in ``out_dir`` and returns its rows, sorted
    by ``(case, mach, beta, flow_angle, grid, config)`` whatever the
    completion order.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    configs = list(configs)
    if jobs > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_one, configs, [out] * len(configs)))
    else:
        rows = [_sweep_one(item, out, progress) for item in configs]
    rows.sort(key=_sweep_key)
    write_rows_csv(out / "sweep.csv", SWEEP_COLUMNS, rows)
    return rows


def _opt(v):
    return "" if v is None else v
