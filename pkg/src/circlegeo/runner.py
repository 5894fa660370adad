"""Run one configured experiment and serialize it.

Outputs in the target directory:

``trajectory.csv``
    Long format, one row per (sample, mode): ``t, n, re, im`` followed by the
    per-sample diagnostics ``energy, eta0, eta1_re, eta1_im`` and the
    multiplier columns of the problem. Floats use 17 significant digits so
    the file is a bitwise function of the config.
``metadata.json``
    Config echo, library version, exit status, failure time, conservation
    summaries and oracle comparisons. No timestamps.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass

import numpy as np

from . import __version__
from .config import build_problem, initial_field
from .errors import BlowUpError, SingularModeError
from .fields import grid
from .geodesics import (
    KaehlerRiemann,
    RiemannL2,
    VirasoroNormal,
    WeilPetersson,
    integrate,
    mob_cancellation,
    rhs_residual,
    rotate_shift,
)
from .oracles import burgers_breaking_time, burgers_characteristics

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_CONFIG = 2
EXIT_BLOWUP = 3
EXIT_SINGULAR = 4

CSV_NAME = "trajectory.csv"
META_NAME = "metadata.json"

_MULTIPLIER_COLUMNS = {
    "kaehler-normal": ("lambda",),
    "weil-petersson": ("lambda0", "w_re", "w_im"),
    "virasoro-normal": ("lambda1", "lambda2"),
}


@dataclass(frozen=True)
class RunResult:
    exit_code: int
    metadata: dict


def _fmt(x):
    return "%.17g" % x


def _multiplier_values(tag, lam):
    if tag == "kaehler-normal":
        return (lam[0].real,)
    if tag == "weil-petersson":
        return (lam[0].real, lam[1].real, lam[1].imag)
    if tag == "virasoro-normal":
        return (lam[0].real, lam[1].real)
    return ()


def write_csv(path, cfg, traj, diag, stride):
    extra = _MULTIPLIER_COLUMNS.get(cfg.problem, ())
    header = ["t", "n", "re", "im", "energy", "eta0", "eta1_re", "eta1_im", *extra]
    lines = [",".join(header)]
    if traj is not None:
        keep = list(range(0, len(traj), stride))
        if keep[-1] != len(traj) - 1:
            keep.append(len(traj) - 1)
        for k in keep:
            tail = [diag.energy[k], diag.eta0[k], diag.eta1[k].real, diag.eta1[k].imag]
            tail += list(_multiplier_values(cfg.problem, traj.multipliers[k]))
            tail = ",".join(_fmt(v) for v in tail)
            t = _fmt(traj.times[k])
            for n, c in enumerate(traj.coeffs[k]):
                lines.append(f"{t},{n},{_fmt(c.real)},{_fmt(c.imag)},{tail}")
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def _clean(obj):
    # JSON has no NaN/inf; map them to None so output stays valid
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def oracle_report(cfg, problem, u0, traj, diag):
    """Problem-specific comparisons against independent references."""
    out = {}
    if isinstance(problem, RiemannL2):
        du = u0.derivative().values(256)
        tb = burgers_breaking_time(float(np.max(du)))
        out["breaking_time"] = tb
        t = float(traj.times[-1])
        if t < tb:
            theta = grid(256)
            ref = burgers_characteristics(u0.evaluate, t, theta)
            out["characteristics_sup_error"] = float(np.max(np.abs(traj[-1].u(theta) - ref)))
    if isinstance(problem, WeilPetersson):
        out["lambda0_drift"] = float(np.max(np.abs(traj.multipliers[:, 0] - traj.multipliers[0, 0])))
        out["w_rate_crosscheck_residual"] = float(np.max(diag.multiplier_residual))
        out["mob_cancellation"] = max(mob_cancellation(s.u) for s in (traj[0], traj[-1]))
    if type(problem) is KaehlerRiemann:
        out["eta0_drift"] = diag.eta0_drift
        if len(traj) >= 3:
            out["rotate_shift_residual"] = rhs_residual(rotate_shift(traj))
    if isinstance(problem, VirasoroNormal):
        out["multiplier_drift"] = diag.multiplier_drift
    return out


def run_experiment(cfg, out_dir):
    """Integrate ``cfg`` and write both output files into ``out_dir``.

    The solver always records every step; ``record_every`` only thins the CSV,
    so diagnostics and oracles see the full time resolution.
    """
    os.makedirs(out_dir, exist_ok=True)
    problem = build_problem(cfg)
    u0 = initial_field(cfg, problem)
    meta = {"config": cfg.to_mapping(), "version": __version__}
    traj = None
    status, code, failure_time, message = "ok", EXIT_OK, None, None
    try:
        traj = integrate(problem, problem.initial_state(u0), cfg.T, cfg.dt, method=cfg.method, tail_tol=cfg.tail_tol)
    except BlowUpError as exc:
        status, code, failure_time, message = "blow-up", EXIT_BLOWUP, exc.time, str(exc)
        traj = exc.partial
    except SingularModeError as exc:
        status, code, message = "singular-mode", EXIT_SINGULAR, str(exc)
        meta["singular_mode"] = exc.mode

    diag = None
    if traj is not None:
        diag = traj.diagnostics()
        meta["samples"] = len(traj)
        meta["final_time"] = float(traj.times[-1])
        meta["conservation"] = diag.summary()
        if code == EXIT_OK:
            meta["oracles"] = oracle_report(cfg, problem, u0, traj, diag)
    meta.update(status=status, exit_code=code, failure_time=failure_time, message=message)

    write_csv(os.path.join(out_dir, CSV_NAME), cfg, traj, diag, cfg.record_every)
    with open(os.path.join(out_dir, META_NAME), "w") as fh:
        json.dump(_clean(meta), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return RunResult(code, meta)
