"""Command line interface: ``circlegeo {run,check,sweep,presets}``.

Exit codes: 0 ok, 1 internal error, 2 bad config, 3 blow-up, 4 singular
inertia mode. ``sweep`` returns the largest code over its points.
``CIRCLEGEO_THREADS`` sets how many sweep points run at once (default 1).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import traceback
from concurrent.futures import ThreadPoolExecutor

from .config import dumps, load_config, load_sweep
from .errors import ConfigError
from .presets import describe, preset, preset_names
from .runner import EXIT_CONFIG, EXIT_INTERNAL, EXIT_OK, run_experiment

THREADS_ENV = "CIRCLEGEO_THREADS"


def _parser():
    ap = argparse.ArgumentParser(prog="circlegeo", description="Geodesics on Diff(S^1) and the Virasoro-Bott group.")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="integrate one configured experiment")
    src = run.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", help="TOML config file")
    src.add_argument("--preset", help="name of a built-in preset")
    run.add_argument("--out", required=True, help="output directory")

    chk = sub.add_parser("check", help="run the oracle self-checks")
    chk.add_argument("--filter", default=None, help="only checks whose name contains this text")

    sw = sub.add_parser("sweep", help="run a Cartesian grid of configs")
    sw.add_argument("--config", required=True, help="TOML config with a [sweep] table")
    sw.add_argument("--out", required=True, help="output directory; one subdirectory per point")

    pr = sub.add_parser("presets", help="list built-in presets")
    pr.add_argument("--show", default=None, metavar="NAME", help="print the preset as a TOML config")
    return ap


def _threads():
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None


def _report(result, out):
    meta = result.metadata
    line = f"{meta['status']}: {out}"
    if meta.get("failure_time") is not None:
        line += f" (failed after t={meta['failure_time']:.6g})"
    print(line)


def cmd_run(args):
    if args.config:
        cfg = load_config(args.config)
    else:
        try:
            cfg = preset(args.preset)
        except KeyError as exc:
            raise ConfigError(exc.args[0]) from None
    result = run_experiment(cfg, args.out)
    _report(result, args.out)
    return result.exit_code


def cmd_check(args):
    from .checks import run_checks

    results = run_checks(args.filter)
    if not results:
        print(f"no check matches {args.filter!r}", file=sys.stderr)
        return EXIT_CONFIG
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_INTERNAL


def cmd_sweep(args):
    points = load_sweep(args.config)
    width = max(3, len(str(len(points) - 1)))
    os.makedirs(args.out, exist_ok=True)
    dirs = [os.path.join(args.out, f"point-{k:0{width}d}") for k in range(len(points))]

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        results = list(pool.map(lambda job: run_experiment(job[0][1], job[1]), zip(points, dirs)))

    index = [{"dir": os.path.basename(d), "values": v, "exit_code": r.exit_code} for (v, _), d, r in zip(points, dirs, results)]
    with open(os.path.join(args.out, "sweep.json"), "w") as fh:
        json.dump(index, fh, indent=2, sort_keys=True)
        fh.write("\n")
    for r, d in zip(results, dirs):
        _report(r, d)
    return max(r.exit_code for r in results)


def cmd_presets(args):
    if args.show:
        try:
            print(dumps(preset(args.show)), end="")
        except KeyError as exc:
            raise ConfigError(exc.args[0]) from None
        return EXIT_OK
    for name in preset_names():
        print(f"{name:<18s} {describe(name)}")
    return EXIT_OK


COMMANDS = {"run": cmd_run, "check": cmd_check, "sweep": cmd_sweep, "presets": cmd_presets}


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
