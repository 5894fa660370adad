"""Experiment configuration: a flat TOML schema with strict key checking.

Example::

    problem = "weil-petersson"
    order = 8
    T = 1.0
    dt = 1e-3
    lambda0 = 0.3
    w_re = 0.2
    w_im = -0.1
    modes = [[2, 0.0, -0.05], [3, 0.02, 0.0]]

Keys that do not apply to the chosen problem must be left out. A config
may also carry a ``[sweep]`` table (see :func:`expand_sweep`).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, fields

import numpy as np
import tomli

from .errors import ConfigError, DomainError
from .fields import FourierField
from .geodesics import (
    KaehlerNormal,
    KaehlerRiemann,
    RiemannL2,
    SobolevRiemann,
    VirasoroNormal,
    WeilPetersson,
)
from .metrics import MetricParams
from .virasoro import CentralParams

# problem tag -> keys it accepts beyond the common ones
PROBLEM_KEYS = {
    "riemann-l2": (),
    "sobolev-riemann": ("alpha", "beta"),
    "kaehler-riemann": ("alpha", "beta"),
    "kaehler-normal": ("alpha", "beta", "lambda"),
    "weil-petersson": ("lambda0", "w_re", "w_im"),
    "virasoro-normal": ("mu", "nu", "lambda1", "lambda2"),
}

COMMON_KEYS = (
    "problem",
    "order",
    "T",
    "dt",
    "modes",
    "seed",
    "random_amplitude",
    "random_decay",
    "record_every",
    "method",
    "tail_tol",
)

METHODS = ("auto", "rk4", "if-rk4")


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment description (see the module docstring)."""

    problem: str
    order: int
    T: float
    dt: float
    modes: tuple = ()
    seed: int | None = None
    random_amplitude: float = 0.1
    random_decay: float = 2.0
    record_every: int = 1
    method: str = "auto"
    tail_tol: float = 0.05
    alpha: float = 1.0
    beta: float = 0.0
    mu: float = 0.0
    nu: float = 1.0
    lam: float = 0.0
    lambda0: float = 0.0
    w_re: float = 0.0
    w_im: float = 0.0
    lambda1: float = 0.0
    lambda2: float = 1.0

    def to_mapping(self):
        """Only the keys meaningful for this problem, in TOML spelling."""
        out = {}
        allowed = set(COMMON_KEYS) | set(PROBLEM_KEYS[self.problem])
        for f in fields(self):
            key = "lambda" if f.name == "lam" else f.name
            if key not in allowed:
                continue
            value = getattr(self, f.name)
            if key == "modes":
                value = [list(m) for m in value]
            if value is None:
                continue
            out[key] = value
        return out


_INT_KEYS = {"order", "seed", "record_every"}
_STR_KEYS = {"problem", "method"}


def _coerce(key, value):
    if key in _STR_KEYS:
        if not isinstance(value, str):
            raise ConfigError(f"{key} must be a string")
        return value
    if key in _INT_KEYS:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{key} must be an integer")
        return value
    if key == "modes":
        if not isinstance(value, list):
            raise ConfigError("modes must be a list of [n, re, im] triples")
        out = []
        for m in value:
            if not (isinstance(m, list) and len(m) == 3):
                raise ConfigError(f"bad mode entry {m!r}; expected [n, re, im]")
            n, re, im = m
            if isinstance(n, bool) or not isinstance(n, int):
                raise ConfigError(f"mode index must be an integer, got {n!r}")
            out.append((n, _real(key, re), _real(key, im)))
        return tuple(out)
    return _real(key, value)


def _real(key, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key} must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"{key} must be finite")
    return value


def from_mapping(data):
    """Validate a mapping (already parsed TOML) into an :class:`ExperimentConfig`."""
    data = dict(data)
    if "problem" not in data:
        raise ConfigError("missing key 'problem'")
    problem = data["problem"]
    if problem not in PROBLEM_KEYS:
        raise ConfigError(f"unknown problem {problem!r}; choose from {sorted(PROBLEM_KEYS)}")
    allowed = set(COMMON_KEYS) | set(PROBLEM_KEYS[problem])
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(f"unknown keys for {problem}: {unknown}")
    for key in ("order", "T", "dt"):
        if key not in data:
            raise ConfigError(f"missing key {key!r}")
    kwargs = {("lam" if k == "lambda" else k): _coerce(k, v) for k, v in data.items()}
    cfg = ExperimentConfig(**kwargs)
    _validate(cfg)
    return cfg


def _validate(cfg):
    if cfg.order < 1:
        raise ConfigError("order must be positive")
    if cfg.T <= 0 or cfg.dt <= 0:
        raise ConfigError("T and dt must be positive")
    if cfg.T < cfg.dt:
        raise ConfigError("T must be at least dt")
    if cfg.record_every < 1:
        raise ConfigError("record_every must be at least 1")
    if cfg.method not in METHODS:
        raise ConfigError(f"method must be one of {METHODS}")
    if cfg.tail_tol <= 0:
        raise ConfigError("tail_tol must be positive")
    if cfg.seed is not None and cfg.seed < 0:
        raise ConfigError("seed must be non-negative")
    try:
        problem = build_problem(cfg)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    for n, re, im in cfg.modes:
        if not 0 <= n <= cfg.order:
            raise ConfigError(f"mode {n} outside 0..{cfg.order}")
        if not problem.horizontal.retains(n) and (re or im):
            raise ConfigError(f"mode {n} is outside the {problem.horizontal.value} subspace of {cfg.problem}")
        if n == 0 and im:
            raise ConfigError("the mean coefficient must be real")


def load_config(path):
    """Read a TOML config file; a ``[sweep]`` table is rejected here."""
    data = _read_toml(path)
    if "sweep" in data:
        raise ConfigError("sweep tables are only accepted by the sweep command")
    return from_mapping(data)


def _read_toml(path):
    try:
        with open(path, "rb") as fh:
            return tomli.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def expand_sweep(data):
    """Cartesian product of a ``[sweep]`` table over a base config.

    Every entry of the table is a key of the base schema mapped to a list of
    values. Points are ordered with the last key varying fastest.

    Returns
    -------
    list of (dict, ExperimentConfig)
        The swept values of each point and its validated config.
    """
    data = dict(data)
    sweep = data.pop("sweep", None)
    if not isinstance(sweep, dict) or not sweep:
        raise ConfigError("a sweep config needs a non-empty [sweep] table")
    keys = list(sweep)
    for k in keys:
        if not isinstance(sweep[k], list) or not sweep[k]:
            raise ConfigError(f"sweep.{k} must be a non-empty list")
    points = []
    for combo in itertools.product(*(sweep[k] for k in keys)):
        values = dict(zip(keys, combo))
        points.append((values, from_mapping({**data, **values})))
    return points


def load_sweep(path):
    return expand_sweep(_read_toml(path))


# ---------------------------------------------------------------------------
# turning a config into solver inputs


def build_problem(cfg):
    tag = cfg.problem
    if tag == "riemann-l2":
        return RiemannL2()
    if tag == "sobolev-riemann":
        return SobolevRiemann(MetricParams(cfg.alpha, cfg.beta))
    if tag == "kaehler-riemann":
        return KaehlerRiemann(MetricParams(cfg.alpha, cfg.beta))
    if tag == "kaehler-normal":
        return KaehlerNormal(MetricParams(cfg.alpha, cfg.beta), cfg.lam)
    if tag == "weil-petersson":
        return WeilPetersson(cfg.lambda0, complex(cfg.w_re, cfg.w_im))
    return VirasoroNormal(CentralParams(cfg.mu, cfg.nu), cfg.lambda1, cfg.lambda2)


def initial_field(cfg, problem=None):
    """Listed modes plus, when ``seed`` is set, a seeded random field on the
    problem's horizontal subspace."""
    problem = build_problem(cfg) if problem is None else problem
    u = FourierField.from_modes(cfg.modes, cfg.order)
    if cfg.seed is not None:
        rng = np.random.default_rng(cfg.seed)
        u = u + FourierField.random(
            cfg.order, rng, scale=cfg.random_amplitude, decay=cfg.random_decay, subspace=problem.horizontal
        )
    return u


def with_overrides(cfg, **changes):
    """Copy of ``cfg`` with TOML-spelled keys replaced, revalidated."""
    return from_mapping({**cfg.to_mapping(), **changes})


def dumps(cfg):
    """Render a config as TOML text that :func:`from_mapping` reads back."""
    lines = []
    for key, value in cfg.to_mapping().items():
        if key == "modes":
            inner = ", ".join(f"[{n}, {re!r}, {im!r}]" for n, re, im in value)
            lines.append(f"modes = [{inner}]")
        elif isinstance(value, str):
            lines.append(f'{key} = "{value}"')
        else:
            lines.append(f"{key} = {value!r}")
    return "\n".join(lines) + "\n"


__all__ = [
    "ExperimentConfig",
    "build_problem",
    "dumps",
    "expand_sweep",
    "from_mapping",
    "initial_field",
    "load_config",
    "load_sweep",
    "with_overrides",
]
