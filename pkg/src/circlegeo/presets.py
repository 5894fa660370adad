"""Built-in experiment configurations."""

from __future__ import annotations

from .config import from_mapping

PRESETS = {
    "burgers-smoke": (
        "Burgers equation u_t = 3uu' from 0.1 sin(theta), checked against characteristics",
        {
            "problem": "riemann-l2",
            "order": 32,
            "T": 0.05,
            "dt": 1e-4,
            "modes": [[1, 0.0, -0.05]],
            "record_every": 10,
        },
    ),
    "camassa-holm": (
        "H^1 (alpha = beta = 1) geodesic, i.e. the Camassa-Holm equation",
        {
            "problem": "sobolev-riemann",
            "alpha": 1.0,
            "beta": 1.0,
            "order": 32,
            "T": 1.0,
            "dt": 1e-3,
            "modes": [[1, 0.0, -0.1], [2, 0.03, 0.0]],
            "record_every": 50,
        },
    ),
    "velling-kirillov": (
        "Riemannian geodesic of the Velling-Kirillov metric with nonzero mean",
        {
            "problem": "kaehler-riemann",
            "alpha": 1.0,
            "beta": 0.0,
            "order": 32,
            "T": 1.0,
            "dt": 1e-3,
            "modes": [[0, 0.4, 0.0], [1, 0.05, -0.05], [3, 0.0, 0.02]],
            "record_every": 50,
        },
    ),
    "kaehler-normal": (
        "Normal sub-Riemannian geodesic on Vect0 with rot multiplier 0.5",
        {
            "problem": "kaehler-normal",
            "alpha": 1.0,
            "beta": 0.0,
            "lambda": 0.5,
            "order": 32,
            "T": 1.0,
            "dt": 1e-3,
            "modes": [[1, 0.05, -0.05], [3, 0.0, 0.02]],
            "record_every": 50,
        },
    ),
    "wp-check": (
        "Weil-Petersson normal geodesic with a mob multiplier; closed-form multiplier ODE cross-checked",
        {
            "problem": "weil-petersson",
            "order": 8,
            "T": 1.0,
            "dt": 1e-3,
            "lambda0": 0.3,
            "w_re": 0.2,
            "w_im": -0.1,
            "seed": 7,
            "random_amplitude": 0.2,
            "random_decay": 2.0,
            "record_every": 50,
        },
    ),
    "kdv": (
        "Virasoro normal geodesic (KdV with drift) for mu = 0, nu = 1",
        {
            "problem": "virasoro-normal",
            "mu": 0.0,
            "nu": 1.0,
            "lambda1": 0.3,
            "lambda2": 1.0,
            "order": 32,
            "T": 1.0,
            "dt": 1e-3,
            "modes": [[1, 0.0, -0.05], [2, 0.02, 0.0]],
            "record_every": 50,
        },
    ),
    "stationary": (
        "Zero initial data; the trajectory stays at rest",
        {"problem": "riemann-l2", "order": 8, "T": 0.1, "dt": 1e-2},
    ),
}


def preset_names():
    return sorted(PRESETS)


def preset(name):
    """Validated config of a built-in preset."""
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; choose from {preset_names()}")
    return from_mapping(PRESETS[name][1])


def describe(name):
    return PRESETS[name][0]
