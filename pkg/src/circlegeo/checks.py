"""Self-check suite run by ``circlegeo check``.

Each check compares a library operation against an independent route
(quadrature, group law identities, exact solutions) and reports the
worst deviation together with its tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diffeo import Diffeo, tau_apply, tau_invert
from .fields import FieldSeries, FourierField, Subspace, bracket, grid, hilbert, hilbert_pv
from .geodesics import KaehlerRiemann, RiemannL2, WeilPetersson, integrate, mob_cancellation, rhs_residual, rotate_shift
from .metrics import MetricParams, ad_transpose, apply_L, inner, kirillov_metric, l2_inner, to_univalent
from .oracles import burgers_characteristics
from .virasoro import CentralParams, VirasoroElement, VirVector, vir_ad_transpose, vir_bracket, vir_inner, vir_multiply


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tol: float

    @property
    def passed(self):
        return bool(np.isfinite(self.value) and self.value < self.tol)

    def line(self):
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag}  {self.name:<24s} {self.value:.3e}  (tol {self.tol:.0e})"


def check_hilbert_kernel():
    theta = np.linspace(0.0, 2.0 * np.pi, 7, endpoint=False) + 0.1
    worst = 0.0
    for n in range(1, 9):
        for cos, sin in ((1.0, 0.0), (0.0, 1.0)):
            x = FourierField.trig(n, cos=cos, sin=sin)
            ref = hilbert_pv(x.evaluate, theta)
            worst = max(worst, float(np.max(np.abs(hilbert(x)(theta) - ref))))
    return worst, 1e-6


def check_metric_consistency(samples=20, seed=0):
    rng = np.random.default_rng(seed)
    worst = 0.0
    cases = ((MetricParams(1, 0), Subspace.FULL), (MetricParams(1, 1), Subspace.FULL), (MetricParams(-1, 1), Subspace.D))
    for p, s in cases:
        for _ in range(samples):
            x = FourierField.random(16, rng, subspace=s)
            y = FourierField.random(16, rng, subspace=s)
            via_L = l2_inner(apply_L(p, hilbert(x.derivative())) + x.mean, y)
            worst = max(worst, abs(inner(p, x, y) - via_L))
            x0, y0 = x - x.mean, y - y.mean
            k = kirillov_metric(p, to_univalent(x0), to_univalent(y0))
            worst = max(worst, abs(k.real - inner(p, x0, y0)))
    return worst, 1e-10


def check_adjointness(samples=20, seed=1):
    rng = np.random.default_rng(seed)
    cp = CentralParams(0.7, 1.3)
    worst = 0.0
    for _ in range(samples):
        x, y, z = (FourierField.random(8, rng) for _ in range(3))
        worst = max(worst, abs(l2_inner(ad_transpose(x, y), z) - l2_inner(y, bracket(x, z))))
        a, b, c = rng.standard_normal(3)
        v, w, q = VirVector(x, a), VirVector(y, b), VirVector(z, c)
        lhs = vir_inner(vir_ad_transpose(cp, v, w), q)
        worst = max(worst, abs(lhs - vir_inner(w, vir_bracket(cp, v, q))))
    return worst, 1e-10


def check_tau_roundtrip(seed=0):
    rng = np.random.default_rng(seed)
    t = np.linspace(0.0, 1.0, 1001)
    u0, u1 = FourierField.random(8, rng, 0.2, 2), FourierField.random(8, rng, 0.1, 2)
    y0, y1 = FourierField.random(8, rng, 0.5, 2), FourierField.random(8, rng, 0.5, 2)
    u = FieldSeries(t, np.outer(np.ones_like(t), u0.coeffs) + np.outer(np.sin(np.pi * t), u1.coeffs))
    y = FieldSeries(t, np.outer(np.cos(t), y0.coeffs) + np.outer(t, y1.coeffs))
    x = tau_invert(u, y)
    back = tau_apply(u, x, order=x.order)
    return (back - y.resized(x.order)).sup_norm(), 1e-6


def check_cocycle_associativity(samples=3, seed=2):
    rng = np.random.default_rng(seed)
    m = 512
    cp = CentralParams(0.7, 1.3)
    worst = 0.0
    for _ in range(samples):
        g = [VirasoroElement(Diffeo.random(m, rng, amplitude=0.2), float(rng.standard_normal())) for _ in range(3)]
        left = vir_multiply(cp, vir_multiply(cp, g[0], g[1]), g[2])
        right = vir_multiply(cp, g[0], vir_multiply(cp, g[1], g[2]))
        worst = max(worst, abs(left.b - right.b))
    return worst, 1e-8


def check_rotation_cocycles(seed=3):
    rng = np.random.default_rng(seed)
    cp = CentralParams(0.7, 1.3)
    worst = 0.0
    for a, b in rng.uniform(-np.pi, np.pi, (5, 2)):
        g = vir_multiply(cp, VirasoroElement(Diffeo.rotation(a, 128)), VirasoroElement(Diffeo.rotation(b, 128)))
        worst = max(worst, abs(g.b))
    return worst, 1e-12


def check_rotate_shift(seed=4):
    rng = np.random.default_rng(seed)
    c = FourierField.random(16, rng, scale=0.1, decay=3).coeffs.copy()
    c[0] = 0.4
    p = KaehlerRiemann(MetricParams(1.0, 0.0))
    traj = integrate(p, p.initial_state(FourierField(c)), 1.0, 1e-3)
    return rhs_residual(rotate_shift(traj)), 1e-6


def check_burgers():
    p = RiemannL2()
    u0 = FourierField.trig(1, sin=0.1, order=32)
    traj = integrate(p, p.initial_state(u0), 0.05, 1e-4)
    theta = grid(256)
    ref = burgers_characteristics(u0.evaluate, 0.05, theta)
    return float(np.max(np.abs(traj[-1].u(theta) - ref))), 1e-6


def check_wp_closure(seed=5):
    rng = np.random.default_rng(seed)
    p = WeilPetersson(0.3, 0.2 - 0.1j)
    u0 = FourierField.random(8, rng, scale=0.2, decay=2, subspace=Subspace.D)
    traj = integrate(p, p.initial_state(u0), 1.0, 1e-3)
    d = traj.diagnostics()
    return max(float(np.max(d.multiplier_residual)), mob_cancellation(traj[-1].u)), 1e-10


CHECKS = {
    "hilbert-kernel": check_hilbert_kernel,
    "metric-consistency": check_metric_consistency,
    "adjointness": check_adjointness,
    "tau-roundtrip": check_tau_roundtrip,
    "cocycle-associativity": check_cocycle_associativity,
    "rotation-cocycles": check_rotation_cocycles,
    "rotate-shift": check_rotate_shift,
    "burgers-characteristics": check_burgers,
    "wp-closure": check_wp_closure,
}


def run_checks(pattern=None):
    """Run every check whose name contains ``pattern``."""
    out = []
    for name, fn in CHECKS.items():
        if pattern and pattern not in name:
            continue
        value, tol = fn()
        out.append(CheckResult(name, float(value), tol))
    return out
