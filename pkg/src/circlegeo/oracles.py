"""Reference solutions that do not share code paths with the solvers."""

from __future__ import annotations

import numpy as np
from scipy.optimize import brentq


def burgers_characteristics(u0, t, theta):
    """Exact solution of ``u_t = 3 u u'`` before wave breaking.

    ``u`` is constant along ``theta = xi - 3 u0(xi) t``; the foot point
    ``xi`` is found by bracketed root finding on each target angle.

    Parameters
    ----------
    u0 : callable
        Initial profile (vectorized, 2pi-periodic).
    t : float
    theta : array_like
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    probe = np.linspace(0.0, 2.0 * np.pi, 2049)
    reach = 3.0 * float(np.max(np.abs(u0(probe)))) * abs(t) + 1e-12
    out = np.empty_like(theta)
    for k, th in enumerate(theta):
        xi = brentq(lambda s: s - 3.0 * u0(s) * t - th, th - reach - 1e-9, th + reach + 1e-9, xtol=1e-15, rtol=1e-15)
        out[k] = u0(xi)
    return out


def burgers_breaking_time(du0_max):
    """First time characteristics cross, given ``max u0'``."""
    return np.inf if du0_max <= 0 else 1.0 / (3.0 * du0_max)


def measured_frequency(times, c):
    """Angular frequency ``w`` of a signal ``c(t) ~ A exp(-i w t)``.

    Least-squares slope of the unwrapped phase.
    """
    phase = np.unwrap(np.angle(np.asarray(c)))
    slope = np.polyfit(np.asarray(times, dtype=float), phase, 1)[0]
    return float(-slope)
