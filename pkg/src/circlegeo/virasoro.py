"""The Virasoro-Bott group law and the centrally extended algebra g_{mu nu}.

Group elements pair a universal-cover diffeomorphism with a real central
coordinate,

.. math:: (\\phi_1, b_1)(\\phi_2, b_2) = (\\phi_1\\circ\\phi_2,\\;
          b_1 + b_2 + \\mu A(\\phi_1,\\phi_2) + \\nu B(\\phi_1,\\phi_2)),

and the algebra bracket is ``[(x, a), (y, b)] = ([x, y], omega_{mu nu}(x, y))``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diffeo import Diffeo, grid_derivative
from .fields import FourierField, bracket, diff_coeffs
from .metrics import MetricParams, ad_transpose, apply_L, l2_inner, omega


@dataclass(frozen=True)
class CentralParams:
    """Coefficients of the Gelfand-Fuchs cocycle; ``nu = 0`` is the trivial extension."""

    mu: float
    nu: float

    def __post_init__(self):
        if not (np.isfinite(self.mu) and np.isfinite(self.nu)):
            raise ValueError("central parameters must be finite")

    @property
    def trivial(self):
        return self.nu == 0

    @property
    def as_metric(self):
        # omega_{mu nu} and L_{mu nu} share their formulas with (alpha, beta)
        return MetricParams(self.mu, self.nu)


@dataclass(frozen=True)
class VirasoroElement:
    phi: Diffeo
    b: float = 0.0

    @classmethod
    def identity(cls, m):
        return cls(Diffeo.identity(m), 0.0)


@dataclass(frozen=True)
class VirVector:
    """Element ``(x, a)`` of ``Vect S^1 + R``."""

    x: FourierField
    a: float = 0.0


def _phase_mean(values):
    # (1/2pi) int_0^{2pi} by the trapezoid rule on the uniform grid
    return float(np.mean(values))


def cocycle_A(phi1, phi2):
    """``(1/4pi) int (-phi1 o phi2 + phi1 + phi2 - id) dtheta``."""
    comp = phi1.compose(phi2)
    integrand = -comp.displacement + phi1.displacement + phi2.displacement
    return 0.5 * _phase_mean(integrand)


def cocycle_B(phi1, phi2):
    """Bott cocycle ``(1/4pi) int log((phi1 o phi2)') d log phi2'``."""
    d2 = phi2.derivative()
    d1_at = phi1.derivative_at(phi2.values)
    if np.min(d2) <= 0 or np.min(d1_at) <= 0:
        raise ValueError("cocycle_B needs monotone diffeomorphisms")
    log_comp = np.log(d1_at * d2)
    dlog2 = grid_derivative(np.log(d2))
    return 0.5 * _phase_mean(log_comp * dlog2)


def vir_multiply(p, g1, g2):
    if g1.phi.m != g2.phi.m:
        raise ValueError("group elements live on different grids")
    phi = g1.phi.compose(g2.phi)
    b = g1.b + g2.b
    if p.mu:
        b += p.mu * cocycle_A(g1.phi, g2.phi)
    if p.nu:
        b += p.nu * cocycle_B(g1.phi, g2.phi)
    return VirasoroElement(phi, b)


def gelfand_fuchs(p, x, y):
    """``omega_{mu nu}(x, y) = (1/2pi) int (mu x y' + nu x' y'')``."""
    return omega(p.as_metric, x, y)


def vir_bracket(p, v, w, order=None):
    return VirVector(bracket(v.x, w.x, order=order), gelfand_fuchs(p, v.x, w.x))


def vir_inner(v, w):
    """``<(x, a1), (y, a2)> = <x, y> + a1 a2``."""
    return l2_inner(v.x, w.x) + v.a * w.a


def vir_ad_transpose(p, v, w, order=None):
    """Adjoint of ``ad_v`` under :func:`vir_inner`:
    ``((x y' + 2 x' y) + a0 L_{mu nu} x', 0)`` for ``v = (x, a)``, ``w = (y, a0)``."""
    r = ad_transpose(v.x, w.x)
    if w.a:
        r = r + w.a * apply_L(p.as_metric, FourierField(diff_coeffs(v.x.coeffs)))
    if order is not None:
        r = r.resized(order)
    return VirVector(r, 0.0)


def rotation_element(angle, b, m):
    return VirasoroElement(Diffeo.rotation(angle, m), b)

