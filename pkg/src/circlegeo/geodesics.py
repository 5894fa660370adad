"""Geodesic systems on Vect S^1 and on the Virasoro algebra.

Every problem is an instance of the normal system

.. math:: m = A u + \\lambda, \\qquad \\dot u = \\mathrm{pr}_h A^{-1}\\mathrm{ad}_u^{\\top} m,
          \\qquad \\dot\\lambda = \\mathrm{pr}_{h^\\perp}\\mathrm{ad}_u^{\\top} m,

with ``ad^T`` the L^2 adjoint ``x y' + 2 x' y``, ``A`` a Fourier multiplier
(extended by the identity on the complement of the horizontal space) and
``lambda`` the multiplier living in that complement. Riemannian problems
have ``h`` equal to everything and no multiplier.

Truncation: the state has order ``N``; quadratic terms are formed exactly at
order ``2N`` and truncated back to ``N``. That Galerkin truncation is the
only spatial error and it conserves every quadratic energy exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BlowUpError, DomainError, SingularModeError
from .fields import (
    FieldSeries,
    FourierField,
    Subspace,
    diff_coeffs,
    leak,
    product_coeffs,
    resize,
    wavenumbers,
)
from .metrics import WEIL_PETERSSON, InertiaKind, MetricParams, l2_inner
from .virasoro import CentralParams, VirVector, gelfand_fuchs, vir_ad_transpose


def _ad_transpose(c, m, order):
    r = product_coeffs(c, diff_coeffs(m)) + 2.0 * product_coeffs(diff_coeffs(c), m)
    return resize(r, order)


def _parseval_weights(order):
    w = np.full(order + 1, 2.0)
    w[0] = 1.0
    return w


# ---------------------------------------------------------------------------
# multipliers


@dataclass(frozen=True)
class RotMultiplier:
    lam: float

    def as_array(self):
        return np.array([self.lam], dtype=complex)

    @classmethod
    def from_array(cls, a):
        return cls(float(a[0].real))


@dataclass(frozen=True)
class MobMultiplier:
    """``lambda = lambda0 + w e^{i theta} + conj(w) e^{-i theta}``."""

    lambda0: float
    w: complex

    def as_array(self):
        return np.array([self.lambda0, self.w], dtype=complex)

    @classmethod
    def from_array(cls, a):
        return cls(float(a[0].real), complex(a[1]))

    def as_field(self, order=1):
        c = np.zeros(max(order, 1) + 1, dtype=complex)
        c[0], c[1] = self.lambda0, self.w
        return FourierField(c)


@dataclass(frozen=True)
class VirMultiplier:
    lambda1: float
    lambda2: float

    def as_array(self):
        return np.array([self.lambda1, self.lambda2], dtype=complex)

    @classmethod
    def from_array(cls, a):
        return cls(float(a[0].real), float(a[1].real))


@dataclass(frozen=True)
class GeodesicState:
    """Horizontal velocity ``u`` and the multiplier (``None`` for Riemannian problems)."""

    u: FourierField
    multiplier: RotMultiplier | MobMultiplier | VirMultiplier | None = None


# ---------------------------------------------------------------------------
# problems


class Problem:
    """Base class; subclasses fix the inertia, horizontal space and multiplier."""

    horizontal = Subspace.FULL
    multiplier_type = None
    name = "problem"

    # -- configuration hooks ---------------------------------------------

    def inertia(self, order):
        """Full-algebra multipliers ``a_n`` (``n = 0..order``) of ``A``."""
        raise NotImplementedError

    def initial_multiplier(self):
        return None

    def linear_symbol(self, order, lam=None):
        """Diagonal linear part of the rhs, if the system has a stiff one."""
        return None

    def multiplier_rate(self, c, lam):
        return np.zeros_like(lam)

    # -- shared machinery -------------------------------------------------

    def _embed(self, lam, order):
        out = np.zeros(order + 1, dtype=complex)
        if lam is not None and lam.size:
            k = min(lam.size, order + 1)
            out[:k] = lam[:k]
        return out

    def derivative(self, c, lam):
        """Coefficient-level rhs: ``(u_dot, lambda_dot)``."""
        order = c.size - 1
        a = self.inertia(order)
        m = a * c + self._embed(lam, order)
        r = _ad_transpose(c, m, order)
        mask = self.horizontal.mask(order)
        udot = np.where(mask, r / a, 0)
        return udot, self.multiplier_rate(c, lam)

    def projected_multiplier_rate(self, c, lam):
        """``pr_{h-perp} ad_u^T(m)`` computed from the full product (cross-check)."""
        order = c.size - 1
        a = self.inertia(order)
        r = _ad_transpose(c, a * c + self._embed(lam, order), order)
        n = 0 if lam is None else lam.size
        return r[:n]

    def energy(self, c):
        """``(1/2) |u|^2`` in the problem's metric."""
        order = c.shape[-1] - 1
        return 0.5 * np.sum(_parseval_weights(order) * self.inertia(order) * np.abs(c) ** 2, axis=-1)

    def momentum(self, state):
        """L^2 representative ``m = A u + lambda`` of the momentum."""
        c = state.u.coeffs
        lam = None if state.multiplier is None else state.multiplier.as_array()
        order = c.size - 1
        return FourierField(self.inertia(order) * c + self._embed(lam, order))

    def check_state(self, state, atol=1e-12):
        scale = max(1.0, state.u.norm())
        if self.horizontal is not Subspace.FULL and float(leak(state.u.coeffs, self.horizontal)) > atol * scale:
            raise DomainError(f"{self.name}: state has weight outside the {self.horizontal.value} subspace")
        want = self.multiplier_type
        got = state.multiplier
        if (want is None) != (got is None) or (want is not None and not isinstance(got, want)):
            raise DomainError(f"{self.name}: multiplier must be {want.__name__ if want else None}")

    def initial_state(self, u0):
        return GeodesicState(u0, self.initial_multiplier())

    def pack(self, state):
        lam = np.zeros(0, dtype=complex) if state.multiplier is None else state.multiplier.as_array()
        return state.u.coeffs.copy(), lam

    def unpack(self, c, lam):
        mult = None if self.multiplier_type is None else self.multiplier_type.from_array(lam)
        return GeodesicState(FourierField(c), mult)


def _require_nonzero(a, start=0):
    zero = np.nonzero(a[start:] == 0)[0]
    if zero.size:
        raise SingularModeError(zero[0] + start)


@dataclass(frozen=True)
class RiemannL2(Problem):
    """L^2 metric; the geodesic equation is ``u_t = 3 u u'``."""

    name = "riemann-l2"

    def inertia(self, order):
        return np.ones(order + 1)


@dataclass(frozen=True)
class SobolevRiemann(Problem):
    """``A = alpha + beta n^2``; ``(1, 1)`` gives the Camassa-Holm equation."""

    params: MetricParams = MetricParams(1.0, 1.0)
    name = "sobolev-riemann"

    def inertia(self, order):
        a = InertiaKind.sobolev(self.params).multipliers(order)
        _require_nonzero(a)
        return a


@dataclass(frozen=True)
class KaehlerRiemann(Problem):
    """Full Riemannian metric ``(x, y)_{ab}``: ``A = L J d/dtheta`` plus the mean."""

    params: MetricParams = MetricParams(1.0, 0.0)
    name = "kaehler-riemann"

    def inertia(self, order):
        a = InertiaKind.kaehler(self.params, Subspace.FULL).multipliers(order)
        _require_nonzero(a, 1)
        a[0] = 1.0
        return a


@dataclass(frozen=True)
class KaehlerNormal(KaehlerRiemann):
    """Normal sub-Riemannian geodesics on Vect0 with a constant rot multiplier."""

    params: MetricParams = MetricParams(1.0, 0.0)
    lam: float = 0.0
    name = "kaehler-normal"
    horizontal = Subspace.VECT0
    multiplier_type = RotMultiplier

    def __post_init__(self):
        if not self.params.positive_definite:
            raise DomainError(f"kaehler-normal needs a positive-definite metric, got {self.params}")

    def initial_multiplier(self):
        return RotMultiplier(self.lam)


@dataclass(frozen=True)
class WeilPetersson(Problem):
    """Weil-Petersson metric on ``D`` extended by L^2 on mob; multiplier in mob."""

    lambda0: float = 0.0
    w: complex = 0j
    name = "weil-petersson"
    horizontal = Subspace.D
    multiplier_type = MobMultiplier

    def inertia(self, order):
        a = InertiaKind.kaehler(WEIL_PETERSSON, Subspace.D).multipliers(order)
        a[: min(order, 1) + 1] = 1.0
        return a

    def initial_multiplier(self):
        return MobMultiplier(self.lambda0, self.w)

    def multiplier_rate(self, c, lam):
        # lambda0_dot = 0, w_dot = 3i conj(w) c_2
        c2 = c[2] if c.size > 2 else 0.0
        return np.array([0.0, 3j * np.conj(lam[1]) * c2])


@dataclass(frozen=True)
class VirasoroNormal(Problem):
    """Normal geodesics on the Virasoro algebra with horizontal space ``(Vect0, 0)``:
    ``u_t = 3 u u' + 2 lambda1 u' + lambda2 L_{mu nu} u'``."""

    central: CentralParams = CentralParams(0.0, 1.0)
    lambda1: float = 0.0
    lambda2: float = 1.0
    name = "virasoro-normal"
    horizontal = Subspace.VECT0
    multiplier_type = VirMultiplier

    def inertia(self, order):
        return np.ones(order + 1)

    def initial_multiplier(self):
        return VirMultiplier(self.lambda1, self.lambda2)

    def derivative(self, c, lam):
        order = c.size - 1
        l1, l2 = lam[0].real, lam[1].real
        u = FourierField(c)
        r = vir_ad_transpose(self.central, VirVector(u, 0.0), VirVector(u + l1, l2), order=order)
        udot = np.where(self.horizontal.mask(order), r.x.coeffs, 0)
        return udot, np.zeros_like(lam)

    def projected_multiplier_rate(self, c, lam):
        u = FourierField(c)
        r = vir_ad_transpose(self.central, VirVector(u, 0.0), VirVector(u + lam[0].real, lam[1].real))
        return np.array([r.x.coeffs[0], r.a], dtype=complex)

    def linear_symbol(self, order, lam=None):
        l1, l2 = (self.lambda1, self.lambda2) if lam is None else (lam[0].real, lam[1].real)
        n = wavenumbers(order)
        mu, nu = self.central.mu, self.central.nu
        s = 1j * n * (2.0 * l1 - l2 * (mu + nu * n**2))
        s[0] = 0.0
        return s

    def momentum(self, state):
        m = state.multiplier
        return VirVector(state.u + m.lambda1, m.lambda2)


def rhs(problem, state):
    """Time derivative of a geodesic state (same container, derivative values)."""
    problem.check_state(state)
    c, lam = problem.pack(state)
    udot, lamdot = problem.derivative(c, lam)
    if state.multiplier is None:
        return GeodesicState(FourierField(udot), None)
    return GeodesicState(FourierField(udot), type(state.multiplier).from_array(lamdot))


# ---------------------------------------------------------------------------
# trajectories


@dataclass(frozen=True)
class Diagnostics:
    """Per-sample diagnostics derived from a trajectory's states."""

    times: np.ndarray
    energy: np.ndarray
    eta0: np.ndarray
    eta1: np.ndarray
    multipliers: np.ndarray
    leak: np.ndarray
    multiplier_residual: np.ndarray
    energy_functional: float

    @property
    def max_relative_energy_drift(self):
        e0 = self.energy[0]
        if e0 == 0:
            return float(np.max(np.abs(self.energy - e0)))
        return float(np.max(np.abs(self.energy - e0)) / abs(e0))

    @property
    def max_leak(self):
        return float(np.max(self.leak))

    @property
    def eta0_drift(self):
        return float(np.max(np.abs(self.eta0 - self.eta0[0])))

    @property
    def multiplier_drift(self):
        if self.multipliers.shape[1] == 0:
            return 0.0
        return float(np.max(np.abs(self.multipliers - self.multipliers[0])))

    def summary(self):
        return {
            "max_relative_energy_drift": self.max_relative_energy_drift,
            "max_subspace_leak": self.max_leak,
            "eta0_drift": self.eta0_drift,
            "multiplier_drift": self.multiplier_drift,
            "max_multiplier_residual": float(np.max(self.multiplier_residual)),
            "energy_functional": self.energy_functional,
        }


class Trajectory:
    """States of a geodesic system on a uniform time grid (immutable)."""

    __slots__ = ("problem", "times", "coeffs", "multipliers")

    def __init__(self, problem, times, coeffs, multipliers):
        self.problem = problem
        self.times = np.array(times, dtype=float)
        self.coeffs = np.array(coeffs, dtype=complex)
        self.multipliers = np.array(multipliers, dtype=complex).reshape(self.times.size, -1)
        for arr in (self.times, self.coeffs, self.multipliers):
            arr.setflags(write=False)

    def __len__(self):
        return self.times.size

    def __getitem__(self, k):
        return self.problem.unpack(self.coeffs[k], self.multipliers[k])

    def __iter__(self):
        return (self[k] for k in range(len(self)))

    @property
    def order(self):
        return self.coeffs.shape[1] - 1

    @property
    def dt(self):
        return float(self.times[1] - self.times[0])

    @property
    def u(self):
        return FieldSeries(self.times, self.coeffs)

    def diagnostics(self):
        return diagnostics(self)


def diagnostics(traj):
    p = traj.problem
    energy = np.asarray(p.energy(traj.coeffs), dtype=float)
    eta0 = traj.coeffs[:, 0].real.copy()
    eta1 = traj.coeffs[:, 1].copy() if traj.order >= 1 else np.zeros(len(traj), dtype=complex)
    lk = leak(traj.coeffs, p.horizontal) if p.horizontal is not Subspace.FULL else np.zeros(len(traj))
    resid = np.zeros(len(traj))
    if traj.multipliers.shape[1]:
        for k in range(len(traj)):
            c, lam = traj.coeffs[k], traj.multipliers[k]
            closed = p.derivative(c, lam)[1]
            resid[k] = np.max(np.abs(closed - p.projected_multiplier_rate(c, lam)))
    functional = float(np.trapezoid(energy, traj.times)) if len(traj) > 1 else 0.0
    return Diagnostics(
        times=traj.times,
        energy=energy,
        eta0=eta0,
        eta1=eta1,
        multipliers=traj.multipliers,
        leak=np.asarray(lk, dtype=float),
        multiplier_residual=resid,
        energy_functional=functional,
    )


def _tail_fraction(c):
    order = c.size - 1
    cut = (3 * order) // 4
    total = np.sum(np.abs(c[1:]) ** 2)
    if total == 0:
        return 0.0
    return float(np.sqrt(np.sum(np.abs(c[cut + 1 :]) ** 2) / total))


def integrate(problem, initial, T, dt, method="auto", record_every=1, tail_tol=0.05):
    """Fixed-step fourth-order integration of a geodesic system.

    Parameters
    ----------
    problem : Problem
    initial : GeodesicState
        Must satisfy the problem's subspace and multiplier invariants.
    T, dt : float
        Final time and step; the step count is ``round(T / dt)``.
    method : {"auto", "rk4", "if-rk4"}
        ``"rk4"`` is classical Runge-Kutta on the coefficient vector.
        ``"if-rk4"`` applies it after factoring out the exact flow of the
        diagonal linear part (integrating factor); ``"auto"`` picks it
        whenever the problem has such a part.
    record_every : int
        Keep every k-th step.
    tail_tol : float or None
        Abort when the top quarter of the spectrum carries more than
        ``max(tail_tol, 10 * initial share)`` of the non-mean L^2 norm, i.e.
        the solution has stopped being resolved (wave breaking). ``None``
        only checks finiteness.

    Raises
    ------
    BlowUpError
        With ``time`` the last valid time and ``partial`` the trajectory so far.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if T < dt * (1 - 1e-12):
        raise ValueError("T must be at least dt")
    problem.check_state(initial)
    steps = int(round(T / dt))
    h = T / steps
    c, lam = problem.pack(initial)
    order = c.size - 1

    sym = problem.linear_symbol(order, lam)
    if method == "rk4" or (method == "auto" and sym is None):
        sym = None
    elif method not in ("auto", "if-rk4"):
        raise ValueError(f"unknown method {method!r}")
    elif sym is None:
        sym = np.zeros(order + 1, dtype=complex)

    nc = c.size

    def f(y):
        ud, ld = problem.derivative(y[:nc], y[nc:])
        if sym is not None:
            ud = ud - sym * y[:nc]
        return np.concatenate([ud, ld])

    y = np.concatenate([c, lam])
    if tail_tol is not None:
        tail_tol = max(tail_tol, 10.0 * _tail_fraction(c))
    if sym is not None:
        e_half = np.concatenate([np.exp(0.5 * h * sym), np.ones(lam.size)])
        e_full = e_half**2

    times = [0.0]
    rec_c = [c.copy()]
    rec_l = [lam.copy()]

    def partial():
        return Trajectory(problem, times, rec_c, rec_l)

    for k in range(steps):
        if sym is None:
            k1 = f(y)
            k2 = f(y + 0.5 * h * k1)
            k3 = f(y + 0.5 * h * k2)
            k4 = f(y + h * k3)
            y_new = y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        else:
            k1 = f(y)
            k2 = f(e_half * (y + 0.5 * h * k1))
            k3 = f(e_half * y + 0.5 * h * k2)
            k4 = f(e_full * y + h * e_half * k3)
            y_new = e_full * y + h / 6.0 * (e_full * k1 + 2.0 * e_half * (k2 + k3) + k4)
        t_new = (k + 1) * h
        if not np.all(np.isfinite(y_new)):
            raise BlowUpError(k * h, "non-finite state", partial=partial())
        if tail_tol is not None and _tail_fraction(y_new[:nc]) > tail_tol:
            raise BlowUpError(k * h, "spectrum no longer resolved", partial=partial())
        y_new[0] = y_new[0].real
        y = y_new
        if (k + 1) % record_every == 0 or k + 1 == steps:
            times.append(t_new)
            rec_c.append(y[:nc].copy())
            rec_l.append(y[nc:].copy())
    return Trajectory(problem, times, rec_c, rec_l)


def rotate_shift(traj):
    """Turn a Riemannian trajectory of :class:`KaehlerRiemann` into a normal
    sub-Riemannian one.

    With ``lam = eta0(u_R(0))`` the curve ``gamma_R(t) exp(-lam t)`` has left
    logarithmic derivative ``u(t, theta) = u_R(t, theta - lam t) - lam``, which
    is horizontal and solves the normal equation with constant multiplier ``lam``.
    """
    p = traj.problem
    if type(p) is not KaehlerRiemann:
        raise DomainError("rotate_shift expects a kaehler-riemann trajectory")
    lam = float(traj.coeffs[0, 0].real)
    n = wavenumbers(traj.order)
    shifted = traj.coeffs * np.exp(-1j * np.multiply.outer(lam * traj.times, n))
    shifted[:, 0] -= lam
    normal = KaehlerNormal(p.params, lam)
    mult = np.full((len(traj), 1), lam, dtype=complex)
    return Trajectory(normal, traj.times, shifted, mult)


# ---------------------------------------------------------------------------
# geometric checks


def rhs_residual(traj):
    """Largest ``|u_dot - rhs(u)|`` over a trajectory, with ``u_dot`` from
    centered differences of the recorded samples (L^2 norm per sample)."""
    udot = np.gradient(traj.coeffs, traj.dt, axis=0, edge_order=2)
    worst = 0.0
    for k in range(len(traj)):
        ud, _ = traj.problem.derivative(traj.coeffs[k], traj.multipliers[k])
        worst = max(worst, _l2(udot[k] - ud))
    return worst


def _l2(c):
    return float(np.sqrt(np.sum(_parseval_weights(c.size - 1) * np.abs(c) ** 2)))


def weak_residual(traj, x, a=None):
    """Discrete ``<<m, tau_u x>> = int_0^1 <m, x_dot + [u, x]> dt``.

    Vanishes (up to time discretization) for every test curve with
    ``x(0) = x(1) = 0`` exactly when the momentum obeys the Euler-Arnold
    equation. For Virasoro problems ``a`` is the central component of the
    test curve and the pairing includes ``lambda2 (a_dot + omega(u, x))``.
    """
    from .diffeo import tau_apply

    u = traj.u
    tx = tau_apply(u, x, order=max(traj.order, x.order))
    vals = np.empty(len(traj))
    vir = isinstance(traj.problem, VirasoroNormal)
    if vir:
        a = np.zeros(len(traj)) if a is None else np.asarray(a, dtype=float)
        adot = np.gradient(a, traj.dt, edge_order=2)
    for k in range(len(traj)):
        m = traj.problem.momentum(traj[k])
        if vir:
            central = adot[k] + gelfand_fuchs(traj.problem.central, u[k], x[k])
            vals[k] = l2_inner(m.x, tx[k]) + m.a * central
        else:
            vals[k] = l2_inner(m, tx[k])
    return float(np.trapezoid(vals, traj.times))


def mob_cancellation(u):
    """Largest ``|n| <= 1`` coefficient of ``ad_u^T(A u)`` for Weil-Petersson ``A``."""
    c = u.coeffs
    order = c.size - 1
    a = InertiaKind.kaehler(WEIL_PETERSSON, Subspace.D).multipliers(order)
    r = product_coeffs(c, diff_coeffs(a * c)) + 2.0 * product_coeffs(diff_coeffs(c), a * c)
    return float(np.max(np.abs(r[:2])))
