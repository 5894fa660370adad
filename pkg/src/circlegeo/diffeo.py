"""Orientation-preserving circle diffeomorphisms and curves in Diff S^1.

A diffeomorphism is stored on the universal cover as
``gamma(theta) = theta + f(theta)`` with ``f`` periodic, sampled on a
uniform grid. Off-grid values use the trigonometric interpolant of ``f``.

Left calculus conventions: a curve ``gamma(t)`` has left logarithmic
derivative ``u = gamma_dot / gamma'`` and ``Ad_phi x = phi' x(phi^{-1})``.
"""

from __future__ import annotations

import numpy as np

from .errors import BlowUpError, DomainError
from .fields import (
    FieldSeries,
    FourierField,
    bracket,
    from_grid,
    grid,
    leak,
    to_grid,
)


def _spectrum(values):
    m = values.shape[-1]
    spec = np.fft.rfft(values, axis=-1) / m
    if m % 2 == 0:
        spec[..., -1] *= 0.5
    return spec


def trig_interp(values, points, deriv=0):
    """Evaluate the trigonometric interpolant of periodic grid ``values``
    (or its ``deriv``-th derivative) at arbitrary ``points``."""
    spec = _spectrum(np.asarray(values, dtype=float).reshape(-1))
    k = np.arange(spec.size)
    if deriv:
        spec = spec * (1j * k) ** deriv
    phase = np.exp(1j * np.multiply.outer(np.asarray(points, dtype=float), k[1:]))
    return spec[0].real + 2.0 * (phase @ spec[1:]).real


def grid_derivative(values, k=1):
    """Spectral derivative of periodic samples along the last axis."""
    values = np.asarray(values, dtype=float)
    m = values.shape[-1]
    spec = np.fft.rfft(values, axis=-1)
    mult = (1j * np.arange(spec.shape[-1])) ** k
    if m % 2 == 0 and k % 2:
        mult[-1] = 0.0
    return np.fft.irfft(spec * mult, n=m, axis=-1)


def _field_on_grid(x, m):
    c = x.coeffs if isinstance(x, FourierField) else np.asarray(x)
    if 2 * (c.shape[-1] - 1) < m:
        return to_grid(c, m)
    return FourierField(c).evaluate(grid(m))


class Diffeo:
    """``gamma(theta) = theta + f(theta)`` sampled at ``theta_j = 2 pi j / M``.

    Parameters
    ----------
    displacement : array_like, shape (M,)
        Periodic displacement ``f`` at the grid nodes.
    """

    __slots__ = ("displacement",)

    def __init__(self, displacement):
        f = np.array(displacement, dtype=float).reshape(-1)
        if f.size < 3:
            raise ValueError("a diffeomorphism grid needs at least 3 nodes")
        f.setflags(write=False)
        self.displacement = f

    @classmethod
    def identity(cls, m):
        return cls(np.zeros(m))

    @classmethod
    def rotation(cls, angle, m):
        return cls(np.full(m, float(angle)))

    @classmethod
    def from_field(cls, x, m):
        """Diffeomorphism ``theta + x(theta)`` for a displacement field ``x``."""
        return cls(_field_on_grid(x, m))

    @classmethod
    def random(cls, m, rng=None, amplitude=0.2, modes=4):
        """Smooth random element whose displacement has sup-norm ``amplitude``
        (reduced if needed so that ``gamma' >= 1/2``)."""
        rng = np.random.default_rng(rng)
        c = np.zeros(modes + 1, dtype=complex)
        c[1:] = rng.standard_normal(modes) + 1j * rng.standard_normal(modes)
        c[1:] /= np.arange(1, modes + 1) ** 2
        f = to_grid(c, m)
        f *= amplitude / np.max(np.abs(f))
        slope = np.max(np.abs(grid_derivative(f)))
        if slope > 0.5:
            f *= 0.5 / slope
        return cls(f)

    @property
    def m(self):
        return self.displacement.size

    @property
    def nodes(self):
        return grid(self.m)

    @property
    def values(self):
        return self.nodes + self.displacement

    def derivative(self):
        """``gamma'`` at the grid nodes."""
        return 1.0 + grid_derivative(self.displacement)

    @property
    def is_monotone(self):
        return bool(np.min(self.derivative()) > 0)

    def __call__(self, points):
        points = np.asarray(points, dtype=float)
        return points + trig_interp(self.displacement, points)

    def derivative_at(self, points):
        return 1.0 + trig_interp(self.displacement, points, deriv=1)

    def compose(self, other):
        """``self o other`` on the grid of ``other``."""
        return Diffeo(other.displacement + trig_interp(self.displacement, other.values))

    def __matmul__(self, other):
        return self.compose(other)

    def inverse_values(self, targets=None, tol=1e-13, maxiter=100):
        """Solve ``gamma(psi) = target`` for every target (default: the grid).

        Newton iteration safeguarded by a bracket; steps leaving the bracket
        fall back to bisection. Monotonicity guarantees a unique root.
        """
        if not self.is_monotone:
            raise DomainError("diffeomorphism is not monotone; cannot invert")
        f = self.displacement
        targets = self.nodes if targets is None else np.asarray(targets, dtype=float)
        # the interpolant may overshoot its grid samples, so pad the bracket
        pad = 0.5 * np.ptp(f) + 1e-9
        lo = targets - f.max() - pad
        hi = targets - f.min() + pad
        psi = np.clip(targets - trig_interp(f, targets), lo, hi)
        for _ in range(maxiter):
            g = psi + trig_interp(f, psi) - targets
            if np.max(np.abs(g)) < tol:
                return psi
            hi = np.where(g > 0, psi, hi)
            lo = np.where(g <= 0, psi, lo)
            step = psi - g / (1.0 + trig_interp(f, psi, deriv=1))
            inside = (step >= lo) & (step <= hi)
            psi = np.where(inside, step, 0.5 * (lo + hi))
        raise DomainError("diffeomorphism inversion did not converge")

    def inverse(self):
        return Diffeo(self.inverse_values() - self.nodes)

    def __repr__(self):
        return f"Diffeo(m={self.m})"


class GroupPath:
    """A curve ``t -> gamma(t)`` sampled on a uniform time grid starting at 0."""

    __slots__ = ("times", "displacements")

    def __init__(self, times, displacements):
        times = np.array(times, dtype=float)
        d = np.array(displacements, dtype=float)
        if d.ndim != 2 or d.shape[0] != times.size:
            raise ValueError("displacements must have shape (len(times), M)")
        times.setflags(write=False)
        d.setflags(write=False)
        self.times = times
        self.displacements = d

    @classmethod
    def from_diffeos(cls, times, diffeos):
        return cls(times, np.stack([g.displacement for g in diffeos]))

    @property
    def m(self):
        return self.displacements.shape[1]

    @property
    def dt(self):
        return float(self.times[1] - self.times[0])

    def __len__(self):
        return self.times.size

    def __getitem__(self, k):
        return Diffeo(self.displacements[k])

    def __iter__(self):
        return (Diffeo(f) for f in self.displacements)


# ---------------------------------------------------------------------------
# operations


def adjoint_action(phi, x, order=None):
    """``(Ad_phi x)(theta) = phi'(phi^{-1} theta) x(phi^{-1} theta)``,
    sampled on the grid of ``phi`` and re-expanded to ``order``."""
    order = x.order if order is None else order
    psi = phi.inverse_values()
    vals = phi.derivative_at(psi) * x.evaluate(psi)
    return FourierField(from_grid(vals, order))


def log_derivative(path, order=None):
    """Left logarithmic derivative ``u = gamma_dot / gamma'`` of a sampled path.

    ``gamma_dot`` uses centered differences (second-order one-sided at the
    ends); ``gamma'`` is spectral. Default ``order`` is ``(M - 1) // 4``.
    """
    if len(path) < 3:
        raise ValueError("log_derivative needs at least 3 samples")
    order = (path.m - 1) // 4 if order is None else order
    d = path.displacements
    gprime = 1.0 + grid_derivative(d)
    if np.min(gprime) <= 0:
        k = int(np.nonzero(np.min(gprime, axis=1) <= 0)[0][0])
        raise DomainError(f"path is not monotone at t={path.times[k]:g}")
    gdot = np.gradient(d, path.dt, axis=0, edge_order=2)
    return FieldSeries(path.times, from_grid(gdot / gprime, order))


def _midpoints(c):
    # cubic Lagrange interpolation at t_k + dt/2 for k = 0..K-2
    k = c.shape[0]
    if k < 4:
        return 0.5 * (c[:-1] + c[1:])
    mid = np.empty((k - 1,) + c.shape[1:], dtype=c.dtype)
    mid[1:-1] = (-c[:-3] + 9.0 * c[1:-2] + 9.0 * c[2:-1] - c[3:]) / 16.0
    mid[0] = (5.0 * c[0] + 15.0 * c[1] - 5.0 * c[2] + c[3]) / 16.0
    mid[-1] = (c[-4] - 5.0 * c[-3] + 15.0 * c[-2] + 5.0 * c[-1]) / 16.0
    return mid


def _velocity_schedule(u, dt, t_final):
    # -> (times, order, at) where at(k, 0) / at(k, 1) give the coefficients
    # of u at t_k and at t_k + dt/2
    if isinstance(u, FieldSeries):
        full = u.coeffs
        half = _midpoints(full)
        return u.times, u.order, lambda k, which: full[k] if which == 0 else half[k]
    if dt is None or t_final is None:
        raise ValueError("a callable velocity needs dt and t_final")
    if dt <= 0:
        raise ValueError("dt must be positive")
    steps = int(round(t_final / dt))
    times = dt * np.arange(steps + 1)
    return times, u(0.0).order, lambda k, which: u(times[k] + 0.5 * dt * which).coeffs


def _rk4_path(times, state0, rate, at, check):
    out = np.empty((times.size,) + state0.shape)
    out[0] = state0
    f = state0.copy()
    for k in range(times.size - 1):
        h = times[k + 1] - times[k]
        c0, ch, c1 = at(k, 0), at(k, 1), at(k + 1, 0)
        k1 = rate(f, c0)
        k2 = rate(f + 0.5 * h * k1, ch)
        k3 = rate(f + 0.5 * h * k2, ch)
        k4 = rate(f + h * k3, c1)
        f = f + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not check(f):
            raise BlowUpError(
                times[k], "flow lost monotonicity", partial=GroupPath(times[: k + 1], out[: k + 1])
            )
        out[k + 1] = f
    return out


def _monotone(f):
    return bool(np.all(np.isfinite(f)) and np.min(1.0 + grid_derivative(f)) > 0)


def reconstruct_flow(u, gamma0=None, dt=None, t_final=None, m=None):
    """Integrate ``d/dt gamma = gamma' * u`` with classical RK4.

    Parameters
    ----------
    u : FieldSeries or callable
        Left logarithmic derivative. A series supplies its own time grid
        (half steps by cubic interpolation); a callable ``u(t) -> FourierField``
        needs ``dt`` and ``t_final``.
    gamma0 : Diffeo, optional
        Initial point, identity by default.
    m : int, optional
        Grid size when ``gamma0`` is not given (default ``4 N + 1``).

    Raises
    ------
    BlowUpError
        If ``gamma`` stops being monotone; ``partial`` holds the path so far.
    """
    times, order, at = _velocity_schedule(u, dt, t_final)
    if gamma0 is None:
        gamma0 = Diffeo.identity(4 * order + 1 if m is None else m)
    mm = gamma0.m

    def rate(f, c):
        return (1.0 + grid_derivative(f)) * _field_on_grid(c, mm)

    out = _rk4_path(times, gamma0.displacement.copy(), rate, at, _monotone)
    return GroupPath(times, out)


def inverse_flow(u, m, dt=None, t_final=None):
    """Path of ``gamma(t)^{-1}`` for the flow of ``u`` from the identity.

    ``eta = gamma^{-1}`` moves along characteristics, ``d/dt eta = -u(eta)``,
    so each grid node is an independent scalar ODE (classical RK4).
    """
    times, _, at = _velocity_schedule(u, dt, t_final)
    nodes = grid(m)

    def rate(f, c):
        return -FourierField(c).evaluate(nodes + f)

    out = _rk4_path(times, np.zeros(m), rate, at, _monotone)
    return GroupPath(times, out)


def tau_apply(u, x, order=None):
    """``tau_u x = x_dot + [u, x]`` on a common time grid.

    ``x_dot`` by centered differences; the bracket is exact, then resized
    to ``order`` (default: the larger input order).
    """
    if len(u) != len(x) or not np.allclose(u.times, x.times):
        raise ValueError("u and x must share a time grid")
    order = max(u.order, x.order) if order is None else order
    xdot = x.time_derivative().resized(order)
    return xdot + bracket(u, x, order=order)


def tau_invert(u, y, order=None, m=None):
    """Solve ``tau_u x = y`` with ``x(0) = 0`` through

    .. math:: x(t) = \\mathrm{Ad}_{\\gamma(t)^{-1}} \\int_0^t
              \\mathrm{Ad}_{\\gamma(s)} y(s)\\, ds,

    where ``gamma`` is the flow of ``u`` from the identity. The time
    integral is a cumulative trapezoid rule carried in grid values.

    ``x`` is generally not band limited even when ``u`` and ``y`` are; it
    is returned at ``order`` (default ``8 * max(u.order, y.order)``) so the
    truncation stays below the time-discretization error.
    """
    if len(u) != len(y) or not np.allclose(u.times, y.times):
        raise ValueError("u and y must share a time grid")
    base = max(u.order, y.order)
    order = 8 * base if order is None else order
    mm = 4 * order + 1 if m is None else m
    path = reconstruct_flow(u, Diffeo.identity(mm))
    inv = inverse_flow(u, mm)
    nodes = grid(mm)
    integrand = np.empty((len(u), mm))
    for k, eta in enumerate(inv.displacements):
        # Ad_gamma y = gamma'(eta) y(eta) = y(eta) / eta'
        integrand[k] = FourierField(y.coeffs[k]).evaluate(nodes + eta) / (1.0 + grid_derivative(eta))
    h = y.dt
    z = np.zeros_like(integrand)
    z[1:] = np.cumsum(0.5 * h * (integrand[1:] + integrand[:-1]), axis=0)
    xvals = np.zeros_like(z)
    for k in range(1, len(u)):
        gamma = path[k]
        # Ad_{gamma^{-1}} z = z(gamma) / gamma'
        xvals[k] = trig_interp(z[k], gamma.values) / gamma.derivative()
    return FieldSeries(u.times, from_grid(xvals, order))


def horizontality_residual(path, s, order=None):
    """Largest L^2 norm over time of the part of the log derivative outside ``s``."""
    u = log_derivative(path, order)
    return float(np.max(leak(u.coeffs, s)))
