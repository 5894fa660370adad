"""Real vector fields on the circle as truncated Fourier series.

A field of order ``N`` is stored by its non-negative coefficients
``c[0..N]`` and represents

.. math:: x(\\theta) = \\sum_{|n| \\le N} c_n e^{in\\theta}, \\qquad c_{-n} = \\overline{c_n}.

All coefficient helpers operate on the last axis so that time series of
fields (shape ``(K, N+1)``) go through the same code path.
"""

from __future__ import annotations

import enum

import numpy as np

# Sign of the Hilbert multiplier J e^{in theta} = HILBERT_SIGN * i sign(n) e^{in theta}.
# Fixed by principal-value quadrature of the cotangent kernel; see hilbert_pv
# and tests/test_fields.py::test_hilbert_sign_from_kernel.
HILBERT_SIGN = 1.0


# ---------------------------------------------------------------------------
# coefficient-level helpers


def grid(m):
    """Uniform nodes ``2*pi*j/m`` on the circle."""
    return 2.0 * np.pi * np.arange(m) / m


def product_grid_size(order):
    """Grid size on which a field of ``order`` is sampled without aliasing."""
    return 2 * order + 2


def to_grid(c, m):
    """Values of the field(s) with coefficients ``c`` on ``m`` uniform nodes."""
    c = np.asarray(c, dtype=complex)
    n = c.shape[-1] - 1
    if 2 * n >= m:
        raise ValueError(f"grid of {m} nodes cannot carry order {n}")
    spec = np.zeros(c.shape[:-1] + (m // 2 + 1,), dtype=complex)
    spec[..., : n + 1] = c * m
    return np.fft.irfft(spec, n=m, axis=-1)


def from_grid(values, order):
    """Coefficients of order ``order`` interpolating grid values.

    Modes above the Nyquist limit of the grid are returned as zero; an even
    grid's Nyquist term is split evenly between ``n = +-m/2``.
    """
    values = np.asarray(values, dtype=float)
    m = values.shape[-1]
    spec = np.fft.rfft(values, axis=-1) / m
    out = np.zeros(values.shape[:-1] + (order + 1,), dtype=complex)
    k = min(order + 1, spec.shape[-1])
    out[..., :k] = spec[..., :k]
    if m % 2 == 0 and m // 2 <= order:
        out[..., m // 2] *= 0.5
    return out


def resize(c, order):
    """Truncate or zero-pad coefficients to ``order``."""
    c = np.asarray(c, dtype=complex)
    n = c.shape[-1] - 1
    if order == n:
        return c.copy()
    if order < n:
        return c[..., : order + 1].copy()
    out = np.zeros(c.shape[:-1] + (order + 1,), dtype=complex)
    out[..., : n + 1] = c
    return out


def wavenumbers(order):
    return np.arange(order + 1)


def diff_coeffs(c, k=1):
    c = np.asarray(c, dtype=complex)
    return c * (1j * wavenumbers(c.shape[-1] - 1)) ** k


def hilbert_coeffs(c):
    c = np.asarray(c, dtype=complex)
    mult = HILBERT_SIGN * 1j * np.sign(wavenumbers(c.shape[-1] - 1))
    return c * mult


def product_coeffs(a, b, order=None):
    """Exact coefficients of the pointwise product, then resized to ``order``.

    The product of orders ``N1`` and ``N2`` has order ``N1 + N2``; it is
    formed on a grid that resolves that order so nothing aliases.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    exact = (a.shape[-1] - 1) + (b.shape[-1] - 1)
    m = product_grid_size(exact)
    prod = to_grid(a, m) * to_grid(b, m)
    c = from_grid(prod, exact)
    return c if order is None else resize(c, order)


def _pad_pair(a, b):
    n = max(a.shape[-1], b.shape[-1]) - 1
    return resize(a, n), resize(b, n)


# ---------------------------------------------------------------------------
# subspaces


class Subspace(enum.Enum):
    """Coefficient-wise subspaces of Vect S^1."""

    FULL = "full"
    VECT0 = "vect0"  # zero mean
    D = "d"  # no modes |n| <= 1
    ROT = "rot"  # constants
    MOB = "mob"  # |n| <= 1

    def mask(self, order):
        n = wavenumbers(order)
        if self is Subspace.FULL:
            return np.ones(order + 1, dtype=bool)
        if self is Subspace.VECT0:
            return n != 0
        if self is Subspace.D:
            return n >= 2
        if self is Subspace.ROT:
            return n == 0
        return n <= 1

    def retains(self, n):
        n = abs(int(n))
        return bool(self.mask(max(n, 1))[n])

    @property
    def complement(self):
        return _COMPLEMENT[self]


_COMPLEMENT = {
    Subspace.VECT0: Subspace.ROT,
    Subspace.ROT: Subspace.VECT0,
    Subspace.D: Subspace.MOB,
    Subspace.MOB: Subspace.D,
    Subspace.FULL: None,
}


# ---------------------------------------------------------------------------
# fields


class FourierField:
    """A smooth real vector field on S^1 of finite Fourier order.

    Parameters
    ----------
    coeffs : array_like of complex, shape (N+1,)
        Coefficients ``c_0, ..., c_N``. ``c_0`` must be real.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=complex).reshape(-1)
        if c.size == 0:
            raise ValueError("a field needs at least the mean coefficient")
        scale = max(1.0, float(np.max(np.abs(c))))
        if abs(c[0].imag) > 1e-12 * scale:
            raise ValueError(f"mean coefficient must be real, got {c[0]!r}")
        c[0] = c[0].real
        c.setflags(write=False)
        self._c = c

    # construction -----------------------------------------------------------

    @classmethod
    def zeros(cls, order):
        return cls(np.zeros(order + 1))

    @classmethod
    def constant(cls, value, order=0):
        c = np.zeros(order + 1, dtype=complex)
        c[0] = value
        return cls(c)

    @classmethod
    def trig(cls, n, cos=0.0, sin=0.0, order=None):
        """``cos * cos(n theta) + sin * sin(n theta)``."""
        order = n if order is None else order
        c = np.zeros(order + 1, dtype=complex)
        if n == 0:
            c[0] = cos
        else:
            c[n] = 0.5 * (cos - 1j * sin)
        return cls(c)

    @classmethod
    def from_modes(cls, modes, order):
        """Build from ``(n, Re c_n, Im c_n)`` triples with ``0 <= n <= order``."""
        c = np.zeros(order + 1, dtype=complex)
        for n, re, im in modes:
            n = int(n)
            if not 0 <= n <= order:
                raise ValueError(f"mode {n} outside 0..{order}")
            c[n] += complex(re, im)
        return cls(c)

    @classmethod
    def from_values(cls, values, order):
        return cls(from_grid(values, order))

    @classmethod
    def from_function(cls, f, order, m=None):
        m = product_grid_size(2 * order) if m is None else m
        return cls.from_values(f(grid(m)), order)

    @classmethod
    def random(cls, order, rng=None, scale=1.0, decay=1.0, subspace=Subspace.FULL):
        """Random field with ``|c_n| ~ scale / (1 + n)**decay``."""
        rng = np.random.default_rng(rng)
        n = wavenumbers(order)
        c = (rng.standard_normal(order + 1) + 1j * rng.standard_normal(order + 1)) / np.sqrt(2)
        c *= scale / (1.0 + n) ** decay
        c[0] = c[0].real
        c[~subspace.mask(order)] = 0
        return cls(c)

    # data -------------------------------------------------------------------

    @property
    def coeffs(self):
        return self._c

    @property
    def order(self):
        return self._c.size - 1

    @property
    def mean(self):
        return float(self._c[0].real)

    def __len__(self):
        return self._c.size

    def __repr__(self):
        return f"FourierField(order={self.order})"

    def evaluate(self, theta):
        """Values at arbitrary angles (direct trigonometric sum)."""
        theta = np.asarray(theta, dtype=float)
        n = wavenumbers(self.order)
        phase = np.exp(1j * np.multiply.outer(theta, n[1:]))
        return self._c[0].real + 2.0 * (phase @ self._c[1:]).real

    __call__ = evaluate

    def values(self, m=None):
        m = product_grid_size(self.order) if m is None else m
        return to_grid(self._c, m)

    def sup_norm(self, m=None):
        m = max(product_grid_size(self.order), 64) if m is None else m
        return float(np.max(np.abs(self.values(m))))

    def norm(self):
        """L^2 norm for the normalized pairing (1/2pi) int x^2."""
        c = self._c
        return float(np.sqrt(abs(c[0]) ** 2 + 2.0 * np.sum(np.abs(c[1:]) ** 2)))

    # algebra ----------------------------------------------------------------

    def resized(self, order):
        return FourierField(resize(self._c, order))

    def derivative(self, k=1):
        return FourierField(diff_coeffs(self._c, k))

    def __add__(self, other):
        if isinstance(other, FourierField):
            a, b = _pad_pair(self._c, other._c)
            return FourierField(a + b)
        if np.isscalar(other):
            c = self._c.copy()
            c[0] += other
            return FourierField(c)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return FourierField(-self._c)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, FourierField):
            return FourierField(product_coeffs(self._c, other._c))
        if np.isscalar(other) and np.isreal(other):
            return FourierField(self._c * float(np.real(other)))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * (1.0 / other)


class FieldSeries:
    """Fields sampled on a uniform time grid (a curve in Vect S^1).

    Parameters
    ----------
    times : array_like, shape (K,)
        Uniformly spaced sample times.
    coeffs : array_like, shape (K, N+1)
    """

    __slots__ = ("times", "coeffs")

    def __init__(self, times, coeffs):
        times = np.array(times, dtype=float)
        coeffs = np.array(coeffs, dtype=complex)
        if coeffs.ndim != 2 or coeffs.shape[0] != times.size:
            raise ValueError("coeffs must have shape (len(times), order + 1)")
        if times.size >= 3:
            steps = np.diff(times)
            if np.ptp(steps) > 1e-9 * max(abs(steps[0]), 1e-300):
                raise ValueError("time grid must be uniform")
        coeffs[:, 0] = coeffs[:, 0].real
        times.setflags(write=False)
        coeffs.setflags(write=False)
        self.times = times
        self.coeffs = coeffs

    @classmethod
    def from_fields(cls, times, fields):
        order = max(f.order for f in fields)
        return cls(times, np.stack([resize(f.coeffs, order) for f in fields]))

    @classmethod
    def from_function(cls, times, f, order=None):
        fields = [f(t) for t in np.asarray(times, dtype=float)]
        if order is not None:
            fields = [x.resized(order) for x in fields]
        return cls.from_fields(times, fields)

    @classmethod
    def zeros_like(cls, other, order=None):
        order = other.order if order is None else order
        return cls(other.times, np.zeros((len(other), order + 1)))

    @property
    def dt(self):
        return float(self.times[1] - self.times[0])

    @property
    def order(self):
        return self.coeffs.shape[1] - 1

    def __len__(self):
        return self.times.size

    def __getitem__(self, k):
        return FourierField(self.coeffs[k])

    def __iter__(self):
        return (FourierField(c) for c in self.coeffs)

    def resized(self, order):
        return FieldSeries(self.times, resize(self.coeffs, order))

    def time_derivative(self):
        """Centered differences, second-order one-sided at the endpoints."""
        return FieldSeries(self.times, np.gradient(self.coeffs, self.dt, axis=0, edge_order=2))

    def values(self, m=None):
        m = product_grid_size(self.order) if m is None else m
        return to_grid(self.coeffs, m)

    def sup_norm(self, m=None):
        m = max(product_grid_size(self.order), 64) if m is None else m
        return float(np.max(np.abs(self.values(m))))

    def _check(self, other):
        if len(self) != len(other) or not np.allclose(self.times, other.times):
            raise ValueError("series live on different time grids")

    def __add__(self, other):
        self._check(other)
        a, b = _pad_pair(self.coeffs, other.coeffs)
        return FieldSeries(self.times, a + b)

    def __sub__(self, other):
        self._check(other)
        a, b = _pad_pair(self.coeffs, other.coeffs)
        return FieldSeries(self.times, a - b)

    def __mul__(self, scalar):
        return FieldSeries(self.times, self.coeffs * float(scalar))

    __rmul__ = __mul__


# ---------------------------------------------------------------------------
# operations


def _coeffs(x):
    return x.coeffs if isinstance(x, (FourierField, FieldSeries)) else np.asarray(x, dtype=complex)


def _wrap(like, c):
    if isinstance(like, FieldSeries):
        return FieldSeries(like.times, c)
    return FourierField(c)


def bracket(x, y, order=None):
    """Lie bracket ``[x, y] = x' y - x y'`` (negative vector-field commutator).

    Computed exactly at the combined order; ``order`` truncates the result.
    Works on single fields and on series with matching time grids.
    """
    a, b = _coeffs(x), _coeffs(y)
    c = product_coeffs(diff_coeffs(a), b) - product_coeffs(a, diff_coeffs(b))
    if order is not None:
        c = resize(c, order)
    return _wrap(x if isinstance(x, FieldSeries) else y, c)


def hilbert(x):
    """Hilbert transform ``J``; annihilates constants, ``J sin = cos``."""
    return _wrap(x, hilbert_coeffs(_coeffs(x)))


def moments(x):
    """Return ``(eta0, eta1)``: the mean and the first complex moment
    ``(1/2pi) int x e^{-i theta}``."""
    c = _coeffs(x)
    eta0 = float(c[0].real)
    eta1 = complex(c[1]) if c.size > 1 else 0j
    return eta0, eta1


def project(x, s):
    """Zero every mode outside the subspace ``s``."""
    c = _coeffs(x)
    mask = s.mask(c.shape[-1] - 1)
    return _wrap(x, np.where(mask, c, 0))


def leak(x, s):
    """L^2 norm of the part of ``x`` outside ``s``."""
    c = np.asarray(_coeffs(x))
    outside = np.where(s.mask(c.shape[-1] - 1), 0, c)
    w = np.full(c.shape[-1], 2.0)
    w[0] = 1.0
    return np.sqrt(np.sum(w * np.abs(outside) ** 2, axis=-1))


def hilbert_pv(f, theta, nodes=4096):
    """Principal-value quadrature of the defining kernel of ``J``,

    .. math:: Jx(\\theta) = \\frac{1}{2\\pi}\\,\\mathrm{p.v.}\\int_0^{2\\pi}
              \\frac{x(t)}{\\tan((t-\\theta)/2)}\\,dt .

    Nodes are placed symmetrically about the singularity (an even count,
    half-step offsets) so the odd singular part cancels in pairs and the
    remaining smooth integrand is integrated with spectral accuracy.

    Parameters
    ----------
    f : callable
        Vectorized function of the angle.
    theta : float or ndarray
        Evaluation angles.
    nodes : int
        Even number of quadrature nodes.
    """
    if nodes % 2:
        raise ValueError("node count must be even")
    h = 2.0 * np.pi / nodes
    s = (np.arange(nodes) + 0.5) * h - np.pi
    theta = np.asarray(theta, dtype=float)
    t = np.add.outer(theta, s)
    return (f(t) / np.tan(0.5 * s)).sum(axis=-1) * h / (2.0 * np.pi)
