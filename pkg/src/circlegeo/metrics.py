"""Invariant inner products on Vect S^1 and their inertia operators.

The two-parameter family ``(x, y)_{ab}`` is built from the skew form

.. math:: \\omega_{\\alpha\\beta}(x,y) = \\frac{1}{2\\pi}\\int_0^{2\\pi}
          \\alpha x y' + \\beta x' y''\\,d\\theta

and the Hilbert transform ``J``. With respect to the L^2 pairing
``<x, y> = (1/2pi) int x y`` every operator here is a Fourier multiplier,
so inertia operators are stored as multiplier tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, SingularModeError
from .fields import (
    HILBERT_SIGN,
    FourierField,
    Subspace,
    diff_coeffs,
    hilbert,
    product_coeffs,
    product_grid_size,
    resize,
    to_grid,
    wavenumbers,
)


@dataclass(frozen=True)
class MetricParams:
    """The pair ``(alpha, beta)`` selecting a metric of the family."""

    alpha: float
    beta: float
    degenerate_modes: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "degenerate_modes", _degenerate_modes(self.alpha, self.beta))

    @property
    def positive_definite(self):
        a, b = self.alpha, self.beta
        return (b >= 0 and -a < b) or (b == 0 and a > 0)

    def symbol(self, order):
        """``alpha + beta n^2`` for ``n = 0..order`` (minus the symbol of L)."""
        n = wavenumbers(order)
        return self.alpha + self.beta * n**2


def _degenerate_modes(alpha, beta):
    # {n >= 0 : alpha = -n^2 beta}; the all-modes case alpha = beta = 0 is
    # flagged with the sentinel -1.
    if beta == 0:
        return frozenset({-1}) if alpha == 0 else frozenset()
    ratio = -alpha / beta
    if ratio < 0:
        return frozenset()
    n = round(math.sqrt(ratio))
    return frozenset({n}) if n * n == ratio else frozenset()


VELLING_KIRILLOV = MetricParams(1.0, 0.0)
WEIL_PETERSSON = MetricParams(-1.0, 1.0)


def _coeffs(x):
    return x.coeffs if isinstance(x, FourierField) else np.asarray(x, dtype=complex)


def apply_L(p, x):
    """``L_{ab} x = beta x'' - alpha x``."""
    c = _coeffs(x)
    return FourierField(-p.symbol(c.size - 1) * c)


def _mean_of_product(u, v):
    # (1/2pi) int u v by trapezoid quadrature on a grid resolving the product
    m = product_grid_size(max(u.size, v.size) - 1)
    return float(np.mean(to_grid(u, m) * to_grid(v, m)))


def omega(p, x, y):
    """Skew form ``(1/2pi) int (alpha x y' + beta x' y'')`` by quadrature."""
    a, b = _coeffs(x), _coeffs(y)
    out = 0.0
    if p.alpha:
        out += p.alpha * _mean_of_product(a, diff_coeffs(b))
    if p.beta:
        out += p.beta * _mean_of_product(diff_coeffs(a), diff_coeffs(b, 2))
    return out


def l2_inner(x, y):
    """``<x, y> = (1/2pi) int x y`` evaluated by Parseval."""
    a, b = _coeffs(x), _coeffs(y)
    n = max(a.size, b.size) - 1
    a, b = resize(a, n), resize(b, n)
    s = a * np.conj(b)
    return float(s[0].real + 2.0 * s[1:].real.sum())


def inner(p, x, y):
    """The invariant inner product

    ``(x, y)_{ab} = omega(J(x - eta0 x), y - eta0 y) + eta0(x) eta0(y)``.

    Vect0 and rot are orthogonal by construction.
    """
    x0, y0 = x.mean, y.mean
    return omega(p, hilbert(x - x0), y - y0) + x0 * y0


def ad_transpose(x, y, order=None):
    """L^2 adjoint of ``ad_x``: ``x y' + 2 x' y`` (exact, then resized)."""
    a, b = _coeffs(x), _coeffs(y)
    c = product_coeffs(a, diff_coeffs(b)) + 2.0 * product_coeffs(diff_coeffs(a), b)
    if order is not None:
        c = resize(c, order)
    return FourierField(c)


# ---------------------------------------------------------------------------
# inertia operators


@dataclass(frozen=True)
class InertiaKind:
    """Inertia operator ``A`` with ``(x, y)_metric = <A x, y>``.

    ``kind`` is ``"l2"``, ``"sobolev"`` (``A = -L_{ab}``) or ``"kaehler"``
    (``A = L_{ab} J d/dtheta``, multiplier ``|n| (alpha + beta n^2)``).
    """

    kind: str
    params: MetricParams | None = None
    domain: Subspace = Subspace.FULL

    def __post_init__(self):
        if self.kind not in ("l2", "sobolev", "kaehler"):
            raise ValueError(f"unknown inertia kind {self.kind!r}")
        if self.kind != "l2" and self.params is None:
            raise ValueError(f"{self.kind} inertia needs MetricParams")

    @classmethod
    def l2(cls, domain=Subspace.FULL):
        return cls("l2", None, domain)

    @classmethod
    def sobolev(cls, params, domain=Subspace.FULL):
        return cls("sobolev", params, domain)

    @classmethod
    def kaehler(cls, params, domain=Subspace.VECT0):
        return cls("kaehler", params, domain)

    def multipliers(self, order):
        n = wavenumbers(order)
        if self.kind == "l2":
            a = np.ones(order + 1)
        elif self.kind == "sobolev":
            a = self.params.symbol(order).astype(float)
        else:
            # -(alpha + beta n^2) * (sigma i sign n) * (i n) = sigma |n| (alpha + beta n^2)
            a = HILBERT_SIGN * np.abs(n) * self.params.symbol(order)
            a[0] = 0.0
        return a


def _check_support(c, domain):
    mask = domain.mask(c.size - 1)
    scale = max(1.0, float(np.max(np.abs(c))))
    bad = np.nonzero((~mask) & (np.abs(c) > 1e-12 * scale))[0]
    if bad.size:
        raise DomainError(f"field has modes {bad.tolist()} outside the {domain.value} domain")


def inertia_apply(k, x):
    c = _coeffs(x)
    _check_support(c, k.domain)
    return FourierField(k.multipliers(c.size - 1) * c)


def inertia_invert(k, m):
    """Solve ``A x = m`` mode by mode.

    Raises
    ------
    SingularModeError
        If ``m`` has weight on a mode where the multiplier vanishes.
    """
    c = _coeffs(m)
    _check_support(c, k.domain)
    a = k.multipliers(c.size - 1)
    scale = max(1.0, float(np.max(np.abs(c))))
    active = np.abs(c) > 1e-14 * scale
    singular = np.nonzero(active & (a == 0))[0]
    if singular.size:
        raise SingularModeError(singular[0])
    out = np.zeros_like(c)
    np.divide(c, a, out=out, where=a != 0)
    return FourierField(out)


# ---------------------------------------------------------------------------
# univalent tangent vectors


class UnivalentTangent:
    """Tangent vector ``F(z) = sum_{n>=1} a_n z^n`` of normalized univalent maps.

    ``coeffs[k]`` holds ``a_{k+1}``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=complex).reshape(-1)
        c.setflags(write=False)
        self.coeffs = c

    @classmethod
    def monomial(cls, n, value=1.0, order=None):
        order = n if order is None else order
        c = np.zeros(order, dtype=complex)
        c[n - 1] = value
        return cls(c)

    @property
    def order(self):
        return self.coeffs.size

    def __add__(self, other):
        n = max(self.order, other.order)
        a = np.zeros(n, dtype=complex)
        b = np.zeros(n, dtype=complex)
        a[: self.order] = self.coeffs
        b[: other.order] = other.coeffs
        return UnivalentTangent(a + b)

    def __mul__(self, s):
        return UnivalentTangent(self.coeffs * s)

    __rmul__ = __mul__

    def __repr__(self):
        return f"UnivalentTangent(order={self.order})"


def to_univalent(x, atol=1e-12):
    """Tangent map ``x -> F`` with ``F(e^{i theta}) = -(i/2)(x - iJx)``.

    Boundary values of ``x - iJx`` keep only positive frequencies, so the
    Taylor coefficients are read off the positive modes of ``x``.
    """
    c = _coeffs(x)
    if abs(c[0]) > atol * max(1.0, float(np.max(np.abs(c)))):
        raise DomainError(f"to_univalent needs a zero-mean field, eta0 = {c[0].real:g}")
    n = wavenumbers(c.size - 1)[1:]
    analytic = c[1:] * (1.0 + HILBERT_SIGN * np.sign(n))
    return UnivalentTangent(-0.5j * analytic)


def kirillov_metric(p, F, G):
    """Hermitian form ``2 sum (alpha n + beta n^3) a_n conj(b_n)``."""
    n = max(F.order, G.order)
    a = np.zeros(n, dtype=complex)
    b = np.zeros(n, dtype=complex)
    a[: F.order] = F.coeffs
    b[: G.order] = G.coeffs
    k = np.arange(1, n + 1)
    return complex(2.0 * np.sum((p.alpha * k + p.beta * k**3) * a * np.conj(b)))
