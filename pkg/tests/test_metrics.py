import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circlegeo.errors import DomainError, SingularModeError
from circlegeo.fields import FourierField, Subspace, bracket, grid, hilbert, hilbert_pv
from circlegeo.metrics import (
    VELLING_KIRILLOV,
    WEIL_PETERSSON,
    InertiaKind,
    MetricParams,
    UnivalentTangent,
    ad_transpose,
    apply_L,
    inertia_apply,
    inertia_invert,
    inner,
    kirillov_metric,
    l2_inner,
    omega,
    to_univalent,
)

seeds = st.integers(0, 2**32 - 1)
POSITIVE = [MetricParams(1, 0), MetricParams(1, 1), MetricParams(0, 1), MetricParams(0.5, 2.0)]
ALL = POSITIVE + [WEIL_PETERSSON, MetricParams(-4, 1), MetricParams(2, -1)]


def cos_(n=1, a=1.0, order=None):
    return FourierField.trig(n, cos=a, order=order)


def sin_(n=1, a=1.0, order=None):
    return FourierField.trig(n, sin=a, order=order)


def one():
    return FourierField.constant(1.0)


def test_named_metrics():
    assert VELLING_KIRILLOV == MetricParams(1.0, 0.0)
    assert WEIL_PETERSSON == MetricParams(-1.0, 1.0)


@pytest.mark.parametrize(
    "p, expected",
    [
        (MetricParams(1, 0), True),
        (MetricParams(1, 1), True),
        (MetricParams(0, 1), True),
        (MetricParams(-1, 1), False),
        (MetricParams(0, 0), False),
        (MetricParams(-1, 0), False),
        (MetricParams(2, -1), False),
    ],
)
def test_positive_definite_flag(p, expected):
    assert p.positive_definite is expected


def test_degenerate_modes():
    assert WEIL_PETERSSON.degenerate_modes == frozenset({1})
    assert MetricParams(-4, 1).degenerate_modes == frozenset({2})
    assert MetricParams(1, 0).degenerate_modes == frozenset()
    assert MetricParams(0, 1).degenerate_modes == frozenset({0})
    assert MetricParams(0, 0).degenerate_modes == frozenset({-1})
    assert MetricParams(-2, 1).degenerate_modes == frozenset()


# -- L and omega ---------------------------------------------------------------


def test_apply_L_examples():
    x = FourierField.random(5, 0)
    np.testing.assert_allclose(apply_L(MetricParams(1, 0), x).coeffs, -x.coeffs)
    np.testing.assert_allclose(apply_L(MetricParams(0, 1), sin_()).coeffs, -sin_().coeffs)
    np.testing.assert_allclose(apply_L(WEIL_PETERSSON, cos_(2)).coeffs, cos_(2, -3.0).coeffs)


def test_omega_examples():
    assert omega(MetricParams(1, 0), cos_(), sin_()) == pytest.approx(0.5)
    assert omega(MetricParams(0, 1), sin_(), cos_()) == pytest.approx(-0.5)


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_omega_skew_and_bilinear(seed):
    rng = np.random.default_rng(seed)
    p = MetricParams(*rng.standard_normal(2))
    x, y, z = (FourierField.random(6, rng) for _ in range(3))
    assert abs(omega(p, x, x)) < 1e-12
    assert omega(p, x, y) == pytest.approx(-omega(p, y, x), abs=1e-12)
    assert omega(p, x + 2.0 * z, y) == pytest.approx(omega(p, x, y) + 2 * omega(p, z, y), abs=1e-12)


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_gelfand_fuchs_cocycle_identity(seed):
    rng = np.random.default_rng(seed)
    p = MetricParams(*rng.standard_normal(2))
    x, y, z = (FourierField.random(5, rng) for _ in range(3))
    s = omega(p, x, bracket(y, z)) + omega(p, y, bracket(z, x)) + omega(p, z, bracket(x, y))
    assert abs(s) < 1e-12


def test_omega_through_L_multiplier():
    # omega(x, y) = <L x', y> for every (alpha, beta)
    x, y = FourierField.random(7, 1), FourierField.random(7, 2)
    for p in ALL:
        assert omega(p, x, y) == pytest.approx(l2_inner(apply_L(p, x.derivative()), y), abs=1e-12)


# -- inner products ----------------------------------------------------------------


def test_l2_inner_examples():
    assert l2_inner(cos_(), cos_()) == pytest.approx(0.5)
    assert l2_inner(cos_(), sin_()) == pytest.approx(0.0)
    assert l2_inner(one(), one()) == pytest.approx(1.0)


def test_l2_inner_matches_quadrature():
    x, y = FourierField.random(6, 3), FourierField.random(4, 4)
    th = grid(64)
    assert l2_inner(x, y) == pytest.approx(np.mean(x(th) * y(th)), abs=1e-14)


def test_inner_examples():
    assert inner(MetricParams(1, 0), cos_(), cos_()) == pytest.approx(0.5)
    for p in ALL:
        assert inner(p, one(), one()) == pytest.approx(1.0)
        assert inner(p, cos_(), one()) == pytest.approx(0.0, abs=1e-15)


def test_inner_against_kernel_quadrature():
    # J applied through the p.v. integral instead of the multiplier
    p = MetricParams(1.0, 1.0)
    x, y = FourierField.random(5, 7, subspace=Subspace.VECT0), FourierField.random(5, 8, subspace=Subspace.VECT0)
    m = 32
    th = grid(m)
    jx = FourierField.from_values(hilbert_pv(x.evaluate, th), 5)
    assert inner(p, x, y) == pytest.approx(omega(p, jx, y), abs=1e-10)


@pytest.mark.parametrize("p", ALL, ids=str)
def test_inner_equals_inertia_route(p):
    rng = np.random.default_rng(5)
    for _ in range(20):
        x, y = FourierField.random(16, rng), FourierField.random(16, rng)
        via_L = l2_inner(apply_L(p, hilbert(x.derivative())) + x.mean, y)
        assert abs(inner(p, x, y) - via_L) < 1e-12


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_inner_symmetric_and_positive(seed):
    rng = np.random.default_rng(seed)
    p = POSITIVE[int(rng.integers(len(POSITIVE)))]
    x, y = FourierField.random(8, rng), FourierField.random(8, rng)
    assert inner(p, x, y) == pytest.approx(inner(p, y, x), abs=1e-12)
    assert inner(p, x, x) > 0


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_rotation_invariance_of_inner(seed):
    rng = np.random.default_rng(seed)
    p = MetricParams(*rng.standard_normal(2))
    x, y = FourierField.random(8, rng), FourierField.random(8, rng)
    assert abs(inner(p, x.derivative(), y) + inner(p, x, y.derivative())) < 1e-10


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_LJ_is_skew(seed):
    rng = np.random.default_rng(seed)
    p = MetricParams(*rng.standard_normal(2))
    x = FourierField.random(8, rng)
    assert abs(l2_inner(apply_L(p, hilbert(x)), x)) < 1e-12


# -- ad transpose -----------------------------------------------------------------


def test_ad_transpose_examples():
    np.testing.assert_allclose(ad_transpose(one(), sin_()).coeffs[:2], cos_().coeffs, atol=1e-15)
    r = ad_transpose(sin_(), sin_())
    np.testing.assert_allclose(r.resized(2).coeffs, sin_(2, 1.5).coeffs, atol=1e-15)


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_ad_transpose_adjointness(seed):
    rng = np.random.default_rng(seed)
    x, y, z = (FourierField.random(16, rng) for _ in range(3))
    assert abs(l2_inner(ad_transpose(x, y), z) - l2_inner(y, bracket(x, z))) < 1e-10


def test_ad_transpose_matches_pointwise_formula():
    x, y = FourierField.random(6, 1), FourierField.random(6, 2)
    th = np.linspace(0, 6, 40)
    ref = x(th) * y.derivative()(th) + 2 * x.derivative()(th) * y(th)
    np.testing.assert_allclose(ad_transpose(x, y)(th), ref, atol=1e-12)


# -- inertia ------------------------------------------------------------------------


def test_inertia_multipliers():
    n = np.arange(6)
    np.testing.assert_allclose(InertiaKind.kaehler(MetricParams(1, 0)).multipliers(5), n)
    np.testing.assert_allclose(InertiaKind.kaehler(WEIL_PETERSSON).multipliers(5), n * (n**2 - 1))
    np.testing.assert_allclose(InertiaKind.sobolev(MetricParams(1, 1)).multipliers(5), 1 + n**2)
    np.testing.assert_allclose(InertiaKind.l2().multipliers(5), 1.0)


def test_inertia_apply_examples():
    out = inertia_apply(InertiaKind.sobolev(MetricParams(1, 1)), cos_())
    np.testing.assert_allclose(out.coeffs, cos_(1, 2.0).coeffs)
    x = FourierField.random(5, 3)
    np.testing.assert_allclose(inertia_apply(InertiaKind.l2(), x).coeffs, x.coeffs)
    k = InertiaKind.kaehler(MetricParams(1, 0))
    np.testing.assert_allclose(inertia_apply(k, sin_(3)).coeffs, sin_(3, 3.0).coeffs)


def test_kaehler_output_has_zero_mean():
    k = InertiaKind.kaehler(MetricParams(1, 1), Subspace.FULL)
    assert inertia_apply(k, FourierField.random(6, 0)).mean == 0


def test_inertia_is_the_metric():
    # (x, y)_{ab} = <A x, y> on Vect0
    p = MetricParams(0.5, 2.0)
    k = InertiaKind.kaehler(p)
    x, y = (FourierField.random(9, s, subspace=Subspace.VECT0) for s in (1, 2))
    assert l2_inner(inertia_apply(k, x), y) == pytest.approx(inner(p, x, y), abs=1e-12)


def test_inertia_apply_rejects_unsupported_modes():
    with pytest.raises(DomainError):
        inertia_apply(InertiaKind.kaehler(WEIL_PETERSSON, Subspace.D), cos_() + sin_(3))


def test_inertia_invert_examples():
    k = InertiaKind.kaehler(MetricParams(1, 0))
    np.testing.assert_allclose(inertia_invert(k, sin_(2, 4.0)).coeffs, sin_(2, 2.0).coeffs)
    with pytest.raises(SingularModeError) as info:
        inertia_invert(InertiaKind.kaehler(WEIL_PETERSSON, Subspace.FULL), cos_() + sin_(3))
    assert info.value.mode == 1


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_inertia_roundtrip(seed):
    rng = np.random.default_rng(seed)
    for k, s in (
        (InertiaKind.kaehler(MetricParams(1, 1)), Subspace.VECT0),
        (InertiaKind.kaehler(WEIL_PETERSSON, Subspace.D), Subspace.D),
        (InertiaKind.sobolev(MetricParams(1, 1)), Subspace.FULL),
    ):
        x = FourierField.random(10, rng, subspace=s)
        np.testing.assert_allclose(inertia_invert(k, inertia_apply(k, x)).coeffs, x.coeffs, atol=1e-12)
        np.testing.assert_allclose(inertia_apply(k, inertia_invert(k, x)).coeffs, x.coeffs, atol=1e-12)


def test_unknown_inertia_kind():
    with pytest.raises(ValueError):
        InertiaKind("h2", MetricParams(1, 0))
    with pytest.raises(ValueError):
        InertiaKind("sobolev")


# -- univalent tangent vectors -------------------------------------------------------


def test_to_univalent_examples():
    assert np.all(to_univalent(FourierField.zeros(3)).coeffs == 0)
    assert to_univalent(cos_()).coeffs[0] == pytest.approx(-0.5j)
    assert to_univalent(sin_()).coeffs[0] == pytest.approx(-0.5)


def test_to_univalent_requires_zero_mean():
    with pytest.raises(DomainError):
        to_univalent(cos_() + 1.0)


def test_to_univalent_boundary_values():
    # F(e^{i theta}) = -(i/2)(x - iJx)
    x = FourierField.random(6, 4, subspace=Subspace.VECT0)
    F = to_univalent(x)
    th = np.linspace(0, 2 * np.pi, 13)
    z = np.exp(1j * th)
    series = sum(a * z ** (k + 1) for k, a in enumerate(F.coeffs))
    np.testing.assert_allclose(series, -0.5j * (x(th) - 1j * hilbert(x)(th)), atol=1e-14)


def test_kirillov_examples():
    z = UnivalentTangent.monomial(1)
    z2 = UnivalentTangent.monomial(2)
    assert kirillov_metric(MetricParams(1, 0), z, z) == pytest.approx(2.0)
    assert kirillov_metric(MetricParams(0, 1), z2, z2) == pytest.approx(16.0)
    assert kirillov_metric(MetricParams(-4, 1), z2, z2) == pytest.approx(0.0)


def test_univalent_tangent_algebra():
    a = UnivalentTangent([1, 2j])
    b = UnivalentTangent.monomial(3, 5.0)
    np.testing.assert_allclose((a + 2 * b).coeffs, [1, 2j, 10])


@pytest.mark.parametrize("p", [MetricParams(1, 0), MetricParams(1, 1), WEIL_PETERSSON, MetricParams(-3, 2)], ids=str)
def test_kirillov_real_part_is_inner_and_imag_is_omega(p):
    rng = np.random.default_rng(8)
    s = Subspace.D if p == WEIL_PETERSSON else Subspace.VECT0
    for _ in range(20):
        x, y = FourierField.random(16, rng, subspace=s), FourierField.random(16, rng, subspace=s)
        k = kirillov_metric(p, to_univalent(x), to_univalent(y))
        assert abs(k.real - inner(p, x, y)) < 1e-10
        assert abs(k.imag - omega(p, x, y)) < 1e-10
