import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from circlegeo.diffeo import (
    Diffeo,
    GroupPath,
    adjoint_action,
    grid_derivative,
    horizontality_residual,
    inverse_flow,
    log_derivative,
    reconstruct_flow,
    tau_apply,
    tau_invert,
    trig_interp,
)
from circlegeo.errors import BlowUpError, DomainError
from circlegeo.fields import FieldSeries, FourierField, Subspace, bracket, grid

seeds = st.integers(0, 2**32 - 1)


def frozen(t, x):
    return FieldSeries(t, np.tile(x.coeffs, (t.size, 1)))


# -- interpolation helpers ----------------------------------------------------


def test_trig_interp_reproduces_band_limited_functions():
    x = FourierField.random(5, 1)
    pts = np.linspace(-1, 8, 23)
    np.testing.assert_allclose(trig_interp(x(grid(16)), pts), x(pts), atol=1e-13)
    np.testing.assert_allclose(trig_interp(x(grid(17)), pts, deriv=1), x.derivative()(pts), atol=1e-12)


def test_grid_derivative_batched():
    x = FourierField.random(4, 2)
    vals = np.stack([x(grid(12)), 2 * x(grid(12))])
    d = grid_derivative(vals)
    np.testing.assert_allclose(d[1], 2 * x.derivative()(grid(12)), atol=1e-12)


# -- group operations -----------------------------------------------------------


def test_identity_and_rotation():
    ident = Diffeo.identity(16)
    assert ident.is_monotone
    np.testing.assert_array_equal(ident.values, grid(16))
    rot = Diffeo.rotation(0.7, 16)
    np.testing.assert_allclose(rot(np.array([0.1, 5.0])), [0.8, 5.7])


def test_from_field():
    x = FourierField.trig(2, sin=0.1)
    phi = Diffeo.from_field(x, 32)
    np.testing.assert_allclose(phi(1.3), 1.3 + 0.1 * np.sin(2.6), atol=1e-14)


def test_random_diffeo_bounds():
    phi = Diffeo.random(128, 3, amplitude=0.3)
    assert np.max(np.abs(phi.displacement)) <= 0.3 + 1e-15
    assert np.min(phi.derivative()) >= 0.5 - 1e-12


def test_compose_with_rotations():
    phi = Diffeo.random(64, 4)
    rot = Diffeo.rotation(0.4, 64)
    np.testing.assert_allclose((rot @ phi).values, phi.values + 0.4, atol=1e-14)
    np.testing.assert_allclose((phi @ rot).values, phi(grid(64) + 0.4), atol=1e-13)


@given(seeds)
@settings(max_examples=20, deadline=None)
def test_inverse_roundtrip(seed):
    # the inverse of a steep element has a wider spectrum; 128 nodes can under-resolve it
    phi = Diffeo.random(256, seed, amplitude=0.3)
    inv = phi.inverse()
    assert np.max(np.abs((phi @ inv).displacement)) < 1e-8
    assert np.max(np.abs((inv @ phi).displacement)) < 1e-8


def test_universal_cover_periodicity():
    phi = Diffeo.random(64, 5)
    th = np.array([0.3, 1.7])
    np.testing.assert_allclose(phi(th + 2 * np.pi), phi(th) + 2 * np.pi, atol=1e-13)


def test_non_monotone_inverse_raises():
    phi = Diffeo(1.5 * np.sin(grid(32)))
    assert not phi.is_monotone
    with pytest.raises(DomainError):
        phi.inverse_values()
    with pytest.raises(DomainError):
        adjoint_action(phi, FourierField.trig(1, cos=1.0))


# -- adjoint action -------------------------------------------------------------


def test_adjoint_action_identity():
    x = FourierField.random(6, 6)
    np.testing.assert_allclose(adjoint_action(Diffeo.identity(64), x).coeffs, x.coeffs, atol=1e-14)


def test_adjoint_action_rotation_is_shift():
    x = FourierField.random(6, 7)
    y = adjoint_action(Diffeo.rotation(0.9, 64), x)
    th = np.linspace(0, 6, 17)
    np.testing.assert_allclose(y(th), x(th - 0.9), atol=1e-13)


def test_adjoint_action_roundtrip():
    phi = Diffeo.random(257, 8, amplitude=0.2)
    x = FourierField.random(6, 9)
    back = adjoint_action(phi, adjoint_action(phi.inverse(), x, order=64), order=6)
    assert np.max(np.abs(back(grid(64)) - x(grid(64)))) < 1e-8


def test_adjoint_action_is_a_homomorphism_of_brackets():
    # Ad_phi [x, y] = [Ad_phi x, Ad_phi y] up to truncation
    phi = Diffeo.random(513, 10, amplitude=0.1)
    x, y = FourierField.random(4, 11), FourierField.random(4, 12)
    lhs = adjoint_action(phi, bracket(x, y), order=100)
    rhs = bracket(adjoint_action(phi, x, order=100), adjoint_action(phi, y, order=100), order=100)
    assert np.max(np.abs(lhs(grid(64)) - rhs(grid(64)))) < 1e-8


# -- paths and flows ------------------------------------------------------------------


def test_log_derivative_of_rotation_path():
    t = np.linspace(0, 1, 11)
    path = GroupPath(t, np.outer(0.3 * t, np.ones(33)))
    u = log_derivative(path)
    np.testing.assert_allclose(u.coeffs[:, 0], 0.3, atol=1e-14)
    np.testing.assert_allclose(u.coeffs[:, 1:], 0.0, atol=1e-14)
    assert horizontality_residual(path, Subspace.VECT0) == pytest.approx(0.3)


def test_log_derivative_of_constant_path():
    phi = Diffeo.random(33, 1)
    path = GroupPath.from_diffeos(np.linspace(0, 1, 5), [phi] * 5)
    assert np.max(np.abs(log_derivative(path).coeffs)) < 1e-15


def test_log_derivative_needs_three_samples():
    with pytest.raises(ValueError):
        log_derivative(GroupPath([0.0, 0.1], np.zeros((2, 9))))


def test_log_derivative_rejects_non_monotone():
    bad = 1.5 * np.sin(grid(33))
    with pytest.raises(DomainError):
        log_derivative(GroupPath([0.0, 0.5, 1.0], [np.zeros(33), bad, bad]))


def test_reconstruct_flow_constant_velocity():
    t = np.linspace(0, 1, 21)
    path = reconstruct_flow(frozen(t, FourierField.constant(0.5, 3)))
    np.testing.assert_allclose(path.displacements, np.outer(0.5 * t, np.ones(path.m)), atol=1e-14)


def test_reconstruct_flow_zero_velocity():
    t = np.linspace(0, 1, 5)
    phi = Diffeo.random(17, 3)
    path = reconstruct_flow(frozen(t, FourierField.zeros(4)), gamma0=phi)
    for g in path:
        np.testing.assert_array_equal(g.displacement, phi.displacement)


def test_reconstruct_flow_against_per_node_ode():
    # for time-independent u the flow is gamma(t, theta) = Phi_t(theta) with
    # dPhi/dt = u(Phi): one scalar ODE per node
    u = FourierField.trig(1, cos=1.0)
    t = np.linspace(0, 0.2, 201)
    path = reconstruct_flow(frozen(t, u), m=64)
    sol = solve_ivp(lambda s, y: np.cos(y), (0, 0.2), grid(64), t_eval=[0.2], rtol=1e-13, atol=1e-13)
    assert np.max(np.abs(path[-1].values - sol.y[:, -1])) < 1e-8


def test_reconstruct_flow_accepts_callable():
    u = FourierField.trig(2, sin=0.2)
    a = reconstruct_flow(lambda s: u, dt=0.01, t_final=0.5, m=33)
    b = reconstruct_flow(frozen(np.linspace(0, 0.5, 51), u), m=33)
    np.testing.assert_allclose(a.displacements, b.displacements, atol=1e-14)
    with pytest.raises(ValueError):
        reconstruct_flow(lambda s: u)


def test_reconstruct_flow_blow_up():
    u = FourierField.trig(1, sin=2.0)
    with pytest.raises(BlowUpError) as info:
        reconstruct_flow(lambda s: u, dt=0.01, t_final=5.0, m=33)
    assert 0 < info.value.time < 5.0
    assert len(info.value.partial) >= 1


def test_log_derivative_of_reconstructed_flow():
    t = np.linspace(0, 1, 1001)
    u0, u1 = FourierField.random(4, 13, scale=0.2, decay=2), FourierField.random(4, 14, scale=0.1, decay=2)
    u = FieldSeries(t, np.outer(np.ones_like(t), u0.coeffs) + np.outer(np.sin(2 * t), u1.coeffs))
    back = log_derivative(reconstruct_flow(u), order=4)
    assert (back - u).sup_norm() < 1e-6


def test_flow_composed_with_inverse_flow_is_identity():
    t = np.linspace(0, 1, 201)
    u = frozen(t, FourierField.random(4, 15, scale=0.2, decay=2))
    path = reconstruct_flow(u, m=257)
    inv = inverse_flow(u, 257)
    assert np.max(np.abs((path[-1] @ inv[-1]).displacement)) < 1e-10


def test_horizontality_of_vect0_flow():
    t = np.linspace(0, 1, 101)
    u = frozen(t, FourierField.random(4, 16, scale=0.2, subspace=Subspace.VECT0))
    assert horizontality_residual(reconstruct_flow(u), Subspace.VECT0) < 1e-6


def test_horizontality_of_cos_flow_against_d():
    t = np.linspace(0, 0.1, 101)
    u = frozen(t, FourierField.trig(1, cos=1.0))
    r = horizontality_residual(reconstruct_flow(u, m=129), Subspace.D, order=16)
    assert r == pytest.approx(np.sqrt(0.5), abs=1e-6)


# -- tau calculus ----------------------------------------------------------------------


def test_tau_apply_with_zero_velocity_is_time_derivative():
    t = np.linspace(0, 1, 11)
    x = FieldSeries(t, np.outer(t**2, FourierField.random(3, 1).coeffs))
    np.testing.assert_allclose(tau_apply(frozen(t, FourierField.zeros(3)), x).coeffs, x.time_derivative().coeffs)


def test_tau_apply_on_constant_curves_is_bracket():
    t = np.linspace(0, 1, 5)
    u, x = FourierField.random(3, 2), FourierField.random(3, 3)
    out = tau_apply(frozen(t, u), frozen(t, x))
    np.testing.assert_allclose(out.coeffs[2], bracket(u, x, order=3).coeffs, atol=1e-14)


def test_tau_invert_zero_velocity_integrates():
    t = np.linspace(0, 1, 101)
    y0 = FourierField.random(3, 4)
    y = FieldSeries(t, np.outer(np.cos(t), y0.coeffs))
    x = tau_invert(frozen(t, FourierField.zeros(3)), y, order=3)
    np.testing.assert_allclose(x.coeffs[-1], np.sin(1.0) * y0.coeffs, atol=1e-5)
    np.testing.assert_array_equal(x.coeffs[0], 0)


def test_tau_invert_zero_source():
    t = np.linspace(0, 1, 11)
    x = tau_invert(frozen(t, FourierField.random(3, 5, scale=0.2)), frozen(t, FourierField.zeros(3)))
    assert np.max(np.abs(x.coeffs)) == 0


def test_tau_roundtrip():
    rng = np.random.default_rng(6)
    t = np.linspace(0, 1, 1001)
    u0, u1 = FourierField.random(8, rng, 0.2, 2), FourierField.random(8, rng, 0.1, 2)
    y0, y1 = FourierField.random(8, rng, 0.5, 2), FourierField.random(8, rng, 0.5, 2)
    u = FieldSeries(t, np.outer(np.ones_like(t), u0.coeffs) + np.outer(np.sin(np.pi * t), u1.coeffs))
    y = FieldSeries(t, np.outer(np.cos(t), y0.coeffs) + np.outer(t, y1.coeffs))
    x = tau_invert(u, y)
    assert (tau_apply(u, x, order=x.order) - y.resized(x.order)).sup_norm() < 1e-6


def test_tau_requires_common_grid():
    a = frozen(np.linspace(0, 1, 5), FourierField.zeros(2))
    b = frozen(np.linspace(0, 1, 6), FourierField.zeros(2))
    with pytest.raises(ValueError):
        tau_apply(a, b)
    with pytest.raises(ValueError):
        tau_invert(a, b)
