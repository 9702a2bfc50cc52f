import numpy as np
import pytest

from liemech.algebra import LieAlgebra, group_exp
from liemech.builders import so3
from liemech.dynamics import IntegratorConfig, rigid_body_hamiltonian, simulate_lie_poisson
from liemech.errors import LevelSetError, UnsupportedError
from liemech.moment import CotangentPoint, isotropy_algebra, moment_left
from liemech.reconstruction import (
    AlgebraCurve,
    chart_point,
    direct_chart_integration,
    lift_reduced,
    minimal_rotation,
    reconstruct_collective,
    rigid_body_chart_field,
    rigid_body_companion,
    solve_group_ode,
)

I321 = (3.0, 2.0, 1.0)
MU0 = np.array([0.3, -1.1, 0.8])
A0 = group_exp(so3(), [0.2, -0.5, 0.9])


def _xi(t):
    return np.array([np.sin(t), 0.5 * np.cos(2 * t), 0.3 + 0.1 * t])


def test_zero_field_constant_curve():
    curve = solve_group_ode(so3(), lambda t: np.zeros(3), A0, T=1.0, dt=0.1)
    assert len(curve.samples) == 11
    assert all(np.array_equal(a, A0) for a in curve.samples)


def test_constant_field_is_one_parameter_subgroup():
    g = so3()
    xi = np.array([0.4, -0.3, 1.2])
    curve = solve_group_ode(g, lambda t: xi, A0, T=3.0, dt=0.01)
    for t, a in zip(curve.times, curve.samples):
        np.testing.assert_allclose(a, A0 @ group_exp(g, xi, t), atol=1e-12)


def test_second_order_convergence():
    g = so3()
    ref = solve_group_ode(g, _xi, np.eye(3), T=1.0, dt=1e-4).samples[-1]
    errs = [np.abs(solve_group_ode(g, _xi, np.eye(3), T=1.0, dt=dt).samples[-1] - ref).max() for dt in (0.02, 0.01)]
    assert errs[0] / errs[1] == pytest.approx(4.0, abs=0.3)


def test_algebra_curve_input_matches_function():
    g = so3()
    dt = 0.01
    grid = AlgebraCurve(0.0, dt, np.array([_xi(k * dt) for k in range(101)]))
    a = solve_group_ode(g, grid, np.eye(3)).samples[-1]
    b = solve_group_ode(g, _xi, np.eye(3), T=1.0, dt=dt).samples[-1]
    # linear interpolation at the midpoint differs from the exact midpoint at O(dt^2)
    assert np.abs(a - b).max() < 1e-4


def test_membership_drift_over_many_steps():
    curve = solve_group_ode(so3(), _xi, A0, T=10.0, dt=1e-3)
    assert len(curve.samples) == 10_001
    assert curve.membership_drift() <= 1e-8


def test_missing_representation():
    g = LieAlgebra("no_rep", ("x", "y"), np.zeros((2, 2, 2)))
    with pytest.raises(UnsupportedError):
        solve_group_ode(g, lambda t: np.zeros(2), np.eye(2), T=1.0, dt=0.1)


def test_function_needs_grid():
    with pytest.raises(ValueError):
        solve_group_ode(so3(), _xi, np.eye(3))


# -- collective reconstruction ----------------------------------------------------------


@pytest.fixture(scope="module")
def rigid_run():
    g = so3()
    m0 = CotangentPoint(A0, MU0)
    traj, curve = reconstruct_collective(g, rigid_body_hamiltonian(I321), m0, 5.0, IntegratorConfig("implicit_midpoint", 1e-3))
    return g, m0, traj, curve


def test_momentum_consistency(rigid_run):
    g, m0, traj, curve = rigid_run
    assert traj.momentum_residual.max() <= 1e-6
    gamma = traj.extra["gamma"]
    np.testing.assert_allclose(traj.states[:, 9:], gamma, atol=1e-6)


def test_reduced_curve_matches_independent_integration(rigid_run):
    g, m0, traj, _ = rigid_run
    ref = simulate_lie_poisson(g, rigid_body_hamiltonian(I321), MU0, 5.0, IntegratorConfig("rk4", 1e-3)).states
    assert np.abs(traj.states[:, 9:] - ref).max() <= 1e-6


def test_energy_conserved():
    # group stepping is second order: the spread is 3e-8 at dt = 1e-3
    g = so3()
    m0 = CotangentPoint(A0, MU0)
    traj, _ = reconstruct_collective(g, rigid_body_hamiltonian(I321), m0, 5.0, IntegratorConfig("rk4", 2.5e-4))
    assert np.ptp(traj.energy) <= 1e-8


def test_left_momentum_and_membership_conserved(rigid_run):
    g, m0, traj, curve = rigid_run
    nu = moment_left(g, m0)
    for state in traj.states[::250]:
        np.testing.assert_allclose(moment_left(g, chart_point(state, 3)), nu, atol=1e-8)
    assert curve.membership_drift() <= 1e-8


def test_matches_direct_chart_integration(rigid_run):
    _, m0, traj, _ = rigid_run
    direct = direct_chart_integration(I321, m0, 5.0, 1e-3)
    assert np.abs(traj.states - direct).max() <= 1e-6


def test_spherical_body():
    g = so3()
    inertia = (2.0, 2.0, 2.0)
    m0 = CotangentPoint(A0, MU0)
    traj, curve = reconstruct_collective(g, rigid_body_hamiltonian(inertia), m0, 2.0, IntegratorConfig("rk4", 1e-2))
    np.testing.assert_allclose(traj.states[:, 9:], np.tile(MU0, (len(traj.states), 1)), atol=1e-12)
    for t, a in zip(curve.times, curve.samples):
        np.testing.assert_allclose(a, group_exp(g, MU0 / 2.0, t), atol=1e-12)


def test_relative_equilibrium():
    g = so3()
    mu0 = np.array([0.0, 1.4, 0.0])
    xi = mu0 / np.array(I321)
    m0 = CotangentPoint(A0, mu0)
    traj, _ = reconstruct_collective(g, rigid_body_hamiltonian(I321), m0, 5.0, IntegratorConfig("implicit_midpoint", 1e-3))
    for t, state in zip(traj.times, traj.states):
        p = chart_point(state, 3)
        np.testing.assert_allclose(p.a, A0 @ group_exp(g, xi, t), atol=1e-8)
        np.testing.assert_allclose(p.mu, mu0, atol=1e-8)


def test_time_shift():
    g = so3()
    h = rigid_body_hamiltonian(I321)
    cfg = IntegratorConfig("rk4", 1e-3)
    m0 = CotangentPoint(A0, MU0)
    full, _ = reconstruct_collective(g, h, m0, 3.0, cfg)
    k1 = 1200
    tail, _ = reconstruct_collective(g, h, chart_point(full.states[k1], 3), 1.8, cfg)
    assert np.abs(tail.states - full.states[k1:]).max() <= 1e-5


# -- lift ------------------------------------------------------------------------------------


def test_isotropy_dimension():
    assert isotropy_algebra(so3(), MU0).shape[1] == 1


def test_lift_of_true_trajectory_is_trivial():
    # spherical body: the true motion (a0 exp(t xi), mu0) is known in closed form
    g = so3()
    inertia = (2.0, 2.0, 2.0)
    xi = MU0 / 2.0
    d = lambda t: CotangentPoint(A0 @ group_exp(g, xi, t), MU0)
    nu = moment_left(g, d(0.0))
    a_curve, xi_curve, c = lift_reduced(g, nu, d, rigid_body_chart_field(inertia), 1.0, 0.01)
    assert np.abs(xi_curve.samples).max() <= 1e-8
    for a in a_curve.samples:
        np.testing.assert_allclose(a, np.eye(3), atol=1e-8)


def test_lift_matches_direct_integration():
    g = so3()
    m0 = CotangentPoint(A0, MU0)
    T, dt = 5.0, 1e-3
    d = rigid_body_companion(I321, m0, T)
    nu = moment_left(g, m0)
    a_curve, xi_curve, c = lift_reduced(g, nu, d, rigid_body_chart_field(I321), T, dt)
    direct = direct_chart_integration(I321, m0, T, dt)
    lifted = np.array([np.concatenate([p.a.reshape(-1), p.mu]) for p in c])
    assert np.abs(lifted - direct).max() <= 1e-5
    # xi stays in the isotropy line of nu
    cross = np.cross(xi_curve.samples, nu)
    assert np.abs(cross).max() <= 1e-8


def test_companion_stays_on_level_set():
    g = so3()
    m0 = CotangentPoint(A0, MU0)
    d = rigid_body_companion(I321, m0, 2.0)
    nu = moment_left(g, m0)
    for t in np.linspace(0, 2, 9):
        np.testing.assert_allclose(moment_left(g, d(t)), nu, atol=1e-10)
    p0 = d(0.0)
    np.testing.assert_allclose(p0.a, A0, atol=1e-12)


def test_lift_rejects_level_set_drift():
    g = so3()
    d = rigid_body_companion(I321, CotangentPoint(A0, MU0), 1.0)
    with pytest.raises(LevelSetError, match="level set"):
        lift_reduced(g, A0 @ MU0 + 0.1, d, rigid_body_chart_field(I321), 1.0, 0.1)


def test_lift_rejects_invalid_companion():
    g = so3()
    d = lambda t: CotangentPoint(np.eye(3), MU0)
    with pytest.raises(LevelSetError, match="no isotropy solution"):
        lift_reduced(g, MU0, d, rigid_body_chart_field(I321), 1.0, 0.1)


def test_minimal_rotation(rng):
    for _ in range(10):
        u, v = rng.standard_normal(3), rng.standard_normal(3)
        q = minimal_rotation(u, v)
        np.testing.assert_allclose(q @ q.T, np.eye(3), atol=1e-12)
        np.testing.assert_allclose(q @ u / np.linalg.norm(u), v / np.linalg.norm(v), atol=1e-12)
    with pytest.raises(ValueError):
        minimal_rotation([1.0, 0.0, 0.0], [-1.0, 0.0, 0.0])
