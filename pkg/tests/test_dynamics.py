import numpy as np
import pytest

from liemech.algebra import coAd, random_group_element
from liemech.builders import heavy_top3, sl, so3
from liemech.dynamics import (
    CollectiveHamiltonian,
    IntegratorConfig,
    RigidBodyParams,
    bifurcation_values,
    casimir,
    classify_equilibrium,
    critical_points_rigid_body,
    energy_scan,
    euler_omega_rhs,
    euler_rhs,
    heavy_top_hamiltonian,
    integrate,
    level_curve_count,
    level_set_components,
    lie_poisson_rhs,
    numerical_gradient,
    rigid_body_hamiltonian,
    simulate_lie_poisson,
)
from liemech.errors import (
    DegenerateClassificationError,
    DimensionError,
    IntegrationError,
    UnsupportedError,
)

I321 = (3.0, 2.0, 1.0)
MU0 = np.array([0.3, -1.1, 0.8])


def test_params_validation():
    with pytest.raises(ValueError):
        RigidBodyParams(1.0, 0.0, 2.0)
    with pytest.raises(DimensionError):
        RigidBodyParams.of([1.0, 2.0])


def test_analytic_gradient_matches_differences(rng):
    for h, dim in ((rigid_body_hamiltonian(I321), 3), (heavy_top_hamiltonian(I321, [0.1, 0.2, 0.5]), 6)):
        assert h.analytic_gradient
        for _ in range(10):
            mu = rng.standard_normal(dim)
            np.testing.assert_allclose(numerical_gradient(h, mu), h.grad(mu), rtol=1e-6, atol=1e-9)


def test_numerical_gradient_fallback(rng):
    h = CollectiveHamiltonian(value=lambda m: float(np.sum(m**4)))
    assert not h.analytic_gradient
    mu = rng.standard_normal(3)
    np.testing.assert_allclose(h.grad(mu), 4 * mu**3, rtol=1e-6)


def test_spherical_body_is_static(rng):
    h = rigid_body_hamiltonian((2.0, 2.0, 2.0))
    np.testing.assert_allclose(lie_poisson_rhs(so3(), h, rng.standard_normal(3)), 0.0, atol=1e-15)


def test_first_component_formula(rng):
    mu = rng.standard_normal(3)
    i1, i2, i3 = I321
    rhs = lie_poisson_rhs(so3(), rigid_body_hamiltonian(I321), mu)
    assert rhs[0] == pytest.approx(mu[1] * mu[2] * (1 / i3 - 1 / i2), rel=1e-14)


def test_lie_poisson_is_cross_with_gradient(rng):
    h = rigid_body_hamiltonian(I321)
    mu = rng.standard_normal(3)
    np.testing.assert_allclose(lie_poisson_rhs(so3(), h, mu), np.cross(mu, h.grad(mu)), atol=1e-15)


def test_euler_rhs_values():
    np.testing.assert_allclose(euler_rhs(I321, [1.0, 1.0, 1.0]), [0.5, -2.0 / 3.0, 1.0 / 6.0], rtol=1e-15)
    for axis in np.eye(3):
        assert not np.any(euler_rhs(I321, 2.5 * axis))


def test_omega_form(rng):
    w = rng.standard_normal(3)
    i = np.array(I321)
    np.testing.assert_allclose(i[0] * euler_omega_rhs(I321, w)[0], w[1] * w[2] * (i[1] - i[2]), rtol=1e-14)
    np.testing.assert_allclose(euler_omega_rhs(I321, w), euler_rhs(I321, i * w) / i, rtol=1e-13)


def test_euler_matches_generic_on_1000_cases():
    rng = np.random.default_rng(11)
    g = so3()
    worst = 0.0
    for _ in range(1000):
        inertia = rng.uniform(0.2, 5.0, 3)
        mu = rng.standard_normal(3)
        diff = euler_rhs(inertia, mu) - lie_poisson_rhs(g, rigid_body_hamiltonian(inertia), mu)
        worst = max(worst, np.abs(diff).max())
    assert worst <= 1e-13


def test_heavy_top_without_gravity_is_free_body(rng):
    g = heavy_top3()
    h = heavy_top_hamiltonian(I321, [0.0, 0.0, 1.0])
    mu = rng.standard_normal(3)
    rhs = lie_poisson_rhs(g, h, np.concatenate([mu, np.zeros(3)]))
    np.testing.assert_allclose(rhs[:3], euler_rhs(I321, mu), atol=1e-14)
    np.testing.assert_allclose(rhs[3:], 0.0, atol=1e-15)


def test_heavy_top_equations(rng):
    # mu' = mu x Omega - K x x (with h = ... - K.x), K' = K x Omega
    x = np.array([0.1, -0.3, 0.7])
    g = heavy_top3()
    h = heavy_top_hamiltonian(I321, x)
    s = rng.standard_normal(6)
    mu, k = s[:3], s[3:]
    omega = mu / np.array(I321)
    rhs = lie_poisson_rhs(g, h, s)
    np.testing.assert_allclose(rhs[:3], np.cross(mu, omega) - np.cross(k, x), atol=1e-14)
    np.testing.assert_allclose(rhs[3:], np.cross(k, omega), atol=1e-14)


@pytest.mark.parametrize("name", ["so3", "heavy_top3"])
def test_rhs_tangent_to_orbit(name, rng):
    g = so3() if name == "so3" else heavy_top3()
    h = rigid_body_hamiltonian(I321) if name == "so3" else heavy_top_hamiltonian(I321, [0.2, 0.1, 0.4])
    for _ in range(20):
        mu = rng.standard_normal(g.dim)
        rhs = lie_poisson_rhs(g, h, mu)
        if name == "so3":
            assert abs(2 * mu @ rhs) <= 1e-12
        else:
            m, k = mu[:3], mu[3:]
            assert abs(2 * k @ rhs[3:]) <= 1e-12
            assert abs(rhs[:3] @ k + m @ rhs[3:]) <= 1e-12


def test_casimir_values(rng):
    assert casimir(so3(), np.zeros(3)) == 0.0
    g = heavy_top3()
    s = rng.standard_normal(6)
    np.testing.assert_allclose(casimir(g, s), [s[3:] @ s[3:], s[:3] @ s[3:]])
    with pytest.raises(UnsupportedError, match="so3, heavy_top3"):
        casimir(sl(2), np.zeros(3))


def test_casimir_coadjoint_invariant(rng):
    for g in (so3(), heavy_top3()):
        for _ in range(5):
            mu = rng.standard_normal(g.dim)
            a = random_group_element(g, rng)
            np.testing.assert_allclose(casimir(g, coAd(g, a, mu)), casimir(g, mu), atol=1e-10)


# -- integration ------------------------------------------------------------------------


def test_zero_rhs_constant():
    for method in ("rk4", "implicit_midpoint"):
        traj = integrate(lambda t, x: np.zeros_like(x), [1.0, 2.0], 1.0, IntegratorConfig(method, 0.1))
        assert traj.steps == 10
        assert np.all(traj.states == [1.0, 2.0])
        np.testing.assert_allclose(traj.times[-1], 1.0)


def test_trajectory_diagnostics_lengths():
    traj = simulate_lie_poisson(so3(), rigid_body_hamiltonian(I321), MU0, 0.5, IntegratorConfig("rk4", 0.01))
    assert len(traj.states) == traj.steps + 1 == len(traj.energy) == len(traj.casimir) == 51


def test_invalid_config():
    with pytest.raises(ValueError):
        IntegratorConfig("rk4", 0.0)
    with pytest.raises(ValueError):
        IntegratorConfig("euler", 0.1)


def test_midpoint_conservation():
    traj = simulate_lie_poisson(so3(), rigid_body_hamiltonian(I321), MU0, 10.0, IntegratorConfig("implicit_midpoint", 1e-3))
    assert np.abs(traj.casimir / traj.casimir[0] - 1).max() <= 1e-10
    assert np.abs(traj.energy / traj.energy[0] - 1).max() <= 1e-9


def test_heavy_top_midpoint_casimirs():
    g = heavy_top3()
    h = heavy_top_hamiltonian(I321, [0.0, 0.2, 0.5])
    s0 = np.array([0.3, -0.2, 1.0, 0.1, 0.4, -0.9])
    traj = simulate_lie_poisson(g, h, s0, 10.0, IntegratorConfig("implicit_midpoint", 1e-3))
    assert np.abs(traj.casimir - traj.casimir[0]).max() <= 1e-8
    assert np.abs(traj.energy - traj.energy[0]).max() <= 1e-8


def test_symmetric_top_closed_form():
    inertia = (2.0, 2.0, 0.7)
    mu0 = np.array([0.6, -0.4, 1.3])
    omega = mu0[2] * (1 / inertia[2] - 1 / inertia[0])
    traj = simulate_lie_poisson(so3(), rigid_body_hamiltonian(inertia), mu0, 10.0, IntegratorConfig("rk4", 1e-3))
    z = (mu0[0] + 1j * mu0[1]) * np.exp(-1j * omega * traj.times)
    np.testing.assert_allclose(traj.states[:, 2], mu0[2], atol=1e-12)
    assert np.abs(traj.states[:, 0] + 1j * traj.states[:, 1] - z).max() <= 1e-6


def test_rk4_fourth_order():
    def final(dt):
        cfg = IntegratorConfig("rk4", dt)
        return simulate_lie_poisson(so3(), rigid_body_hamiltonian(I321), MU0, 4.0, cfg).states[-1]

    a, b, c = final(0.08), final(0.04), final(0.02)
    ratio = np.linalg.norm(a - b) / np.linalg.norm(b - c)
    assert 14.0 <= ratio <= 18.0


def test_newton_failure_reports_step():
    cfg = IntegratorConfig("implicit_midpoint", 0.5, newton_tol=1e-14, newton_max_iter=1)
    with pytest.raises(IntegrationError) as info:
        integrate(lambda t, x: x**3, np.array([1.0]), 2.0, cfg)
    assert info.value.step == 0


def test_blowup_raises_integration_error():
    with pytest.raises(IntegrationError):
        integrate(lambda t, x: x**2, np.array([1.0]), 5.0, IntegratorConfig("rk4", 0.01))


# -- equilibria ----------------------------------------------------------------------


def test_critical_points():
    pts = critical_points_rigid_body(I321, 1.7)
    assert len(pts) == 6
    for p in pts:
        assert np.linalg.norm(p) == 1.7
        assert not np.any(euler_rhs(I321, p))
        grad = np.array(p) / np.array(I321)
        assert np.linalg.norm(np.cross(grad, p)) <= 1e-12
    assert all(not np.any(p) for p in critical_points_rigid_body(I321, 0.0))


def test_classification_321():
    pts = critical_points_rigid_body(I321, 1.0)
    kinds = [classify_equilibrium(I321, p) for p in pts]
    assert kinds == ["stable_center"] * 2 + ["saddle"] * 2 + ["stable_center"] * 2


def test_classification_is_scale_free():
    assert classify_equilibrium((5.0, 4.0, 0.5), [0.0, 30.0, 0.0]) == "saddle"
    assert classify_equilibrium((5.0, 4.0, 0.5), [1e-3, 0.0, 0.0]) == "stable_center"


def test_classification_degenerate():
    with pytest.raises(DegenerateClassificationError):
        classify_equilibrium((2.0, 2.0, 2.0), [1.0, 0.0, 0.0])
    with pytest.raises(DegenerateClassificationError):
        classify_equilibrium((2.0, 2.0, 1.0), [0.0, 0.0, 1.0])
    with pytest.raises(ValueError):
        classify_equilibrium(I321, [1.0, 1.0, 0.0])


def test_bifurcation_values():
    np.testing.assert_allclose(bifurcation_values(I321, 1.0), [1 / 6, 1 / 4, 1 / 2], rtol=1e-15)
    assert bifurcation_values(I321, 0.0) == [0.0, 0.0, 0.0]
    np.testing.assert_allclose(bifurcation_values((1.0, 4.0, 2.0), 2.0), [0.5, 1.0, 2.0])


# Oracle from the Morse picture of h on the sphere (min on axis 1, saddle on
# axis 2, max on axis 3): signatures (sub-level, super-level) components.
SIGNATURES = [(0.10, (0, 1)), (0.20, (2, 1)), (0.30, (1, 2)), (0.60, (1, 0))]


@pytest.mark.parametrize("energy,signature", SIGNATURES)
def test_level_set_signatures(energy, signature):
    assert level_set_components(I321, 1.0, energy, n_theta=200, n_phi=400) == signature


def test_level_curve_counts():
    counts = [level_curve_count(I321, 1.0, e, n_theta=200, n_phi=400) for e, _ in SIGNATURES]
    assert counts == [0, 2, 2, 0]


@pytest.mark.parametrize("critical", [1 / 6, 1 / 4, 1 / 2])
def test_components_change_across_each_bifurcation(critical):
    eps = 1e-3
    below = level_set_components(I321, 1.0, critical - eps)
    above = level_set_components(I321, 1.0, critical + eps)
    assert below != above


def test_energy_scan_sorted():
    rows = energy_scan(I321, 1.0, [0.6, 0.2, 0.1, 0.3], n_theta=100, n_phi=200)
    assert [r[0] for r in rows] == [0.1, 0.2, 0.3, 0.6]
    assert [r[1] for r in rows] == [0, 2, 2, 0]
