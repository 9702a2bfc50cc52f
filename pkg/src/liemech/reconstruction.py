"""Reconstruction of full motions on T*G from reduced or collective data.

Group curves solve a' = a xi(t) with the exponential midpoint rule
a_(k+1) = a_k exp(dt xi(t_k + dt/2)).

For a collective Hamiltonian H(a, mu) = h(mu) the chart flow is
a' = a L_h(mu), mu' = -coad(L_h(mu), mu).  Writing gamma_t for the mu-slot
(so that J_r(m_t) = -gamma_t), the full motion is

    m_t = rho_(a_t^-1)(m_0) = (a_0 a_t, coAd(a_t^-1, mu_0)),
    a_t' = a_t L_h(gamma_t),  a_0 = e.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from .algebra import LieAlgebra, check_element, check_membership, coAd, expm, group_exp
from .dynamics import (
    CollectiveHamiltonian,
    IntegratorConfig,
    Trajectory,
    euler_rhs,
    integrate,
    lie_poisson_rhs,
    rigid_body_hamiltonian,
    RigidBodyParams,
)
from .errors import LevelSetError
from .moment import CotangentPoint, act_lambda, act_rho, isotropy_algebra, moment_left, moment_right

LEVEL_TOL = 1e-8
LIFT_RESIDUAL_TOL = 1e-8
LIFT_FD_STEP = 1e-6


@dataclass(frozen=True, eq=False)
class GroupCurve:
    t0: float
    dt: float
    samples: np.ndarray  # (steps + 1, d, d)

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self.samples))

    def membership_drift(self, form=None) -> float:
        """max ||a^T F a - F|| (F defaults to the identity)."""
        d = self.samples.shape[1]
        form = np.eye(d) if form is None else np.asarray(form)
        return float(max(np.abs(a.T @ form @ a - form).max() for a in self.samples))


@dataclass(frozen=True, eq=False)
class AlgebraCurve:
    t0: float
    dt: float
    samples: np.ndarray  # (steps + 1, n)

    def at_midpoint(self, k: int) -> np.ndarray:
        return 0.5 * (self.samples[k] + self.samples[k + 1])


def solve_group_ode(g: LieAlgebra, xi, a0, T: float | None = None, dt: float | None = None, t0: float = 0.0) -> GroupCurve:
    """Exponential midpoint integration of a' = a xi(t).

    ``xi`` is either an AlgebraCurve (its grid is used, midpoints by linear
    interpolation) or a callable of t, in which case ``T`` and ``dt`` are needed.
    """
    a0 = np.asarray(a0, dtype=float)
    g.require_rep()
    if isinstance(xi, AlgebraCurve):
        steps, dt, t0 = len(xi.samples) - 1, xi.dt, xi.t0
        mid = xi.at_midpoint
    else:
        if T is None or dt is None:
            raise ValueError("T and dt are required when xi is a function")
        steps = int(round(T / dt))
        mid = lambda k: check_element(g, xi(t0 + (k + 0.5) * dt))
    out = np.empty((steps + 1,) + a0.shape)
    out[0] = a = a0
    for k in range(steps):
        a = a @ group_exp(g, mid(k), dt)
        out[k + 1] = a
    return GroupCurve(t0, dt, out)


def chart_state(p: CotangentPoint) -> np.ndarray:
    return np.concatenate([p.a.reshape(-1), p.mu])


def chart_point(state, d: int) -> CotangentPoint:
    state = np.asarray(state, dtype=float)
    return CotangentPoint(state[: d * d].reshape(d, d), state[d * d:])


def reconstruct_collective(
    g: LieAlgebra, h: CollectiveHamiltonian, m0: CotangentPoint, T: float, cfg: IntegratorConfig
) -> tuple[Trajectory, GroupCurve]:
    """Four-step collective reconstruction.

    1. orbit through gamma_0 = -J_r(m_0) = mu_0;
    2. gamma_t from the Lie-Poisson equation, sampled on a half-step grid;
    3. xi_t = L_h(gamma_t), read exactly at step midpoints;
    4. a_t from solve_group_ode, then m_t = rho_(a_t^-1)(m_0).

    The returned chart trajectory stores (a, mu) flattened per sample, with
    energy h(-J_r(m_t)) and momentum residual ||J_r(m_t) + gamma_t||.
    """
    check_membership(g, m0.a)
    gamma0 = -moment_right(g, m0)
    half = IntegratorConfig(cfg.method, cfg.dt / 2, cfg.newton_tol, cfg.newton_max_iter)
    fine = integrate(lambda t, mu: lie_poisson_rhs(g, h, mu), gamma0, T, half)
    gamma = fine.states[::2]
    steps = len(gamma) - 1
    xi_mid = [h.grad(fine.states[2 * k + 1]) for k in range(steps)]
    curve = solve_group_ode(g, lambda t: xi_mid[int(round((t - 0.5 * cfg.dt) / cfg.dt))], np.eye(g.rep_dim), T=steps * cfg.dt, dt=cfg.dt)
    d = g.rep_dim
    states = np.empty((steps + 1, d * d + g.dim))
    residual = np.empty(steps + 1)
    energy = np.empty(steps + 1)
    for k, a in enumerate(curve.samples):
        m = act_rho(g, np.linalg.inv(a), m0)
        states[k] = chart_state(m)
        jr = moment_right(g, m)
        residual[k] = np.linalg.norm(jr + gamma[k])
        energy[k] = h(-jr)
    traj = Trajectory(0.0, cfg.dt, states, energy=energy, momentum_residual=residual, extra={"gamma": gamma})
    return traj, curve


# -- Prop.-10 style lift --------------------------------------------------------------------

ChartField = Callable[[CotangentPoint], tuple[np.ndarray, np.ndarray]]


def lift_reduced(
    g: LieAlgebra,
    nu,
    d: Callable[[float], CotangentPoint],
    x_h: ChartField,
    T: float,
    dt: float,
    t0: float = 0.0,
) -> tuple[GroupCurve, AlgebraCurve, list[CotangentPoint]]:
    """Lift a companion curve d_t in J_l^-1(nu) to the true motion c_t = lambda_(a_t) d_t.

    At each grid time xi in g_nu solves xi_M(d_t) = X_H(d_t) - d_t' in the
    least-squares sense, with xi_M(a, mu) = (xi a, 0) and d_t' by central
    differences.  a_t then solves a' = a xi(t) with a_0 = e.
    """
    nu = check_element(g, nu)
    basis = isotropy_algebra(g, nu)
    steps = int(round(T / dt))
    mats = np.array([g.matrix(b) for b in basis.T]) if basis.size else np.zeros((0, g.rep_dim, g.rep_dim))
    xis = np.empty((steps + 1, g.dim))
    d_samples = []
    s = LIFT_FD_STEP
    for k in range(steps + 1):
        t = t0 + k * dt
        dk = d(t)
        d_samples.append(dk)
        level = np.abs(moment_left(g, dk) - nu).max()
        if level > LEVEL_TOL:
            raise LevelSetError(f"companion curve leaves the level set at t={t:.6g} (drift {level:.3e})")
        plus, minus = d(t + s), d(t - s)
        a_dot = (plus.a - minus.a) / (2 * s)
        mu_dot = (plus.mu - minus.mu) / (2 * s)
        xa, xmu = x_h(dk)
        target = (xa - a_dot).reshape(-1)
        # columns: (B_j A_d) flattened
        cols = np.array([(m @ dk.a).reshape(-1) for m in mats]).T if len(mats) else np.zeros((target.size, 0))
        coef = np.linalg.lstsq(cols, target, rcond=None)[0] if cols.shape[1] else np.zeros(0)
        res = max(np.abs(cols @ coef - target).max(), np.abs(xmu - mu_dot).max())
        if res > LIFT_RESIDUAL_TOL:
            raise LevelSetError(f"no isotropy solution at t={t:.6g} (residual {res:.3e})")
        xis[k] = basis @ coef
    xi_curve = AlgebraCurve(t0, dt, xis)
    a_curve = solve_group_ode(g, xi_curve, np.eye(g.rep_dim))
    c = [act_lambda(g, a, dk) for a, dk in zip(a_curve.samples, d_samples)]
    return a_curve, xi_curve, c


# -- rigid-body helpers -----------------------------------------------------------------------

def _cross(u, v) -> np.ndarray:
    # np.cross carries axis-handling overhead that dominates on 3-vectors
    return np.array([u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]])


def rigid_body_chart_field(inertia) -> ChartField:
    """X_H on T*SO(3) for H(a, mu) = sum mu_i^2 / (2 I_i)."""
    from .builders import hat

    i = RigidBodyParams.of(inertia).inertia

    def field(p: CotangentPoint):
        w = p.mu / i
        return p.a @ hat(w), _cross(p.mu, w)

    return field


def direct_chart_integration(inertia, m0: CotangentPoint, T: float, dt: float) -> np.ndarray:
    """RK4 on the flat (a, mu) coordinates of T*SO(3); returns states (steps+1, 12)."""
    field = rigid_body_chart_field(inertia)

    def rhs(t, x):
        a_dot, mu_dot = field(chart_point(x, 3))
        return np.concatenate([a_dot.reshape(-1), mu_dot])

    return integrate(rhs, chart_state(m0), T, IntegratorConfig("rk4", dt)).states


def dense_reduced_solution(inertia, mu0, T: float):
    """High-accuracy reduced rigid-body solution gamma(t) on [-1, T + 1]."""
    mu0 = np.asarray(mu0, dtype=float)
    kw = dict(method="DOP853", rtol=1e-13, atol=1e-15, dense_output=True)
    fwd = solve_ivp(lambda t, m: euler_rhs(inertia, m), (0.0, T + 1.0), mu0, **kw)
    bwd = solve_ivp(lambda t, m: euler_rhs(inertia, m), (0.0, -1.0), mu0, **kw)

    def gamma(t):
        return fwd.sol(t) if t >= 0 else bwd.sol(t)

    return gamma


def minimal_rotation(u, v) -> np.ndarray:
    """Rotation about u x v taking the direction of u to the direction of v."""
    from .builders import hat

    u = np.asarray(u, dtype=float) / np.linalg.norm(u)
    v = np.asarray(v, dtype=float) / np.linalg.norm(v)
    c = float(u @ v)
    if c <= -1.0 + 1e-12:
        raise ValueError("antipodal directions have no unique minimal rotation")
    k = hat(_cross(u, v))
    return np.eye(3) + k + k @ k / (1.0 + c)


def rigid_body_companion(inertia, m0: CotangentPoint, T: float):
    """Companion curve d_t = (a_0 Q_t, gamma_t) in J_l^-1(nu), nu = a_0 mu_0.

    gamma_t is the reduced motion and Q_t the minimal rotation taking gamma_t
    to mu_0, so d_0 = m_0 and a_0 Q_t gamma_t = nu for all t.
    """
    gamma = dense_reduced_solution(inertia, m0.mu, T)

    def d(t):
        gt = gamma(t)
        return CotangentPoint(m0.a @ minimal_rotation(gt, m0.mu), gt)

    return d
