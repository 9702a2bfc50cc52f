"""Euler-angle kinematics of the rigid body and the geodesic form of its motion.

Conventions: (J_i)_kl = eps_ikl, R = exp(psi J3) exp(theta J1) exp(phi J3),
R' = R J(omega) = J(omega') R with J(w) = sum w_i J_i and omega' = R omega.
The kinetic energy is T = omega'^T I omega' / 2 = omega^T g omega / 2 with
g = R^T I R, and L = g omega is conserved.

The independent oracle is the geodesic equation of the metric
G(q) = B(q)^T I B(q) on the Euler-angle chart, where omega' = B(q) q'.
Its Christoffel symbols come from central differences of G.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import expm
from .builders import LEVI_CIVITA
from .dynamics import IntegratorConfig, RigidBodyParams, integrate, rk4_step
from .errors import GimbalLockError

J_MATRICES = np.array(LEVI_CIVITA)
GIMBAL_TOL = 1e-6
CHRISTOFFEL_STEP = 1e-5


@dataclass(frozen=True)
class EulerAngles:
    psi: float
    theta: float
    phi: float

    def as_array(self) -> np.ndarray:
        return np.array([self.psi, self.theta, self.phi], dtype=float)


def _angles(q) -> np.ndarray:
    return q.as_array() if isinstance(q, EulerAngles) else np.asarray(q, dtype=float)


def j_matrix(w) -> np.ndarray:
    return np.einsum("i,ikl->kl", np.asarray(w, dtype=float), J_MATRICES)


def j_vector(m) -> np.ndarray:
    """Inverse of j_matrix on antisymmetric matrices."""
    m = np.asarray(m, dtype=float)
    return 0.5 * np.einsum("ikl,kl->i", J_MATRICES, m)


def rotation_from_angles(q) -> np.ndarray:
    psi, theta, phi = _angles(q)
    return expm(psi * J_MATRICES[2]) @ expm(theta * J_MATRICES[0]) @ expm(phi * J_MATRICES[2])


def check_gimbal(q, time=None) -> None:
    if abs(np.sin(_angles(q)[1])) < GIMBAL_TOL:
        raise GimbalLockError("Euler-angle chart is singular (sin theta ~ 0)", time)


def velocity_matrix(q) -> np.ndarray:
    """B(q) with omega' = B(q) (psi', theta', phi')."""
    psi, theta, _ = _angles(q)
    s, c = np.sin(psi), np.cos(psi)
    return np.array(
        [
            [0.0, c, np.sin(theta) * s],
            [0.0, -s, np.sin(theta) * c],
            [1.0, 0.0, np.cos(theta)],
        ]
    )


def body_angular_velocity(q, qdot) -> np.ndarray:
    """omega' (intrinsic components) from the Euler angle rates."""
    return velocity_matrix(q) @ np.asarray(qdot, dtype=float)


def angular_velocity(q, qdot) -> np.ndarray:
    """omega = R^T omega'."""
    return rotation_from_angles(q).T @ body_angular_velocity(q, qdot)


def angle_rates(q, omega) -> np.ndarray:
    check_gimbal(q)
    return np.linalg.solve(velocity_matrix(q), rotation_from_angles(q) @ np.asarray(omega, dtype=float))


def metric(inertia, q) -> np.ndarray:
    """g = R^T I R acting on omega."""
    r = rotation_from_angles(q)
    return r.T @ np.diag(RigidBodyParams.of(inertia).inertia) @ r


def metric_from_rotation(inertia, r) -> np.ndarray:
    return r.T @ np.diag(RigidBodyParams.of(inertia).inertia) @ r


def kinetic_energy(inertia, q, qdot) -> float:
    w_body = body_angular_velocity(q, qdot)
    return float(0.5 * w_body @ np.diag(RigidBodyParams.of(inertia).inertia) @ w_body)


def kinetic_energy_lab(inertia, q, qdot) -> float:
    w = angular_velocity(q, qdot)
    return float(0.5 * w @ metric(inertia, q) @ w)


def chart_metric(inertia, q) -> np.ndarray:
    b = velocity_matrix(q)
    return b.T @ np.diag(RigidBodyParams.of(inertia).inertia) @ b


def christoffel(inertia, q, step: float = CHRISTOFFEL_STEP) -> np.ndarray:
    """Gamma[m, i, j] of the chart metric by central differences."""
    q = _angles(q)
    check_gimbal(q)
    dg = np.empty((3, 3, 3))  # dg[l, i, j] = d G_ij / d q_l
    for l in range(3):
        e = np.zeros(3)
        e[l] = step
        dg[l] = (chart_metric(inertia, q + e) - chart_metric(inertia, q - e)) / (2 * step)
    ginv = np.linalg.inv(chart_metric(inertia, q))
    # first kind: G_il,j + G_jl,i - G_ij,l  indexed [l, i, j]
    first =np.einsum("jil->lij", dg) + np.einsum("ijl->lij", dg) - dg
    return 0.5 * np.einsum("ml,lij->mij", ginv, first)


def body_euler_rhs(inertia, l_body) -> np.ndarray:
    """L'_dot = L' x omega' with omega' = L' / I."""
    i = RigidBodyParams.of(inertia).inertia
    l_body = np.asarray(l_body, dtype=float)
    return np.cross(l_body, l_body / i)


def _euler_form_rhs(inertia, factor: float):
    def rhs(t, x):
        r = x[:9].reshape(3, 3)
        w = x[9:]
        g = metric_from_rotation(inertia, r)
        w_dot = np.linalg.solve(g, factor * np.cross(g @ w, w))
        return np.concatenate([(r @ j_matrix(w)).reshape(-1), w_dot])

    return rhs


def integrate_euler_form(inertia, r0, omega0, T, dt, factor: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Integrate g omega' = factor (g omega) x omega with R' = R J(omega); returns (R, omega) histories."""
    x0 = np.concatenate([np.asarray(r0, dtype=float).reshape(-1), np.asarray(omega0, dtype=float)])
    states = integrate(_euler_form_rhs(inertia, factor), x0, T, IntegratorConfig("rk4", dt)).states
    return states[:, :9].reshape(-1, 3, 3), states[:, 9:]


def integrate_geodesic(inertia, q0, qdot0, T, dt) -> tuple[np.ndarray, np.ndarray]:
    """RK4 on q'' = -Gamma(q)(q', q'); aborts on gimbal crossing."""

    def rhs(t, x):
        q, v = x[:3], x[3:]
        if abs(np.sin(q[1])) < GIMBAL_TOL:
            raise GimbalLockError("geodesic reached the gimbal locus", t)
        return np.concatenate([v, -np.einsum("mij,i,j->m", christoffel(inertia, q), v, v)])

    steps = int(round(T / dt))
    x = np.concatenate([_angles(q0), np.asarray(qdot0, dtype=float)])
    out = np.empty((steps + 1, 6))
    out[0] = x
    for k in range(steps):
        prev = np.sin(x[1])
        x = rk4_step(rhs, x, k * dt, dt)
        cur = np.sin(x[1])
        if prev * cur < 0:
            # stepped over the locus without a stage landing on it
            t_cross = (k + prev / (prev - cur)) * dt
            raise GimbalLockError("geodesic crossed the gimbal locus", t_cross)
        out[k + 1] = x
    return out[:, :3], out[:, 3:]


def geodesic_check(inertia, omega0, T: float = 1.0, dt: float = 1e-3, q0=(0.3, 1.1, 0.7)) -> dict:
    """Compare the Euler form, its factor-2 variant and the chart geodesic.

    All three start from the same configuration q0 and lab angular velocity
    omega0.  Deviations are max-norm differences of the omega histories.
    """
    inertia = RigidBodyParams.of(inertia)
    q0 = _angles(q0)
    check_gimbal(q0, 0.0)
    omega0 = np.asarray(omega0, dtype=float)
    r0 = rotation_from_angles(q0)
    rs, w_euler = integrate_euler_form(inertia, r0, omega0, T, dt)
    _, w_factor2 = integrate_euler_form(inertia, r0, omega0, T, dt, factor=2.0)
    qs, qdots = integrate_geodesic(inertia, q0, angle_rates(q0, omega0), T, dt)
    w_geo = np.array([angular_velocity(q, v) for q, v in zip(qs, qdots)])
    momenta = np.array([metric_from_rotation(inertia, r) @ w for r, w in zip(rs, w_euler)])
    dev = float(np.abs(w_euler - w_geo).max())
    dev2 = float(np.abs(w_factor2 - w_geo).max())
    return {
        "inertia": inertia.inertia.tolist(),
        "omega0": omega0.tolist(),
        "q0": q0.tolist(),
        "T": float(T),
        "dt": float(dt),
        "steps": int(len(w_geo) - 1),
        "euler_vs_geodesic": dev,
        "factor2_vs_geodesic": dev2,
        "angular_momentum_drift": float(np.abs(momenta - momenta[0]).max()),
        "matches": "euler_form" if dev <= dev2 else "factor2_form",
    }
