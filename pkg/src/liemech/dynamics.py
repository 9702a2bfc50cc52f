"""Lie-Poisson dynamics on g*, rigid body and heavy top, fixed-step integrators."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import ndimage

from .algebra import LieAlgebra, check_element, coad
from .errors import DegenerateClassificationError, DimensionError, IntegrationError, UnsupportedError

# mu_dot = LIE_POISSON_SIGN * coad(L_h(mu), mu); -1 gives mu x grad h on so(3)
LIE_POISSON_SIGN = -1.0


@dataclass(frozen=True)
class CollectiveHamiltonian:
    value: Callable[[np.ndarray], float]
    gradient: Callable[[np.ndarray], np.ndarray] | None = None

    @property
    def analytic_gradient(self) -> bool:
        return self.gradient is not None

    def grad(self, mu) -> np.ndarray:
        """L_h(mu); central differences with step 1e-6 (1 + |mu|) when not analytic."""
        mu = np.asarray(mu, dtype=float)
        if self.gradient is not None:
            return np.asarray(self.gradient(mu), dtype=float)
        return numerical_gradient(self.value, mu)

    def __call__(self, mu) -> float:
        return float(self.value(np.asarray(mu, dtype=float)))


def numerical_gradient(f, mu) -> np.ndarray:
    mu = np.asarray(mu, dtype=float)
    h = 1e-6 * (1.0 + np.linalg.norm(mu))
    out = np.zeros_like(mu)
    for i in range(mu.size):
        e = np.zeros_like(mu)
        e[i] = h
        out[i] = (f(mu + e) - f(mu - e)) / (2 * h)
    return out


@dataclass(frozen=True)
class RigidBodyParams:
    I1: float
    I2: float
    I3: float

    def __post_init__(self):
        if not all(np.isfinite(x) and x > 0 for x in self.inertia):
            raise ValueError(f"moments of inertia must be positive, got {self.inertia}")

    @property
    def inertia(self) -> np.ndarray:
        return np.array([self.I1, self.I2, self.I3], dtype=float)

    @classmethod
    def of(cls, values) -> "RigidBodyParams":
        if isinstance(values, RigidBodyParams):
            return values
        values = [float(v) for v in values]
        if len(values) != 3:
            raise DimensionError("three principal moments are required")
        return cls(*values)


def rigid_body_hamiltonian(inertia) -> CollectiveHamiltonian:
    """h(mu) = sum mu_i^2 / (2 I_i)."""
    i = RigidBodyParams.of(inertia).inertia
    return CollectiveHamiltonian(value=lambda mu: float(0.5 * np.sum(mu * mu / i)), gradient=lambda mu: mu / i)


def heavy_top_hamiltonian(inertia, center_of_mass) -> CollectiveHamiltonian:
    """h(mu, K) = sum mu_i^2 / (2 I_i) - <K, x> on heavy_top3*, state (mu, K)."""
    i = RigidBodyParams.of(inertia).inertia
    x = np.asarray(center_of_mass, dtype=float)
    if x.shape != (3,):
        raise DimensionError("center of mass must be a 3-vector")

    def value(s):
        return float(0.5 * np.sum(s[:3] ** 2 / i) - s[3:] @ x)

    def gradient(s):
        return np.concatenate([s[:3] / i, -x])

    return CollectiveHamiltonian(value=value, gradient=gradient)


def lie_poisson_rhs(g: LieAlgebra, h: CollectiveHamiltonian, mu) -> np.ndarray:
    mu = check_element(g, mu)
    return LIE_POISSON_SIGN * coad(g, h.grad(mu), mu)


def euler_rhs(inertia, mu) -> np.ndarray:
    i1, i2, i3 = RigidBodyParams.of(inertia).inertia
    m1, m2, m3 = np.asarray(mu, dtype=float)
    return np.array([m2 * m3 * (1 / i3 - 1 / i2), m3 * m1 * (1 / i1 - 1 / i3), m1 * m2 * (1 / i2 - 1 / i1)])


def euler_omega_rhs(inertia, omega) -> np.ndarray:
    """omega_dot from I_1 omega_1_dot = omega_2 omega_3 (I_2 - I_3) and cyclic."""
    i1, i2, i3 = RigidBodyParams.of(inertia).inertia
    w1, w2, w3 = np.asarray(omega, dtype=float)
    return np.array([w2 * w3 * (i2 - i3) / i1, w3 * w1 * (i3 - i1) / i2, w1 * w2 * (i1 - i2) / i3])


def casimir(g: LieAlgebra, mu):
    """|mu|^2 on so(3); (|K|^2, mu.K) on heavy_top3 with state (mu, K)."""
    mu = check_element(g, mu)
    if g.name == "so3":
        return float(mu @ mu)
    if g.name == "heavy_top3":
        m, k = mu[:3], mu[3:]
        return np.array([k @ k, m @ k])
    raise UnsupportedError(f"no Casimir known for {g.name!r}; supported: so3, heavy_top3")


# -- integration ---------------------------------------------------------------------

@dataclass(frozen=True)
class IntegratorConfig:
    method: str = "implicit_midpoint"
    dt: float = 1e-3
    newton_tol: float = 1e-12
    newton_max_iter: int = 50

    def __post_init__(self):
        if self.method not in ("rk4", "implicit_midpoint"):
            raise ValueError(f"unknown method {self.method!r}; use rk4 or implicit_midpoint")
        if not self.dt > 0:
            raise ValueError("dt must be positive")


@dataclass(frozen=True, eq=False)
class Trajectory:
    t0: float
    dt: float
    states: np.ndarray
    energy: np.ndarray | None = None
    casimir: np.ndarray | None = None
    momentum_residual: np.ndarray | None = None
    extra: dict = field(default_factory=dict)

    @property
    def steps(self) -> int:
        return len(self.states) - 1

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self.states))


def rk4_step(rhs, x, t, dt):
    k1 = rhs(t, x)
    k2 = rhs(t + dt / 2, x + dt / 2 * k1)
    k3 = rhs(t + dt / 2, x + dt / 2 * k2)
    k4 = rhs(t + dt, x + dt * k3)
    return x + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def _fd_jacobian(f, x, fx):
    n = x.size
    jac = np.empty((n, n))
    for i in range(n):
        h = 1e-7 * (1.0 + abs(x[i]))
        e = np.zeros(n)
        e[i] = h
        jac[:, i] = (f(x + e) - fx) / h
    return jac


def midpoint_step(rhs, x, t, dt, tol=1e-12, max_iter=50, step_index=None):
    """Solve y = x + dt f(t + dt/2, (x + y)/2) by simplified Newton.

    The difference Jacobian is formed once per step; the iteration matrix is
    I + O(dt), so reusing it still contracts at rate O(dt).
    """
    tm = t + dt / 2
    y = x + dt * rhs(tm, x)

    def residual(z):
        return z - x - dt * rhs(tm, 0.5 * (x + z))

    r = residual(y)
    jac = _fd_jacobian(residual, y, r)
    for it in range(max_iter):
        if it:
            r = residual(y)
        delta = np.linalg.solve(jac, -r)
        y = y + delta
        if np.linalg.norm(delta) <= tol * (1.0 + np.linalg.norm(y)):
            return y
    raise IntegrationError("implicit midpoint Newton iteration did not converge", step=step_index)


def integrate(rhs, x0, T: float, cfg: IntegratorConfig, energy=None, casimir_fn=None, t0: float = 0.0) -> Trajectory:
    """Fixed-step integration of x' = rhs(t, x) over [t0, t0 + T].

    The number of steps is round(T / dt); diagnostics are evaluated at
    every sample when the corresponding callables are supplied.
    """
    if T < 0:
        raise ValueError("T must be nonnegative")
    steps = int(round(T / cfg.dt))
    x = np.asarray(x0, dtype=float).copy()
    states = np.empty((steps + 1, x.size))
    states[0] = x
    t = t0
    with np.errstate(over="raise", invalid="raise"):
        for k in range(steps):
            try:
                if cfg.method == "rk4":
                    x = rk4_step(rhs, x, t, cfg.dt)
                else:
                    x = midpoint_step(rhs, x, t, cfg.dt, cfg.newton_tol, cfg.newton_max_iter, step_index=k)
            except (FloatingPointError, np.linalg.LinAlgError) as exc:
                raise IntegrationError(f"integration failed: {exc}", step=k) from exc
            if not np.all(np.isfinite(x)):
                raise IntegrationError("state became non-finite", step=k)
            t = t0 + (k + 1) * cfg.dt
            states[k + 1] = x
    en = None if energy is None else np.array([energy(s) for s in states])
    cas = None if casimir_fn is None else np.array([casimir_fn(s) for s in states])
    return Trajectory(t0=t0, dt=cfg.dt, states=states, energy=en, casimir=cas)


def simulate_lie_poisson(g: LieAlgebra, h: CollectiveHamiltonian, mu0, T: float, cfg: IntegratorConfig) -> Trajectory:
    cas = None
    if g.name in ("so3", "heavy_top3"):
        cas = lambda s: casimir(g, s)
    return integrate(lambda t, mu: lie_poisson_rhs(g, h, mu), check_element(g, mu0), T, cfg, energy=h, casimir_fn=cas)


# -- equilibria and bifurcations ------------------------------------------------------------

def critical_points_rigid_body(inertia, r: float) -> list[np.ndarray]:
    RigidBodyParams.of(inertia)
    out = []
    for axis in range(3):
        for sign in (1.0, -1.0):
            p = np.zeros(3)
            p[axis] = sign * r
            out.append(p)
    return out


def _require_distinct(i: np.ndarray):
    if min(abs(i[0] - i[1]), abs(i[1] - i[2]), abs(i[0] - i[2])) <= 1e-12 * i.max():
        raise DegenerateClassificationError(f"moments of inertia {tuple(i)} are not distinct")


def euler_jacobian(inertia, mu) -> np.ndarray:
    """Jacobian of mu -> mu x (mu / I)."""
    i = RigidBodyParams.of(inertia).inertia
    from .builders import hat

    mu = np.asarray(mu, dtype=float)
    return hat(mu) @ np.diag(1 / i) - hat(mu / i)


def classify_equilibrium(inertia, point) -> str:
    """'stable_center' or 'saddle' from the linearization tangent to |mu| = r."""
    i = RigidBodyParams.of(inertia).inertia
    _require_distinct(i)
    point = np.asarray(point, dtype=float)
    r = np.linalg.norm(point)
    if r == 0 or np.linalg.norm(euler_rhs(i, point)) > 1e-12 * max(1.0, r * r):
        raise ValueError("point is not a nonzero equilibrium of the Euler equations")
    n = point / r
    basis = np.linalg.svd(n[None, :])[2][1:].T  # orthonormal tangent basis
    lin = basis.T @ euler_jacobian(i, point) @ basis
    eig = np.linalg.eigvals(lin)
    scale = max(1.0, np.abs(eig).max())
    if np.abs(eig).max() <= 1e-12 * r:
        raise DegenerateClassificationError("linearization vanishes")
    if np.all(np.abs(eig.real) <= 1e-9 * scale):
        return "stable_center"
    if np.all(np.abs(eig.imag) <= 1e-9 * scale) and eig.real.min() < 0 < eig.real.max():
        return "saddle"
    raise DegenerateClassificationError(f"unexpected spectrum {eig}")


def bifurcation_values(inertia, r: float) -> list[float]:
    i = RigidBodyParams.of(inertia).inertia
    return sorted(float(r * r / (2 * x)) for x in i)


def _sphere_grid(r: float, n_theta: int, n_phi: int) -> np.ndarray:
    # poles on a generic axis so no critical point sits on a grid singularity
    theta = (np.arange(n_theta) + 0.5) * np.pi / n_theta
    phi = np.arange(n_phi) * 2 * np.pi / n_phi
    th, ph = np.meshgrid(theta, phi, indexing="ij")
    pts = np.stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)], axis=-1)
    axis = np.array([1.0, 2.0, 3.0]) / np.sqrt(14.0)
    q, _ = np.linalg.qr(np.column_stack([axis, [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]))
    rot = np.column_stack([q[:, 1], q[:, 2], q[:, 0]])
    return r * pts @ rot.T


def _count_on_sphere(mask: np.ndarray) -> int:
    labels, count = ndimage.label(mask)
    if count == 0:
        return 0
    parent = list(range(count + 1))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        if a and b:
            parent[find(a)] = find(b)

    for row in range(labels.shape[0]):
        union(labels[row, 0], labels[row, -1])
    for row in (0, -1):
        ids = [x for x in labels[row] if x]
        for x in ids[1:]:
            union(x, ids[0])
    return len({find(a) for a in range(1, count + 1)})


def level_set_components(inertia, r: float, energy: float, n_theta: int = 600, n_phi: int = 1200) -> tuple[int, int]:
    """Connected components of {h < E} and {h > E} on the sphere |mu| = r."""
    i = RigidBodyParams.of(inertia).inertia
    pts = _sphere_grid(r, n_theta, n_phi)
    h = 0.5 * np.sum(pts**2 / i, axis=-1)
    return _count_on_sphere(h < energy), _count_on_sphere(h > energy)


def level_curve_count(inertia, r: float, energy: float, **grid) -> int:
    """Number of closed curves in {h = E}: regions minus one on the sphere."""
    sub, sup = level_set_components(inertia, r, energy, **grid)
    return sub + sup - 1 if sub and sup else 0


def energy_scan(inertia, r: float, energies, **grid) -> list[tuple[float, int, int, int]]:
    """Rows (E, curves, sub-level components, super-level components) sorted by E."""
    rows = []
    for e in sorted(float(x) for x in energies):
        sub, sup = level_set_components(inertia, r, e, **grid)
        rows.append((e, sub + sup - 1 if sub and sup else 0, sub, sup))
    return rows
