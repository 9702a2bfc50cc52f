"""Momentum maps on T*G in the left-trivialized chart G x g*.

A chart point (a, mu) stands for the covector T_e L_a^* alpha_a.  The two
commuting actions and their momentum maps are

    lambda_b (a, mu) = (b a, mu)                    J_l(a, mu) = coAd(a, mu)
    rho_b    (a, mu) = (a b^-1, coAd(b, mu))        J_r(a, mu) = -mu

The canonical Poisson bracket in the chart reads

    {F, H} = <grad_L F, dH/dmu> - <grad_L H, dF/dmu> - <mu, [dF/dmu, dH/dmu]>

where <grad_L F, zeta> = d/dt F(a exp(t zeta), mu).  With this bracket the
Hamiltonian vector field of <J(.), xi> is the infinitesimal generator of the
corresponding action, for both pairs above.  An optional constant 2-cocycle
Sigma adds the term -Sigma(dF/dmu, dH/dmu), which realizes a central
extension of the algebra at a fixed value of the central charge.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra import (
    LieAlgebra,
    Ad_matrix,
    bracket,
    check_element,
    check_membership,
    coad,
    coAd,
    group_exp,
    random_group_element,
)
from .cohomology import Cochain2
from .errors import DimensionError

FD_STEP = 1e-5
RANK_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class CotangentPoint:
    a: np.ndarray
    mu: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "a", np.asarray(self.a, dtype=float))
        object.__setattr__(self, "mu", np.asarray(self.mu, dtype=float))


def make_point(g: LieAlgebra, a, mu) -> CotangentPoint:
    return CotangentPoint(check_membership(g, a), check_element(g, mu))


def moment_left(g: LieAlgebra, p: CotangentPoint) -> np.ndarray:
    check_membership(g, p.a)
    return coAd(g, p.a, p.mu)


def moment_right(g: LieAlgebra, p: CotangentPoint) -> np.ndarray:
    check_membership(g, p.a)
    return -check_element(g, p.mu)


def act_lambda(g: LieAlgebra, b, p: CotangentPoint) -> CotangentPoint:
    b = check_membership(g, b)
    return CotangentPoint(b @ p.a, p.mu)


def act_rho(g: LieAlgebra, b, p: CotangentPoint) -> CotangentPoint:
    b = check_membership(g, b)
    return CotangentPoint(p.a @ np.linalg.inv(b), coAd(g, b, p.mu))


Action = Callable[[LieAlgebra, np.ndarray, CotangentPoint], CotangentPoint]
Moment = Callable[[LieAlgebra, CotangentPoint], np.ndarray]


def random_point(g: LieAlgebra, rng: np.random.Generator, scale: float = 1.0) -> CotangentPoint:
    return CotangentPoint(random_group_element(g, rng, scale), rng.standard_normal(g.dim))


def equivariance_residual(
    g: LieAlgebra,
    action: Action,
    moment: Moment,
    samples: int = 100,
    seed: int = 0,
    group_scale: float = 1.0,
    relative: bool = False,
) -> float:
    """max ||J(Phi_b p) - coAd(b, J(p))|| over seeded random (b, p).

    ``group_scale = 0`` samples only the identity.  With ``relative`` each
    residual is divided by max(1, ||coAd(b, J(p))||), which is the meaningful
    measure on non-compact groups where moment values reach 1e5 and beyond.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        p = random_point(g, rng)
        b = random_group_element(g, rng, group_scale)
        lhs = moment(g, action(g, b, p))
        rhs = coAd(g, b, moment(g, p))
        r = float(np.linalg.norm(lhs - rhs))
        if relative:
            r /= max(1.0, float(np.linalg.norm(rhs)))
        worst = max(worst, r)
    return worst


# -- chart calculus ------------------------------------------------------------

def _check_step(step: float) -> float:
    if not step > 1e-12:
        raise ValueError(f"finite-difference step {step!r} underflows")
    return step


def left_gradient(g: LieAlgebra, f, p: CotangentPoint, step: float = FD_STEP) -> np.ndarray:
    """grad_L f at p, an element of g* in the dual basis."""
    step = _check_step(step)
    out = np.zeros(g.dim)
    for i in range(g.dim):
        plus = p.a @ group_exp(g, g.basis_vector(i), step)
        minus = p.a @ group_exp(g, g.basis_vector(i), -step)
        out[i] = (f(CotangentPoint(plus, p.mu)) - f(CotangentPoint(minus, p.mu))) / (2 * step)
    return out


def fiber_gradient(g: LieAlgebra, f, p: CotangentPoint, step: float = FD_STEP) -> np.ndarray:
    """df/dmu at p, an element of g in basis coordinates."""
    step = _check_step(step)
    out = np.zeros(g.dim)
    for i in range(g.dim):
        e = step * g.basis_vector(i)
        out[i] = (f(CotangentPoint(p.a, p.mu + e)) - f(CotangentPoint(p.a, p.mu - e))) / (2 * step)
    return out


def _central_matrix(g: LieAlgebra, central) -> np.ndarray | None:
    if central is None:
        return None
    m = central.matrix if isinstance(central, Cochain2) else np.asarray(central, dtype=float)
    if m.shape != (g.dim, g.dim):
        raise DimensionError("central cocycle has the wrong size")
    return m


def chart_poisson_bracket(g: LieAlgebra, f, h, p: CotangentPoint, central=None, step: float = FD_STEP) -> float:
    gf, gh = left_gradient(g, f, p, step), left_gradient(g, h, p, step)
    df, dh = fiber_gradient(g, f, p, step), fiber_gradient(g, h, p, step)
    value = gf @ dh - gh @ df - p.mu @ bracket(g, df, dh)
    sigma = _central_matrix(g, central)
    if sigma is not None:
        value -= df @ sigma @ dh
    return float(value)


def chart_hamiltonian_field(g: LieAlgebra, h, p: CotangentPoint, central=None, step: float = FD_STEP):
    """(a_dot, mu_dot) for the Hamiltonian h on the chart."""
    gh = left_gradient(g, h, p, step)
    dh = fiber_gradient(g, h, p, step)
    mu_dot = -gh - coad(g, dh, p.mu)
    sigma = _central_matrix(g, central)
    if sigma is not None:
        mu_dot = mu_dot - sigma @ dh
    return p.a @ g.matrix(dh), mu_dot


def moment_component(g: LieAlgebra, moment: Moment, xi):
    xi = check_element(g, xi)
    return lambda q: float(moment(g, q) @ xi)


def infinitesimal_cocycle(
    g: LieAlgebra, moment: Moment, xi, eta, p: CotangentPoint, central=None, step: float = FD_STEP
) -> float:
    """omega(xi, eta) = {J(xi), J(eta)}(p) - J([xi, eta])(p)."""
    jxi = moment_component(g, moment, xi)
    jeta = moment_component(g, moment, eta)
    jbr = moment_component(g, moment, bracket(g, xi, eta))
    return chart_poisson_bracket(g, jxi, jeta, p, central, step) - jbr(p)


def generator_residual(g: LieAlgebra, action: Action, moment: Moment, xi, p: CotangentPoint) -> float:
    """Distance between X_{<J, xi>} and d/dt action(exp(t xi), p) at t = 0."""
    a_dot, mu_dot = chart_hamiltonian_field(g, moment_component(g, moment, xi), p)
    s = FD_STEP
    plus = action(g, group_exp(g, xi, s), p)
    minus = action(g, group_exp(g, xi, -s), p)
    a_ref = (plus.a - minus.a) / (2 * s)
    mu_ref = (plus.mu - minus.mu) / (2 * s)
    return float(max(np.abs(a_dot - a_ref).max(), np.abs(mu_dot - mu_ref).max()))


def moment_differential_rank(g: LieAlgebra, moment: Moment, p: CotangentPoint, step: float = FD_STEP) -> int:
    """Rank of dJ at p over the 2n chart directions (regular-value test)."""
    cols = []
    for i in range(g.dim):
        comp = lambda q, i=i: moment(g, q)
        e = g.basis_vector(i)
        plus = CotangentPoint(p.a @ group_exp(g, e, step), p.mu)
        minus = CotangentPoint(p.a @ group_exp(g, e, -step), p.mu)
        cols.append((comp(plus) - comp(minus)) / (2 * step))
    for i in range(g.dim):
        e = step * g.basis_vector(i)
        cols.append((moment(g, CotangentPoint(p.a, p.mu + e)) - moment(g, CotangentPoint(p.a, p.mu - e))) / (2 * step))
    return _rank(np.array(cols).T)


# -- orbits and isotropy ----------------------------------------------------------

def _kept(s: np.ndarray, scale: float = 0.0) -> int:
    # scale: magnitude the matrix would have if nonzero; roundoff below it is rank 0
    if s.size == 0:
        return 0
    cutoff = RANK_RTOL * max(s[0], scale)
    return int(np.sum(s > cutoff)) if cutoff > 0 else 0


def _rank(m: np.ndarray, scale: float = 0.0) -> int:
    return _kept(np.linalg.svd(m, compute_uv=False), scale)


def _coad_scale(g: LieAlgebra, mu) -> float:
    return float(np.abs(g.structure).max() * np.abs(mu).max()) if g.dim else 0.0


def coad_operator(g: LieAlgebra, mu) -> np.ndarray:
    """Matrix of xi -> coad(xi, mu)."""
    mu = check_element(g, mu)
    return np.column_stack([coad(g, g.basis_vector(i), mu) for i in range(g.dim)])


def orbit_dimension(g: LieAlgebra, mu) -> int:
    return _rank(coad_operator(g, mu), _coad_scale(g, mu))


def isotropy_algebra(g: LieAlgebra, mu) -> np.ndarray:
    """Orthonormal basis (columns) of g_mu = ker(xi -> coad(xi, mu))."""
    m = coad_operator(g, mu)
    _, s, vt = np.linalg.svd(m)
    return vt[_kept(s, _coad_scale(g, mu)):].T


# -- semidirect products ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SemidirectData:
    """G = H x V with H acting on V through ``tau`` (matrices in V coordinates).

    ``rho_v[i]`` is the induced algebra action of the i-th basis element of h.
    When omitted it is obtained by central differences of ``tau``.
    """

    h_algebra: LieAlgebra
    tau: Callable[[np.ndarray], np.ndarray]
    v_dim: int
    rho_v: np.ndarray | None = None

    def __post_init__(self):
        if self.rho_v is None:
            s = FD_STEP
            mats = [
                (self.tau(group_exp(self.h_algebra, e, s)) - self.tau(group_exp(self.h_algebra, e, -s))) / (2 * s)
                for e in np.eye(self.h_algebra.dim)
            ]
            object.__setattr__(self, "rho_v", np.array(mats))
        else:
            object.__setattr__(self, "rho_v", np.asarray(self.rho_v, dtype=float))


def odot(data: SemidirectData, k, v) -> np.ndarray:
    """(K odot v)(xi) = <K, xi_V(v)> as a vector in h*."""
    return np.einsum("a,iab,b->i", np.asarray(k, dtype=float), data.rho_v, np.asarray(v, dtype=float))


def semidirect_coadjoint(data: SemidirectData, h, v, mu, k) -> tuple[np.ndarray, np.ndarray]:
    """Ad*_{(h, v)^-1} (mu, K) = (Ad*_{h^-1} mu + (tau*_{h^-1} K) odot v, tau*_{h^-1} K)."""
    g = data.h_algebra
    mu = check_element(g, mu)
    k = np.asarray(k, dtype=float)
    v = np.asarray(v, dtype=float)
    if k.shape != (data.v_dim,) or v.shape != (data.v_dim,):
        raise DimensionError(f"V has dimension {data.v_dim}")
    h = np.asarray(h, dtype=float)
    k_new = data.tau(np.linalg.inv(h)).T @ k
    return coAd(g, h, mu) + odot(data, k_new, v), k_new


def euclidean_semidirect() -> SemidirectData:
    """so(3) x R^3 with the standard rotation action."""
    from .builders import hat, so3

    return SemidirectData(so3(), tau=lambda h: np.asarray(h, dtype=float), v_dim=3,
                          rho_v=np.array([hat(e) for e in np.eye(3)]))


def _sym_coords(s: np.ndarray) -> np.ndarray:
    from .builders import SYM3_PAIRS

    return np.array([s[i, j] for i, j in SYM3_PAIRS])


def cm3_tau(h) -> np.ndarray:
    """tau_h w = h^-T w h^-1 in the Sym(3) coordinates of cm3."""
    from .builders import sym3_basis

    h = np.asarray(h, dtype=float)
    hinv = np.linalg.inv(h)
    return np.column_stack([_sym_coords(hinv.T @ w @ hinv) for w in sym3_basis()])


def cm3_semidirect() -> SemidirectData:
    from .builders import sl, sym3_basis

    base = sl(3)
    rho = np.array(
        [np.column_stack([_sym_coords(-x.T @ w - w @ x) for w in sym3_basis()]) for x in base.rep]
    )
    return SemidirectData(base, tau=cm3_tau, v_dim=6, rho_v=rho)


def cm3_group_element(h, w) -> np.ndarray:
    """Matrix [[h, 0], [w h, h^-T]] of (h, w) in CM(3)."""
    h = np.asarray(h, dtype=float)
    w = np.asarray(w, dtype=float)
    out = np.zeros((6, 6))
    out[:3, :3] = h
    out[3:, :3] = w @ h
    out[3:, 3:] = np.linalg.inv(h).T
    return out


def cm3_flat(mu_matrix, nu_matrix) -> np.ndarray:
    """Dual coordinates of (mu, nu)^flat under <., (xi, eta)> = (tr(mu^T xi) + tr(nu eta)) / 2."""
    from .builders import cm3

    g = cm3()
    mu_matrix = np.asarray(mu_matrix, dtype=float)
    nu_matrix = np.asarray(nu_matrix, dtype=float)
    out = np.zeros(g.dim)
    for i, m in enumerate(g.rep):
        xi, eta = m[:3, :3], m[3:, :3]
        out[i] = 0.5 * (np.trace(mu_matrix.T @ xi) + np.trace(nu_matrix @ eta))
    return out


def cm3_point(alpha: float, beta: float) -> np.ndarray:
    """(alpha L_3, beta I)^flat with L_3 = e_12 - e_21."""
    l3 = np.zeros((3, 3))
    l3[0, 1], l3[1, 0] = 1.0, -1.0
    return cm3_flat(alpha * l3, beta * np.eye(3))


def poincare_point(p0, p=(0.0, 0.0, 0.0), kappa=(0.0, 0.0, 0.0), s=(0.0, 0.0, 0.0)) -> np.ndarray:
    """F = p0 X0* - p.X* + kappa.K* + s.J* in the basis (X0..X3, K1..3, J1..3)."""
    return np.concatenate([[p0], -np.asarray(p, dtype=float), np.asarray(kappa, dtype=float), np.asarray(s, dtype=float)])


# -- energy-momentum ---------------------------------------------------------------

def energy_moment(g: LieAlgebra, hamiltonian, moment: Moment, p: CotangentPoint) -> tuple[float, np.ndarray]:
    return float(hamiltonian(p)), moment(g, p)


def on_level_set(g: LieAlgebra, hamiltonian, moment: Moment, p: CotangentPoint, energy, mu, tol: float = 1e-8) -> bool:
    e, j = energy_moment(g, hamiltonian, moment, p)
    return abs(e - energy) <= tol and float(np.abs(j - np.asarray(mu)).max()) <= tol


def s1_reduction_demo(n: int, psi) -> tuple[float, int]:
    """Circle action on C^n = R^2n: moment value -|psi|^2/2 and reduced dimension 2n - 2."""
    psi = np.asarray(psi, dtype=float)
    if int(n) != n or n < 1 or psi.shape != (2 * n,):
        raise DimensionError(f"psi must be a real vector of length {2 * n}")
    norm2 = float(psi @ psi)
    if norm2 == 0.0:
        raise ValueError("psi = 0 is not a regular point of the circle momentum map")
    return -norm2 / 2.0, 2 * int(n) - 2
