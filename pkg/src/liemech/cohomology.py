"""Chevalley-Eilenberg complex with trivial coefficients in degrees 0 to 3.

Sign conventions:

    (d1 theta)(x, y)       = -theta([x, y])
    (d2 omega)(x, y, z)    = -omega([x, y], z) + omega([x, z], y) - omega([y, z], x)

With these, d2 o d1 = 0 is the Jacobi identity.  Degree-2 cochains are stored
as their strict upper triangle (pairs i < j in lexicographic order); degree-3
cochains as components on triples i < j < k.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .algebra import LieAlgebra
from .errors import DimensionError

RANK_RTOL = 1e-9
COCYCLE_TOL = 1e-10
COBOUNDARY_TOL = 1e-8


@lru_cache(maxsize=None)
def _pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(combinations(range(n), 2))


@lru_cache(maxsize=None)
def _triples(n: int) -> tuple[tuple[int, int, int], ...]:
    return tuple(combinations(range(n), 3))


@dataclass(frozen=True, eq=False)
class Cochain2:
    """Antisymmetric bilinear form, stored as its strict upper triangle."""

    n: int
    packed: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.packed, dtype=float)
        if p.shape != (self.n * (self.n - 1) // 2,):
            raise DimensionError(f"packed 2-cochain for dim {self.n} needs {self.n * (self.n - 1) // 2} entries")
        object.__setattr__(self, "packed", p)

    @classmethod
    def from_matrix(cls, m) -> "Cochain2":
        m = np.asarray(m, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError("2-cochain matrix must be square")
        n = m.shape[0]
        # antisymmetrize so callers may pass either triangle
        a = 0.5 * (m - m.T)
        return cls(n, np.array([a[i, j] for i, j in _pairs(n)]))

    @property
    def matrix(self) -> np.ndarray:
        m = np.zeros((self.n, self.n))
        for v, (i, j) in zip(self.packed, _pairs(self.n)):
            m[i, j], m[j, i] = v, -v
        return m

    def __call__(self, x, y) -> float:
        return float(np.asarray(x) @ self.matrix @ np.asarray(y))


@dataclass(frozen=True, eq=False)
class Cochain3:
    n: int
    components: np.ndarray

    def max_abs(self) -> float:
        return float(np.abs(self.components).max()) if self.components.size else 0.0


def _as_cochain2(g: LieAlgebra, omega) -> Cochain2:
    if not isinstance(omega, Cochain2):
        omega = Cochain2.from_matrix(omega)
    if omega.n != g.dim:
        raise DimensionError(f"2-cochain of dim {omega.n} on algebra of dim {g.dim}")
    return omega


def d1_matrix(g: LieAlgebra) -> np.ndarray:
    """Matrix of d1 from coordinates of theta to packed 2-cochains."""
    c = g.structure
    return np.array([-c[:, i, j] for i, j in _pairs(g.dim)]).reshape(-1, g.dim)


def d2_matrix(g: LieAlgebra) -> np.ndarray:
    """Matrix of d2 from packed 2-cochains to components on i < j < k."""
    n, c = g.dim, g.structure
    pair_index = {p: a for a, p in enumerate(_pairs(n))}
    triples = _triples(n)
    out = np.zeros((len(triples), len(pair_index)))

    def add(row, bracket_coords, other, sign):
        # sign * omega([.,.], e_other) with omega(e_k, e_other) expanded into packed entries
        for k in np.nonzero(bracket_coords)[0]:
            if k == other:
                continue
            if k < other:
                out[row, pair_index[(k, other)]] += sign * bracket_coords[k]
            else:
                out[row, pair_index[(other, k)]] -= sign * bracket_coords[k]

    for row, (i, j, k) in enumerate(triples):
        add(row, c[:, i, j], k, -1.0)
        add(row, c[:, i, k], j, +1.0)
        add(row, c[:, j, k], i, -1.0)
    return out


def d1(g: LieAlgebra, theta) -> Cochain2:
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (g.dim,):
        raise DimensionError(f"1-cochain must have length {g.dim}")
    return Cochain2(g.dim, d1_matrix(g) @ theta)


def d2(g: LieAlgebra, omega) -> Cochain3:
    omega = _as_cochain2(g, omega)
    return Cochain3(g.dim, d2_matrix(g) @ omega.packed)


def _scale(g: LieAlgebra) -> float:
    # cutoff floor: a differential that vanishes up to roundoff has rank 0
    return max(1.0, float(np.abs(g.structure).max()))


def _cutoff(s: np.ndarray, scale: float) -> float:
    return RANK_RTOL * max(s[0] if s.size else 0.0, scale)


def _rank(m: np.ndarray, scale: float = 1.0) -> int:
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > _cutoff(s, scale)))


def h1_dim(g: LieAlgebra) -> int:
    return g.dim - _rank(d1_matrix(g), _scale(g))


def h2_dim(g: LieAlgebra) -> int:
    n_pairs = g.dim * (g.dim - 1) // 2
    kernel_d2 = n_pairs - _rank(d2_matrix(g), _scale(g))
    return kernel_d2 - _rank(d1_matrix(g), _scale(g))


def is_cocycle(g: LieAlgebra, omega, tol: float = COCYCLE_TOL) -> bool:
    return d2(g, omega).max_abs() <= tol


def coboundary_residual(g: LieAlgebra, omega) -> float:
    """min over theta of ||d1(theta) - omega|| (Euclidean norm on packed entries)."""
    omega = _as_cochain2(g, omega)
    a = d1_matrix(g)
    theta, *_ = np.linalg.lstsq(a, omega.packed, rcond=None)
    return float(np.linalg.norm(a @ theta - omega.packed))


def is_coboundary(g: LieAlgebra, omega, tol: float = COBOUNDARY_TOL) -> bool:
    return coboundary_residual(g, omega) <= tol


def _null_space(m: np.ndarray, scale: float = 1.0) -> np.ndarray:
    if m.shape[0] == 0:
        return np.eye(m.shape[1])
    _, s, vt = np.linalg.svd(m)
    return vt[int(np.sum(s > _cutoff(s, scale))):].T


def h1_witnesses(g: LieAlgebra) -> list[np.ndarray]:
    """Basis of Z^1 (closed 1-cochains); equals H^1 since B^1 = 0."""
    return list(_null_space(d1_matrix(g), _scale(g)).T)


def h2_witnesses(g: LieAlgebra) -> list[Cochain2]:
    """Closed 2-cochains spanning a complement of the coboundaries."""
    z = _null_space(d2_matrix(g), _scale(g))
    b = d1_matrix(g)
    if b.size:
        u, s, _ = np.linalg.svd(b, full_matrices=False)
        u = u[:, : int(np.sum(s > _cutoff(s, _scale(g))))]
        z = z - u @ (u.T @ z)
    out = []
    if z.size:
        q, s, _ = np.linalg.svd(z, full_matrices=False)
        keep = s > RANK_RTOL * max(1.0, s[0] if s.size else 0.0)
        out = [Cochain2(g.dim, col) for col in q[:, keep].T]
    return out


def galilei_cocycle(m: float, g: LieAlgebra | None = None) -> Cochain2:
    """Central-extension cocycle Sigma(v, x') - Sigma(v', x) = m (v.x' - v'.x).

    Requires the Galilei basis ordering (xi1..3, v1..3, x1..3, tau).
    """
    if g is not None and (g.dim != 10 or g.basis_labels[3:9] != ("v1", "v2", "v3", "x1", "x2", "x3")):
        raise DimensionError("galilei_cocycle needs the Galilei algebra in its fixed basis order")
    mat = np.zeros((10, 10))
    for i in range(3):
        mat[3 + i, 6 + i] = m
        mat[6 + i, 3 + i] = -m
    return Cochain2.from_matrix(mat)
