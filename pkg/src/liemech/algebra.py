"""Finite-dimensional real Lie algebras given by structure constants.

Conventions used throughout the package:

* ``structure[k, i, j]`` is the coefficient of ``e_k`` in ``[e_i, e_j]``.
* Algebra elements and dual elements are plain 1-D arrays of coordinates
  (basis and dual basis respectively).
* The infinitesimal coadjoint action is
  ``<coad(xi, mu), eta> = -<mu, [xi, eta]>``, i.e. ``coad(xi, mu) = -ad(xi)^T mu``.
  Its group counterpart is ``coAd(a, mu) = Ad(a^-1)^T mu``, a left action
  with ``d/dt coAd(exp(t xi), mu) |_{t=0} = coad(xi, mu)``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import DimensionError, MembershipError, RepresentationClosureError, UnsupportedError

CLOSURE_TOL = 1e-10
MEMBERSHIP_TOL = 1e-9
EXP_UNIT_NORM = 0.5


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    name: str
    basis_labels: tuple[str, ...]
    structure: np.ndarray
    rep: np.ndarray | None = None
    invariant_form: np.ndarray | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        c = np.asarray(self.structure, dtype=float)
        n = len(self.basis_labels)
        if n == 0:
            raise DimensionError("a Lie algebra needs at least one basis element")
        if c.shape != (n, n, n):
            raise DimensionError(f"structure has shape {c.shape}, expected {(n, n, n)}")
        scale = max(1.0, float(np.abs(c).max()))
        if np.abs(c + c.transpose(0, 2, 1)).max() > 1e-12 * scale:
            raise ValueError("structure constants are not antisymmetric in the lower indices")
        c.setflags(write=False)
        object.__setattr__(self, "structure", c)
        object.__setattr__(self, "basis_labels", tuple(self.basis_labels))
        if self.rep is not None:
            r = np.asarray(self.rep, dtype=float)
            if r.ndim != 3 or r.shape[0] != n or r.shape[1] != r.shape[2]:
                raise DimensionError(f"rep must have shape (n, d, d); got {r.shape}")
            r.setflags(write=False)
            object.__setattr__(self, "rep", r)
        if self.invariant_form is not None:
            form = np.asarray(self.invariant_form, dtype=float)
            if self.rep is None or form.shape != self.rep.shape[1:]:
                raise DimensionError("invariant_form must be d x d and requires a rep")
            form.setflags(write=False)
            object.__setattr__(self, "invariant_form", form)

    @property
    def dim(self) -> int:
        return len(self.basis_labels)

    @property
    def rep_dim(self) -> int | None:
        return None if self.rep is None else self.rep.shape[1]

    def index(self, label: str) -> int:
        return self.basis_labels.index(label)

    def basis_vector(self, label_or_index) -> np.ndarray:
        i = self.index(label_or_index) if isinstance(label_or_index, str) else int(label_or_index)
        v = np.zeros(self.dim)
        v[i] = 1.0
        return v

    @cached_property
    def _flat_basis(self) -> np.ndarray:
        self.require_rep()
        return self.rep.reshape(self.dim, -1).T

    @cached_property
    def _flat_pinv(self) -> np.ndarray:
        return np.linalg.pinv(self._flat_basis)

    def require_rep(self) -> np.ndarray:
        if self.rep is None:
            raise UnsupportedError(f"algebra {self.name!r} has no matrix representation")
        return self.rep

    def matrix(self, xi) -> np.ndarray:
        """Representation matrix of the element with coordinates ``xi``."""
        xi = check_element(self, xi)
        return np.tensordot(xi, self.require_rep(), axes=1)

    def to_basis(self, m, tol: float = CLOSURE_TOL) -> np.ndarray:
        """Coordinates of a representation matrix in the algebra basis."""
        flat = np.asarray(m, dtype=float).reshape(-1)
        coords = self._flat_pinv @ flat
        residual = np.linalg.norm(self._flat_basis @ coords - flat)
        if residual > tol * max(1.0, np.linalg.norm(flat)):
            raise RepresentationClosureError(
                f"matrix is not in the span of {self.name!r} (residual {residual:.3e})"
            )
        return coords


def check_element(g: LieAlgebra, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (g.dim,):
        raise DimensionError(f"expected a vector of length {g.dim} for {g.name!r}, got shape {x.shape}")
    return x


def bracket(g: LieAlgebra, xi, eta) -> np.ndarray:
    xi, eta = check_element(g, xi), check_element(g, eta)
    return np.einsum("kij,i,j->k", g.structure, xi, eta)


def ad_matrix(g: LieAlgebra, xi) -> np.ndarray:
    """Matrix M with M @ eta == bracket(g, xi, eta)."""
    return np.einsum("kij,i->kj", g.structure, check_element(g, xi))


def coad(g: LieAlgebra, xi, mu) -> np.ndarray:
    mu = check_element(g, mu)
    return -ad_matrix(g, xi).T @ mu


def killing(g: LieAlgebra, xi, eta) -> float:
    return float(np.trace(ad_matrix(g, xi) @ ad_matrix(g, eta)))


def killing_matrix(g: LieAlgebra) -> np.ndarray:
    return np.einsum("kil,ljk->ij", g.structure, g.structure)


def verify_jacobi(g: LieAlgebra) -> float:
    """Largest violation of the Jacobi identity over all basis triples."""
    c = g.structure
    # t[p, i, j, l] = coefficient of e_p in [[e_i, e_j], e_l]
    t = np.einsum("mij,pml->pijl", c, c)
    cyc = t + t.transpose(0, 2, 3, 1) + t.transpose(0, 3, 1, 2)
    return float(np.abs(cyc).max())


def verify_representation(g: LieAlgebra) -> float:
    """Largest mismatch between rho([e_i, e_j]) and the matrix commutator."""
    r = g.require_rep()
    comm = np.einsum("iab,jbc->ijac", r, r)
    comm = comm - comm.transpose(1, 0, 2, 3)
    img = np.einsum("kij,kac->ijac", g.structure, r)
    return float(np.abs(comm - img).max())


def structure_from_matrices(mats, tol: float = CLOSURE_TOL) -> np.ndarray:
    """Structure constants of the span of ``mats`` (must close under commutators)."""
    mats = np.asarray(mats, dtype=float)
    n = mats.shape[0]
    flat = mats.reshape(n, -1).T
    pinv = np.linalg.pinv(flat)
    if np.linalg.matrix_rank(flat) != n:
        raise ValueError("representation matrices are linearly dependent")
    c = np.zeros((n, n, n))
    for i in range(n):
        for j in range(i + 1, n):
            comm = (mats[i] @ mats[j] - mats[j] @ mats[i]).reshape(-1)
            coords = pinv @ comm
            if np.linalg.norm(flat @ coords - comm) > tol * max(1.0, np.linalg.norm(comm)):
                raise RepresentationClosureError(f"[{i}, {j}] leaves the span")
            c[:, i, j] = coords
            c[:, j, i] = -coords
    # builders use integer or dyadic constants; strip pseudo-inverse roundoff
    c = np.round(c, 12)
    c[np.abs(c) < 1e-12] = 0.0
    return c


def from_matrices(name, labels, mats, invariant_form=None, **metadata) -> LieAlgebra:
    mats = np.asarray(mats, dtype=float)
    return LieAlgebra(
        name=name,
        basis_labels=tuple(labels),
        structure=structure_from_matrices(mats),
        rep=mats,
        invariant_form=invariant_form,
        metadata=metadata,
    )


def change_basis(g: LieAlgebra, p) -> LieAlgebra:
    """Algebra in the basis e'_a = sum_i p[i, a] e_i."""
    p = np.asarray(p, dtype=float)
    if p.shape != (g.dim, g.dim):
        raise DimensionError("change of basis must be a square matrix of size dim")
    pinv = np.linalg.inv(p)
    c = np.einsum("ak,kij,ib,jc->abc", pinv, g.structure, p, p)
    c = 0.5 * (c - c.transpose(0, 2, 1))
    rep = None if g.rep is None else np.einsum("ia,ixy->axy", p, g.rep)
    labels = tuple(f"{g.name}'{a}" for a in range(g.dim))
    return LieAlgebra(g.name + "'", labels, c, rep, g.invariant_form)


# -- group level -------------------------------------------------------------

def expm(a) -> np.ndarray:
    """Matrix exponential by scaling and squaring around a Taylor core.

    The argument is scaled by 2^-s until its 1-norm is at most 0.5, the series
    is summed to machine precision, and the result is squared s times.
    """
    a = np.asarray(a, dtype=float)
    d = a.shape[0]
    norm = np.abs(a).sum(axis=0).max() if a.size else 0.0
    s = 0 if norm <= EXP_UNIT_NORM else int(math.ceil(math.log2(norm / EXP_UNIT_NORM)))
    b = a / (2.0**s)
    result = np.eye(d)
    term = np.eye(d)
    for k in range(1, 40):
        term = term @ b / k
        result = result + term
        if np.abs(term).max() <= 1e-17 * max(1.0, np.abs(result).max()):
            break
    for _ in range(s):
        result = result @ result
    return result


def group_exp(g: LieAlgebra, xi, t: float = 1.0) -> np.ndarray:
    return expm(t * g.matrix(xi))


def check_membership(g: LieAlgebra, a, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    d = g.rep_dim
    if a.shape != (d, d):
        raise DimensionError(f"group element must be {d}x{d} for {g.name!r}")
    if not np.all(np.isfinite(a)) or abs(np.linalg.det(a)) < 1e-300:
        raise MembershipError("group element is singular")
    if g.invariant_form is not None:
        form = g.invariant_form
        err = np.abs(a.T @ form @ a - form).max()
        if err > tol * max(1.0, np.abs(a).max() ** 2):
            raise MembershipError(f"element does not preserve the invariant form (error {err:.3e})")
    return a


def Ad_matrix(g: LieAlgebra, a) -> np.ndarray:
    """Matrix of Ad_a in the algebra basis (column i = Ad(a, e_i))."""
    a = np.asarray(a, dtype=float)
    if a.shape == (g.rep_dim, g.rep_dim) and np.array_equal(a, np.eye(g.rep_dim)):
        # exact at the identity; the pseudo-inverse projection is only good to roundoff
        return np.eye(g.dim)
    ainv = np.linalg.inv(a)
    conj = np.einsum("xy,iyz,zw->ixw", a, g.require_rep(), ainv)
    flat = conj.reshape(g.dim, -1).T
    coords = g._flat_pinv @ flat
    residual = np.linalg.norm(g._flat_basis @ coords - flat)
    if residual > CLOSURE_TOL * max(1.0, np.linalg.norm(flat)):
        raise RepresentationClosureError(f"Ad_a leaves the algebra (residual {residual:.3e})")
    return coords


def Ad(g: LieAlgebra, a, xi) -> np.ndarray:
    return Ad_matrix(g, a) @ check_element(g, xi)


def coAd(g: LieAlgebra, a, mu) -> np.ndarray:
    """Coadjoint action Ad*_{a^-1} mu, so <coAd(a, mu), xi> = <mu, Ad(a^-1, xi)>."""
    mu = check_element(g, mu)
    return Ad_matrix(g, np.linalg.inv(np.asarray(a, dtype=float))).T @ mu


def random_element(g: LieAlgebra, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    return scale * rng.standard_normal(g.dim)


def random_group_element(g: LieAlgebra, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    return group_exp(g, random_element(g, rng, scale))


# -- JSON ------------------------------------------------------------------------

def _schema() -> dict:
    text = resources.files("liemech").joinpath("schemas/lie_algebra.schema.json").read_text()
    return json.loads(text)


def to_json_dict(g: LieAlgebra) -> dict:
    out = {
        "name": g.name,
        "dim": g.dim,
        "basis_labels": list(g.basis_labels),
        "structure": g.structure.tolist(),
    }
    if g.rep is not None:
        out["rep"] = g.rep.tolist()
    if g.invariant_form is not None:
        out["invariant_form"] = g.invariant_form.tolist()
    return out


def from_json_dict(data: dict) -> LieAlgebra:
    import jsonschema

    jsonschema.validate(data, _schema())
    if len(data["basis_labels"]) != data["dim"]:
        raise DimensionError("basis_labels length differs from dim")
    return LieAlgebra(
        name=data["name"],
        basis_labels=tuple(data["basis_labels"]),
        structure=np.asarray(data["structure"], dtype=float),
        rep=None if data.get("rep") is None else np.asarray(data["rep"], dtype=float),
        invariant_form=None if data.get("invariant_form") is None else np.asarray(data["invariant_form"], dtype=float),
    )


def save_algebra(g: LieAlgebra, path) -> None:
    Path(path).write_text(json.dumps(to_json_dict(g), indent=1) + "\n")


def load_algebra(path) -> LieAlgebra:
    return from_json_dict(json.loads(Path(path).read_text()))
