"""Root systems of the classical families A, B, C, D in exact arithmetic.

Roots are recorded as their values on an explicit Cartan basis of the matrix
builders:

* A_n on sl(n+1) with g_m = e_mm - e_(m+1)(m+1), m = 1..n.
* B_n on so(n+1, n) and D_n on so(n, n) in the f-basis, Cartan f_11..f_nn.
  Matrix indices run over -n..n (B) or -n..-1, 1..n (D).
* C_n on sp(2n), Cartan A_11..A_nn.

Positivity is lexicographic: a root is positive when its first nonzero
coordinate in an ordered basis of the dual Cartan space is positive.  The
orders are (eps_1, .., eps_n) for A and C, and (-eps_n, .., -eps_1) for B and
D, which reproduces the simple roots labelled in the classical construction:

* A_n: beta_m = alpha_(m, m+1)
* B_n: beta_0 = -eps_1, beta_k = eps_k - eps_(k+1)
* C_n: beta_p = eps_p - eps_(p+1), beta_n = 2 eps_n
* D_n: beta_0 = -eps_1 - eps_2, beta_k = eps_k - eps_(k+1)

Inner products come from the Killing form of the matrix algebra restricted
to the Cartan subalgebra, computed exactly as sum over roots of
alpha(h_i) alpha(h_j).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from .algebra import LieAlgebra, ad_matrix
from .errors import DimensionError, LieMechError

FAMILIES = ("A", "B", "C", "D")
SNAP_TOL = 1e-8


class NonCommutingCartanError(LieMechError, ValueError):
    pass


Vec = tuple  # tuple of Fraction


def _frac_vec(values) -> Vec:
    return tuple(Fraction(v) for v in values)


def _sub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def _add(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def _neg(u: Vec) -> Vec:
    return tuple(-a for a in u)


def _eps(n: int, k: int) -> Vec:
    """eps_k with eps_(-k) = -eps_k and eps_0 = 0 (k in -n..n)."""
    v = [Fraction(0)] * n
    if k > 0:
        v[k - 1] = Fraction(1)
    elif k < 0:
        v[-k - 1] = Fraction(-1)
    return tuple(v)


def _solve_exact(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    """Gaussian elimination over the rationals for a square nonsingular system."""
    n = len(a)
    m = [list(row) + [rhs] for row, rhs in zip(a, b)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def _matrix_inverse(a: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(a)
    cols = [_solve_exact(a, [Fraction(int(i == j)) for i in range(n)]) for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


@dataclass(frozen=True)
class RootSystem:
    family: str
    rank: int
    roots: tuple[Vec, ...]
    positive: tuple[int, ...]
    simple: tuple[int, ...]
    gram: tuple[tuple[Fraction, ...], ...]
    simple_labels: tuple[str, ...]
    killing_cartan: tuple[tuple[Fraction, ...], ...] = field(repr=False)

    @property
    def simple_roots(self) -> list[Vec]:
        return [self.roots[i] for i in self.simple]

    @property
    def positive_roots(self) -> list[Vec]:
        return [self.roots[i] for i in self.positive]

    def inner(self, u: Vec, v: Vec) -> Fraction:
        """(u, v) = u^T K^-1 v with K the Killing form on the Cartan basis."""
        kinv = _matrix_inverse([list(r) for r in self.killing_cartan])
        return sum(u[i] * kinv[i][j] * v[j] for i in range(self.rank) for j in range(self.rank))


def _roots_A(n: int) -> list[Vec]:
    # alpha_pq(g_m) = d_pm - d_p,m+1 - d_qm + d_q,m+1 (p, q in 1..n+1)
    out = []
    for p in range(1, n + 2):
        for q in range(1, n + 2):
            if p != q:
                out.append(
                    tuple(
                        Fraction(int(p == m) - int(p == m + 1) - int(q == m) + int(q == m + 1))
                        for m in range(1, n + 1)
                    )
                )
    return out


def _roots_BD(n: int, with_zero: bool) -> list[Vec]:
    idx = [k for k in range(-n, n + 1) if with_zero or k != 0]
    return [_sub(_eps(n, k), _eps(n, l)) for k in idx for l in idx if k != l and k + l > 0]


def _roots_C(n: int) -> list[Vec]:
    out = []
    for p in range(1, n + 1):
        for q in range(1, n + 1):
            if p > q:
                r = _sub(_eps(n, p), _eps(n, q))
                out += [r, _neg(r)]
            if p >= q:
                r = _add(_eps(n, p), _eps(n, q))
                out += [r, _neg(r)]
    return out


def _order_key(family: str, n: int, root: Vec) -> Vec:
    """Coordinates of a root in the ordered positivity basis."""
    if family == "A":
        # g_m coordinates -> eps coordinates: eps_p(g_m) = d_pm - d_p,m+1,
        # and alpha = sum_p c_p eps_p with sum c_p = 0, so c_1 = alpha(g_1) + ...
        # Solve successively: alpha(g_m) = c_m - c_(m+1).
        c = [Fraction(0)] * (n + 1)
        total = sum(Fraction(n + 1 - m) * root[m - 1] for m in range(1, n + 1))
        c[0] = total / (n + 1)
        for m in range(1, n + 1):
            c[m] = c[m - 1] - root[m - 1]
        return tuple(c)
    if family == "C":
        return root
    return tuple(-root[k] for k in range(n - 1, -1, -1))


def _is_positive(key: Vec) -> bool:
    for x in key:
        if x != 0:
            return x > 0
    raise ValueError("zero vector has no sign")


def _raw_roots(family: str, n: int) -> list[Vec]:
    return {
        "A": lambda: _roots_A(n),
        "B": lambda: _roots_BD(n, True),
        "C": lambda: _roots_C(n),
        "D": lambda: _roots_BD(n, False),
    }[family]()


def _simple_label(family: str, n: int, pos: int) -> str:
    if family in ("A", "C"):
        return f"beta_{pos + 1}"
    return f"beta_{pos}"


def build_root_system(family: str, rank: int) -> RootSystem:
    family = str(family).upper()
    if family not in FAMILIES:
        raise DimensionError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if int(rank) != rank or rank < 1:
        raise DimensionError("rank must be a positive integer")
    n = int(rank)
    if family == "D" and n < 2:
        raise DimensionError("D_n needs rank >= 2")
    roots = _raw_roots(family, n)
    assert len(set(roots)) == len(roots)
    positive = [i for i, r in enumerate(roots) if _is_positive(_order_key(family, n, r))]
    pos_set = {roots[i] for i in positive}
    decomposable = {_add(roots[i], roots[j]) for i in positive for j in positive if i != j}
    simple = [i for i in positive if roots[i] not in decomposable]
    simple.sort(key=lambda i: _canonical_position(family, n, roots[i]))
    assert len(simple) == n and all(_add(roots[i], roots[j]) != () for i in simple for j in simple)
    assert pos_set
    killing = [[sum(r[i] * r[j] for r in roots) for j in range(n)] for i in range(n)]
    kinv = _matrix_inverse(killing)
    simples = [roots[i] for i in simple]
    gram = tuple(
        tuple(sum(u[a] * kinv[a][b] * v[b] for a in range(n) for b in range(n)) for v in simples) for u in simples
    )
    return RootSystem(
        family=family,
        rank=n,
        roots=tuple(roots),
        positive=tuple(positive),
        simple=tuple(simple),
        gram=gram,
        simple_labels=tuple(_simple_label(family, n, k) for k in range(n)),
        killing_cartan=tuple(tuple(row) for row in killing),
    )


def _canonical_position(family: str, n: int, root: Vec) -> int:
    """Position of a simple root in the labelled order beta_0/1 .. beta_n."""
    if family == "A":
        # beta_m is alpha_(m, m+1); in g_m coordinates it has 2 at position m
        return next(m for m, x in enumerate(root) if x == 2)
    if family == "C":
        if root == _add(_eps(n, n), _eps(n, n)):
            return n - 1
        return next(p for p in range(n) if root[p] == 1)
    # B, D: beta_0 involves -eps_1, beta_k = eps_k - eps_(k+1)
    if family == "B" and root == _eps(n, -1):
        return 0
    if family == "D" and root == _add(_eps(n, -1), _eps(n, -2)):
        return 0
    return next(p for p in range(n) if root[p] == 1) + 1


def cartan_matrix(rs: RootSystem) -> np.ndarray:
    """A_ij = 2 (beta_i, beta_j) / (beta_i, beta_i) as an exact integer matrix."""
    n = rs.rank
    out = np.zeros((n, n), dtype=int)
    for i in range(n):
        for j in range(n):
            v = 2 * rs.gram[i][j] / rs.gram[i][i]
            if v.denominator != 1:
                raise ArithmeticError(f"non-integer Cartan entry {v}")
            out[i, j] = int(v)
    return out


def simple_root_expansion(rs: RootSystem, root_index: int) -> np.ndarray:
    """Integer coefficients of a root in the simple roots."""
    if not 0 <= root_index < len(rs.roots):
        raise IndexError(f"root index {root_index} out of range 0..{len(rs.roots) - 1}")
    n = rs.rank
    basis = rs.simple_roots
    a = [[basis[j][i] for j in range(n)] for i in range(n)]
    coeffs = _solve_exact(a, list(rs.roots[root_index]))
    if any(c.denominator != 1 for c in coeffs):
        raise ArithmeticError("root is not an integer combination of simple roots")
    return np.array([int(c) for c in coeffs], dtype=int)


def find_root(rs: RootSystem, vec) -> int:
    vec = _frac_vec(vec)
    return rs.roots.index(vec)


@dataclass(frozen=True)
class DynkinDiagram:
    nodes: tuple[str, ...]
    edges: tuple[tuple[int, int, int, int | None], ...]  # (i, j, multiplicity, arrow_to)

    def degree(self, i: int) -> int:
        return sum(1 for a, b, *_ in self.edges if i in (a, b))

    def to_text(self) -> str:
        lines = [f"nodes: {' '.join(self.nodes)}"]
        for i, j, mult, arrow in self.edges:
            bond = {1: "-", 2: "=", 3: "≡"}[mult]
            head = ""
            if arrow is not None:
                head = f" (arrow -> {self.nodes[arrow]})"
            lines.append(f"{self.nodes[i]} {bond * 3} {self.nodes[j]}{head}")
        return "\n".join(lines)

    def to_dot(self) -> str:
        lines = ["graph dynkin {"]
        for k, lab in enumerate(self.nodes):
            lines.append(f'  n{k} [label="{lab}"];')
        for i, j, mult, arrow in self.edges:
            attrs = [f'multiplicity={mult}', f'penwidth={mult}']
            if arrow is not None:
                attrs.append(f'arrow_to="n{arrow}"')
            lines.append(f"  n{i} -- n{j} [{', '.join(attrs)}];")
        lines.append("}")
        return "\n".join(lines)


def dynkin(rs: RootSystem) -> DynkinDiagram:
    a = cartan_matrix(rs)
    n = rs.rank
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            mult = int(a[i, j] * a[j, i])
            if mult == 0:
                continue
            arrow = None
            if rs.gram[i][i] != rs.gram[j][j]:
                arrow = i if rs.gram[i][i] < rs.gram[j][j] else j
            edges.append((i, j, mult, arrow))
    return DynkinDiagram(nodes=rs.simple_labels, edges=tuple(edges))


def root_system_to_dict(rs: RootSystem) -> dict:
    def s(x: Fraction) -> str:
        return str(x)

    return {
        "family": rs.family,
        "rank": rs.rank,
        "roots": [[s(x) for x in r] for r in rs.roots],
        "positive": list(rs.positive),
        "simple": list(rs.simple),
        "simple_labels": list(rs.simple_labels),
        "gram": [[s(x) for x in row] for row in rs.gram],
        "cartan_matrix": cartan_matrix(rs).tolist(),
        "dynkin_edges": [
            {"i": i, "j": j, "multiplicity": m, "arrow_to": arr} for i, j, m, arr in dynkin(rs).edges
        ],
    }


def _snap(x: float) -> Fraction:
    f = Fraction(x).limit_denominator(1000)
    if abs(float(f) - x) > SNAP_TOL:
        raise ArithmeticError(f"eigenvalue {x!r} is not close to a small rational")
    return f


def roots_from_adjoint(g: LieAlgebra, cartan_indices, seed: int = 0) -> list[Vec]:
    """Nonzero simultaneous eigenvalue tuples of ad on the chosen Cartan elements.

    A random combination of the Cartan ad-matrices is diagonalized; each
    eigenvector then yields the tuple of eigenvalues of the individual
    ad-matrices via Rayleigh quotients, snapped to rationals.
    """
    idx = list(cartan_indices)
    if not idx:
        return []
    ads = [ad_matrix(g, g.basis_vector(i)) for i in idx]
    for x, y in product(range(len(ads)), repeat=2):
        if np.abs(ads[x] @ ads[y] - ads[y] @ ads[x]).max() > 1e-10:
            raise NonCommutingCartanError("chosen Cartan elements do not commute")
    rng = np.random.default_rng(seed)
    weights = rng.uniform(1.0, 2.0, len(ads))
    combo = sum(w * a for w, a in zip(weights, ads))
    vals, vecs = np.linalg.eig(combo)
    if np.abs(vals.imag).max() > SNAP_TOL:
        raise ArithmeticError("Cartan elements are not real-diagonalizable")
    if np.linalg.matrix_rank(vecs, tol=1e-8) < g.dim:
        raise ArithmeticError("Cartan elements are not diagonalizable")
    out = []
    for k in range(g.dim):
        v = vecs[:, k]
        tup = tuple(_snap(float(np.real(np.vdot(v, a @ v) / np.vdot(v, v)))) for a in ads)
        if any(x != 0 for x in tup):
            out.append(tup)
    return out


def cartan_indices(g: LieAlgebra) -> tuple[int, ...]:
    """Cartan basis positions recorded by the matrix builders."""
    if "cartan" not in g.metadata:
        raise DimensionError(f"algebra {g.name!r} carries no Cartan selection")
    return tuple(g.metadata["cartan"])


def matrix_algebra_for(family: str, rank: int) -> LieAlgebra:
    """The matrix builder whose Cartan coordinates match build_root_system."""
    from . import builders

    family = family.upper()
    n = int(rank)
    if family == "A":
        return builders.sl(n + 1)
    if family == "B":
        return builders.so_split_f(n + 1, n)
    if family == "C":
        return builders.sp(2 * n)
    if family == "D":
        return builders.so_split_f(n, n)
    raise DimensionError(f"unknown family {family!r}")
