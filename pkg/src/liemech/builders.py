"""Concrete algebras with faithful matrix representations."""
from __future__ import annotations

import re

import numpy as np

from .algebra import LieAlgebra, from_matrices, load_algebra
from .errors import DimensionError

LEVI_CIVITA = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    LEVI_CIVITA[_i, _j, _k] = 1.0
    LEVI_CIVITA[_j, _i, _k] = -1.0


def hat(v) -> np.ndarray:
    """Skew matrix with hat(v) @ w == cross(v, w)."""
    return -np.einsum("ikl,i->kl", LEVI_CIVITA, np.asarray(v, dtype=float))


def unit(d, i, j) -> np.ndarray:
    m = np.zeros((d, d))
    m[i, j] = 1.0
    return m


def _check_rank(n, minimum=1, what="rank"):
    if int(n) != n or n < minimum:
        raise DimensionError(f"{what} must be an integer >= {minimum}, got {n}")
    return int(n)


def so3() -> LieAlgebra:
    """so(3) with [e_i, e_j] = eps_ijk e_k."""
    mats = [hat(np.eye(3)[i]) for i in range(3)]
    return from_matrices("so3", ("e1", "e2", "e3"), mats, invariant_form=np.eye(3))


def gl(n: int) -> LieAlgebra:
    n = _check_rank(n)
    labels, mats = [], []
    for p in range(n):
        for q in range(n):
            labels.append(f"e{p + 1},{q + 1}")
            mats.append(unit(n, p, q))
    return from_matrices(f"gl{n}", labels, mats)


def sl(n: int) -> LieAlgebra:
    """sl(n): Cartan elements g_m = e_mm - e_(m+1)(m+1) first, then e_pq (p != q)."""
    n = _check_rank(n, 2, "matrix size")
    labels, mats = [], []
    for m in range(n - 1):
        labels.append(f"g{m + 1}")
        mats.append(unit(n, m, m) - unit(n, m + 1, m + 1))
    for p in range(n):
        for q in range(n):
            if p != q:
                labels.append(f"e{p + 1},{q + 1}")
                mats.append(unit(n, p, q))
    return from_matrices(f"sl{n}", labels, mats, cartan=tuple(range(n - 1)))


def so_compact(m: int) -> LieAlgebra:
    m = _check_rank(m, 2, "matrix size")
    labels, mats = [], []
    for p in range(m):
        for q in range(p + 1, m):
            labels.append(f"L{p + 1},{q + 1}")
            mats.append(unit(m, p, q) - unit(m, q, p))
    return from_matrices(f"so{m}", labels, mats, invariant_form=np.eye(m))


def so_split_f(p: int, q: int) -> LieAlgebra:
    """Split form so(p, q) in the basis f_kl = e_kl - e_(-l)(-k).

    ``p == q + 1`` gives so(n+1, n) (type B_n, indices -n..n) and ``p == q``
    gives so(n, n) (type D_n, indices -n..-1, 1..n).  The Cartan elements
    f_11 .. f_nn come first.
    """
    p, q = _check_rank(p, 1, "p"), _check_rank(q, 1, "q")
    if p == q + 1:
        n, idx = q, list(range(-q, q + 1))
    elif p == q:
        n, idx = q, [k for k in range(-q, q + 1) if k != 0]
    else:
        raise DimensionError("so_split_f supports so(n+1, n) and so(n, n) only")
    d = len(idx)
    pos = {k: i for i, k in enumerate(idx)}

    def f(k, l):
        return unit(d, pos[k], pos[l]) - unit(d, pos[-l], pos[-k])

    pairs = [(k, k) for k in range(1, n + 1)]
    pairs += [(k, l) for k in idx for l in idx if k + l > 0 and k != l]
    labels = [f"f{k},{l}" for k, l in pairs]
    mats = [f(k, l) for k, l in pairs]
    form = np.zeros((d, d))
    for k in idx:
        form[pos[k], pos[-k]] = 1.0
    family = "B" if p == q + 1 else "D"
    return from_matrices(
        f"so({p},{q})", labels, mats, invariant_form=form, cartan=tuple(range(n)), family=family, rank=n
    )


def sp(m: int) -> LieAlgebra:
    """sp(2n) in the basis A_ij, B_ij (i <= j), C_ij (i <= j); A_ii first."""
    m = _check_rank(m, 2, "matrix size")
    if m % 2:
        raise DimensionError("sp needs an even matrix size")
    n = m // 2

    def block(tl=None, tr=None, bl=None, br=None):
        out = np.zeros((m, m))
        for blk, (r, c) in ((tl, (0, 0)), (tr, (0, n)), (bl, (n, 0)), (br, (n, n))):
            if blk is not None:
                out[r:r + n, c:c + n] = blk
        return out

    labels, mats = [], []
    for i in range(n):
        labels.append(f"A{i + 1},{i + 1}")
        mats.append(block(tl=unit(n, i, i), br=-unit(n, i, i)))
    for i in range(n):
        for j in range(n):
            if i != j:
                labels.append(f"A{i + 1},{j + 1}")
                mats.append(block(tl=unit(n, i, j), br=-unit(n, j, i)))
    for i in range(n):
        for j in range(i, n):
            labels.append(f"B{i + 1},{j + 1}")
            mats.append(block(tr=unit(n, i, j) + unit(n, j, i)))
    for i in range(n):
        for j in range(i, n):
            labels.append(f"C{i + 1},{j + 1}")
            mats.append(block(bl=unit(n, i, j) + unit(n, j, i)))
    form = block(tr=np.eye(n), bl=-np.eye(n))
    return from_matrices(f"sp{m}", labels, mats, invariant_form=form, cartan=tuple(range(n)))


def galilei() -> LieAlgebra:
    """Galilei algebra as 5x5 matrices [[xi_hat, v, x], [0, 0, tau], [0, 0, 0]].

    Basis order: rotations xi1..xi3, boosts v1..v3, translations x1..x3, time tau.
    """
    mats, labels = [], []
    for i in range(3):
        m = np.zeros((5, 5))
        m[:3, :3] = hat(np.eye(3)[i])
        mats.append(m)
        labels.append(f"xi{i + 1}")
    for i in range(3):
        mats.append(unit(5, i, 3))
        labels.append(f"v{i + 1}")
    for i in range(3):
        mats.append(unit(5, i, 4))
        labels.append(f"x{i + 1}")
    mats.append(unit(5, 3, 4))
    labels.append("tau")
    return from_matrices("galilei", labels, mats)


SYM3_PAIRS = ((0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2))


def sym3_basis() -> list[np.ndarray]:
    out = []
    for i, j in SYM3_PAIRS:
        out.append(unit(3, i, j) if i == j else unit(3, i, j) + unit(3, j, i))
    return out


def cm3() -> LieAlgebra:
    """cm(3) = sl(3) + Sym(3) as 6x6 matrices [[xi, 0], [eta, -xi^T]]."""
    base = sl(3)
    labels, mats = [], []
    for lab, x in zip(base.basis_labels, base.rep):
        m = np.zeros((6, 6))
        m[:3, :3] = x
        m[3:, 3:] = -x.T
        labels.append(lab)
        mats.append(m)
    for (i, j), w in zip(SYM3_PAIRS, sym3_basis()):
        m = np.zeros((6, 6))
        m[3:, :3] = w
        labels.append(f"w{i + 1},{j + 1}")
        mats.append(m)
    form = np.zeros((6, 6))
    form[:3, 3:] = np.eye(3)
    form[3:, :3] = -np.eye(3)
    return from_matrices("cm3", labels, mats, invariant_form=form)


def heavy_top3() -> LieAlgebra:
    """so(3) x R^3 (rotations xi1..3, translations x1..3) as 4x4 matrices."""
    mats, labels = [], []
    for i in range(3):
        m = np.zeros((4, 4))
        m[:3, :3] = hat(np.eye(3)[i])
        mats.append(m)
        labels.append(f"xi{i + 1}")
    for i in range(3):
        mats.append(unit(4, i, 3))
        labels.append(f"x{i + 1}")
    return from_matrices("heavy_top3", labels, mats)


def _lorentz_generators():
    js, ks = [], []
    for i in range(3):
        j = np.zeros((4, 4))
        j[1:, 1:] = LEVI_CIVITA[i]
        js.append(j)
        ks.append(unit(4, 0, i + 1) + unit(4, i + 1, 0))
    return js, ks


MINKOWSKI = np.diag([1.0, -1.0, -1.0, -1.0])


def so31() -> LieAlgebra:
    """Lorentz algebra with (J_i)_kl = eps_ikl and (K_i) = e_0i + e_i0; basis J1..3, K1..3."""
    js, ks = _lorentz_generators()
    return from_matrices("so31", ("J1", "J2", "J3", "K1", "K2", "K3"), js + ks, invariant_form=MINKOWSKI)


def poincare() -> LieAlgebra:
    """Poincare algebra as 5x5 matrices; basis X0..X3, K1..3, J1..3."""
    js, ks = _lorentz_generators()
    mats, labels = [], []
    for mu in range(4):
        mats.append(unit(5, mu, 4))
        labels.append(f"X{mu}")
    for name, gens in (("K", ks), ("J", js)):
        for i, x in enumerate(gens):
            m = np.zeros((5, 5))
            m[:4, :4] = x
            mats.append(m)
            labels.append(f"{name}{i + 1}")
    return from_matrices("poincare", labels, mats)


def abelian(n: int) -> LieAlgebra:
    n = _check_rank(n)
    return from_matrices(f"abelian{n}", [f"a{i + 1}" for i in range(n)], [unit(n, i, i) for i in range(n)])


_SIMPLE = {
    "so3": so3,
    "galilei": galilei,
    "cm3": cm3,
    "heavy_top3": heavy_top3,
    "heavy-top": heavy_top3,
    "se3": heavy_top3,
    "so31": so31,
    "so(3,1)": so31,
    "poincare": poincare,
}
_PATTERNS = (
    (r"sl\(?(\d+)\)?", lambda m: sl(int(m[1]))),
    (r"gl\(?(\d+)\)?", lambda m: gl(int(m[1]))),
    (r"sp\(?(\d+)\)?", lambda m: sp(int(m[1]))),
    (r"so\(?(\d+)\)?", lambda m: so_compact(int(m[1]))),
    (r"abelian\(?(\d+)\)?", lambda m: abelian(int(m[1]))),
)


def get_algebra(name: str) -> LieAlgebra:
    """Builder lookup by name (``so3``, ``sl3``, ``sp4``, ``so(3,2)``, ...) or JSON file path."""
    key = name.strip().lower().replace(" ", "")
    if key in _SIMPLE:
        return _SIMPLE[key]()
    m = re.fullmatch(r"(?:so_split|so)\((\d+),(\d+)\)", key)
    if m:
        return so_split_f(int(m[1]), int(m[2]))
    for pattern, build in _PATTERNS:
        m = re.fullmatch(pattern, key)
        if m:
            return build(m)
    if name.endswith(".json"):
        return load_algebra(name)
    raise KeyError(f"unknown algebra {name!r}")
