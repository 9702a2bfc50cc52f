import itertools

import numpy as np
import pytest

from liemech import builders as B
from liemech.algebra import change_basis
from liemech.cohomology import (
    Cochain2,
    coboundary_residual,
    d1,
    d1_matrix,
    d2,
    d2_matrix,
    galilei_cocycle,
    h1_dim,
    h1_witnesses,
    h2_dim,
    h2_witnesses,
    is_coboundary,
    is_cocycle,
)
from liemech.errors import DimensionError

ALGEBRAS = {
    "so3": B.so3,
    "sl2": lambda: B.sl(2),
    "sl3": lambda: B.sl(3),
    "sp4": lambda: B.sp(4),
    "galilei": B.galilei,
    "heavy_top3": B.heavy_top3,
    "abelian3": lambda: B.abelian(3),
    "so5": lambda: B.so_compact(5),
}


def d2_bruteforce(g, omega_matrix):
    """(d omega)(x, y, z) from the defining formula on basis triples."""
    c, n = g.structure, g.dim
    w = omega_matrix
    out = []
    for i, j, k in itertools.combinations(range(n), 3):
        val = -(c[:, i, j] @ w[:, k]) + (c[:, i, k] @ w[:, j]) - (c[:, j, k] @ w[:, i])
        out.append(val)
    return np.array(out)


def test_d1_zero_and_abelian(rng):
    assert not d1(B.so3(), np.zeros(3)).packed.any()
    assert not d1(B.abelian(4), rng.standard_normal(4)).packed.any()


def test_d1_so3_f3():
    m = d1(B.so3(), [0, 0, 1]).matrix
    assert m[0, 1] == -1.0 and m[1, 0] == 1.0
    assert m[0, 2] == 0.0 and m[1, 2] == 0.0


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
def test_d2_matches_definition(name, rng):
    g = ALGEBRAS[name]()
    w = rng.standard_normal((g.dim, g.dim))
    w = w - w.T
    assert np.allclose(d2(g, w).components, d2_bruteforce(g, w), atol=1e-12)


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
def test_d_squared_zero_exhaustive(name):
    g = ALGEBRAS[name]()
    # every basis 1-cochain at once
    assert np.abs(d2_matrix(g) @ d1_matrix(g)).max() <= 1e-13


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
def test_d_squared_zero_random(name, rng):
    g = ALGEBRAS[name]()
    for theta in rng.standard_normal((100, g.dim)):
        assert d2(g, d1(g, theta)).max_abs() <= 1e-12


def test_abelian_d2_zero(rng):
    g = B.abelian(4)
    w = rng.standard_normal((4, 4))
    assert d2(g, w - w.T).max_abs() == 0.0


@pytest.mark.parametrize(
    "name,h1,h2",
    [("so3", 0, 0), ("sl2", 0, 0), ("sl3", 0, 0), ("sp4", 0, 0), ("so5", 0, 0), ("galilei", 1, 1), ("abelian3", 3, 3)],
)
def test_dims(name, h1, h2):
    g = ALGEBRAS[name]()
    assert (h1_dim(g), h2_dim(g)) == (h1, h2)


def test_abelian_h1_is_dim():
    for n in range(1, 6):
        assert h1_dim(B.abelian(n)) == n


def test_galilei_cocycle_values():
    g = B.galilei()
    s = galilei_cocycle(1.0, g)
    v = g.basis_vector("v1")
    x = g.basis_vector("x1")
    assert s(v, x) == 1.0
    assert s(x, v) == -1.0
    assert s(g.basis_vector("v1"), g.basis_vector("x2")) == 0.0
    assert not galilei_cocycle(0.0).packed.any()
    assert np.count_nonzero(s.packed) == 3


def test_galilei_cocycle_class():
    g = B.galilei()
    s = galilei_cocycle(1.0, g)
    assert is_cocycle(g, s)
    assert not is_coboundary(g, s)
    assert coboundary_residual(g, s) > 0.5


def test_galilei_witness_spans_cocycle():
    g = B.galilei()
    (w,) = h2_witnesses(g)
    assert is_cocycle(g, w) and not is_coboundary(g, w)
    # the cocycle is the witness up to scale and coboundaries
    s = galilei_cocycle(1.0, g).packed
    basis = np.column_stack([d1_matrix(g), w.packed])
    coef = np.linalg.lstsq(basis, s, rcond=None)[0]
    assert np.allclose(basis @ coef, s, atol=1e-10)


def test_wrong_algebra_for_cocycle():
    with pytest.raises(DimensionError):
        galilei_cocycle(1.0, B.so3())


def test_coboundaries_are_coboundaries(rng):
    g = B.galilei()
    for theta in rng.standard_normal((10, g.dim)):
        assert is_coboundary(g, d1(g, theta))


def test_so3_closed_forms_are_exact(rng):
    g = B.so3()
    w = rng.standard_normal((3, 3))
    w = Cochain2.from_matrix(w - w.T)
    # every 2-cochain on so(3) is closed (no triples beyond one), and exact
    assert is_cocycle(g, w)
    assert is_coboundary(g, w)


@pytest.mark.parametrize("name", ["so3", "sl3", "galilei", "heavy_top3", "abelian3"])
def test_dims_invariant_under_change_of_basis(name, rng):
    g = ALGEBRAS[name]()
    p = rng.standard_normal((g.dim, g.dim)) + 3 * np.eye(g.dim)
    h = change_basis(g, p)
    assert (h1_dim(h), h2_dim(h)) == (h1_dim(g), h2_dim(g))


@pytest.mark.parametrize("build", [lambda: B.sl(2), lambda: B.sl(3), lambda: B.sl(4), lambda: B.so_compact(3),
                                   lambda: B.so_compact(4), lambda: B.so_compact(5), lambda: B.sp(4), lambda: B.sp(6)])
def test_semisimple_trivial(build):
    g = build()
    assert h1_dim(g) == 0 and h2_dim(g) == 0


def test_h1_witness_galilei_is_time_functional():
    (w,) = h1_witnesses(B.galilei())
    assert np.allclose(np.abs(w), np.eye(10)[9])


def test_cochain_storage_antisymmetric(rng):
    m = rng.standard_normal((5, 5))
    c = Cochain2.from_matrix(m - m.T)
    assert np.array_equal(c.matrix, -c.matrix.T)
    with pytest.raises(DimensionError):
        Cochain2(5, np.zeros(3))
