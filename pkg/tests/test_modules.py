from fractions import Fraction

import pytest

from tlfusion import Field, Matrix
from tlfusion.modules import (bar_module, find_intertwiner, gram_finite, simple_dims_at_root,
                              standard_affine, standard_finite, verify_module)
from tlfusion.tl import standard_dim


@pytest.mark.parametrize("n", range(1, 7))
def test_finite_standards_are_modules(n, exact):
    for t in range(n % 2, n + 1, 2):
        M = standard_finite(exact, n, Fraction(t, 2))
        assert M.dim == standard_dim(n, Fraction(t, 2))
        assert verify_module(M).ok


@pytest.mark.parametrize("n", range(1, 6))
def test_affine_standards_are_modules(n, modp):
    z = modp.z("z")
    for t in range(n % 2, n + 1, 2):
        M = standard_affine(modp, n, Fraction(t, 2), z)
        assert verify_module(M).ok
        # the full twist acts by z^(2j)
        assert M.mats["u"] ** n == M.identity().scale(z ** t)


def test_three_site_doublet_by_hand(exact):
    # basis {arc on 12, arc on 23}: e1 fixes the first state up to m and sends the second to it
    M = standard_finite(exact, 3, "1/2")
    e1, e2 = M.mats["e1"], M.mats["e2"]
    m = exact.m
    assert e1.trace() == m and e2.trace() == m
    assert e1.rank() == 1 and e2.rank() == 1
    assert e1 @ e2 @ e1 == e1


def test_gram_determinants(exact):
    m = exact.m
    G = gram_finite(exact, 3, "1/2")
    assert G == Matrix.from_rows(exact, [[m, 1], [1, m]])
    G4 = gram_finite(exact, 4, 0)
    assert G4 == Matrix.from_rows(exact, [[m * m, m], [m, m * m]])


def test_gram_ranks_at_small_roots():
    # m = 1 at p = 3: the doublet Gram matrix [[1,1],[1,1]] has rank 1
    assert gram_finite(Field.cyclotomic(3), 3, "1/2").rank() == 1
    # m^2 = 2 at p = 4: det = m^2 - 1 = 1, full rank
    assert gram_finite(Field.cyclotomic(4), 3, "1/2").rank() == 2
    rows = simple_dims_at_root(4, 3)
    assert {j: r["rank"] for j, r in rows.items()} == {0: 1, 1: 3, 2: 1}


def test_intertwiner_detects_twist(modp):
    z = modp.z("z")
    A = standard_affine(modp, 2, 1, z)
    assert find_intertwiner(A, standard_affine(modp, 2, 1, z)) is not None
    assert find_intertwiner(A, standard_affine(modp, 2, 1, modp.q * z)) is None


def test_quotient_module(modp):
    B = bar_module(modp)
    assert B.dim == 1
    assert verify_module(B).ok
    assert B.mats["e0"] == B.identity().scale(modp.m) == B.mats["e1"]
    assert B.mats["u"] == B.identity()
