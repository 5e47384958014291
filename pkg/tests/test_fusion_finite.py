from fractions import Fraction
from math import comb

import pytest

from tlfusion import Field, fuse_finite, globalize, standard_finite
from tlfusion.fusion import split_semisimple
from tlfusion.identify import decompose_generic
from tlfusion.modules import find_intertwiner, verify_module
from tlfusion.towers import localize


def _spin_range(j1, j2):
    """Independent oracle: |j1 - j2|, ..., j1 + j2 in unit steps."""
    lo, hi = abs(Fraction(j1) - Fraction(j2)), Fraction(j1) + Fraction(j2)
    return {lo + k: 1 for k in range(int(hi - lo) + 1)}


def _std_dim(n, j):
    k = (n - int(2 * j)) // 2
    return comb(n, k) - (comb(n, k - 1) if k else 0)


@pytest.mark.parametrize("n1,j1,n2,j2", [(1, "1/2", 1, "1/2"), (2, 1, 2, 1), (2, 0, 3, "1/2"),
                                         (3, "3/2", 2, 1), (4, 1, 3, "1/2")])
def test_products_of_standards(n1, j1, n2, j2, modp):
    out = fuse_finite(standard_finite(modp, n1, j1), standard_finite(modp, n2, j2))
    assert verify_module(out.module).ok
    assert out.decomposition == _spin_range(j1, j2)
    # dimension of the induced module is the sum of standard dimensions
    n = n1 + n2
    assert out.dim == sum(_std_dim(n, j) for j in _spin_range(j1, j2))


def test_decomposition_rejects_mismatch(modp):
    # a module that is not a sum of standards of the right size has no fit
    M = standard_finite(modp, 4, 1)
    dec = decompose_generic(M)
    assert dec == {Fraction(1): 1}


def test_split_of_a_product(modp):
    P = fuse_finite(standard_finite(modp, 2, 1), standard_finite(modp, 2, 1)).module
    Q, summands = split_semisimple(P)
    assert sorted(j for j, _, _ in summands) == [0, 1, 2]
    assert Q.rank() == P.dim


def test_non_standard_inputs_use_the_split(modp):
    W = standard_finite(modp, 1, "1/2")
    X = fuse_finite(W, W).module  # W_0 + W_1 on two sites
    out = fuse_finite(X, W)
    assert verify_module(out.module).ok
    assert out.decomposition == {Fraction(1, 2): 2, Fraction(3, 2): 1}
    direct = fuse_finite(standard_finite(modp, 2, 0), W).module
    assert direct.dim == 2


def test_split_fails_at_a_root_of_unity():
    f = Field.cyclotomic(3)
    W = standard_finite(f, 1, "1/2")
    X = fuse_finite(W, fuse_finite(W, W, decompose=False).module, decompose=False).module
    with pytest.raises(ArithmeticError):
        split_semisimple(fuse_finite(X, W, decompose=False).module)


@pytest.mark.parametrize("n,j", [(1, "1/2"), (2, 0), (2, 1), (3, "1/2")])
def test_globalize_then_localize(n, j, modp):
    W = standard_finite(modp, n, j)
    G = globalize(W)
    assert G.dim == standard_finite(modp, n + 2, j).dim
    assert find_intertwiner(localize(G), W) is not None
