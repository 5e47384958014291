import numpy as np

from tlfusion import _accel
from tlfusion.tl import enumerate_basis

P = 2147483629


def test_rref_backends_agree():
    rng = np.random.default_rng(1)
    A = rng.integers(0, P, size=(12, 15), dtype=np.int64)
    A[5] = (3 * A[2] + A[7]) % P  # force a dependency
    x, y = A.copy(), A.copy()
    r1, piv1 = _accel.rref_modp(x, P)
    r2, piv2 = _accel._rref_modp_np(y, P)
    assert r1 == r2 == 11
    assert np.array_equal(x, y) and np.array_equal(piv1, piv2)


def test_matmul_backends_agree():
    rng = np.random.default_rng(2)
    A = rng.integers(0, P, size=(9, 7), dtype=np.int64)
    B = rng.integers(0, P, size=(7, 5), dtype=np.int64)
    ref = np.array([[sum(int(A[i, k]) * int(B[k, j]) for k in range(7)) % P for j in range(5)]
                    for i in range(9)], dtype=np.int64)
    assert np.array_equal(_accel.matmul_modp(A, B, P), ref)
    assert np.array_equal(_accel._matmul_modp_np(A, B, P), ref)


def test_batch_composition_matches_single():
    basis = enumerate_basis(5)
    tops = np.array([d.partner for d in basis[:20]] * 2)
    bottoms = np.array([d.partner for d in basis[-20:]] + [d.partner for d in basis[:20]])
    comp, loops = _accel.compose_tl_batch(tops, bottoms, 5)
    ref, ref_loops = _accel._compose_tl_batch_np(tops, bottoms, 5)
    assert np.array_equal(comp, ref) and np.array_equal(loops, ref_loops)
    for k in range(len(tops)):
        partner, l = _accel.compose_tl(tops[k], bottoms[k], 5)
        assert tuple(comp[k]) == partner and loops[k] == l
