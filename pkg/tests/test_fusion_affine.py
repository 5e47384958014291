from fractions import Fraction

import pytest

from tlfusion import Field, fuse_affine, fuse_affine_bounded, fuse_affine_hecke, scan_resonances
from tlfusion.fusion import compare_routes
from tlfusion.hecke import shuffles
from tlfusion.identify import identify_affine
from tlfusion.modules import standard_affine, verify_module


def W(f, n, j, z):
    return standard_affine(f, n, j, z)


def test_shuffle_count():
    from math import comb
    for n1, n2 in [(1, 1), (2, 1), (2, 3)]:
        assert len(shuffles(n1, n2)) == comb(n1 + n2, n1)


def test_identification_of_a_standard(modp):
    z = modp.z("z")
    ident = identify_affine(W(modp, 3, "1/2", z), hints=[z])
    assert ident.kind == "standard" and ident.j == Fraction(1, 2) and ident.z == z and ident.certified


def test_identification_without_hints_over_a_prime_field(modp):
    z = modp.z("w")
    ident = identify_affine(W(modp, 2, 1, z))
    assert ident.kind == "standard" and ident.j == 1 and ident.z == z


def test_resonant_pair_by_both_routes(modp):
    q, s, i = modp.q, modp.s, modp.i
    z1 = modp.z("z1")
    A, B = W(modp, 1, "1/2", z1), W(modp, 1, "1/2", -q * z1)
    a = fuse_affine_bounded(A, B, hints=[i * s * z1])
    b = fuse_affine_hecke(A, B, hints=[i * s * z1])
    assert a.dim == b.dim == 1
    assert verify_module(a.module).ok and verify_module(b.module).ok
    assert a.identification.j == 1 and a.identification.z == i * s * z1
    assert compare_routes(a, b)


def test_generic_pair_is_zero(modp):
    A, B = W(modp, 1, "1/2", modp.scalar(5)), W(modp, 1, "1/2", modp.scalar(11))
    assert fuse_affine(A, B).status == "zero"
    assert fuse_affine(A, B, route="hecke").dim == 0


def test_chirality_changes_the_resonance(modp):
    z1 = modp.z("z1")
    A, B = W(modp, 1, "1/2", z1), W(modp, 1, "1/2", -modp.q * z1)
    over = fuse_affine_bounded(A, B, chirality=1)
    under = fuse_affine_bounded(A, B, chirality=-1)
    assert over.dim == 1 and under.dim == 0


def test_small_radius_is_reported_inconclusive(modp):
    z1 = modp.z("z1")
    A, B = W(modp, 1, "1/2", z1), W(modp, 2, 1, -modp.i * modp.q * modp.s * z1)
    out = fuse_affine_bounded(A, B, radius=1, identify=False)
    assert out.status == "inconclusive"


def test_scan_finds_two_resonances(modp):
    rows = scan_resonances(modp, 1, "1/2", 1, "1/2", n_random=3)
    nonzero = {r.label: r.outcome.dim for r in rows if r.outcome.dim}
    assert nonzero == {"-q*z1": 1, "z1^-1": 2}
