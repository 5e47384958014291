import pytest

from tlfusion import Field, standard_affine, standard_finite
from tlfusion.axioms import (FusionCache, associator, braiding, conjugation_swaps_factors, hexagons, pentagon,
                             semibraiding, tensor_map_left)
from tlfusion.linalg import Matrix


@pytest.fixture(scope="module")
def mods(modp):
    return [standard_finite(modp, 1, "1/2"), standard_finite(modp, 2, 0), standard_finite(modp, 2, 1)]


@pytest.fixture(scope="module")
def cache():
    return FusionCache("finite")


def test_associator(cache, mods):
    a, b, c = mods
    r = associator(cache, a, c, b)
    assert r.report.ok, [x.name for x in r.report.failures]


def test_identity_is_functorial(cache, mods, modp):
    a, b, _ = mods
    X = cache(a, b).module
    F = tensor_map_left(cache, Matrix.eye(modp, X.dim), X, X, a)
    assert F == Matrix.eye(modp, cache(X, a).dim)


def test_pentagon_and_hexagons(cache, mods):
    a, b, c = mods
    assert pentagon(cache, a, b, c, a).ok
    assert hexagons(cache, a, c, b).ok


def test_braiding_negative_control(cache, mods):
    a, _, c = mods
    good, _ = braiding(cache, a, c)
    bad, _ = braiding(cache, a, c, use_inverse=False)
    assert good.report.ok
    assert not bad.report.ok


@pytest.mark.parametrize("n1,n2", [(1, 1), (1, 2), (2, 1), (3, 2)])
def test_semibraiding_identities(n1, n2, exact):
    assert conjugation_swaps_factors(exact, n1, n2, affine=True).ok


def test_semibraiding_map(modp):
    z1 = modp.z("z1")
    r, _ = semibraiding(FusionCache("affine"), standard_affine(modp, 1, "1/2", z1),
                        standard_affine(modp, 1, "1/2", -modp.q * z1))
    assert r.report.ok
