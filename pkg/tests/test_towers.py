import pytest

from tlfusion.modules import standard_affine, standard_finite
from tlfusion.towers import (braiding_inverse_word, braiding_word, embed_affine_eps, embed_affine_psi,
                             embed_pair_finite, isomorphic, localize, verify_embedding)


@pytest.mark.parametrize("n1,n2", [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1)])
@pytest.mark.parametrize("chirality", [1, -1])
def test_eps_embeddings(n1, n2, chirality, exact):
    assert verify_embedding(embed_affine_eps(exact, n1, n2, chirality)).ok


@pytest.mark.parametrize("n", [1, 2, 3])
def test_psi_embedding(n, exact):
    assert verify_embedding(embed_affine_psi(exact, n)).ok


def test_finite_pair_embedding(exact):
    assert verify_embedding(embed_pair_finite(exact, 2, 3)).ok


def test_braiding_words():
    for n1, n2 in [(1, 1), (1, 2), (2, 3)]:
        w, wi = braiding_word(n1, n2), braiding_inverse_word(n1, n2)
        assert len(w) == len(wi) == n1 * n2


@pytest.mark.parametrize("n,j", [(3, "1/2"), (4, 0), (4, 1), (5, "3/2"), (6, 1)])
def test_localization_of_standards(n, j, modp):
    assert isomorphic(localize(standard_finite(modp, n, j)), standard_finite(modp, n - 2, j))
    z = modp.z("z")
    assert isomorphic(localize(standard_affine(modp, n, j, z)), standard_affine(modp, n - 2, j, z))


def test_localization_kills_top_spin(modp):
    assert localize(standard_finite(modp, 4, 2)).dim == 0
