from math import comb

import pytest

from tlfusion.atl import AffineDiagram, gen_e_affine, gen_u, verify_atl_relations, word_eval_affine
from tlfusion.modules import affine_link_states


@pytest.mark.parametrize("n", range(2, 5))
def test_relations(n, exact):
    rep = verify_atl_relations(n, exact)
    assert rep.ok, [c.name for c in rep.failures]


def test_u_is_invertible_and_has_infinite_order():
    n = 3
    u, ui = gen_u(n, 1), gen_u(n, -1)
    assert u.compose(ui)[0] == AffineDiagram.identity(n)
    x = AffineDiagram.identity(n)
    seen = set()
    for _ in range(2 * n + 1):
        seen.add(x)
        x = u.compose(x)[0]
    assert len(seen) == 2 * n + 1  # u^n is a full twist, not the identity


def test_seam_generator_is_conjugate(exact):
    # e0 = u e_{n-1} u^-1 and e1 = u e0 u^-1
    n = 4
    assert word_eval_affine(exact, ["u", "e3", "u^-1"], n) == word_eval_affine(exact, ["e0"], n)
    assert word_eval_affine(exact, ["u", "e0", "u^-1"], n) == word_eval_affine(exact, ["e1"], n)


def test_noncontractible_loops_are_kept():
    # on two sites e0 e1 e0 closes a loop around the cylinder: not e0
    d = gen_e_affine(0, 2)
    x, _ = d.compose(gen_e_affine(1, 2))
    y, _ = x.compose(d)
    assert y != d


@pytest.mark.parametrize("n", range(1, 9))
def test_affine_state_counts(n):
    for t in range(n % 2, n + 1, 2):
        assert len(affine_link_states(n, t)) == comb(n, (n + t) // 2)
