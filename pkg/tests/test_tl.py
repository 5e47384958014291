from itertools import combinations
from math import comb

import pytest

from tlfusion.tl import (TlDiagram, catalan, enumerate_basis, gen_e, standard_dim, verify_tl_relations,
                         word_eval)


def _brute_force_matchings(n):
    """All non-crossing perfect matchings of 2n boundary points, by exhaustive search."""
    # cyclic boundary order: top 0..n-1 left to right, then bottom right to left
    order = list(range(n)) + [n + k for k in reversed(range(n))]
    pos = {p: k for k, p in enumerate(order)}

    def rec(points):
        if not points:
            yield []
            return
        a = points[0]
        for b in points[1:]:
            rest = [p for p in points if p not in (a, b)]
            for tail in rec(rest):
                yield [(a, b)] + tail

    out = set()
    for match in rec(list(range(2 * n))):
        ok = True
        for (a, b), (c, d) in combinations(match, 2):
            x, y = sorted((pos[a], pos[b]))
            inside = [x < pos[c] < y, x < pos[d] < y]
            if inside[0] != inside[1]:
                ok = False
                break
        if ok:
            partner = [0] * (2 * n)
            for a, b in match:
                partner[a], partner[b] = b, a
            out.add(tuple(partner))
    return out


@pytest.mark.parametrize("n", range(1, 6))
def test_basis_matches_brute_force(n):
    assert {d.partner for d in enumerate_basis(n)} == _brute_force_matchings(n)


def test_catalan():
    assert [catalan(n) for n in range(8)] == [1, 1, 2, 5, 14, 42, 132, 429]
    for n in range(1, 11):
        assert catalan(n) == comb(2 * n, n) // (n + 1)
        assert sum(standard_dim(n, t / 2) ** 2 for t in range(n % 2, n + 1, 2)) == catalan(n)


def test_compose_counts_loops():
    e1 = gen_e(1, 3)
    d, loops = e1.compose(e1)
    assert d == e1 and loops == 1
    ident = TlDiagram.identity(3)
    assert e1.compose(ident) == (e1, 0)


@pytest.mark.parametrize("n", range(2, 7))
def test_relations(n, exact):
    assert verify_tl_relations(n, exact).ok


def test_broken_composition_is_caught(exact):
    from tlfusion import _accel

    def no_loops(top, bottom, n):
        partner, _ = _accel.compose_tl(top, bottom, n)
        return partner, 0
    assert not verify_tl_relations(3, exact, compose=no_loops).ok


def test_braid_relation(exact):
    # g1 g2 g1 = g2 g1 g2 and g1 g1^-1 = 1
    lhs = word_eval(exact, ["g1", "g2", "g1"], 3)
    rhs = word_eval(exact, ["g2", "g1", "g2"], 3)
    assert lhs == rhs
    assert word_eval(exact, ["g1", "g1^-1"], 3) == word_eval(exact, [], 3)
