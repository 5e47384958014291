"""Verification suites shared by the command line and the test-suite.

Each suite returns a :class:`Report`; a suite passes when every check does.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import comb

from .atl import verify_atl_relations
from .axioms import (FusionCache, associator, braiding, conjugation_swaps_factors, hexagons, pentagon,
                     semibraiding)
from .fusion import (check_stability, compare_routes, expected_finite, fuse_affine_bounded, fuse_affine_hecke,
                     fuse_finite, globalize, random_points)
from .identify import Identification
from .linalg import Matrix
from .modules import (ModuleRep, affine_link_states, bar_module, finite_link_states, fmt_half,
                      simple_dims_at_root, standard_affine, standard_finite, verify_module)
from .report import Report
from .scalars import Field
from .tl import catalan, enumerate_basis, standard_dim, verify_tl_relations
from .towers import (embed_affine_eps, embed_affine_psi, ideal_image, isomorphic, localize, verify_embedding)


def spins(n: int) -> list[Fraction]:
    return [Fraction(t, 2) for t in range(n % 2, n + 1, 2)]


# ----------------------------------------------------------------- dimensions

def suite_dims(max_n: int = 10, max_affine: int = 8) -> Report:
    rep = Report("dimensions")
    for n in range(1, max_n + 1):
        basis = len(enumerate_basis(n))
        rep.add(f"N={n}: |basis| = Catalan", basis == catalan(n), f"{basis}")
        total = 0
        for j in spins(n):
            d = len(finite_link_states(n, int(2 * j)))
            k = (n - int(2 * j)) // 2
            formula = comb(n, k) - (comb(n, k - 1) if k >= 1 else 0)
            rep.add(f"N={n} j={fmt_half(j)}: d_j formula", d == formula == standard_dim(n, j), f"{d}")
            total += d * d
        rep.add(f"N={n}: sum d_j^2 = dim TL_N", total == catalan(n), f"{total}")
    for n in range(1, max_affine + 1):
        for j in spins(n):
            d = len(affine_link_states(n, int(2 * j)))
            rep.add(f"N={n} j={fmt_half(j)}: affine dim = binomial", d == comb(n, (n + int(2 * j)) // 2), f"{d}")
    return rep


def dims_table(max_n: int, root_p: int | None = None) -> list[dict]:
    rows = []
    for n in range(1, max_n + 1):
        roots = simple_dims_at_root(n, root_p) if root_p else {}
        for j in spins(n):
            row = {"N": n, "j": fmt_half(j), "dim_TL": catalan(n), "d_j": standard_dim(n, j),
                   "affine_dim": comb(n, (n + int(2 * j)) // 2)}
            if root_p:
                row["simple_dim"] = roots[j]["rank"]
                row["simple_dim_recursion"] = roots[j]["recursion"]
            rows.append(row)
    return rows


# ----------------------------------------------------------------- algebras

def suite_tl(field: Field, max_n: int = 6) -> Report:
    rep = Report("finite relations")
    for n in range(2, max_n + 1):
        rep.extend(verify_tl_relations(n, field), f"N={n}: ")
    return rep


def suite_atl(field: Field, max_n: int = 4) -> Report:
    rep = Report("affine relations")
    for n in range(2, max_n + 1):
        rep.extend(verify_atl_relations(n, field), f"N={n}: ")
    return rep


# ----------------------------------------------------------------- embeddings

SEMIBRAIDING_PAIRS = ((1, 1), (1, 2), (2, 1), (3, 2))


def suite_embeddings(field: Field, max_sum: int = 5, pairs=None) -> Report:
    rep = Report("embeddings")
    pairs = pairs or [(a, b) for a in range(1, max_sum) for b in range(1, max_sum - a + 1)]
    for n1, n2 in pairs:
        for c in (1, -1):
            rep.extend(verify_embedding(embed_affine_eps(field, n1, n2, c)), f"eps{'+' if c == 1 else '-'}"
                                                                              f"({n1},{n2}) ")
    for n in range(1, max_sum - 1):
        table = embed_affine_psi(field, n)
        rep.extend(verify_embedding(table), f"psi({n}) ")
        if n >= 2:
            # u^2 e_{N-1} and the chain e_1...e_{N-1} both land on m^-1 e_1...e_{N-1} e_{N+1}
            from .atl import word_eval_affine
            lhs = table.element((0, "u")) * table.element((0, "u")) * table.element((0, f"e{n - 1}"))
            chain = table.element("unit")
            for a in range(1, n):
                chain = chain * table.element((0, f"e{a}"))
            target = word_eval_affine(field, [f"e{a}" for a in range(1, n)] + [f"e{n + 1}"], n + 2)
            target = target.scale(field.m.inverse())
            rep.add(f"psi({n}) u^2 e{n - 1} image", lhs == target)
            rep.add(f"psi({n}) chain image", chain == target)
    for n1, n2 in SEMIBRAIDING_PAIRS:
        rep.extend(conjugation_swaps_factors(field, n1, n2, affine=True), "")
    return rep


# ----------------------------------------------------------------- functors

def restrict_to(M: ModuleRep, B: Matrix, name: str) -> ModuleRep:
    mats = {}
    for tok, A in M.mats.items():
        X = B.solve(A @ B)
        if X is None:
            raise ArithmeticError(f"{tok} does not preserve the subspace")
        mats[tok] = X
    return ModuleRep(M.field, M.algebra, M.n, mats, [f"v{k}" for k in range(B.shape[1])], name=name)


def suite_functors(field: Field, max_n: int = 6, max_affine: int | None = None) -> Report:
    """Localization of standards, and both composites of localization with globalization."""
    rep = Report("functors")
    max_affine = max_n if max_affine is None else max_affine
    z = field.z("z")
    for big in range(3, max_n + 1):
        for j in spins(big):
            W = standard_finite(field, big, j)
            L = localize(W)
            if 2 * j <= big - 2:
                ok = isomorphic(L, standard_finite(field, big - 2, j))
            else:
                ok = L.dim == 0
            rep.add(f"L(W_{fmt_half(j)}[{big}]) = W_{fmt_half(j)}[{big - 2}]", ok)
            I = ideal_image(W)
            GL = globalize(L) if L.dim else None
            if GL is None:
                rep.add(f"G L W_{fmt_half(j)}[{big}] = I_e W", I.shape[1] == 0)
            else:
                rep.add(f"G L W_{fmt_half(j)}[{big}] = I_e W", isomorphic(GL, restrict_to(W, I, "IeW")))
    for big in range(3, max_affine + 1):
        for j in spins(big):
            W = standard_affine(field, big, j, z)
            L = localize(W)
            if 2 * j <= big - 2:
                std = standard_affine(field, big - 2, j, z)
                ok = isomorphic(L, std) and verify_module(L).ok
                power = L.mats["u"] ** (big - 2) == L.identity().scale(z ** int(2 * j))
                rep.add(f"L(W_{fmt_half(j)},z[{big}]) = W_{fmt_half(j)},z[{big - 2}]", ok)
                rep.add(f"L(W_{fmt_half(j)},z[{big}]): u^{big - 2} = z^{int(2 * j)}", power)
            else:
                rep.add(f"L(W_{fmt_half(j)},z[{big}]) = 0", L.dim == 0)
    for n in range(1, max_n - 1):
        for j in spins(n):
            W = standard_finite(field, n, j)
            G = globalize(W)
            rep.add(f"L G W_{fmt_half(j)}[{n}] = W", isomorphic(localize(G), W),
                    f"dim G = {G.dim}")
    return rep


# ----------------------------------------------------------------- finite fusion

def suite_finite_fusion(fields: list[Field], max_sum: int = 8) -> Report:
    rep = Report("finite fusion")
    for f in fields:
        tag = f"p={f.p} seed={f.seed}" if f.backend == "modp" else f.backend
        for n1 in range(1, max_sum):
            for n2 in range(1, max_sum - n1 + 1):
                for j1, j2 in product(spins(n1), spins(n2)):
                    out = fuse_finite(standard_finite(f, n1, j1), standard_finite(f, n2, j2))
                    want = expected_finite(j1, j2)
                    rep.add(f"[{tag}] W_{fmt_half(j1)}[{n1}] x W_{fmt_half(j2)}[{n2}]",
                            out.decomposition == want,
                            f"dim {out.dim}, got {_fmt_dec(out.decomposition)}")
    return rep


def _fmt_dec(dec) -> str:
    if dec is None:
        return "no fit"
    return "+".join(f"{k}*W_{fmt_half(j)}" if k > 1 else f"W_{fmt_half(j)}" for j, k in sorted(dec.items()))


# ----------------------------------------------------------------- affine examples

def _both(M1, M2, hints, radius=None):
    a = fuse_affine_bounded(M1, M2, radius=radius, hints=hints)
    b = fuse_affine_hecke(M1, M2, hints=hints)
    return a, b


def _std_is(ident: Identification | None, j, z=None, loop_sq=None) -> bool:
    if ident is None or ident.kind != "standard" or ident.j != Fraction(j):
        return False
    if loop_sq is not None:
        return ident.loop_weight_sq == loop_sq
    return ident.z == z


def suite_affine_examples(field: Field, n_random: int = 5, seed: int = 0) -> Report:
    """Worked affine fusions by both routes, plus the appendix quotient and generic zeros."""
    rep = Report("affine worked examples")
    q, s, i = field.q, field.s, field.i
    z1 = field.z("z1")
    W = lambda n, j, z: standard_affine(field, n, j, z)

    z2 = -q * z1
    a, b = _both(W(1, "1/2", z1), W(1, "1/2", z2), [z1, z2, i * s * z1])
    rep.add("1+1 at z2 = -q z1: dimension 1", a.dim == b.dim == 1)
    rep.add("1+1 at z2 = -q z1: W_1 with z = i q^1/2 z1", _std_is(a.identification, 1, i * s * z1))
    rep.add("1+1 at z2 = -q z1: routes agree", compare_routes(a, b))

    z2 = z1.inverse()
    w = -i / s * z1
    a, b = _both(W(1, "1/2", z1), W(1, "1/2", z2), [z1, z2, w])
    sq = (w + w.inverse()) ** 2
    rep.add("1+1 at z2 = 1/z1: dimension 2", a.dim == b.dim == 2)
    rep.add("1+1 at z2 = 1/z1: W_0 with z = -i q^-1/2 z1 up to sign", _std_is(a.identification, 0, loop_sq=sq))
    rep.add("1+1 at z2 = 1/z1: routes agree", compare_routes(a, b))

    z2 = -i * q * s * z1
    a, b = _both(W(1, "1/2", z1), W(2, 1, z2), [z1, z2, -q * z1])
    rep.add("1+2 at z2 = -i q^3/2 z1: W_3/2 with z = -q z1", _std_is(a.identification, "3/2", -q * z1)
            and a.dim == 1)
    rep.add("1+2 at z2 = -i q^3/2 z1: routes agree", compare_routes(a, b))

    B = bar_module(field)
    zr = i * q * s
    a, b = _both(B, W(1, "1/2", zr), [zr])
    cube = a.module.mats["u"] ** 3 if a.dim else None
    rep.add("quotient x W_1/2 at z = i q^3/2: dimension 2", a.dim == b.dim == 2)
    rep.add("quotient x W_1/2 at z = i q^3/2: u^3 = i q^3/2",
            cube is not None and cube == a.module.identity().scale(zr))
    rep.add("quotient x W_1/2 at z = i q^3/2: routes agree", compare_routes(a, b))
    others = [-zr, zr.inverse(), q * zr, -i * s * s * s, field.one] + \
        list(random_points(field, n_random, seed + 7).values())
    for k, z in enumerate(others):
        a, b = _both(B, W(1, "1/2", z), [z])
        rep.add(f"quotient x W_1/2 at non-resonant z #{k}: zero", a.dim == 0 and b.dim == 0 and
                a.status == "zero")

    pts = list(random_points(field, 2 * n_random, seed).values())
    for k in range(n_random):
        za, zb = pts[2 * k], pts[2 * k + 1]
        a, b = _both(W(1, "1/2", za), W(1, "1/2", zb), [])
        rep.add(f"1+1 at random pair #{k}: zero by both routes", a.status == "zero" and b.dim == 0)
        a, b = _both(W(1, "1/2", za), W(2, 1, zb), [])
        rep.add(f"1+2 at random pair #{k}: zero by both routes", a.status == "zero" and b.dim == 0)
    return rep


def suite_stability(field: Field) -> Report:
    """Resonant outcomes on few sites recur with the same label on more sites."""
    rep = Report("fusion-rule stability")
    q, s, i = field.q, field.s, field.i
    z1 = field.z("z1")
    W = lambda n, j, z: standard_affine(field, n, j, z)
    cases = [("-q z1", -q * z1, "1/2", 1, "1/2", 1, [(1, 3), (3, 1)]),
             ("1/z1", z1.inverse(), "1/2", 1, "1/2", 1, [(1, 3), (3, 1)]),
             ("-i q^3/2 z1", -i * q * s * z1, "1/2", 1, 1, 2, [(3, 2)])]
    for lab, z2, j1, n1, j2, n2, bigger in cases:
        hints = [z1, z2, i * s * z1, -i / s * z1, -q * z1]
        small = fuse_affine_bounded(W(n1, j1, z1), W(n2, j2, z2), hints=hints)
        small_h = fuse_affine_hecke(W(n1, j1, z1), W(n2, j2, z2), hints=hints)
        for m1, m2 in bigger:
            big = fuse_affine_bounded(W(m1, j1, z1), W(m2, j2, z2), hints=hints)
            big_h = fuse_affine_hecke(W(m1, j1, z1), W(m2, j2, z2), hints=hints)
            rep.add(f"{n1}+{n2} at z2 = {lab} recurs at {m1}+{m2}", check_stability(small, big),
                    f"{small.identification.label()} vs {big.identification.label()}")
            rep.add(f"{m1}+{m2} at z2 = {lab}: routes agree", compare_routes(big, big_h))
        rep.add(f"{n1}+{n2} at z2 = {lab}: routes agree", compare_routes(small, small_h))
    return rep


def suite_noncommutativity(field: Field) -> Report:
    rep = Report("noncommutativity")
    z1 = field.z("z1")
    z2 = -field.q * z1
    M1, M2 = standard_affine(field, 1, "1/2", z1), standard_affine(field, 1, "1/2", z2)
    fwd, fwd_h = _both(M1, M2, [])
    rev, rev_h = _both(M2, M1, [])
    rep.add("forward product at z2 = -q z1 is nonzero", fwd.dim > 0 and fwd_h.dim > 0, f"dim {fwd.dim}")
    rep.add("reverse product at z2 = -q z1 is zero", rev.status == "zero" and rev_h.dim == 0)
    return rep


# ----------------------------------------------------------------- axioms

def small_standards(field: Field, max_site: int = 2) -> list[ModuleRep]:
    return [standard_finite(field, n, j) for n in range(1, max_site + 1) for j in spins(n)]


def suite_axioms(field: Field, max_site: int = 2, do_pentagon: bool = True, do_hexagon: bool = True,
                 do_semibraiding: bool = True, symbols: int = 200) -> Report:
    rep = Report("categorical axioms")
    cache = FusionCache("finite")
    mods = small_standards(field, max_site)
    for a, b, c in product(mods, repeat=3):
        r = associator(cache, a, b, c, check_symbols=symbols)
        rep.extend(r.report, "")
        if r.report.ok:
            eye = Matrix.eye(field, r.matrix.shape[0])
            rep.add(f"associator({a.name}, {b.name}, {c.name}) inverse", r.matrix.inv() @ r.matrix == eye)
    for a, b in product(mods, repeat=2):
        rep.extend(braiding(cache, a, b)[0].report, "")
    for n1 in range(1, max_site + 1):
        for n2 in range(1, max_site + 1):
            rep.extend(conjugation_swaps_factors(field, n1, n2), "")
    if do_pentagon:
        for quad in product(mods, repeat=4):
            r = pentagon(cache, *quad)
            rep.add(r.title, r.ok, "; ".join(c.name for c in r.failures))
    if do_hexagon:
        for tri in product(mods, repeat=3):
            r = hexagons(cache, *tri)
            for c in r.checks:
                if c.name.startswith("hexagon"):
                    rep.add(f"{r.title} {c.name}", c.ok and r.ok, c.detail)
    if do_semibraiding:
        acache = FusionCache("affine")
        z1 = field.z("z1")
        M1 = standard_affine(field, 1, "1/2", z1)
        M2 = standard_affine(field, 1, "1/2", -field.q * z1)
        rep.extend(semibraiding(acache, M1, M2)[0].report, "semi-braiding ")
    return rep


# ----------------------------------------------------------------- roots of unity

def suite_roots(ps=(3, 4), max_n: int = 8) -> Report:
    rep = Report("roots of unity")
    for p in ps:
        for n in range(1, max_n + 1):
            for j, row in simple_dims_at_root(n, p).items():
                rep.add(f"p={p} N={n} j={fmt_half(j)}: Gram rank = recursion", row["rank"] == row["recursion"],
                        f"rank {row['rank']}, recursion {row['recursion']}, standard {row['standard']}")
    return rep
