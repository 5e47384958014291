"""Associator, braiding and their coherence identities as explicit matrices.

All maps are built on symbols ``[a, v]`` of induced modules and then read
off in the stable bases, so composites are honest matrix products.  Products
are memoized per pair of module objects so that a module such as
``(M1 x M2) x M3`` has one basis shared by every map touching it.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .atl import AffineDiagram, AtlElement, word_eval_affine
from .fusion import FusionOutcome, fuse_affine_bounded, fuse_finite
from .linalg import Matrix
from .modules import ModuleRep
from .report import Report
from .scalars import Field
from .tl import TlDiagram, TlElement, word_eval
from .towers import braiding_inverse_word, braiding_word, embed_affine_eps


def juxtapose(d1: TlDiagram, d2: TlDiagram) -> TlDiagram:
    """``d1`` on the left sites and ``d2`` on the right sites."""
    n1, n2 = d1.n, d2.n
    n = n1 + n2

    def place1(k):
        return k if k < n1 else k - n1 + n

    def place2(k):
        return n1 + k if k < n2 else k - n2 + n + n1

    partner = [0] * (2 * n)
    for k in range(2 * n1):
        partner[place1(k)] = place1(d1.partner[k])
    for k in range(2 * n2):
        partner[place2(k)] = place2(d2.partner[k])
    return TlDiagram(n, partner)


def unit_vector(field: Field, dim: int, k: int) -> Matrix:
    v = Matrix.zeros(field, dim, 1)
    v.set_entry(k, 0, field.one)
    return v


class FusionCache:
    """Memoized fusion products; ``kind`` is ``"finite"`` or ``"affine"``."""

    def __init__(self, kind: str = "finite", radius: int | None = None):
        self.kind = kind
        self.radius = radius
        self._store: dict = {}

    def __call__(self, A: ModuleRep, B: ModuleRep, chirality: int = 1) -> FusionOutcome:
        key = (id(A), id(B), chirality)
        if key not in self._store:
            if self.kind == "finite":
                out = fuse_finite(A, B, decompose=False)
            else:
                out = fuse_affine_bounded(A, B, radius=self.radius, chirality=chirality, identify=False)
                if out.status == "inconclusive":
                    raise ArithmeticError(f"fusion of {A.name} and {B.name} did not stabilize")
            self._store[key] = (A, B, out)
        return self._store[key][2]


def swap_matrix(field: Field, d1: int, d2: int) -> Matrix:
    """``m1 (x) m2 -> m2 (x) m1`` on coordinates."""
    S = Matrix.zeros(field, d1 * d2, d1 * d2)
    for k1 in range(d1):
        for k2 in range(d2):
            S.set_entry(k2 * d1 + k1, k1 * d2 + k2, field.one)
    return S


# ----------------------------------------------------------------- symbol helpers

def _times(a, terms: dict, m) -> dict:
    """``a * x`` for a diagram ``a`` and ``x`` given as ``{diagram: coeff}``; ``m`` is the loop weight."""
    out: dict = {}
    for d, c in terms.items():
        x, loops = a.compose(d)
        if loops:
            c = c * m ** loops
        out[x] = out[x] + c if x in out else c
    return out


def _express(target: FusionOutcome, terms: dict, v: Matrix) -> Matrix:
    f = target.module.field
    acc = Matrix.zeros(f, target.dim, v.shape[1])
    for d, c in terms.items():
        if not c.is_zero():
            acc = acc + target.induced.express(d, v).scale(c)
    return acc


def _embed_left(cache: FusionCache, inner: FusionOutcome, b, n12: int, n3: int, f: Field,
                chirality: int = 1) -> dict:
    """``b (x) 1`` in the algebra on ``n12 + n3`` sites as ``{diagram: coeff}``."""
    if cache.kind == "finite":
        return {juxtapose(b, TlDiagram.identity(n3)): f.one}
    word = inner.words[b]
    scale = word_eval_affine(f, word, n12).coefficient(b)
    table = embed_affine_eps(f, n12, n3, chirality)
    x = AtlElement.identity(f, n12 + n3)
    for tok in word:
        x = x * table.element((0, tok))
    return dict(x.scale(scale.inverse()).terms)


def _identity_diagram(cache: FusionCache, n: int):
    return TlDiagram.identity(n) if cache.kind == "finite" else AffineDiagram.identity(n)


def _span_sample(out: FusionOutcome, limit: int | None, rng: random.Random, max_level: int | None = None):
    index = out.induced.span_index
    if max_level is not None and out.words:
        pool = [d for d in index if len(out.words.get(d, ())) <= max_level]
    else:
        pool = list(index)
    pool.sort()
    if limit is not None and len(pool) > limit:
        pool = rng.sample(pool, limit)
    return pool


# ----------------------------------------------------------------- associator

@dataclass
class MapResult:
    matrix: Matrix
    report: Report


def associator(cache: FusionCache, M1: ModuleRep, M2: ModuleRep, M3: ModuleRep,
               check_symbols: int | None = 400, seed: int = 0) -> MapResult:
    """``(M1 x M2) x M3 -> M1 x (M2 x M3)``, ``[a, [b, m1 m2] m3] -> [a (b x 1), m1 [1, m2 m3]]``."""
    f = M1.field
    X = cache(M1, M2)
    L = cache(X.module, M3)
    Y = cache(M2, M3)
    R = cache(M1, Y.module)
    d1, d2, d3 = M1.dim, M2.dim, M3.dim
    n12, n3, n23 = M1.n + M2.n, M3.n, M2.n + M3.n
    rep = Report(f"associator({M1.name}, {M2.name}, {M3.name})")
    # m1 (x) m2 (x) m3 -> m1 (x) [1, m2 m3]
    if Y.dim:
        inner = Matrix.eye(f, d1).kron(Y.induced.express(_identity_diagram(cache, n23), Matrix.eye(f, d2 * d3)))
    else:
        inner = Matrix.zeros(f, 0, d1 * d2 * d3)

    def image(a, b, z: Matrix) -> Matrix:
        return _express(R, _times(a, _embed_left(cache, X, b, n12, n3, f), f.m), inner @ z)

    xsyms = X.induced.symbols()
    cols = []
    for a, w in L.induced.symbols():
        col = Matrix.zeros(f, R.dim, 1)
        for t, (b, v) in enumerate(xsyms):
            part = Matrix(f, w.a[t * d3:(t + 1) * d3, :].copy())
            if not part.is_zero():
                col = col + image(a, b, v.kron(part))
        cols.append(col)
    A = Matrix.hstack(cols) if cols else Matrix.zeros(f, R.dim, 0)
    rep.add("dimensions agree", L.dim == R.dim, f"{L.dim} vs {R.dim}")
    if L.dim == R.dim:
        rep.add("bijective", A.rank() == L.dim)
    for tok in L.module.mats:
        rep.add(f"intertwines {tok}", A @ L.module.mats[tok] == R.module.mats[tok] @ A)
    if check_symbols and X.dim and L.dim:
        ok, count = _symbol_check(cache, X, L, A, image, d1 * d2, d3, check_symbols, seed)
        rep.add("well defined on symbols", ok and count > 0, f"{count} symbols")
    return MapResult(A, rep)


def _symbol_check(cache, X, L, A, image, d12, d3, limit, seed) -> tuple[bool, int]:
    """Compare the formula on arbitrary symbols with the matrix applied to their coordinates."""
    f = A.field
    rng = random.Random(seed)
    level = None
    if cache.kind == "affine":
        level = max(1, (L.induced.stable_level or 0) + 1)
    outer = _span_sample(L, None, rng, level)
    inner = _span_sample(X, None, rng, level)
    symbols = [(a, b, kx, l) for a in outer for b in inner for kx in range(d12) for l in range(d3)]
    if limit is not None and len(symbols) > limit:
        symbols = rng.sample(symbols, limit)
    count = 0
    for a, b, kx, l in symbols:
        ux, ul = unit_vector(f, d12, kx), unit_vector(f, d3, l)
        try:
            x = X.induced.express(b, ux)
            lhs = A @ L.induced.express(a, x.kron(ul))
            rhs = image(a, b, ux.kron(ul))
        except (KeyError, ArithmeticError):
            # the symbol reaches the boundary of a bounded span
            continue
        if lhs != rhs:
            return False, count
        count += 1
    return True, count


# ----------------------------------------------------------------- functoriality

def _induced_map(S: FusionOutcome, T: FusionOutcome, op: Matrix) -> Matrix:
    """The map ``[a, w] -> [a, op w]`` from ``S`` to ``T`` in their bases."""
    cols = [T.induced.express(a, op @ w) for a, w in S.induced.symbols()]
    return Matrix.hstack(cols) if cols else Matrix.zeros(op.field, T.dim, 0)


def tensor_map_left(cache: FusionCache, F: Matrix, src: ModuleRep, tgt: ModuleRep, M: ModuleRep,
                    chirality: int = 1) -> Matrix:
    """``F x id_M`` from ``src x M`` to ``tgt x M``."""
    S, T = cache(src, M, chirality), cache(tgt, M, chirality)
    return _induced_map(S, T, F.kron(Matrix.eye(M.field, M.dim)))


def tensor_map_right(cache: FusionCache, F: Matrix, M: ModuleRep, src: ModuleRep, tgt: ModuleRep,
                     chirality: int = 1) -> Matrix:
    """``id_M x F`` from ``M x src`` to ``M x tgt``."""
    S, T = cache(M, src, chirality), cache(M, tgt, chirality)
    return _induced_map(S, T, Matrix.eye(M.field, M.dim).kron(F))


def pentagon(cache: FusionCache, M1: ModuleRep, M2: ModuleRep, M3: ModuleRep, M4: ModuleRep) -> Report:
    """Both sides of the pentagon as maps ``((M1 M2) M3) M4 -> M1 (M2 (M3 M4))``."""
    rep = Report(f"pentagon({M1.name}, {M2.name}, {M3.name}, {M4.name})")
    M12 = cache(M1, M2).module
    M23 = cache(M2, M3).module
    M34 = cache(M3, M4).module
    M12_3 = cache(M12, M3).module
    M1_23 = cache(M1, M23).module
    M23_4 = cache(M23, M4).module
    a_1_2_34 = associator(cache, M1, M2, M34, check_symbols=None)
    a_12_3_4 = associator(cache, M12, M3, M4, check_symbols=None)
    a_1_23_4 = associator(cache, M1, M23, M4, check_symbols=None)
    a_1_2_3 = associator(cache, M1, M2, M3, check_symbols=None)
    a_2_3_4 = associator(cache, M2, M3, M4, check_symbols=None)
    for r in (a_1_2_34, a_12_3_4, a_1_23_4, a_1_2_3, a_2_3_4):
        rep.extend(r.report, "associator ")
    lhs = a_1_2_34.matrix @ a_12_3_4.matrix
    left = tensor_map_left(cache, a_1_2_3.matrix, M12_3, M1_23, M4)
    right = tensor_map_right(cache, a_2_3_4.matrix, M1, M23_4, cache(M2, M34).module)
    rhs = right @ a_1_23_4.matrix @ left
    rep.add("pentagon", lhs == rhs, f"dimension {lhs.shape[0]}")
    return rep


# ----------------------------------------------------------------- braiding

def _braid_element(cache: FusionCache, f: Field, n1: int, n2: int, inverse: bool):
    word = braiding_inverse_word(n1, n2) if inverse else braiding_word(n1, n2)
    n = n1 + n2
    x = word_eval(f, word, n) if cache.kind == "finite" else word_eval_affine(f, word, n)
    return dict(x.terms), word


def braiding(cache: FusionCache, M1: ModuleRep, M2: ModuleRep, target_chirality: int = 1,
             source_chirality: int = 1, use_inverse: bool = True) -> tuple[MapResult, Matrix]:
    """The isomorphism ``[a, m1 m2] -> [a g^-1, m2 m1]`` and the conjugated form ``[g a g^-1, m2 m1]``.

    ``g`` passes the first block of strands across the second.  The first map
    intertwines the actions directly; the second intertwines ``a'`` on the
    source with ``g a' g^-1`` on the target.  Returns the first with its
    report, and the matrix of the second.
    """
    f = M1.field
    S = cache(M1, M2, source_chirality)
    T = cache(M2, M1, target_chirality)
    d1, d2 = M1.dim, M2.dim
    # use_inverse=False multiplies by g instead; kept as a negative control
    ginv, _ = _braid_element(cache, f, M1.n, M2.n, inverse=use_inverse)
    rep = Report(f"braiding({M1.name}, {M2.name})")

    swap = swap_matrix(f, d1, d2)

    def image(a, w: Matrix) -> Matrix:
        return _express(T, _times(a, ginv, f.m), swap @ w)

    cols = [image(a, w) for a, w in S.induced.symbols()]
    C = Matrix.hstack(cols) if cols else Matrix.zeros(f, T.dim, 0)
    rep.add("dimensions agree", S.dim == T.dim, f"{S.dim} vs {T.dim}")
    if S.dim == T.dim:
        rep.add("bijective", C.rank() == S.dim)
    for tok in S.module.mats:
        rep.add(f"intertwines {tok}", C @ S.module.mats[tok] == T.module.mats[tok] @ C)
    G = T.module.word_matrix(braiding_word(M1.n, M2.n))
    conj = G @ C
    Ginv = T.module.word_matrix(braiding_inverse_word(M1.n, M2.n))
    for tok in S.module.mats:
        rep.add(f"conjugated form intertwines {tok}",
                conj @ S.module.mats[tok] == G @ T.module.mats[tok] @ Ginv @ conj)
    if S.dim:
        ok, count = _braid_symbols(S, C, image, d1 * d2)
        rep.add("well defined on symbols", ok and count > 0, f"{count} symbols")
    return MapResult(C, rep), conj


def _braid_symbols(S: FusionOutcome, C: Matrix, image, dim: int, limit: int = 400,
                   seed: int = 0) -> tuple[bool, int]:
    f = C.field
    rng = random.Random(seed)
    level = (S.induced.stable_level or 0) + 1 if S.words else None
    pool = _span_sample(S, None, rng, level)
    symbols = [(a, k) for a in pool for k in range(dim)]
    if len(symbols) > limit:
        symbols = rng.sample(symbols, limit)
    count = 0
    for a, k in symbols:
        try:
            u = unit_vector(f, dim, k)
            lhs = C @ S.induced.express(a, u)
            rhs = image(a, u)
        except (KeyError, ArithmeticError):
            continue
        if lhs != rhs:
            return False, count
        count += 1
    return True, count


def hexagons(cache: FusionCache, M1: ModuleRep, M2: ModuleRep, M3: ModuleRep) -> Report:
    """The two hexagon identities for the braiding isomorphism."""
    rep = Report(f"hexagons({M1.name}, {M2.name}, {M3.name})")
    M12, M21 = cache(M1, M2).module, cache(M2, M1).module
    M23, M32 = cache(M2, M3).module, cache(M3, M2).module
    M13, M31 = cache(M1, M3).module, cache(M3, M1).module
    c = lambda A, B: braiding(cache, A, B)[0]
    a = lambda A, B, C: associator(cache, A, B, C, check_symbols=None)
    parts = {}
    parts["c(1,23)"] = c(M1, M23)
    parts["c(1,2)"] = c(M1, M2)
    parts["c(1,3)"] = c(M1, M3)
    parts["c(12,3)"] = c(M12, M3)
    parts["c(2,3)"] = c(M2, M3)
    parts["a(1,2,3)"] = a(M1, M2, M3)
    parts["a(2,3,1)"] = a(M2, M3, M1)
    parts["a(2,1,3)"] = a(M2, M1, M3)
    parts["a(3,1,2)"] = a(M3, M1, M2)
    parts["a(1,3,2)"] = a(M1, M3, M2)
    for name, r in parts.items():
        rep.extend(r.report, f"{name} ")
    P = {k: v.matrix for k, v in parts.items()}
    lhs = P["a(2,3,1)"] @ P["c(1,23)"] @ P["a(1,2,3)"]
    rhs = tensor_map_right(cache, P["c(1,3)"], M2, M13, M31) @ P["a(2,1,3)"] @ \
        tensor_map_left(cache, P["c(1,2)"], M12, M21, M3)
    rep.add("hexagon 1", lhs == rhs, f"dimension {lhs.shape[0]}")
    lhs = P["a(3,1,2)"].inv() @ P["c(12,3)"] @ P["a(1,2,3)"].inv()
    rhs = tensor_map_left(cache, P["c(1,3)"], M13, M31, M2) @ P["a(1,3,2)"].inv() @ \
        tensor_map_right(cache, P["c(2,3)"], M1, M23, M32)
    rep.add("hexagon 2", lhs == rhs, f"dimension {lhs.shape[0]}")
    return rep


def semibraiding(cache: FusionCache, M1: ModuleRep, M2: ModuleRep) -> tuple[MapResult, Matrix]:
    """From the over-crossing product ``M1 x M2`` to the under-crossing product ``M2 x M1``."""
    if cache.kind != "affine":
        raise ValueError("the semi-braiding lives on affine products")
    return braiding(cache, M1, M2, target_chirality=-1, source_chirality=1)


# ----------------------------------------------------------------- algebra-level identities

def conjugation_swaps_factors(field: Field, n1: int, n2: int, affine: bool = False) -> Report:
    """``g x(a (x) b) = x'(b (x) a) g`` for every generator, ``g`` passing the first block over the second.

    In the finite algebra ``x`` and ``x'`` are the side-by-side embeddings; in
    the affine algebra ``x`` is the over-crossing embedding of the pair
    ``(n1, n2)`` and ``x'`` the under-crossing embedding of ``(n2, n1)``.
    """
    from .towers import embed_pair_finite

    n = n1 + n2
    word = braiding_word(n1, n2)
    g = word_eval_affine(field, word, n) if affine else word_eval(field, word, n)
    if affine:
        src, tgt = embed_affine_eps(field, n1, n2, 1), embed_affine_eps(field, n2, n1, -1)
    else:
        src, tgt = embed_pair_finite(field, n1, n2), embed_pair_finite(field, n2, n1)
    rep = Report(f"{'semi-braiding' if affine else 'braid conjugation'} identities ({n1},{n2})")
    for fac, tok in src.keys():
        lhs = g * src.element((fac, tok))
        rhs = tgt.element((1 - fac, tok)) * g
        rep.add(f"g {tok}^({fac + 1}) = {tok}~^({2 - fac}) g", lhs == rhs)
    return rep
