"""Fusion of Temperley-Lieb modules by induction.

The finite product ``M1 x M2`` is ``TL_{N1+N2} (x)_{TL_N1 (x) TL_N2} (M1 (x) M2)``
and is computed on the full diagram basis.  The affine product uses one of
the two embeddings of ``ATL_N1 (x) ATL_N2`` with crossing strands, and is
computed either on a bounded ball of diagrams (checking that the answer stops
growing) or through the affine Hecke algebra.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .atl import AffineDiagram, gen_e_affine, gen_u
from .hecke import zelevinsky_fuse
from .identify import Identification, clebsch_gordan, decompose_generic, identify_affine
from .induction import DirectSumInduced, Induced, Relation, ball, induce, require_invertible_m, tensor_actions
from .modules import ModuleRep, fmt_half, standard_affine, standard_finite
from .scalars import ConfigError, Field, Scalar
from .linalg import Matrix
from .tl import enumerate_basis, gen_e
from .towers import embed_affine_eps, embed_arc_finite


@dataclass
class FusionOutcome:
    """A fused module together with how it was obtained and what it was recognized as."""

    route: str
    module: ModuleRep
    left: ModuleRep
    right: ModuleRep
    status: str = "ok"  # "ok", "zero" or "inconclusive"
    induced: Induced | None = None
    decomposition: dict | None = None
    identification: Identification | None = None
    info: dict = dc_field(default_factory=dict)
    words: dict = dc_field(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        return self.module.dim

    def to_json(self) -> dict:
        out = {"route": self.route, "left": self.left.name, "right": self.right.name,
               "status": self.status, "dim": self.dim, **self.info}
        if self.induced is not None:
            out["dims_by_level"] = self.induced.dims_by_level
            out["stable_level"] = self.induced.stable_level
        if self.decomposition is not None:
            out["decomposition"] = {fmt_half(j): k for j, k in sorted(self.decomposition.items())}
        if self.identification is not None:
            out["identification"] = self.identification.to_json()
        return out


# ----------------------------------------------------------------- finite

_STANDARD_PRODUCTS: dict = {}


def _is_standard(M: ModuleRep) -> bool:
    return M.states is not None and M.j is not None and not M.is_affine


def _induce_finite(M1: ModuleRep, M2: ModuleRep) -> Induced:
    f = M1.field
    n1, n2 = M1.n, M2.n
    n = n1 + n2
    A, B = tensor_actions(M1, M2)
    rels = [Relation({gen_e(j, n): f.one}, A[f"e{j}"]) for j in range(1, n1)]
    rels += [Relation({gen_e(n1 + k, n): f.one}, B[f"e{k}"]) for k in range(1, n2)]
    left = {f"e{i}": {gen_e(i, n): f.one} for i in range(1, n)}
    return induce(f, algebra="finite", n=n, levels={d: 0 for d in enumerate_basis(n)}, relations=rels,
                  dim=M1.dim * M2.dim, left=left, name=f"({M1.name}) x ({M2.name})")


def standard_product(field: Field, n1: int, j1, n2: int, j2) -> Induced:
    """Memoized induction of a pair of finite standard modules."""
    key = (id(field), n1, Fraction(j1), n2, Fraction(j2))
    hit = _STANDARD_PRODUCTS.get(key)
    if hit is None or hit[0] is not field:
        ind = _induce_finite(standard_finite(field, n1, j1), standard_finite(field, n2, j2))
        hit = (field, ind)
        _STANDARD_PRODUCTS[key] = hit
    return hit[1]


def split_semisimple(M: ModuleRep) -> tuple[Matrix, list[tuple[Fraction, int, int]]]:
    """Change of basis ``Q`` exhibiting a finite module as a sum of standard modules.

    Returns ``Q`` (columns: embedded standard bases) and the list of summands as
    ``(j, offset, dim)``.  Raises ArithmeticError when the intertwiners do not
    span, i.e. the module is not semisimple over this field.
    """
    f = M.field
    n, dim = M.n, M.dim
    if _is_standard(M):
        return Matrix.eye(f, dim), [(M.j, 0, dim)]
    if n == 1:
        return Matrix.eye(f, dim), [(Fraction(1, 2), k, 1) for k in range(dim)]
    cols, summands, offset = [], [], 0
    for two_j in range(n % 2, n + 1, 2):
        j = Fraction(two_j, 2)
        W = standard_finite(f, n, j)
        dw = W.dim
        eq = Matrix.vstack([M.mats[t].kron(Matrix.eye(f, dw)) - Matrix.eye(f, dim).kron(W.mats[t].T)
                            for t in W.generators()])
        null = eq.nullspace()
        for k in range(null.shape[1]):
            cols.append(Matrix(f, null.a[:, k].reshape(dim, dw).copy()))
            summands.append((j, offset, dw))
            offset += dw
    if offset != dim:
        raise ArithmeticError(f"{M.name} is not semisimple over this field")
    Q = Matrix.hstack(cols)
    if Q.rank() != dim:
        raise ArithmeticError(f"{M.name} is not semisimple over this field")
    return Q, summands


def fuse_finite(M1: ModuleRep, M2: ModuleRep, decompose: bool = True) -> FusionOutcome:
    """``M1 x M2`` over the finite algebra on ``N1 + N2`` sites.

    Products of standard modules are induced directly (and memoized).  Other
    inputs are split into standard summands first and the pieces assembled.
    """
    if M1.is_affine or M2.is_affine:
        raise ConfigError("finite fusion takes finite modules")
    f = M1.field
    if _is_standard(M1) and _is_standard(M2):
        ind = standard_product(f, M1.n, M1.j, M2.n, M2.j)
    else:
        ind = _split_product(M1, M2)
    out = FusionOutcome("finite", ind.module, M1, M2, "ok" if ind.dim else "zero", ind)
    if decompose:
        out.decomposition = decompose_generic(ind.module)
    return out


def _split_product(M1: ModuleRep, M2: ModuleRep) -> DirectSumInduced:
    f = M1.field
    Q1, s1 = split_semisimple(M1)
    Q2, s2 = split_semisimple(M2)
    parts, blocks = [], []
    for j1, o1, d1 in s1:
        for j2, o2, d2 in s2:
            ind = standard_product(f, M1.n, j1, M2.n, j2)
            parts.append((ind, range(o1, o1 + d1), range(o2, o2 + d2)))
            blocks.append(ind.module)
    n = M1.n + M2.n
    mats = {t: Matrix.block_diag(f, [b.mats[t] for b in blocks]) for t in blocks[0].mats}
    module = ModuleRep(f, "finite", n, mats, [f"{b.name}:{x}" for b in blocks for x in b.basis],
                       name=f"({M1.name}) x ({M2.name})")
    Q = Q1.kron(Q2)
    span = parts[0][0].span_index
    return DirectSumInduced(module, parts, Q1.inv().kron(Q2.inv()), Q, M2.dim, span)


def expected_finite(j1, j2) -> dict[Fraction, int]:
    return clebsch_gordan(j1, j2)


def globalize(M: ModuleRep) -> ModuleRep:
    """Induce a finite module on ``N`` sites to ``N + 2`` sites along the arc idempotent.

    The span is the left ideal of diagrams ending in the arc on the last two
    sites, and the corner algebra acts through the arc embedding.
    """
    if M.is_affine:
        raise ConfigError("globalization is implemented for the finite algebra")
    require_invertible_m(M.field)
    f = M.field
    n = M.n
    big = n + 2
    arc = gen_e(big - 1, big)
    span = [d for d in enumerate_basis(big) if d.compose(arc)[0] == d]
    table = embed_arc_finite(f, n)
    rels = [Relation(dict(table.element((0, tok)).terms), M.mats[tok]) for tok in table.source_tokens(0)]
    left = {f"e{i}": {gen_e(i, big): f.one} for i in range(1, big)}
    ind = induce(f, algebra="finite", n=big, levels={d: 0 for d in span}, relations=rels,
                 dim=M.dim, left=left, name=f"G({M.name})")
    return ind.module


# ----------------------------------------------------------------- affine

def default_radius(n1: int, n2: int) -> int:
    return 2 * (n1 + n2) + 4


def affine_tokens(n: int) -> list[str]:
    return [f"e{i}" for i in range(n)] + ["u", "u^-1"]


def affine_span(n: int, radius: int, words: dict | None = None) -> dict:
    """Levels of the diagrams in the ball; ``words`` receives a token word for each."""
    gens = [gen_e_affine(i, n) for i in range(n)] + [gen_u(n, 1), gen_u(n, -1)]
    raw = {} if words is not None else None
    levels = ball(gens, AffineDiagram.identity(n), radius, raw)
    if words is not None:
        toks = affine_tokens(n)
        words.update({d: tuple(toks[k] for k in w) for d, w in raw.items()})
    return levels


def affine_left_action(f: Field, n: int) -> dict:
    left = {f"e{i}": {gen_e_affine(i, n): f.one} for i in range(n)}
    left["u"] = {gen_u(n, 1): f.one}
    left["u^-1"] = {gen_u(n, -1): f.one}
    return left


def fuse_affine_bounded(M1: ModuleRep, M2: ModuleRep, radius: int | None = None, chirality: int = 1,
                        hints=(), identify: bool = True) -> FusionOutcome:
    """Affine fusion on the ball of diagrams of word length at most ``radius``.

    The status is ``"inconclusive"`` unless the dimension of the image of the
    ball of radius ``l`` agrees for three consecutive ``l``.
    """
    if not (M1.is_affine and M2.is_affine):
        raise ConfigError("affine fusion takes affine modules")
    f = M1.field
    n1, n2 = M1.n, M2.n
    n = n1 + n2
    radius = default_radius(n1, n2) if radius is None else radius
    table = embed_affine_eps(f, n1, n2, chirality)
    A, B = tensor_actions(M1, M2)
    rels = [Relation(dict(table.element(key).terms), (A if key[0] == 0 else B)[key[1]])
            for key in table.keys()]
    tag = "+" if chirality == 1 else "-"
    name = f"({M1.name}) x{tag} ({M2.name})"
    words: dict = {}
    levels = affine_span(n, radius, words)
    ind = induce(f, algebra="affine", n=n, levels=levels, relations=rels,
                 dim=M1.dim * M2.dim, left=affine_left_action(f, n), name=name)
    status = "inconclusive" if not ind.stable else ("ok" if ind.dim else "zero")
    out = FusionOutcome(f"affine{tag}", ind.module, M1, M2, status, ind,
                        info={"radius": radius, "chirality": chirality})
    out.words = words
    if identify and status != "inconclusive":
        out.identification = identify_affine(ind.module, hints)
    return out


def fuse_affine_hecke(M1: ModuleRep, M2: ModuleRep, hints=(), identify: bool = True) -> FusionOutcome:
    """Affine fusion through the affine Hecke algebra (over-crossing embedding)."""
    Q, info = zelevinsky_fuse(M1, M2)
    out = FusionOutcome("affine-hecke", Q, M1, M2, "ok" if Q.dim else "zero", info=info)
    if identify:
        out.identification = identify_affine(Q, hints)
    return out


def fuse_affine(M1: ModuleRep, M2: ModuleRep, route: str = "bounded", **kw) -> FusionOutcome:
    if route in ("bounded", "affine"):
        return fuse_affine_bounded(M1, M2, **kw)
    if route in ("hecke", "affine-hecke"):
        kw.pop("radius", None)
        kw.pop("chirality", None)
        return fuse_affine_hecke(M1, M2, **kw)
    raise ConfigError(f"unknown affine route {route!r}")


def compare_routes(a: FusionOutcome, b: FusionOutcome) -> bool:
    """Same dimension and the same identification (both certified)."""
    if a.status == "inconclusive" or b.status == "inconclusive" or a.dim != b.dim:
        return False
    ia, ib = a.identification, b.identification
    if ia is None or ib is None:
        return a.dim == b.dim == 0
    if ia.kind == "non-standard module":
        # compare the modules themselves
        from .modules import find_intertwiner
        return ib.kind == ia.kind and find_intertwiner(a.module, b.module) is not None
    return ia.same_as(ib) and ia.certified and ib.certified


# ----------------------------------------------------------------- scans

def resonance_candidates(field: Field, z1: Scalar) -> dict[str, Scalar]:
    """The special values of ``z2`` relative to ``z1`` that can make a product nonzero."""
    q, s, i = field.q, field.s, field.i
    out: dict[str, Scalar] = {}
    for e, zz in ((1, z1), (-1, z1.inverse())):
        zt = "z1" if e == 1 else "z1^-1"
        out[zt] = zz
        for sign_q in (1, -1):
            qt = "q" if sign_q == 1 else "q^-1"
            out[f"-{qt}*{zt}"] = -(q ** sign_q) * zz
            for k in (1, 3):
                for pm in (1, -1):
                    pt = f"s^{k * sign_q}"
                    lab = ("" if pm == 1 else "-") + f"i*{pt}*{zt}"
                    out[lab] = i * s ** (k * sign_q) * zz * field.scalar(pm)
    return out


def random_points(field: Field, count: int, seed: int) -> dict[str, Scalar]:
    rng = random.Random(seed)
    out = {}
    while len(out) < count:
        if field.backend == "modp":
            v = field.scalar(rng.randrange(2, field.p - 1))
        else:
            v = field.scalar(Fraction(rng.randint(2, 97), rng.randint(1, 13)))
        out[f"random{len(out)}"] = v
    return out


@dataclass
class ScanRow:
    label: str
    z2: Scalar
    outcome: FusionOutcome


def scan_resonances(field: Field, n1: int, j1, n2: int, j2, z1: Scalar | None = None, route: str = "bounded",
                    n_random: int = 5, seed: int = 0, both_orders: bool = False, **kw) -> list[ScanRow]:
    """Fuse ``W_{j1,z1}[n1] x W_{j2,z2}[n2]`` at each candidate ``z2`` (and random ones).

    With ``both_orders`` the reversed product is computed too, labelled with a
    ``reverse:`` prefix.
    """
    z1 = field.z("z1") if z1 is None else z1
    cands = resonance_candidates(field, z1)
    cands.update(random_points(field, n_random, seed))
    M1 = standard_affine(field, n1, j1, z1)
    rows = []
    for lab, z2 in cands.items():
        M2 = standard_affine(field, n2, j2, z2)
        hints = list(cands.values()) + [z2]
        hints += [c * z2 for c in resonance_candidates(field, field.one).values()]
        rows.append(ScanRow(lab, z2, fuse_affine(M1, M2, route, hints=hints, **kw)))
        if both_orders:
            rows.append(ScanRow(f"reverse:{lab}", z2, fuse_affine(M2, M1, route, hints=hints, **kw)))
    return rows


def check_stability(small: FusionOutcome, large: FusionOutcome) -> bool:
    """The larger product is recognized as the same standard module (same ``j`` and ``z``)."""
    if small.status != large.status:
        return False
    if small.status == "zero":
        return True
    a, b = small.identification, large.identification
    return a is not None and b is not None and a.kind == "standard" and a.same_as(b)
