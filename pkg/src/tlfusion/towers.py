"""Embeddings between Temperley-Lieb algebras and the arc-tower functors.

An :class:`EmbeddingTable` sends each generator of a source algebra (or of a
pair of source algebras) to a scalar times a word in the generators of the
target algebra.  Words can be expanded into diagram combinations for exact
identity checks, or turned into matrices on any target module.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .atl import AtlElement, token_affine
from .linalg import Matrix
from .modules import ModuleRep, find_intertwiner
from .report import Report
from .scalars import DegenerateScalar, Field, Scalar
from .tl import TlElement, e_element, braid_g, parse_token


@dataclass
class Image:
    coeff: Scalar
    word: tuple[str, ...]


@dataclass
class EmbeddingTable:
    """Generator images for an embedding into ``(kind, target)``.

    ``sources`` lists the sizes of the source factors; keys of ``images`` are
    ``(factor, token)`` with ``factor`` counted from 0.  ``unit`` is the image of
    the identity, which is an idempotent for corner embeddings.
    """

    field: Field
    kind: str
    sources: list[int]
    target: int
    images: dict[tuple[int, str], Image]
    unit: Image
    name: str = ""
    _cache: dict = dc_field(default_factory=dict, repr=False)

    def source_tokens(self, factor: int) -> list[str]:
        n = self.sources[factor]
        if self.kind == "affine":
            es = [f"e{k}" for k in range(n)] if n >= 2 else []
            return es + ["u", "u^-1"]
        return [f"e{k}" for k in range(1, n)]

    def keys(self) -> list[tuple[int, str]]:
        return [(f, t) for f in range(len(self.sources)) for t in self.source_tokens(f)]

    def _expand(self, img: Image):
        if self.kind == "affine":
            out = AtlElement.identity(self.field, self.target)
            for tok in img.word:
                out = out * token_affine(self.field, tok, self.target)
        else:
            out = TlElement.identity(self.field, self.target)
            for tok in img.word:
                kind, idx, sign = parse_token(tok)
                gen = e_element(self.field, idx, self.target) if kind == "e" else braid_g(
                    self.field, idx, self.target, sign)
                out = out * gen
        return out.scale(img.coeff)

    def element(self, key) -> "AtlElement | TlElement":
        """Image of a generator (or ``"unit"``) expanded into diagrams."""
        if key not in self._cache:
            img = self.unit if key == "unit" else self.images[key]
            self._cache[key] = self._expand(img)
        return self._cache[key]

    def matrix(self, key, M: ModuleRep) -> Matrix:
        """Action of the image of a generator on a target module."""
        img = self.unit if key == "unit" else self.images[key]
        return M.word_matrix(img.word).scale(img.coeff)

    def to_json(self) -> dict:
        return {"name": self.name, "kind": self.kind, "sources": self.sources, "target": self.target,
                "images": {f"{f}:{t}": {"coeff": str(i.coeff), "word": list(i.word)}
                           for (f, t), i in self.images.items()},
                "unit": {"coeff": str(self.unit.coeff), "word": list(self.unit.word)}}


def _g(i: int, sign: int) -> str:
    return f"g{i}" if sign == 1 else f"g{i}^-1"


# ------------------------------------------------------------------ finite

def embed_standard_finite(field: Field, n: int, n_big: int) -> EmbeddingTable:
    """TL_n into TL_n_big by adding strands on the right."""
    if n > n_big:
        raise ValueError(f"cannot embed {n} sites into {n_big}")
    one = field.one
    images = {(0, f"e{j}"): Image(one, (f"e{j}",)) for j in range(1, n)}
    return EmbeddingTable(field, "finite", [n], n_big, images, Image(one, ()), f"std({n}->{n_big})")


def embed_pair_finite(field: Field, n1: int, n2: int) -> EmbeddingTable:
    """TL_n1 (x) TL_n2 side by side inside TL_{n1+n2}."""
    one = field.one
    images = {(0, f"e{j}"): Image(one, (f"e{j}",)) for j in range(1, n1)}
    images.update({(1, f"e{k}"): Image(one, (f"e{n1 + k}",)) for k in range(1, n2)})
    return EmbeddingTable(field, "finite", [n1, n2], n1 + n2, images, Image(one, ()), f"pair({n1},{n2})")


def _require_m(field: Field):
    if field.m.is_zero():
        raise DegenerateScalar("the loop weight m vanishes, so the arc idempotent e/m is undefined")


def embed_arc_finite(field: Field, n: int) -> EmbeddingTable:
    """TL_n as the corner algebra of TL_{n+2} cut out by the arc idempotent on the last two sites."""
    _require_m(field)
    im = field.m.inverse()
    arc = f"e{n + 1}"
    images = {(0, f"e{j}"): Image(im * im, (arc, f"e{j}", arc)) for j in range(1, n)}
    return EmbeddingTable(field, "finite", [n], n + 2, images, Image(im, (arc,)), f"arc({n})")


# ------------------------------------------------------------------ affine

def embed_affine_eps(field: Field, n1: int, n2: int, chirality: int = 1) -> EmbeddingTable:
    """ATL_n1 (x) ATL_n2 into ATL_{n1+n2}; ``chirality=-1`` exchanges over- and under-crossings."""
    if n1 < 1 or n2 < 1:
        raise ValueError("both factors need at least one site")
    c = 1 if chirality in (1, "+") else -1
    n = n1 + n2
    one = field.one
    img: dict[tuple[int, str], Image] = {}
    for j in range(1, n1):
        img[(0, f"e{j}")] = Image(one, (f"e{j}",))
    for k in range(1, n2):
        img[(1, f"e{k}")] = Image(one, (f"e{n1 + k}",))
    # first factor: the strand leaving site n1 crosses the second block
    down = tuple(_g(i, -c) for i in range(n - 1, n1 - 1, -1))
    up = tuple(_g(i, c) for i in range(n1, n))
    img[(0, "u")] = Image(one, ("u",) + down)
    img[(0, "u^-1")] = Image(one, up + ("u^-1",))
    # second factor: the strand entering at site 1 crosses the first block
    left = tuple(_g(i, c) for i in range(n1, 0, -1))
    right = tuple(_g(i, -c) for i in range(1, n1 + 1))
    img[(1, "u")] = Image(one, left + ("u",))
    img[(1, "u^-1")] = Image(one, ("u^-1",) + right)
    if n1 >= 2:
        img[(0, "e0")] = Image(one, up + ("e0",) + down)
    if n2 >= 2:
        conj = tuple(_g(i, -c) for i in range(0, n1))
        back = tuple(_g(i, c) for i in range(n1 - 1, -1, -1))
        img[(1, "e0")] = Image(one, conj + (f"e{n1}",) + back)
    tag = "+" if c == 1 else "-"
    return EmbeddingTable(field, "affine", [n1, n2], n, img, Image(one, ()), f"eps{tag}({n1},{n2})")


def embed_affine_psi(field: Field, n: int) -> EmbeddingTable:
    """ATL_n as the corner of ATL_{n+2} cut out by the arc idempotent on sites n+1, n+2."""
    _require_m(field)
    im = field.m.inverse()
    arc = f"e{n + 1}"
    img: dict[tuple[int, str], Image] = {}
    img[(0, "u")] = Image(im, (arc, "u", arc))
    img[(0, "u^-1")] = Image(im, (arc, "u^-1", arc))
    if n >= 2:
        for j in range(1, n):
            img[(0, f"e{j}")] = Image(im, (arc, f"e{j}"))
        img[(0, "e0")] = Image(im, (arc, f"e{n}", f"e{(n + 2) % (n + 2)}", arc))
    return EmbeddingTable(field, "affine", [n], n + 2, img, Image(im, (arc,)), f"psi({n})")


def braiding_word(n1: int, n2: int) -> tuple[str, ...]:
    """Word for the element passing the left ``n1`` strands over the right ``n2`` strands."""
    word = []
    for k in range(n1):
        word.extend(_g(i, -1) for i in range(n2 + k, k, -1))
    return tuple(word)


def braiding_inverse_word(n1: int, n2: int) -> tuple[str, ...]:
    return tuple(_g(int(t[1:].split("^")[0]), 1) for t in reversed(braiding_word(n1, n2)))


# ------------------------------------------------------------------ verification

def _relations(t: EmbeddingTable, factor: int):
    """Yield (name, lhs, rhs) for the defining relations of one source factor, as diagram elements."""
    n = t.sources[factor]
    E = lambda tok: t.element((factor, tok))
    unit = t.element("unit")
    m = t.field.m
    if t.kind == "affine":
        idx = list(range(n)) if n >= 2 else []
        yield "u u^-1 = 1", E("u") * E("u^-1"), unit
        yield "u^-1 u = 1", E("u^-1") * E("u"), unit
    else:
        idx = list(range(1, n))
    for a in idx:
        ea = E(f"e{a}")
        yield f"e{a}^2 = m e{a}", ea * ea, ea.scale(m)
        for b in idx:
            if b == a:
                continue
            adjacent = (b - a) % n in (1, n - 1) if t.kind == "affine" else abs(a - b) == 1
            if adjacent and (t.kind != "affine" or n >= 3):
                yield f"e{a} e{b} e{a} = e{a}", ea * E(f"e{b}") * ea, ea
            elif not adjacent and a < b:
                yield f"e{a} e{b} = e{b} e{a}", ea * E(f"e{b}"), E(f"e{b}") * ea
        if t.kind == "affine":
            yield (f"u e{a} u^-1 = e{(a + 1) % n}", E("u") * ea * E("u^-1"), E(f"e{(a + 1) % n}"))
    if t.kind == "affine" and n >= 2:
        chain = unit
        for a in range(1, n):
            chain = chain * E(f"e{a}")
        yield f"u^2 e{n - 1} = e1...e{n - 1}", E("u") * E("u") * E(f"e{n - 1}"), chain
    for tok in t.source_tokens(factor):
        yield f"unit * {tok} = {tok}", unit * E(tok), E(tok)


def verify_embedding(t: EmbeddingTable) -> Report:
    """Every defining relation of the source holds for the images, plus commutation of two factors."""
    rep = Report(t.name)
    for f in range(len(t.sources)):
        for name, lhs, rhs in _relations(t, f):
            rep.add(f"[{f + 1}] {name}", lhs == rhs)
    if len(t.sources) == 2:
        for a in t.source_tokens(0):
            for b in t.source_tokens(1):
                x, y = t.element((0, a)), t.element((1, b))
                rep.add(f"{a}^(1) {b}^(2) = {b}^(2) {a}^(1)", x * y == y * x)
    return rep


# ------------------------------------------------------------------ functors

def _restrict(M: ModuleRep, B: Matrix, mats_big: dict[str, Matrix]) -> dict[str, Matrix]:
    out = {}
    for tok, A in mats_big.items():
        X = B.solve(A @ B)
        if X is None:
            raise ArithmeticError(f"image of {tok} does not preserve the subspace")
        out[tok] = X
    return out


def localize(M: ModuleRep) -> ModuleRep:
    """The module e*M over the algebra on two fewer sites."""
    n = M.n - 2
    if n < 1:
        raise ValueError("localization needs at least three sites")
    f = M.field
    table = embed_affine_psi(f, n) if M.is_affine else embed_arc_finite(f, n)
    E = table.matrix("unit", M)
    B = E.column_space()
    mats_big = {tok: table.matrix((0, tok), M) for tok in table.source_tokens(0)}
    if B.shape[1] == 0:
        mats = {tok: Matrix.zeros(f, 0, 0) for tok in mats_big}
    else:
        mats = _restrict(M, B, mats_big)
    return ModuleRep(f, M.algebra, n, mats, [f"v{k}" for k in range(B.shape[1])], M.j, M.z,
                     f"L({M.name})")


def localization_basis(M: ModuleRep) -> Matrix:
    """Columns spanning e*M inside M."""
    n = M.n - 2
    table = embed_affine_psi(M.field, n) if M.is_affine else embed_arc_finite(M.field, n)
    return table.matrix("unit", M).column_space()


def ideal_image(M: ModuleRep) -> Matrix:
    """Columns spanning I_e * M, the image of the two-sided ideal generated by the arc idempotent.

    The ideal is spanned by diagrams ``a e b``; its image is the submodule
    generated by ``e * M``.
    """
    from .linalg import invariant_closure

    B = localization_basis(M)
    ops = [M.mats[k] for k in M.mats]
    return invariant_closure(M.field, B, ops)


def isomorphic(M1: ModuleRep, M2: ModuleRep) -> bool:
    if M1.dim != M2.dim:
        return False
    if M1.dim == 0:
        return True
    return find_intertwiner(M1, M2) is not None
