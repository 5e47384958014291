"""Induced modules presented by diagrams tensored with a source module.

The induced module ``A (x)_B M`` is the span of symbols ``[d, v]`` with ``d`` a
diagram of the big algebra ``A`` and ``v`` in ``M``, modulo

    [d * image(b), v] = [d, b v]        for generators b of B.

Generators of ``B`` whose image is a single diagram are used to propagate
coordinates along a spanning forest, so every symbol is rewritten in terms of
a few root diagrams before any elimination happens.  The remaining relations
(non-tree edges and multi-term images) become rows of a constraint matrix on
the root coordinates; the quotient is read off from its reduced form.

For the affine algebra the diagram basis is infinite.  The span is then a ball
of diagrams of bounded word length and only relations whose terms all lie in
the ball are imposed.  The dimension of the image of each smaller ball is
recorded and the result is trusted once it stops growing.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field as dc_field
from typing import Callable, Hashable, Sequence

import numpy as np

from . import _accel
from .linalg import Matrix
from .modules import ModuleRep
from .scalars import DegenerateScalar, Field

CHUNK_ROWS = 2048


@dataclass
class Relation:
    """``[d * image, v] = [d, action v]`` where ``image`` maps diagrams to coefficients."""

    image: dict
    action: Matrix

    @property
    def single(self):
        if len(self.image) == 1:
            (d, c), = self.image.items()
            return d, c
        return None


@dataclass
class Induced:
    """Result of an induction: the module plus bookkeeping for certificates and maps."""

    module: ModuleRep
    quotient_dim: int
    dims_by_level: list[int]
    stable_level: int | None
    representatives: list[tuple[Hashable, int]]
    coords: Callable[[Hashable], Matrix] = dc_field(repr=False)
    roots: int = 0
    constraint_rank: int = 0
    span_index: dict = dc_field(default_factory=dict, repr=False)
    coords_dim: int = 0
    _basis_rows: list = dc_field(default_factory=list, repr=False)
    _basis_inv: Matrix | None = dc_field(default=None, repr=False)
    _basis: Matrix | None = dc_field(default=None, repr=False)

    @property
    def stable(self) -> bool:
        return self.stable_level is not None

    @property
    def dim(self) -> int:
        return self.module.dim

    def contains(self, d) -> bool:
        return d in self.span_index

    def symbols(self) -> list[tuple]:
        """Basis elements as symbols ``(d, v)`` with ``v`` a column of the source space."""
        field = self.module.field
        return [(d, _unit(field, self.coords_dim, k)) for d, k in self.representatives]

    def express(self, d, v: Matrix) -> Matrix:
        """Coordinates of the symbol ``[d, v]`` in the module basis.

        Raises KeyError when ``d`` lies outside the span and ArithmeticError when
        the symbol is not in the image of the basis (an unreliable boundary diagram).
        """
        field = self.module.field
        if self.dim == 0:
            return Matrix.zeros(field, 0, v.shape[1])
        if d not in self.span_index:
            raise KeyError(f"{d!r} lies outside the span")
        w = self.coords(d) @ v
        x = self._basis_inv @ Matrix(field, w.a[self._basis_rows, :].copy())
        if self._basis @ x != w:
            raise ArithmeticError(f"[{d!r}, v] is not in the span of the stable basis")
        return x


def ball(generators: Sequence, identity, radius: int, words: dict | None = None) -> dict:
    """Diagrams reachable from ``identity`` by at most ``radius`` left multiplications.

    When ``words`` is given it is filled with, for each diagram, the generator
    positions of a shortest word, leftmost factor first; the word evaluates
    to the diagram up to a power of the loop weight.
    """
    level = {identity: 0}
    if words is not None:
        words[identity] = ()
    frontier = [identity]
    for r in range(1, radius + 1):
        nxt = []
        for d in frontier:
            for k, g in enumerate(generators):
                x, _ = g.compose(d)
                if x not in level:
                    level[x] = r
                    nxt.append(x)
                    if words is not None:
                        words[x] = (k,) + words[d]
        frontier = nxt
    return level


class _Forest:
    """Spanning forest along single-diagram relations with transport matrices."""

    def __init__(self, field: Field, span: list, index: dict, rels: list[Relation], dim: int):
        self.root_of: dict = {}
        self.P: dict = {}
        self.tree: set = set()
        self.roots: list = []
        m = field.m
        minv = None if m.is_zero() else m.inverse()
        eye = Matrix.eye(field, dim)
        singles = [(k, r.single, r.action) for k, r in enumerate(rels) if r.single is not None]
        reached = set()
        for d in span:
            for _, (g, _c), _A in singles:
                x, _ = d.compose(g)
                if x != d:
                    reached.add(x)
        # diagrams without an incoming edge must be roots; start from them
        order = [d for d in span if d not in reached] + [d for d in span if d in reached]
        for start in order:
            if start in self.root_of:
                continue
            self.root_of[start] = len(self.roots)
            self.roots.append(start)
            self.P[start] = eye
            queue = deque([start])
            while queue:
                d = queue.popleft()
                for k, (g, c), A in singles:
                    x, loops = d.compose(g)
                    if x not in index or x in self.root_of:
                        continue
                    if loops and minv is None:
                        continue
                    # [x, v] = (c m^loops)^-1 [d, A v]
                    f = c * m ** loops
                    self.root_of[x] = self.root_of[d]
                    self.P[x] = (self.P[d] @ A).scale(f.inverse())
                    self.tree.add((d, k))
                    queue.append(x)


def induce(field: Field, *, algebra: str, n: int, levels: dict, relations: Sequence[Relation],
           dim: int, left: dict, name: str = "", stable_window: int = 2,
           need_stable: bool = True) -> Induced:
    """Quotient of ``span(levels) (x) M`` by the relations that fit inside the span.

    ``levels`` maps each spanning diagram to its level (all zero for a finite
    basis).  ``left`` maps generator tokens of the big algebra to
    ``{diagram: coeff}`` images acting by left multiplication.
    """
    span = sorted(levels, key=lambda d: (levels[d], d))
    index = {d: k for k, d in enumerate(span)}
    rels = list(relations)
    forest = _Forest(field, span, index, rels, dim)
    nroots = len(forest.roots)
    V = nroots * dim
    m = field.m

    rows = _RowReducer(field, V)
    for d in span:
        rd = forest.root_of[d]
        for k, rel in enumerate(rels):
            if (d, k) in forest.tree:
                continue
            terms = []
            ok = True
            for g, c in rel.image.items():
                x, loops = d.compose(g)
                if x not in index:
                    ok = False
                    break
                terms.append((x, c * m ** loops if loops else c))
            if not ok:
                continue
            block = {}
            for x, c in terms:
                rx = forest.root_of[x]
                contrib = forest.P[x].scale(c)
                block[rx] = block[rx] + contrib if rx in block else contrib
            contrib = -(forest.P[d] @ rel.action)
            block[rd] = block[rd] + contrib if rd in block else contrib
            rows.add(block, dim)
    R, piv = rows.finish()
    pivset = set(piv)
    free = [c for c in range(V) if c not in pivset]
    qdim = len(free)
    Pi = Matrix.zeros(field, qdim, V)
    for t, c in enumerate(free):
        Pi.a[t, c] = field.one.v if field.backend == "modp" else field.one
    if piv:
        Pi.a[:, piv] = (-(Matrix(field, R.a[:, free]))).T.a

    block_cache: dict = {}

    def coords(d) -> Matrix:
        r = forest.root_of[d]
        if r not in block_cache:
            block_cache[r] = Matrix(field, Pi.a[:, r * dim:(r + 1) * dim].copy())
        return block_cache[r] @ forest.P[d]

    # dimension of the image of each sub-ball
    maxlev = max(levels.values()) if levels else 0
    dims = []
    reps: list[tuple] = []
    basis = _Span(field, qdim)
    by_level: dict[int, list] = {}
    for d in span:
        by_level.setdefault(levels[d], []).append(d)
    for lev in range(maxlev + 1):
        for d in by_level.get(lev, []):
            if basis.full:
                break
            C = coords(d)
            for k in range(dim):
                if basis.add(C.column(k)):
                    reps.append((d, k))
        dims.append(basis.rank)

    stable_level = None
    if maxlev == 0:
        stable_level = 0
    else:
        for lev in range(maxlev - stable_window + 1):
            if all(dims[lev + t] == dims[lev] for t in range(1, stable_window + 1)):
                stable_level = lev
                break
    mats: dict[str, Matrix] = {}
    if stable_level is not None:
        reps = reps[:dims[stable_level]]
    elif need_stable:
        reps = []
    if reps:
        S = Matrix.hstack([coords(d).column(k) for d, k in reps])
        for tok, image in left.items():
            cols = []
            for d, k in reps:
                col = Matrix.zeros(field, qdim, 1)
                for g, c in image.items():
                    x, loops = g.compose(d)
                    if x not in index:
                        raise ArithmeticError(f"{tok} leaves the span; enlarge the radius")
                    col = col + coords(x).column(k).scale(c * m ** loops if loops else c)
                cols.append(col)
            X = S.solve(Matrix.hstack(cols))
            if X is None:
                raise ArithmeticError(f"image of the low levels is not stable under {tok}")
            mats[tok] = X
    else:
        mats = {tok: Matrix.zeros(field, 0, 0) for tok in left}
    module = ModuleRep(field, algebra, n, mats, [f"[{d!r},{k}]" for d, k in reps], name=name)
    out = Induced(module, qdim, dims, stable_level, reps, coords, nroots, len(piv), index, dim)
    if reps:
        rows = S.T.rref()[1]
        out._basis, out._basis_rows = S, rows
        out._basis_inv = Matrix(field, S.a[rows, :].copy()).inv()
    return out


def _unit(field: Field, dim: int, k: int) -> Matrix:
    v = Matrix.zeros(field, dim, 1)
    v.set_entry(k, 0, field.one)
    return v


class DirectSumInduced:
    """An induced module assembled from inductions of the summands of a split source.

    The source ``M1 (x) M2`` is identified with ``(+)_a W_a (x) (+)_b W_b`` through
    ``P = P1 (x) P2``; each pair of summands is induced separately and the results
    are stacked.  Symbols ``[d, v]`` are expressed by transporting ``v`` through ``P``.
    """

    def __init__(self, module: ModuleRep, parts: list, P: Matrix, Q: Matrix, d2_split: int, span_index: dict):
        self.module = module
        self.parts = parts  # (Induced, indices of the first summand, indices of the second summand)
        self.P = P
        self.Q = Q
        self.d2 = d2_split
        self.span_index = span_index
        self.stable_level = 0
        self.dims_by_level = [module.dim]
        self.representatives = []

    @property
    def dim(self) -> int:
        return self.module.dim

    @property
    def stable(self) -> bool:
        return True

    def contains(self, d) -> bool:
        return d in self.span_index

    def _rows(self, ia, ib) -> list[int]:
        return [a * self.d2 + b for a in ia for b in ib]

    def express(self, d, v: Matrix) -> Matrix:
        field = self.module.field
        if d not in self.span_index:
            raise KeyError(f"{d!r} lies outside the span")
        w = self.P @ v
        blocks = []
        for ind, ia, ib in self.parts:
            sub = Matrix(field, w.a[self._rows(ia, ib), :].copy())
            blocks.append(ind.express(d, sub))
        if not blocks:
            return Matrix.zeros(field, 0, v.shape[1])
        return Matrix.vstack(blocks)

    def symbols(self) -> list[tuple]:
        field = self.module.field
        out = []
        for ind, ia, ib in self.parts:
            rows = self._rows(ia, ib)
            for d, k in ind.representatives:
                out.append((d, self.Q.column(rows[k])))
        return out


class _RowReducer:
    """Accumulates constraint rows and keeps them row reduced."""

    def __init__(self, field: Field, ncols: int):
        self.field = field
        self.ncols = ncols
        self.pending: list[np.ndarray] = []
        self.npending = 0
        self.modp = field.backend == "modp"
        self.R = np.zeros((0, ncols), np.int64 if self.modp else object)

    def add(self, block: dict, dim: int) -> None:
        rowblock = np.zeros((dim, self.ncols), np.int64) if self.modp else None
        if rowblock is None:
            rowblock = np.empty((dim, self.ncols), dtype=object)
            rowblock.fill(self.field.zero)
        for r, M in block.items():
            rowblock[:, r * dim:(r + 1) * dim] = M.a.T
        if self.modp:
            keep = rowblock.any(axis=1)
        else:
            keep = np.array([any(not x.is_zero() for x in row) for row in rowblock], dtype=bool)
        if keep.any():
            self.pending.append(rowblock[keep])
            self.npending += int(keep.sum())
            if self.npending >= CHUNK_ROWS:
                self._flush()

    def _flush(self) -> None:
        if not self.pending:
            return
        A = np.vstack([self.R] + self.pending)
        self.pending, self.npending = [], 0
        if self.modp:
            r, piv = _accel.rref_modp(A, self.field.p)
            self.R = A[:r].copy()
            self.piv = [int(c) for c in piv]
        else:
            from .linalg import _object_rref
            self.R, self.piv = _object_rref(self.field, A)

    def finish(self) -> tuple[Matrix, list[int]]:
        self._flush()
        return Matrix(self.field, self.R), getattr(self, "piv", [])


class _Span:
    """Incrementally maintained row-reduced basis of a subspace of column vectors."""

    def __init__(self, field: Field, dim: int):
        self.field = field
        self.dim = dim
        self.rows: list[tuple[int, Matrix]] = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def full(self) -> bool:
        return self.rank == self.dim

    def add(self, v: Matrix) -> bool:
        f = self.field
        w = v.copy()
        for p, b in self.rows:
            c = w.entry(p, 0)
            if not c.is_zero():
                w = w - b.scale(c)
        nz = next((i for i in range(self.dim) if not w.entry(i, 0).is_zero()), None)
        if nz is None:
            return False
        self.rows.append((nz, w.scale(w.entry(nz, 0).inverse())))
        return True


def tensor_actions(M1: ModuleRep, M2: ModuleRep) -> tuple[dict, dict]:
    """Matrices of each factor's generators on the tensor product, keyed by token."""
    I1, I2 = M1.identity(), M2.identity()
    first = {tok: A.kron(I2) for tok, A in M1.mats.items()}
    second = {tok: I1.kron(B) for tok, B in M2.mats.items()}
    return first, second


def element_terms(x) -> dict:
    return dict(x.terms)


def require_invertible_m(field: Field) -> None:
    if field.m.is_zero():
        raise DegenerateScalar("induction along cup-cap relations needs a nonzero loop weight")
