"""Standard modules of the finite and affine Temperley-Lieb algebras.

Finite link states are tuples ``st`` with ``st[k]`` the partner of site ``k``
or ``-1`` for a defect.  Affine link states are tuples of pairs: ``(0, y)``
when site ``r`` is joined by an arc to the lifted site ``y`` and ``(1, l)``
when it is a defect attached to the lifted inner point ``l``.  Inner points
have period ``2j``; the canonical representative gives the first defect the
inner label 0, and re-normalizing a state after an action costs ``z`` per unit
of inner shift.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .atl import BOTTOM, TOP, AffineDiagram, AtlElement, gen_e_affine, gen_u
from .linalg import Matrix
from .report import Report
from .scalars import ConfigError, DegenerateScalar, Field, Scalar
from .tl import TlDiagram, TlElement, gen_e, parse_token, standard_dim


def as_half(j) -> Fraction:
    """Coerce ``1``, ``0.5``, ``"3/2"`` and similar to a half-integer Fraction."""
    if isinstance(j, str):
        j = Fraction(j)
    j = Fraction(j).limit_denominator(2)
    if (2 * j).denominator != 1:
        raise ConfigError(f"{j} is not a half-integer")
    return j


def fmt_half(j: Fraction) -> str:
    j = Fraction(j)
    return str(j.numerator) if j.denominator == 1 else f"{j.numerator}/{j.denominator}"


def _check_nj(n: int, j: Fraction) -> int:
    two_j = int(2 * j)
    if n < 1 or two_j < 0 or two_j > n or (n - two_j) % 2:
        raise ConfigError(f"no standard module with j={fmt_half(j)} on {n} sites")
    return two_j


# ----------------------------------------------------------------- link states

@lru_cache(maxsize=None)
def finite_link_states(n: int, two_j: int) -> tuple[tuple[int, ...], ...]:
    """Link states on ``n`` sites with ``two_j`` defects, in lexicographic order."""
    out = []
    arcs = (n - two_j) // 2

    def rec(pos: int, open_stack: list[int], st: list[int], defects: int, closed: int):
        if pos == n:
            if not open_stack and defects == two_j:
                out.append(tuple(st))
            return
        # defect: only allowed when no arc is open around it
        if not open_stack and defects < two_j:
            st[pos] = -1
            rec(pos + 1, open_stack, st, defects + 1, closed)
        # open an arc
        if len(open_stack) + closed < arcs:
            open_stack.append(pos)
            rec(pos + 1, open_stack, st, defects, closed)
            open_stack.pop()
        # close an arc
        if open_stack:
            a = open_stack.pop()
            st[a], st[pos] = pos, a
            rec(pos + 1, open_stack, st, defects, closed + 1)
            open_stack.append(a)

    rec(0, [], [0] * n, 0, 0)
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def affine_link_states(n: int, two_j: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Canonical affine link states, one per word with ``n/2 + j`` opening brackets."""
    n_open = (n + two_j) // 2
    out = []
    for opens in combinations(range(n), n_open):
        word = [False] * n
        for k in opens:
            word[k] = True
        st: list = [None] * n
        stack: list[int] = []
        # two passes around the circle resolve the cyclic matching
        for t in range(2 * n):
            k = t % n
            if word[k]:
                if t < n:
                    stack.append(t)
            elif st[k] is None and stack:
                a = stack.pop()
                b = t
                st[a % n] = (0, b - (a - a % n))
                st[k] = (0, a - (t - k))
        defects = sorted(k for k in range(n) if st[k] is None)
        if len(defects) != two_j:
            raise AssertionError("bracket matching failed")
        for lab, k in enumerate(defects):
            st[k] = (1, lab)
        out.append(tuple(st))
    return tuple(out)


def act_finite_state(d: TlDiagram, st: Sequence[int]) -> tuple[tuple[int, ...], int] | None:
    """Glue ``st`` below ``d``; return (new state, closed loops) or None if defects merge."""
    n = d.n
    res = [None] * n
    seen = [False] * n
    for k in range(n):
        if res[k] is not None:
            continue
        y = d.partner[n + k]
        if y >= n:
            res[k], res[y - n] = y - n, k
            continue
        while True:
            seen[y] = True
            t = st[y]
            if t == -1:
                res[k] = -1
                break
            seen[t] = True
            y2 = d.partner[t]
            if y2 >= n:
                res[k], res[y2 - n] = y2 - n, k
                break
            y = y2
    if res.count(-1) != list(st).count(-1):
        return None
    loops = 0
    for r in range(n):
        if seen[r]:
            continue
        loops += 1
        x = r
        while True:
            seen[x] = True
            x2 = st[x]
            seen[x2] = True
            x = d.partner[x2]
            if x == r:
                break
    return tuple(res), loops


def act_affine_state(d: AffineDiagram, st, two_j: int):
    """Glue the affine state ``st`` below ``d``.

    Returns ``(state, contractible, noncontractible, shift)`` where ``shift`` is
    the inner label carried by the first defect before re-normalization, or
    None when the number of defects drops.
    """
    n = d.n
    res: list = [None] * n
    seen = [False] * n

    def st_partner(x: int):
        w, r = divmod(x, n)
        kind, val = st[r]
        return (kind, val + w * n) if kind == 0 else (kind, val + w * two_j)

    def set_arc(k: int, y: int):
        w, r = divmod(y, n)
        res[k] = (0, y)
        res[r] = (0, k - w * n)

    for k in range(n):
        if res[k] is not None:
            continue
        s, y = d.partner_of(TOP, k)
        if s == TOP:
            set_arc(k, y)
            continue
        x = y
        while True:
            seen[x % n] = True
            kind, val = st_partner(x)
            if kind == 1:
                res[k] = (1, val)
                break
            seen[val % n] = True
            s2, y2 = d.partner_of(BOTTOM, val)
            if s2 == TOP:
                set_arc(k, y2)
                break
            x = y2
    defects = [k for k in range(n) if res[k][0] == 1]
    if len(defects) != two_j:
        return None
    contractible = noncontractible = 0
    for r in range(n):
        if seen[r]:
            continue
        x = r
        while True:
            seen[x % n] = True
            _, y = st_partner(x)
            seen[y % n] = True
            _, x = d.partner_of(BOTTOM, y)
            if x % n == r:
                break
        if x == r:
            contractible += 1
        else:
            noncontractible += 1
    shift = 0
    if defects:
        shift = res[defects[0]][1]
        for k in defects:
            res[k] = (1, res[k][1] - shift)
    return tuple(res), contractible, noncontractible, shift


# ----------------------------------------------------------------- module type

@dataclass
class ModuleRep:
    """A concrete module: basis labels plus one matrix per algebra generator.

    ``mats`` is keyed by generator tokens: ``"e1".."e{n-1}"`` for the finite
    algebra, additionally ``"e0"``, ``"u"`` and ``"u^-1"`` for the affine one.
    """

    field: Field
    algebra: str
    n: int
    mats: dict[str, Matrix]
    basis: list = dc_field(default_factory=list)
    j: Fraction | None = None
    z: Scalar | None = None
    name: str = ""
    states: tuple | None = None

    @property
    def dim(self) -> int:
        if self.mats:
            return next(iter(self.mats.values())).shape[0]
        return len(self.basis)

    @property
    def is_affine(self) -> bool:
        return self.algebra == "affine"

    def generators(self) -> list[str]:
        if self.is_affine:
            es = [f"e{k}" for k in range(self.n)] if self.n >= 2 else []
            return es + ["u", "u^-1"]
        return [f"e{k}" for k in range(1, self.n)]

    def e(self, k: int) -> Matrix:
        return self.mats[f"e{k % self.n if self.is_affine else k}"]

    def identity(self) -> Matrix:
        return Matrix.eye(self.field, self.dim)

    def gen(self, token: str) -> Matrix:
        kind, idx, sign = parse_token(token)
        if kind == "u":
            if not self.is_affine:
                raise ValueError("u acts only on affine modules")
            return self.mats["u" if sign == 1 else "u^-1"]
        if kind == "e":
            return self.e(idx)
        alpha, beta = self.field.braid_coeffs(sign)
        return Matrix.scalar_matrix(self.field, self.dim, alpha) + self.e(idx).scale(beta)

    def word_matrix(self, word: Iterable[str]) -> Matrix:
        out = self.identity()
        for tok in word:
            out = out @ self.gen(tok)
        return out

    def element_matrix(self, x) -> Matrix:
        """Matrix of a word, a TlElement or an AtlElement (the latter two on standard modules)."""
        if isinstance(x, (list, tuple)):
            return self.word_matrix(x)
        if self.states is None:
            raise ValueError("diagram action needs a standard module; pass a word instead")
        out = Matrix.zeros(self.field, self.dim, self.dim)
        for d, c in x.terms.items():
            out = out + self.diagram_matrix(d).scale(c)
        return out

    def diagram_matrix(self, d) -> Matrix:
        if self.is_affine:
            return _affine_diagram_matrix(self.field, d, self.states, int(2 * self.j), self.z)
        return _finite_diagram_matrix(self.field, d, self.states)

    def act(self, x, v: Matrix) -> Matrix:
        return self.element_matrix(x) @ v

    def specialize(self, target: Field) -> "ModuleRep":
        return ModuleRep(target, self.algebra, self.n, {k: m.specialize(target) for k, m in self.mats.items()},
                         list(self.basis), self.j, None if self.z is None else target.scalar(self.z),
                         self.name, self.states)

    def to_json(self) -> dict:
        return {"algebra": self.algebra, "n": self.n, "name": self.name,
                "j": None if self.j is None else fmt_half(self.j),
                "z": None if self.z is None else str(self.z),
                "basis": [str(b) for b in self.basis],
                "matrices": {k: m.to_strings() for k, m in self.mats.items()}}


def _finite_diagram_matrix(field: Field, d: TlDiagram, states) -> Matrix:
    index = {st: k for k, st in enumerate(states)}
    M = Matrix.zeros(field, len(states), len(states))
    for k, st in enumerate(states):
        out = act_finite_state(d, st)
        if out is not None:
            new, loops = out
            M.set_entry(index[new], k, field.m ** loops)
    return M


def _affine_diagram_matrix(field: Field, d: AffineDiagram, states, two_j: int, z: Scalar) -> Matrix:
    index = {st: k for k, st in enumerate(states)}
    M = Matrix.zeros(field, len(states), len(states))
    weight = z + z.inverse()
    for k, st in enumerate(states):
        out = act_affine_state(d, st, two_j)
        if out is None:
            continue
        new, contractible, noncontractible, shift = out
        c = field.m ** contractible
        if two_j == 0:
            c = c * weight ** (noncontractible + d.nloops)
        elif d.nloops:
            continue
        if shift:
            c = c * z ** (-shift)
        M.set_entry(index[new], k, c)
    return M


def standard_finite(field: Field, n: int, j) -> ModuleRep:
    j = as_half(j)
    two_j = _check_nj(n, j)
    states = finite_link_states(n, two_j)
    mats = {f"e{i}": _finite_diagram_matrix(field, gen_e(i, n), states) for i in range(1, n)}
    return ModuleRep(field, "finite", n, mats, [_fmt_finite(st) for st in states], j, None,
                     f"W_{fmt_half(j)}[{n}]", states)


def standard_affine(field: Field, n: int, j, z) -> ModuleRep:
    j = as_half(j)
    two_j = _check_nj(n, j)
    z = field.parse(z) if isinstance(z, str) else field.scalar(z)
    if z.is_zero():
        raise DegenerateScalar("the twist parameter z must be nonzero")
    states = affine_link_states(n, two_j)
    mats = {}
    if n >= 2:
        for i in range(n):
            mats[f"e{i}"] = _affine_diagram_matrix(field, gen_e_affine(i, n), states, two_j, z)
    mats["u"] = _affine_diagram_matrix(field, gen_u(n, 1), states, two_j, z)
    mats["u^-1"] = _affine_diagram_matrix(field, gen_u(n, -1), states, two_j, z)
    return ModuleRep(field, "affine", n, mats, [_fmt_affine(st) for st in states], j, z,
                     f"W_{fmt_half(j)},z[{n}]", states)


def _fmt_finite(st) -> str:
    out = []
    for k, t in enumerate(st):
        out.append("|" if t == -1 else ("(" if t > k else ")"))
    return "".join(out)


def _fmt_affine(st) -> str:
    out = []
    for k, (kind, val) in enumerate(st):
        out.append("|" if kind == 1 else ("(" if val > k else ")"))
    return "".join(out)


def affine_dim(n: int, j) -> int:
    two_j = int(2 * as_half(j))
    if two_j > n or (n - two_j) % 2:
        return 0
    return comb(n, (n + two_j) // 2)


# ----------------------------------------------------------------- Gram forms

def _gram_pair(a: Sequence[int], b: Sequence[int]) -> int | None:
    """Loops closed when reflecting ``a`` onto ``b``, or None when defects meet."""
    n = len(a)
    seen = [False] * n
    for k in range(n):
        if a[k] != -1 or seen[k]:
            continue
        # a path from a defect of a must end on a defect of b
        x = k
        while True:
            seen[x] = True
            y = b[x]
            if y == -1:
                break
            seen[y] = True
            x = a[y]
            if x == -1:
                return None
    loops = 0
    for r in range(n):
        if seen[r]:
            continue
        loops += 1
        x = r
        while True:
            seen[x] = True
            y = a[x]
            seen[y] = True
            x = b[y]
            if x == r:
                break
    return loops


def gram_finite(field: Field, n: int, j) -> Matrix:
    j = as_half(j)
    states = finite_link_states(n, _check_nj(n, j))
    G = Matrix.zeros(field, len(states), len(states))
    for r, a in enumerate(states):
        for c, b in enumerate(states):
            loops = _gram_pair(a, b)
            if loops is not None:
                G.set_entry(r, c, field.m ** loops)
    return G


def simple_dims_at_root(n: int, p: int, field: Field | None = None) -> dict[Fraction, dict]:
    """Simple-head dimensions at ``q = exp(i pi / p)`` from Gram ranks, with the recursion cross-check.

    Returns ``{j: {"rank": ..., "recursion": ..., "standard": ...}}``.  The
    recursion runs from the largest ``j`` downwards.
    """
    if p < 3:
        raise DegenerateScalar("the loop weight vanishes or the root is too small (need p >= 3)")
    field = field or Field.cyclotomic(p)
    js = [Fraction(t, 2) for t in range(n % 2, n + 1, 2)]
    ranks = {j: gram_finite(field, n, j).rank() for j in js}
    rec: dict[Fraction, int] = {}
    for j in sorted(js, reverse=True):
        d = standard_dim(n, j)
        s = int(2 * j + 1) % p
        if s == 0:
            rec[j] = d
        else:
            partner = j + p - s
            rec[j] = d - (rec.get(partner, 0) if 2 * partner <= n else 0)
    return {j: {"rank": ranks[j], "recursion": rec[j], "standard": standard_dim(n, j)} for j in js}


# ----------------------------------------------------------------- verification

def verify_module(M: ModuleRep) -> Report:
    """Defining relations as matrix identities (and ``u^n = z^{2j}`` for standard affine modules)."""
    rep = Report(M.name or f"{M.algebra} module on {M.n} sites")
    n, f = M.n, M.field
    I = M.identity()
    if M.is_affine:
        idx = list(range(n)) if n >= 2 else []
        u, ui = M.mats["u"], M.mats["u^-1"]
        rep.add("u u^-1 = 1", u @ ui == I)
        rep.add("u^-1 u = 1", ui @ u == I)
    else:
        idx = list(range(1, n))
    for a in idx:
        Ea = M.e(a)
        rep.add(f"e{a}^2 = m e{a}", Ea @ Ea == Ea.scale(f.m))
        for b in idx:
            if b == a:
                continue
            adjacent = (b - a) % n in (1, n - 1) if M.is_affine else abs(a - b) == 1
            if adjacent and (not M.is_affine or n >= 3):
                rep.add(f"e{a} e{b} e{a} = e{a}", Ea @ M.e(b) @ Ea == Ea)
            elif not adjacent and a < b:
                rep.add(f"e{a} e{b} = e{b} e{a}", Ea @ M.e(b) == M.e(b) @ Ea)
        if M.is_affine:
            rep.add(f"u e{a} u^-1 = e{(a + 1) % n}", M.mats["u"] @ Ea @ M.mats["u^-1"] == M.e(a + 1))
    if M.is_affine and n >= 2:
        chain = I
        for a in range(1, n):
            chain = chain @ M.e(a)
        u = M.mats["u"]
        rep.add(f"u^2 e{n - 1} = e1...e{n - 1}", u @ u @ M.e(n - 1) == chain)
    if M.is_affine and M.j is not None and M.z is not None:
        rep.add(f"u^{n} = z^{int(2 * M.j)}", M.mats["u"] ** n == I.scale(M.z ** int(2 * M.j)))
    return rep


# ----------------------------------------------------------------- morphisms

def _cyclic_basis(M: ModuleRep, tokens: list[str], v: Matrix):
    """Words applied to ``v`` until the span is stable; returns (basis columns, word matrices) or None."""
    f = M.field
    vecs = [v]
    words = [None]
    span = v
    frontier = [0]
    while frontier and len(vecs) < M.dim:
        nxt = []
        for k in frontier:
            for tok in tokens:
                w = M.mats[tok] @ vecs[k]
                trial = Matrix.hstack([span, w])
                if trial.rank() > span.shape[1]:
                    span = trial
                    vecs.append(w)
                    words.append((k, tok))
                    nxt.append(len(vecs) - 1)
                    if len(vecs) == M.dim:
                        break
            if len(vecs) == M.dim:
                break
        frontier = nxt
    if len(vecs) < M.dim:
        return None
    return span, words


def find_intertwiner(M1: ModuleRep, M2: ModuleRep, tokens: list[str] | None = None,
                     rng_seed: int = 0) -> Matrix | None:
    """An invertible X with X M1(g) = M2(g) X for every generator, or None.

    A cyclic vector of M1 reduces the unknowns to the image of that vector;
    when M1 is not cyclic from the tried vectors the full linear system is solved.
    """
    import random

    if M1.dim != M2.dim:
        return None
    f = M1.field
    n = M1.dim
    if n == 0:
        return Matrix.zeros(f, 0, 0)
    tokens = tokens or [t for t in M1.mats if t in M2.mats]
    if not tokens:
        return Matrix.eye(f, n)
    rng = random.Random(rng_seed)
    starts = [Matrix.from_rows(f, [[1 if r == k else 0] for r in range(n)]) for k in range(min(n, 3))]
    starts.append(Matrix.from_rows(f, [[rng.randint(1, 97)] for _ in range(n)]))
    for v in starts:
        found = _cyclic_basis(M1, tokens, v)
        if found is None:
            continue
        Bm, words = found
        # word matrices on M2 following the same BFS tree
        W = [Matrix.eye(f, n)]
        for parent, tok in words[1:]:
            W.append(M2.mats[tok] @ W[parent])
        Wstack = Matrix.vstack(W)
        Binv = Bm.inv()
        In, Ik = Matrix.eye(f, n), Matrix.eye(f, n)
        blocks = []
        for tok in tokens:
            C = Binv @ M1.mats[tok] @ Bm
            K = (Ik.kron(M2.mats[tok]) - C.T.kron(In)) @ Wstack
            blocks.append(K)
        null = Matrix.vstack(blocks).nullspace()
        X = _pick_invertible(f, null, W, Binv, rng)
        if X is not None:
            return X
        return None
    # fall back to the full system in the entries of X
    rows = []
    for tok in tokens:
        A, B = M1.mats[tok], M2.mats[tok]
        rows.append(Matrix.eye(f, n).kron(A.T) - B.kron(Matrix.eye(f, n)))
    null = Matrix.vstack(rows).nullspace()
    for _ in range(4):
        if null.shape[1] == 0:
            return None
        coeffs = Matrix.from_rows(f, [[rng.randint(1, 10 ** 6)] for _ in range(null.shape[1])])
        vecX = null @ coeffs
        X = Matrix(f, vecX.a.reshape(n, n).copy())
        if X.rank() == n:
            return X
    return None


def _pick_invertible(f: Field, null: Matrix, W: list[Matrix], Binv: Matrix, rng) -> Matrix | None:
    n = Binv.shape[0]
    if null.shape[1] == 0:
        return None
    for attempt in range(4):
        if null.shape[1] == 1:
            y = null
        else:
            y = null @ Matrix.from_rows(f, [[rng.randint(1, 10 ** 6)] for _ in range(null.shape[1])])
        Y = Matrix.hstack([Wk @ y for Wk in W])
        X = Y @ Binv
        if X.rank() == n:
            return X
        if null.shape[1] == 1:
            return None
    return None


def check_intertwiner(X: Matrix, M1: ModuleRep, M2: ModuleRep, tokens: list[str] | None = None) -> bool:
    tokens = tokens or [t for t in M1.mats if t in M2.mats]
    return all(X @ M1.mats[t] == M2.mats[t] @ X for t in tokens)


# ----------------------------------------------------------------- sub and quotient

def quotient_matrices(field: Field, mats: dict[str, Matrix], sub: Matrix, dim: int) -> dict[str, Matrix]:
    """Action on ``V / sub`` in coordinates complementary to the columns of ``sub``."""
    k = sub.shape[1]
    if k == dim:
        return {tok: Matrix.zeros(field, 0, 0) for tok in mats}
    eye = Matrix.eye(field, dim)
    piv = (Matrix.hstack([sub, eye]) if k else eye).rref()[1]
    comp = Matrix(field, eye.a[:, [c - k for c in piv if c >= k]].copy())
    B = Matrix.hstack([sub, comp]) if k else comp
    Binv = B.inv()
    return {tok: Matrix(field, (Binv @ A @ B).a[k:, k:].copy()) for tok, A in mats.items()}


def quotient_module(M: ModuleRep, sub: Matrix, name: str = "") -> ModuleRep:
    """``M / sub`` where the columns of ``sub`` span a submodule."""
    from .linalg import invariant_closure

    closed = invariant_closure(M.field, sub, list(M.mats.values())) if sub.shape[1] else sub
    if closed.shape[1] != sub.rank():
        raise ValueError("the given columns do not span a submodule")
    mats = quotient_matrices(M.field, M.mats, closed, M.dim)
    d = next(iter(mats.values())).shape[0]
    return ModuleRep(M.field, M.algebra, M.n, mats, [f"v{k}" for k in range(d)], name=name or f"{M.name}/sub")


def common_kernel(M: ModuleRep, tokens: Iterable[str], shifts: dict[str, Scalar] | None = None) -> Matrix:
    """Vectors killed by every listed generator, after subtracting the optional scalar shifts."""
    shifts = shifts or {}
    rows = []
    for tok in tokens:
        A = M.mats[tok]
        if tok in shifts:
            A = A - M.identity().scale(shifts[tok])
        rows.append(A)
    return Matrix.vstack(rows).nullspace()


def bar_module(field: Field) -> ModuleRep:
    """The one-dimensional top of ``W_{0,q}[2]``: ``e0 = e1 = m`` and ``u = 1``.

    It is the quotient of ``W_{0,q}[2]`` by the line where both ``e``'s vanish.
    """
    W = standard_affine(field, 2, 0, field.q)
    sub = common_kernel(W, ["e0", "e1"])
    out = quotient_module(W, sub, name="Wbar_0,q[2]")
    out.basis = ["top"]
    return out
