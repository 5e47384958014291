"""The finite Temperley-Lieb algebra as a diagram algebra.

A diagram on ``n`` sites is a planar perfect matching of ``2n`` boundary
points, stored as a partner array: points ``0..n-1`` run along the bottom and
``n..2n-1`` along the top, both from left to right.  In a product ``a * b``
the factor ``b`` sits below ``a`` and acts first.
"""
from __future__ import annotations

import re
from functools import lru_cache
from math import comb
from typing import Callable, Iterable, Sequence

from . import _accel
from .linalg import Matrix
from .report import Report
from .scalars import Field, Scalar

ComposeFn = Callable[[Sequence[int], Sequence[int], int], tuple[tuple, int]]


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


class TlDiagram:
    __slots__ = ("n", "partner", "_hash")

    def __init__(self, n: int, partner: Sequence[int]):
        self.n = n
        self.partner = tuple(partner)
        self._hash = hash((n, self.partner))

    @classmethod
    def identity(cls, n: int) -> "TlDiagram":
        return cls(n, [k + n for k in range(n)] + list(range(n)))

    def __eq__(self, other):
        return isinstance(other, TlDiagram) and self.n == other.n and self.partner == other.partner

    def __lt__(self, other):
        return self.partner < other.partner

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"TlDiagram({self.n}, {list(self.partner)})"

    def compose(self, below: "TlDiagram", compose: ComposeFn | None = None) -> tuple["TlDiagram", int]:
        """Stack ``self`` on top of ``below``; returns the diagram and the closed-loop count."""
        if below.n != self.n:
            raise ValueError(f"size mismatch: {self.n} vs {below.n}")
        partner, loops = (compose or _accel.compose_tl)(self.partner, below.partner, self.n)
        return TlDiagram(self.n, partner), loops

    def through_lines(self) -> int:
        return sum(1 for k in range(self.n) if self.partner[k] >= self.n)

    def is_planar(self) -> bool:
        return _is_planar(self.n, self.partner)

    def flip(self) -> "TlDiagram":
        """Mirror top and bottom (the anti-involution of the algebra)."""
        n = self.n
        swap = lambda k: k + n if k < n else k - n
        return TlDiagram(n, [swap(self.partner[swap(k)]) for k in range(2 * n)])

    def to_json(self) -> list[int]:
        return list(self.partner)


def _circle_pos(n: int, k: int) -> int:
    # bottom left-to-right, then top right-to-left
    return k if k < n else 3 * n - 1 - k


def _is_planar(n: int, partner: Sequence[int]) -> bool:
    pairs = []
    for a in range(2 * n):
        b = partner[a]
        if partner[b] != a or a == b:
            return False
        if a < b:
            x, y = sorted((_circle_pos(n, a), _circle_pos(n, b)))
            pairs.append((x, y))
    for x1, y1 in pairs:
        for x2, y2 in pairs:
            if x1 < x2 < y1 < y2:
                return False
    return True


@lru_cache(maxsize=None)
def enumerate_basis(n: int) -> tuple[TlDiagram, ...]:
    """All planar diagrams on ``n`` sites, sorted lexicographically by partner array."""
    if n < 1:
        raise ValueError("need at least one site")
    # point index at each position of the boundary circle
    by_pos = list(range(n)) + [3 * n - 1 - p for p in range(n, 2 * n)]

    def matchings(block: list[int]):
        if not block:
            yield {}
            return
        first = block[0]
        for t in range(1, len(block), 2):
            a, b = by_pos[first], by_pos[block[t]]
            for inner in matchings(block[1:t]):
                for rest in matchings(block[t + 1:]):
                    yield {a: b, b: a, **inner, **rest}

    out = []
    for match in matchings(list(range(2 * n))):
        out.append(tuple(match[k] for k in range(2 * n)))
    return tuple(TlDiagram(n, p) for p in sorted(out))


@lru_cache(maxsize=None)
def basis_index(n: int) -> dict[TlDiagram, int]:
    return {d: k for k, d in enumerate(enumerate_basis(n))}


def gen_e(i: int, n: int) -> TlDiagram:
    """The cup-cap diagram coupling sites ``i`` and ``i+1`` (1-based, 1 <= i <= n-1)."""
    if not 1 <= i <= n - 1:
        raise IndexError(f"generator index {i} out of range for {n} sites")
    partner = TlDiagram.identity(n).partner
    partner = list(partner)
    a, b = i - 1, i
    partner[a], partner[b] = b, a
    partner[n + a], partner[n + b] = n + b, n + a
    return TlDiagram(n, partner)


def compose(d1: TlDiagram, d2: TlDiagram) -> tuple[TlDiagram, int]:
    return d1.compose(d2)


class TlElement:
    """A finite linear combination of diagrams with coefficients in a field."""

    __slots__ = ("field", "n", "terms")

    def __init__(self, field: Field, n: int, terms: dict | None = None):
        self.field = field
        self.n = n
        self.terms = {d: c for d, c in (terms or {}).items() if not c.is_zero()}

    @classmethod
    def zero(cls, field: Field, n: int) -> "TlElement":
        return cls(field, n)

    @classmethod
    def identity(cls, field: Field, n: int) -> "TlElement":
        return cls(field, n, {TlDiagram.identity(n): field.one})

    @classmethod
    def from_diagram(cls, field: Field, d: TlDiagram, coeff=None) -> "TlElement":
        return cls(field, d.n, {d: field.one if coeff is None else field.scalar(coeff)})

    def _same(self, other: "TlElement"):
        if other.n != self.n:
            raise ValueError(f"size mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "TlElement") -> "TlElement":
        self._same(other)
        terms = dict(self.terms)
        for d, c in other.terms.items():
            terms[d] = terms[d] + c if d in terms else c
        return TlElement(self.field, self.n, terms)

    def __neg__(self) -> "TlElement":
        return TlElement(self.field, self.n, {d: -c for d, c in self.terms.items()})

    def __sub__(self, other: "TlElement") -> "TlElement":
        return self + (-other)

    def scale(self, c) -> "TlElement":
        c = self.field.scalar(c)
        return TlElement(self.field, self.n, {d: c * x for d, x in self.terms.items()})

    def mul(self, other: "TlElement", compose: ComposeFn | None = None) -> "TlElement":
        self._same(other)
        m = self.field.m
        terms: dict[TlDiagram, Scalar] = {}
        for d1, c1 in self.terms.items():
            for d2, c2 in other.terms.items():
                d, loops = d1.compose(d2, compose)
                c = c1 * c2 * m ** loops if loops else c1 * c2
                terms[d] = terms[d] + c if d in terms else c
        return TlElement(self.field, self.n, terms)

    def __mul__(self, other):
        if isinstance(other, TlElement):
            return self.mul(other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, TlElement):
            return NotImplemented
        return self.n == other.n and (self - other).is_zero()

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, d: TlDiagram) -> Scalar:
        return self.terms.get(d, self.field.zero)

    def __repr__(self):
        return f"TlElement(n={self.n}, terms={len(self.terms)})"

    def to_json(self) -> list:
        return [{"diagram": d.to_json(), "scalar": str(c)} for d, c in sorted(self.terms.items())]


def e_element(field: Field, i: int, n: int) -> TlElement:
    return TlElement.from_diagram(field, gen_e(i, n))


def braid_g(field: Field, i: int, n: int, sign: int = 1) -> TlElement:
    """The braid generator ``g_i`` (or its inverse) as ``alpha + beta * e_i``."""
    alpha, beta = field.braid_coeffs(sign)
    return TlElement.identity(field, n).scale(alpha) + e_element(field, i, n).scale(beta)


_TOKEN = re.compile(r"^(e|g)(\d+)(\^-1|\^\+?1|\^-)?$")


def parse_token(token: str) -> tuple[str, int, int]:
    """Split ``"e3"``, ``"g2"``, ``"g2^-1"``, ``"u"``, ``"u^-1"`` into (kind, index, sign)."""
    token = token.strip().replace("⁻¹", "^-1").replace("inv", "^-1")
    if token in ("u", "u^1", "u^+1"):
        return "u", 0, 1
    if token in ("u^-1", "U"):
        return "u", 0, -1
    m = _TOKEN.match(token)
    if not m:
        raise ValueError(f"invalid generator token {token!r}")
    sign = -1 if m.group(3) and m.group(3).startswith("^-") else 1
    if m.group(1) == "e" and sign == -1:
        raise ValueError(f"e-generators are not invertible: {token!r}")
    return m.group(1), int(m.group(2)), sign


def word_eval(field: Field, word: Iterable[str], n: int) -> TlElement:
    """Product of the tokens in ``word`` from left to right."""
    out = TlElement.identity(field, n)
    for tok in word:
        kind, idx, sign = parse_token(tok)
        if kind == "u":
            raise ValueError("the translation u does not exist in the finite algebra")
        gen = e_element(field, idx, n) if kind == "e" else braid_g(field, idx, n, sign)
        out = out * gen
    return out


def verify_tl_relations(n: int, field: Field | None = None,
                        compose: ComposeFn | None = None) -> Report:
    """Check the defining relations of TL_n on diagrams; ``compose`` may be swapped for testing."""
    field = field or Field.exact()
    rep = Report(f"TL_{n} relations")
    e = {i: e_element(field, i, n) for i in range(1, n)}
    mul = lambda a, b: a.mul(b, compose)
    for i in range(1, n):
        rep.add(f"e{i}^2 = m e{i}", mul(e[i], e[i]) == e[i].scale(field.m))
        for j in (i - 1, i + 1):
            if 1 <= j < n:
                rep.add(f"e{i} e{j} e{i} = e{i}", mul(mul(e[i], e[j]), e[i]) == e[i])
        for j in range(i + 2, n):
            rep.add(f"e{i} e{j} = e{j} e{i}", mul(e[i], e[j]) == mul(e[j], e[i]))
    return rep


class TlRegular:
    """Regular representation of TL_n on its diagram basis.

    Provides left and right multiplication matrices for generators, which the
    braiding and tower code use to conjugate elements without expanding words.
    """

    def __init__(self, field: Field, n: int):
        self.field = field
        self.n = n
        self.basis = enumerate_basis(n)
        self.index = basis_index(n)
        self._left: dict[int, Matrix] = {}
        self._right: dict[int, Matrix] = {}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords(self, x: TlElement) -> Matrix:
        v = Matrix.zeros(self.field, self.dim, 1)
        for d, c in x.terms.items():
            v.set_entry(self.index[d], 0, c)
        return v

    def element(self, v: Matrix) -> TlElement:
        return TlElement(self.field, self.n,
                         {self.basis[k]: v.entry(k, 0) for k in range(self.dim)})

    def _gen_matrix(self, i: int, left: bool) -> Matrix:
        e = gen_e(i, self.n)
        M = Matrix.zeros(self.field, self.dim, self.dim)
        m = self.field.m
        for k, d in enumerate(self.basis):
            prod, loops = e.compose(d) if left else d.compose(e)
            M.set_entry(self.index[prod], k, m ** loops)
        return M

    def left_e(self, i: int) -> Matrix:
        if i not in self._left:
            self._left[i] = self._gen_matrix(i, True)
        return self._left[i]

    def right_e(self, i: int) -> Matrix:
        if i not in self._right:
            self._right[i] = self._gen_matrix(i, False)
        return self._right[i]

    def left_g(self, i: int, sign: int = 1) -> Matrix:
        a, b = self.field.braid_coeffs(sign)
        return Matrix.scalar_matrix(self.field, self.dim, a) + self.left_e(i).scale(b)

    def right_g(self, i: int, sign: int = 1) -> Matrix:
        a, b = self.field.braid_coeffs(sign)
        return Matrix.scalar_matrix(self.field, self.dim, a) + self.right_e(i).scale(b)


def standard_dim(n: int, j) -> int:
    """Dimension of the finite standard module with ``2j`` through-lines."""
    two_j = int(round(2 * j))
    if two_j < 0 or two_j > n or (n - two_j) % 2:
        return 0
    k = (n + two_j) // 2
    return comb(n, k) - (comb(n, k + 1) if k + 1 <= n else 0)
