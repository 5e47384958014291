"""The affine Temperley-Lieb algebra as a diagram algebra on the annulus.

Diagrams are stored on the universal cover of the annulus.  Each of the ``n``
bottom and ``n`` top representative sites records its partner as a lifted
point ``(side, x)`` with ``side`` 0 for bottom, 1 for top and ``x`` an integer
whose residue mod ``n`` is the site and whose quotient is the winding.  With
the framing fixed this encoding is already canonical.  Positive shifts point
rightwards, the direction in which the translation ``u`` carries a bottom
site to the top.
"""
from __future__ import annotations

from typing import Callable, Iterable, Sequence

from .report import Report
from .scalars import Field, Scalar
from .tl import parse_token

BOTTOM, TOP = 0, 1

Point = tuple[int, int]


class AffineDiagram:
    __slots__ = ("n", "partner", "nloops", "_hash")

    def __init__(self, n: int, partner: Sequence[Point], nloops: int = 0):
        self.n = n
        self.partner = tuple((int(s), int(x)) for s, x in partner)
        self.nloops = nloops
        self._hash = hash((n, self.partner, nloops))

    @classmethod
    def identity(cls, n: int) -> "AffineDiagram":
        return cls(n, [(TOP, k) for k in range(n)] + [(BOTTOM, k) for k in range(n)])

    def partner_of(self, side: int, x: int) -> Point:
        """Partner of the lifted point ``(side, x)``."""
        n = self.n
        w, r = divmod(x, n)
        s2, y = self.partner[r if side == BOTTOM else n + r]
        return s2, y + w * n

    def __eq__(self, other):
        return (isinstance(other, AffineDiagram) and self.n == other.n
                and self.partner == other.partner and self.nloops == other.nloops)

    def __lt__(self, other):
        return (self.nloops, self.partner) < (other.nloops, other.partner)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"AffineDiagram({self.n}, {list(self.partner)}, nloops={self.nloops})"

    def through_lines(self) -> int:
        return sum(1 for k in range(self.n) if self.partner[k][0] == TOP)

    def max_shift(self) -> int:
        """Largest winding (in whole periods) of any pair."""
        return max(abs(y // self.n) for _, y in self.partner)

    def is_valid(self) -> bool:
        """Pairing is an involution on the lift and no two pairs cross on the cylinder."""
        n = self.n
        for k in range(2 * n):
            side = BOTTOM if k < n else TOP
            x = k % n
            s2, y = self.partner[k]
            if (s2, y) == (side, x) or self.partner_of(s2, y) != (side, x):
                return False
        return _lift_planar(self)

    def compose(self, below: "AffineDiagram") -> tuple["AffineDiagram", int]:
        return compose_affine(self, below)

    def to_json(self) -> dict:
        return {"n": self.n, "partner": [list(p) for p in self.partner], "jlines": self.through_lines(),
                "nloops": self.nloops}


def _lift_planar(d: AffineDiagram) -> bool:
    # Unroll a window of periods and check for interleaving chords.  Bottom and
    # top lines are placed on the two sides of a strip; a chord between points
    # (s1, x1) and (s2, x2) is drawn as a curve inside the strip.
    n = d.n
    width = d.max_shift() + 2
    chords = set()
    for w in range(-width, width + 1):
        for k in range(2 * n):
            side = BOTTOM if k < n else TOP
            a = (side, k % n + w * n)
            b = d.partner_of(*a)
            chords.add(tuple(sorted((a, b))))

    def key(p):
        # order points around the boundary of a long strip: bottom left to right, top right to left
        return p[1] if p[0] == BOTTOM else 10 ** 9 - p[1]

    items = [tuple(sorted((key(a), key(b)))) for a, b in chords]
    lo = -(width - 1) * n
    hi = width * n
    core = [c for c, (a, b) in zip(items, chords)
            if any(lo <= p[1] < hi for p in (a, b))]
    for x1, y1 in core:
        for x2, y2 in items:
            if x1 < x2 < y1 < y2:
                return False
    return True


def gen_u(n: int, sign: int = 1) -> AffineDiagram:
    """The translation ``u`` (``sign=+1``) or its inverse: bottom site i meets top site i+sign."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return AffineDiagram(n, [(TOP, k + sign) for k in range(n)] + [(BOTTOM, k - sign) for k in range(n)])


def gen_e_affine(i: int, n: int) -> AffineDiagram:
    """Cup-cap on sites ``i, i+1`` (1-based, modulo ``n``); ``i = 0`` or ``n`` crosses the seam."""
    if n < 2:
        raise ValueError("e-generators need at least two sites")
    i %= n
    partner = list(AffineDiagram.identity(n).partner)
    if i == 0:
        a, b = n - 1, n  # lifted: last site and first site of the next period
    else:
        a, b = i - 1, i
    for side, off in ((BOTTOM, 0), (TOP, n)):
        partner[off + a % n] = (side, b - (a - a % n))
        partner[off + b % n] = (side, a - (b - b % n))
    return AffineDiagram(n, partner)


ComposeAffine = Callable[[AffineDiagram, AffineDiagram], tuple[AffineDiagram, int]]


def compose_affine(top: AffineDiagram, bottom: AffineDiagram) -> tuple[AffineDiagram, int]:
    """Stack ``top`` on ``bottom``; return the product and the number of contractible loops.

    Non-contractible loops are accumulated in ``nloops`` of the result.
    """
    n = top.n
    if bottom.n != n:
        raise ValueError(f"size mismatch: {n} vs {bottom.n}")
    seen = [False] * n

    def follow(x: int, into_top: bool) -> Point:
        # x is a lifted middle point; walk until an external point is reached
        while True:
            seen[x % n] = True
            if into_top:
                s, y = top.partner_of(BOTTOM, x)
                if s == TOP:
                    return TOP, y
            else:
                s, y = bottom.partner_of(TOP, x)
                if s == BOTTOM:
                    return BOTTOM, y
            x = y
            into_top = not into_top

    res: list[Point] = [None] * (2 * n)
    for k in range(n):
        s, y = bottom.partner_of(BOTTOM, k)
        res[k] = (BOTTOM, y) if s == BOTTOM else follow(y, True)
        s, y = top.partner_of(TOP, k)
        res[n + k] = (TOP, y) if s == TOP else follow(y, False)

    contractible = 0
    winding = 0
    for r in range(n):
        if seen[r]:
            continue
        x = r
        while True:
            seen[x % n] = True
            _, y = top.partner_of(BOTTOM, x)
            seen[y % n] = True
            _, x = bottom.partner_of(TOP, y)
            if x % n == r:
                break
        if x == r:
            contractible += 1
        else:
            winding += 1
    return AffineDiagram(n, res, top.nloops + bottom.nloops + winding), contractible


class AtlElement:
    """A finite linear combination of affine diagrams."""

    __slots__ = ("field", "n", "terms")

    def __init__(self, field: Field, n: int, terms: dict | None = None):
        self.field = field
        self.n = n
        self.terms = {d: c for d, c in (terms or {}).items() if not c.is_zero()}

    @classmethod
    def zero(cls, field: Field, n: int) -> "AtlElement":
        return cls(field, n)

    @classmethod
    def identity(cls, field: Field, n: int) -> "AtlElement":
        return cls(field, n, {AffineDiagram.identity(n): field.one})

    @classmethod
    def from_diagram(cls, field: Field, d: AffineDiagram, coeff=None) -> "AtlElement":
        return cls(field, d.n, {d: field.one if coeff is None else field.scalar(coeff)})

    def __add__(self, other: "AtlElement") -> "AtlElement":
        if other.n != self.n:
            raise ValueError(f"size mismatch: {self.n} vs {other.n}")
        terms = dict(self.terms)
        for d, c in other.terms.items():
            terms[d] = terms[d] + c if d in terms else c
        return AtlElement(self.field, self.n, terms)

    def __neg__(self) -> "AtlElement":
        return AtlElement(self.field, self.n, {d: -c for d, c in self.terms.items()})

    def __sub__(self, other: "AtlElement") -> "AtlElement":
        return self + (-other)

    def scale(self, c) -> "AtlElement":
        c = self.field.scalar(c)
        return AtlElement(self.field, self.n, {d: c * x for d, x in self.terms.items()})

    def mul(self, other: "AtlElement", compose: ComposeAffine | None = None) -> "AtlElement":
        if other.n != self.n:
            raise ValueError(f"size mismatch: {self.n} vs {other.n}")
        compose = compose or compose_affine
        m = self.field.m
        terms: dict[AffineDiagram, Scalar] = {}
        for d1, c1 in self.terms.items():
            for d2, c2 in other.terms.items():
                d, loops = compose(d1, d2)
                c = c1 * c2 * m ** loops if loops else c1 * c2
                terms[d] = terms[d] + c if d in terms else c
        return AtlElement(self.field, self.n, terms)

    def __mul__(self, other):
        if isinstance(other, AtlElement):
            return self.mul(other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int) -> "AtlElement":
        if k < 0:
            raise ValueError("negative powers are only defined for words in u")
        out = AtlElement.identity(self.field, self.n)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, AtlElement):
            return NotImplemented
        return self.n == other.n and (self - other).is_zero()

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, d: AffineDiagram) -> Scalar:
        return self.terms.get(d, self.field.zero)

    def __repr__(self):
        return f"AtlElement(n={self.n}, terms={len(self.terms)})"

    def to_json(self) -> list:
        return [{"diagram": d.to_json(), "scalar": str(c)} for d, c in sorted(self.terms.items())]


def e_affine(field: Field, i: int, n: int) -> AtlElement:
    return AtlElement.from_diagram(field, gen_e_affine(i, n))


def u_affine(field: Field, n: int, sign: int = 1) -> AtlElement:
    return AtlElement.from_diagram(field, gen_u(n, sign))


def braid_affine(field: Field, i: int, n: int, sign: int = 1) -> AtlElement:
    """``g_i^{sign}`` in the affine algebra; ``i`` is taken modulo ``n`` (so ``g_0`` crosses the seam)."""
    alpha, beta = field.braid_coeffs(sign)
    return AtlElement.identity(field, n).scale(alpha) + e_affine(field, i, n).scale(beta)


def token_affine(field: Field, token: str, n: int) -> AtlElement:
    kind, idx, sign = parse_token(token)
    if kind == "u":
        return u_affine(field, n, sign)
    if kind == "e":
        return e_affine(field, idx, n)
    return braid_affine(field, idx, n, sign)


def word_eval_affine(field: Field, word: Iterable[str], n: int) -> AtlElement:
    """Product of generator tokens (``e_i``, ``u``, ``u^-1``, ``g_i``, ``g_i^-1``) left to right."""
    out = AtlElement.identity(field, n)
    for tok in word:
        out = out * token_affine(field, tok, n)
    return out


def verify_atl_relations(n: int, field: Field | None = None,
                         compose: ComposeAffine | None = None) -> Report:
    """Check the defining relations of ATL_n as identities of diagram combinations.

    For two sites the relation ``e_j e_{j+1} e_j = e_j`` is not part of the
    presentation (the product closes a non-contractible loop), so it is skipped.
    """
    field = field or Field.exact()
    rep = Report(f"ATL_{n} relations")
    mul = lambda a, b: a.mul(b, compose)
    e = {j: e_affine(field, j, n) for j in range(n)}
    u = u_affine(field, n, 1)
    ui = u_affine(field, n, -1)
    one = AtlElement.identity(field, n)
    rep.add("u u^-1 = 1", mul(u, ui) == one)
    rep.add("u^-1 u = 1", mul(ui, u) == one)
    for j in range(n):
        rep.add(f"e{j}^2 = m e{j}", mul(e[j], e[j]) == e[j].scale(field.m))
        if n >= 3:
            for k in ((j - 1) % n, (j + 1) % n):
                rep.add(f"e{j} e{k} e{j} = e{j}", mul(mul(e[j], e[k]), e[j]) == e[j])
        for k in range(j + 1, n):
            if (k - j) % n not in (1, n - 1):
                rep.add(f"e{j} e{k} = e{k} e{j}", mul(e[j], e[k]) == mul(e[k], e[j]))
        rep.add(f"u e{j} u^-1 = e{(j + 1) % n}", mul(mul(u, e[j]), ui) == e[(j + 1) % n])
    chain = one
    for j in range(1, n):
        chain = mul(chain, e[j])
    rep.add(f"u^2 e{n - 1} = e1...e{n - 1}", mul(mul(u, u), e[n - 1]) == chain)
    return rep
