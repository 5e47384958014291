"""Recognizing fusion products as sums of standard modules.

Finite modules at generic parameters are semisimple, so a decomposition is
fixed by traces: the trace of a probe word on the module is solved against the
traces on the candidate standard modules.  Affine modules are matched one at a
time against ``W_{j,z}`` with ``j`` read from the dimension and ``z`` from the
scalar by which ``u^N`` acts, and the match is certified by an explicit
intertwiner.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb
from typing import Iterable

from .linalg import Matrix
from .modules import ModuleRep, find_intertwiner, fmt_half, standard_affine, standard_finite
from .scalars import Field, Scalar
from .tl import standard_dim


# ----------------------------------------------------------------- finite

def probe_words(n: int, count: int, seed: int = 0) -> list[tuple[str, ...]]:
    """The empty word, products of disjoint cup-caps, then random words."""
    words: list[tuple[str, ...]] = [()]
    for k in range(1, n // 2 + 1):
        words.append(tuple(f"e{2 * t + 1}" for t in range(k)))
    rng = random.Random(seed)
    while len(words) < count and n >= 2:
        length = rng.randint(1, 2 * n)
        words.append(tuple(f"e{rng.randint(1, n - 1)}" for _ in range(length)))
    return words


def decompose_generic(M: ModuleRep, seed: int = 0) -> dict[Fraction, int] | None:
    """Multiplicities of ``W_j`` in a finite module by trace solve, or None if no fit.

    The probe system is overdetermined; a fit requires it to be consistent,
    the candidate characters to be independent and every multiplicity to be a
    small nonnegative integer.
    """
    f, n = M.field, M.n
    js = [Fraction(t, 2) for t in range(n % 2, n + 1, 2)]
    if M.dim == 0:
        return {}
    words = probe_words(n, len(js) + 6, seed)
    stds = {j: standard_finite(f, n, j) for j in js}
    T = Matrix.from_rows(f, [[stds[j].word_matrix(w).trace() for j in js] for w in words])
    t = Matrix.from_rows(f, [[M.word_matrix(w).trace()] for w in words])
    if T.rank() < len(js):
        return None
    c = T.solve(t)
    if c is None:
        return None
    out = {}
    for k, j in enumerate(js):
        val = c.entry(k, 0)
        mult = next((a for a in range(M.dim + 1) if val == f.scalar(a)), None)
        if mult is None:
            return None
        if mult:
            out[j] = mult
    if sum(mult * standard_dim(n, j) for j, mult in out.items()) != M.dim:
        return None
    return out


def clebsch_gordan(j1, j2) -> dict[Fraction, int]:
    j1, j2 = Fraction(j1), Fraction(j2)
    out = {}
    j = abs(j1 - j2)
    while j <= j1 + j2:
        out[j] = 1
        j += 1
    return out


# ----------------------------------------------------------------- affine

@dataclass
class Identification:
    """Outcome of matching an affine module against the standard family."""

    kind: str  # "zero", "standard" or "non-standard"
    dim: int
    j: Fraction | None = None
    z: Scalar | None = None
    u_power: Scalar | None = None
    loop_weight_sq: Scalar | None = None
    certified: bool = False
    notes: list[str] = dc_field(default_factory=list)

    def label(self) -> str:
        if self.kind == "zero":
            return "0"
        if self.kind == "standard":
            return f"W_{fmt_half(self.j)},{self.z}"
        return "non-standard module"

    def same_as(self, other: "Identification") -> bool:
        """Equal labels, with ``z`` compared up to ``z -> -z, 1/z`` when ``j = 0``."""
        if self.kind != other.kind:
            return False
        if self.kind != "standard":
            return True
        if self.j != other.j:
            return False
        if self.j == 0:
            return self.loop_weight_sq == other.loop_weight_sq
        return self.z == other.z

    def to_json(self) -> dict:
        return {"kind": self.kind, "dim": self.dim, "label": self.label(),
                "j": None if self.j is None else fmt_half(self.j),
                "z": None if self.z is None else str(self.z),
                "u_power": None if self.u_power is None else str(self.u_power),
                "certified": self.certified, "notes": list(self.notes)}


def candidate_spins(n: int, dim: int) -> list[Fraction]:
    return [Fraction(t, 2) for t in range(n % 2, n + 1, 2) if comb(n, (n + t) // 2) == dim]


def _roots_modp(field: Field, c: Scalar, k: int) -> list[Scalar]:
    from sympy.ntheory import nthroot_mod

    roots = nthroot_mod(int(c), k, field.p, all_roots=True) or []
    return [field.scalar(int(r)) for r in roots]


def _sqrts(field: Field, c: Scalar) -> list[Scalar]:
    if field.backend == "modp":
        return _roots_modp(field, c, 2)
    return []


def loop_weight_squared(M: ModuleRep) -> Scalar | None:
    """``w^2`` with ``P Q P = w^2 P``, ``P`` and ``Q`` the two alternating cup-cap products."""
    n = M.n
    if n % 2 or n < 2:
        return None
    P = M.identity()
    Q = M.identity()
    for t in range(n // 2):
        P = P @ M.e(2 * t + 1)
        Q = Q @ M.e(2 * t + 2)
    if P.is_zero():
        return None
    PQP = P @ Q @ P
    r, c = next((r, c) for r in range(P.shape[0]) for c in range(P.shape[1])
                if not P.entry(r, c).is_zero())
    w2 = PQP.entry(r, c) / P.entry(r, c)
    return w2 if PQP == P.scale(w2) else None


def identify_affine(M: ModuleRep, hints: Iterable[Scalar] = (), seed: int = 0) -> Identification:
    """Match ``M`` with some ``W_{j,z}[N]`` by an explicit intertwiner.

    ``hints`` are tried first; over a prime field every root of the relevant
    equation is tried as well, over other fields only the hints are.
    """
    f, n, d = M.field, M.n, M.dim
    if d == 0:
        return Identification("zero", 0, certified=True)
    hints = [f.scalar(h) for h in hints]
    U = M.mats["u"] ** n
    c = U.is_scalar()
    spins = candidate_spins(n, d)
    if n >= 2 and all(M.e(k).is_zero() for k in range(n)):
        spins = [j for j in spins if 2 * j == n]
    out = Identification("non-standard module", d, u_power=c)
    if c is None:
        out.notes.append("u^N is not scalar")
        return out
    for j in spins:
        if j == 0:
            w2 = loop_weight_squared(M)
            if w2 is None:
                continue
            out.loop_weight_sq = w2
            cands = [h for h in hints if (h + h.inverse()) ** 2 == w2]
            for w in _sqrts(f, w2):
                disc = w * w - f.scalar(4)
                for r in _sqrts(f, disc):
                    cands.append((w + r) / f.scalar(2))
        else:
            two_j = int(2 * j)
            cands = [h for h in hints if h ** two_j == c]
            if f.backend == "modp":
                cands += _roots_modp(f, c, two_j)
        seen = []
        for z in cands:
            if z.is_zero() or z in seen:
                continue
            seen.append(z)
            W = standard_affine(f, n, j, z)
            X = find_intertwiner(W, M, rng_seed=seed)
            if X is not None:
                out.kind, out.j, out.z, out.certified = "standard", j, z, True
                if j == 0:
                    out.notes.append("z is determined up to z -> -z and z -> 1/z")
                return out
    if not spins:
        out.notes.append(f"no standard module on {n} sites has dimension {d}")
    else:
        out.notes.append("no intertwiner with a standard module of matching dimension")
    return out
