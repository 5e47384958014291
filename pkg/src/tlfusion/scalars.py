"""Coefficient fields shared by every other module.

Three interchangeable backends implement one contract:

* ``exact``: rational functions in ``s`` (with ``q = s**2``) over the Gaussian
  rationals, always stored gcd-reduced with a monic denominator.
* ``modp``: the prime field GF(p) with ``p = 1 mod 4``; ``s`` and every named
  parameter are pseudo-random nonzero residues drawn from a seed.
* ``cyclotomic``: Q[x]/Phi_{4p}(x) with ``s = x`` (so ``q = exp(i pi / p)``)
  and ``i = x**p``.
"""
from __future__ import annotations

import ast
import random
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "ConfigError",
    "DegenerateScalar",
    "Field",
    "Scalar",
    "DEFAULT_PRIMES",
]

DEFAULT_PRIMES = (2147483629, 2147483549, 2147483497)

_GENERIC_DEFAULTS = (
    Fraction(3), Fraction(5, 2), Fraction(7, 3), Fraction(11, 5),
    Fraction(13, 4), Fraction(17, 6), Fraction(19, 7), Fraction(23, 9),
)


class DegenerateScalar(ArithmeticError):
    """Raised on division by zero or when a construction needs a nonzero value."""


class ConfigError(ValueError):
    """Raised for inconsistent field configuration or mixed backends."""


# ---------------------------------------------------------------- Q(i) helpers
# A Gaussian rational is a pair (re, im) of Fractions.  Polynomials are tuples
# of Gaussian rationals, lowest degree first, without trailing zeros.

_GZERO = (Fraction(0), Fraction(0))
_GONE = (Fraction(1), Fraction(0))


def _gnz(a):
    return a[0] != 0 or a[1] != 0


def _gmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _ginv(a):
    n = a[0] * a[0] + a[1] * a[1]
    return (a[0] / n, -a[1] / n)


def _trim(c):
    n = len(c)
    while n and not _gnz(c[n - 1]):
        n -= 1
    return tuple(c[:n])


def _padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for k, c in enumerate(b):
        o = out[k]
        out[k] = (o[0] + c[0], o[1] + c[1])
    return _trim(out)


def _pneg(a):
    return tuple((-c[0], -c[1]) for c in a)


def _pmul(a, b):
    if not a or not b:
        return ()
    out = [[Fraction(0), Fraction(0)] for _ in range(len(a) + len(b) - 1)]
    for k, x in enumerate(a):
        if not _gnz(x):
            continue
        x0, x1 = x
        for l, y in enumerate(b):
            y0, y1 = y
            o = out[k + l]
            o[0] += x0 * y0 - x1 * y1
            o[1] += x0 * y1 + x1 * y0
    return _trim([tuple(o) for o in out])


def _pscale(a, c):
    return _trim([_gmul(x, c) for x in a])


def _pdivmod(a, b):
    a = list(a)
    inv_lc = _ginv(b[-1])
    db = len(b) - 1
    if len(a) - 1 < db:
        return (), _trim(a)
    quot = [_GZERO] * (len(a) - db)
    for k in range(len(a) - 1 - db, -1, -1):
        c = a[k + db]
        if not _gnz(c):
            continue
        f = _gmul(c, inv_lc)
        quot[k] = f
        for l, y in enumerate(b):
            t = _gmul(f, y)
            o = a[k + l]
            a[k + l] = (o[0] - t[0], o[1] - t[1])
    return _trim(quot), _trim(a[:db])


def _pmonic(a):
    return _pscale(a, _ginv(a[-1]))


def _pgcd(a, b):
    while b:
        a, b = b, _pdivmod(a, b)[1]
    return _pmonic(a)


def _val(a):
    k = 0
    while not _gnz(a[k]):
        k += 1
    return k


def _fmt_frac(x):
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _fmt_gauss(c):
    re, im = c
    sign = "-" if im < 0 else "+"
    return f"{_fmt_frac(re)}{sign}{_fmt_frac(abs(im))}i"


def _fmt_poly(p, var="s"):
    if not p:
        return "(0+0i)"
    terms = []
    for k in range(len(p) - 1, -1, -1):
        if not _gnz(p[k]):
            continue
        c = f"({_fmt_gauss(p[k])})"
        terms.append(c if k == 0 else (f"{c}*{var}" if k == 1 else f"{c}*{var}^{k}"))
    return " + ".join(terms)


# ------------------------------------------------------------ Q[x] helpers
# Rational polynomials for the cyclotomic backend: tuples of Fractions.

def _qtrim(c):
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return tuple(c[:n])


def _qmul(a, b):
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for k, x in enumerate(a):
        if x:
            for l, y in enumerate(b):
                out[k + l] += x * y
    return _qtrim(out)


def _qsub(a, b):
    n = max(len(a), len(b))
    return _qtrim([(a[k] if k < len(a) else 0) - (b[k] if k < len(b) else 0) for k in range(n)])


def _qdivmod(a, b):
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return (), _qtrim(a)
    quot = [Fraction(0)] * (len(a) - db)
    for k in range(len(a) - 1 - db, -1, -1):
        c = a[k + db]
        if c:
            f = c / b[-1]
            quot[k] = f
            for l, y in enumerate(b):
                a[k + l] -= f * y
    return _qtrim(quot), _qtrim(a[:db])


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple:
    """Coefficients of the n-th cyclotomic polynomial, lowest degree first."""
    num = tuple([Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)])
    for d in range(1, n):
        if n % d == 0:
            num = _qdivmod(num, cyclotomic_poly(d))[0]
    return num


# ------------------------------------------------------------------ scalars

class Scalar:
    """Common arithmetic front end; subclasses hold backend payloads."""

    __slots__ = ("field",)
    backend = "abstract"

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.field is not self.field:
                if other.field.backend != self.field.backend:
                    raise ConfigError(
                        f"backend mismatch: {self.field.backend} vs {other.field.backend}")
                if other.field.key() != self.field.key():
                    raise ConfigError("scalars from differently configured fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._add(other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._add(-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other._add(-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._mul(other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._mul(other.inverse())

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other._mul(self.inverse())

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self.field.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.scalar(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.field.backend == other.field.backend and self._key() == other._key()

    def __hash__(self):
        return hash((self.field.backend, self._key()))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"Scalar[{self.field.backend}]({self})"


class ExactScalar(Scalar):
    """Reduced ratio num/den of polynomials in s over Q(i); den is monic."""

    __slots__ = ("num", "den")
    backend = "exact"

    def __init__(self, field, num, den):
        self.field = field
        self.num = num
        self.den = den

    @classmethod
    def make(cls, field, num, den):
        if not den:
            raise DegenerateScalar("division by zero")
        if not num:
            return cls(field, (), (_GONE,))
        k = min(_val(num), _val(den))
        if k:
            num, den = num[k:], den[k:]
        if len(den) > 1 and not (len(den) - 1 == _val(den)):
            g = _pgcd(num, den)
            if len(g) > 1:
                num = _pdivmod(num, g)[0]
                den = _pdivmod(den, g)[0]
        lc = den[-1]
        if lc != _GONE:
            inv = _ginv(lc)
            num = _pscale(num, inv)
            den = _pscale(den, inv)
        return cls(field, num, den)

    def _key(self):
        return (self.num, self.den)

    def is_zero(self):
        return not self.num

    def _add(self, o):
        if self.den == o.den:
            return ExactScalar.make(self.field, _padd(self.num, o.num), self.den)
        return ExactScalar.make(
            self.field,
            _padd(_pmul(self.num, o.den), _pmul(o.num, self.den)),
            _pmul(self.den, o.den),
        )

    def __neg__(self):
        return ExactScalar(self.field, _pneg(self.num), self.den)

    def _mul(self, o):
        if not self.num or not o.num:
            return self.field.zero
        return ExactScalar.make(self.field, _pmul(self.num, o.num), _pmul(self.den, o.den))

    def inverse(self):
        if not self.num:
            raise DegenerateScalar("division by zero")
        return ExactScalar.make(self.field, self.den, self.num)

    def __str__(self):
        return f"({_fmt_poly(self.num)})/({_fmt_poly(self.den)})"

    def evaluate(self, s, i, one):
        """Image under the ring map sending s and i to the given values."""
        def ev(p):
            acc = one * 0
            for c in reversed(p):
                acc = acc * s + (one * c[0] + i * c[1])
            return acc
        d = ev(self.den)
        if d.is_zero():
            raise DegenerateScalar("specialization kills the denominator")
        return ev(self.num) / d


class ModPScalar(Scalar):
    __slots__ = ("v",)
    backend = "modp"

    def __init__(self, field, v):
        self.field = field
        self.v = v

    def _key(self):
        return self.v

    def is_zero(self):
        return self.v == 0

    def _add(self, o):
        return ModPScalar(self.field, (self.v + o.v) % self.field.p)

    def __neg__(self):
        return ModPScalar(self.field, (-self.v) % self.field.p)

    def _mul(self, o):
        return ModPScalar(self.field, (self.v * o.v) % self.field.p)

    def inverse(self):
        if self.v == 0:
            raise DegenerateScalar("division by zero")
        return ModPScalar(self.field, pow(self.v, -1, self.field.p))

    def __int__(self):
        return self.v

    def __str__(self):
        return f"{self.v} mod {self.field.p}"


class CycloScalar(Scalar):
    """Residue of a rational polynomial modulo Phi_{4p}, stored reduced."""

    __slots__ = ("c",)
    backend = "cyclotomic"

    def __init__(self, field, c):
        self.field = field
        self.c = c

    @classmethod
    def make(cls, field, c):
        c = _qtrim(c)
        if len(c) > field.degree:
            c = _qdivmod(c, field.phi)[1]
        return cls(field, c)

    def _key(self):
        return self.c

    def is_zero(self):
        return not self.c

    def _add(self, o):
        n = max(len(self.c), len(o.c))
        a = self.c + (Fraction(0),) * (n - len(self.c))
        b = o.c + (Fraction(0),) * (n - len(o.c))
        return CycloScalar(self.field, _qtrim([x + y for x, y in zip(a, b)]))

    def __neg__(self):
        return CycloScalar(self.field, tuple(-x for x in self.c))

    def _mul(self, o):
        return CycloScalar.make(self.field, _qmul(self.c, o.c))

    def inverse(self):
        if not self.c:
            raise DegenerateScalar("division by zero")
        # extended Euclid: find t with t*c = 1 mod phi
        r0, r1 = self.field.phi, self.c
        t0, t1 = (), (Fraction(1),)
        while len(r1) > 1:
            qq, r = _qdivmod(r0, r1)
            r0, r1 = r1, r
            t0, t1 = t1, _qsub(t0, _qmul(qq, t1))
        if not r1:
            raise DegenerateScalar("non-invertible residue")
        inv = tuple(x / r1[0] for x in t1)
        return CycloScalar.make(self.field, inv)

    def __str__(self):
        if not self.c:
            return "0"
        terms = []
        for k in range(len(self.c) - 1, -1, -1):
            if self.c[k]:
                c = _fmt_frac(self.c[k])
                terms.append(c if k == 0 else f"({c})*x^{k}")
        return " + ".join(terms)


# -------------------------------------------------------------------- field

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Field:
    """A configured coefficient field (the FieldConfig of the design).

    Use the constructors :meth:`exact`, :meth:`modp` and :meth:`cyclotomic`.
    Named parameters (``z1``, ``z2``, ...) are looked up with :meth:`z`; unbound
    names receive a deterministic generic value.
    """

    def __init__(self, backend: str, p: int | None = None, seed: int = 0):
        if backend not in ("exact", "modp", "cyclotomic"):
            raise ConfigError(f"unknown backend {backend!r}")
        self.backend = backend
        self.p = p
        self.seed = seed
        self._params: dict[str, Scalar] = {}
        if backend == "modp":
            if p is None or not _is_prime(p) or p % 4 != 1:
                raise ConfigError(f"modp backend needs a prime p = 1 mod 4, got {p}")
            self.one = ModPScalar(self, 1)
            self.zero = ModPScalar(self, 0)
            self.i = ModPScalar(self, self._sqrt_minus_one(p))
            self.s = ModPScalar(self, self._draw("s"))
        elif backend == "exact":
            self.one = ExactScalar(self, (_GONE,), (_GONE,))
            self.zero = ExactScalar(self, (), (_GONE,))
            self.i = ExactScalar(self, ((Fraction(0), Fraction(1)),), (_GONE,))
            self.s = ExactScalar(self, (_GZERO, _GONE), (_GONE,))
        else:
            if p is None or p < 2:
                raise ConfigError("cyclotomic backend needs an integer p >= 2")
            self.phi = cyclotomic_poly(4 * p)
            self.degree = len(self.phi) - 1
            self.one = CycloScalar(self, (Fraction(1),))
            self.zero = CycloScalar(self, ())
            self.s = CycloScalar.make(self, (Fraction(0), Fraction(1)))
            self.i = CycloScalar.make(self, (Fraction(0),) * p + (Fraction(1),))
        self.q = self.s * self.s
        self.m = self.q + self.q.inverse()

    # constructors ---------------------------------------------------------
    @classmethod
    def exact(cls) -> "Field":
        return cls("exact")

    @classmethod
    def modp(cls, p: int = DEFAULT_PRIMES[0], seed: int = 0) -> "Field":
        return cls("modp", p=p, seed=seed)

    @classmethod
    def cyclotomic(cls, p: int) -> "Field":
        return cls("cyclotomic", p=p)

    @classmethod
    def generic_family(cls, count: int = 3, seed: int = 0) -> list["Field"]:
        """Independent modp specializations used as a genericity certificate."""
        return [cls.modp(DEFAULT_PRIMES[k % len(DEFAULT_PRIMES)], seed=seed + k)
                for k in range(count)]

    def key(self) -> tuple:
        return (self.backend, self.p, self.seed)

    def __repr__(self):
        extra = "" if self.backend == "exact" else f", p={self.p}"
        if self.backend == "modp":
            extra += f", seed={self.seed}"
        return f"Field({self.backend}{extra})"

    # helpers --------------------------------------------------------------
    @staticmethod
    def _sqrt_minus_one(p: int) -> int:
        g = 2
        while pow(g, (p - 1) // 2, p) != p - 1:
            g += 1
        return pow(g, (p - 1) // 4, p)

    def _draw(self, name: str) -> int:
        rng = random.Random(f"{self.seed}/{self.p}/{name}")
        return rng.randrange(2, self.p - 1)

    def scalar(self, x) -> Scalar:
        """Coerce an int, Fraction or same-backend Scalar into this field."""
        if isinstance(x, Scalar):
            if x.field is self:
                return x
            if x.field.backend == "exact" and self.backend != "exact":
                return self.specialize(x)
            if x.field.key() == self.key():
                return x
            raise ConfigError(f"cannot coerce {x.field} scalar into {self}")
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, int):
            x = Fraction(x)
        if isinstance(x, Fraction):
            if self.backend == "modp":
                return ModPScalar(self, x.numerator * pow(x.denominator, -1, self.p) % self.p)
            if self.backend == "exact":
                if x == 0:
                    return self.zero
                return ExactScalar(self, ((x, Fraction(0)),), (_GONE,))
            return CycloScalar(self, _qtrim((x,)))
        raise TypeError(f"cannot make a scalar from {type(x).__name__}")

    def specialize(self, x: "ExactScalar") -> Scalar:
        """Ring map from the exact backend: s -> self.s, i -> self.i."""
        return x.evaluate(self.s, self.i, self.one)

    def braid_coeffs(self, sign: int) -> tuple[Scalar, Scalar]:
        """(alpha, beta) with g**sign = alpha*1 + beta*e."""
        if sign == 1:
            return self.i * self.s, -(self.i / self.s)
        if sign == -1:
            return -(self.i / self.s), self.i * self.s
        raise ValueError("sign must be +1 or -1")

    def loop_weight(self) -> Scalar:
        return self.m

    # named parameters -----------------------------------------------------
    def bind(self, name: str, value) -> None:
        value = self.scalar(value) if not isinstance(value, str) else self.parse(value)
        if value.is_zero():
            raise DegenerateScalar(f"parameter {name} must be nonzero")
        self._params[name] = value

    def z(self, name: str) -> Scalar:
        if name not in self._params:
            if self.backend == "modp":
                self._params[name] = ModPScalar(self, self._draw(name))
            else:
                idx = sum(ord(ch) * 31 ** k for k, ch in enumerate(name))
                self._params[name] = self.scalar(_GENERIC_DEFAULTS[idx % len(_GENERIC_DEFAULTS)])
        return self._params[name]

    def random(self, rng: random.Random, span: int = 5) -> Scalar:
        """A random (possibly zero) element used by property tests."""
        if self.backend == "modp":
            return ModPScalar(self, rng.randrange(self.p))
        if self.backend == "cyclotomic":
            return CycloScalar(self, _qtrim([Fraction(rng.randint(-span, span), rng.randint(1, 3))
                                             for _ in range(self.degree)]))
        num = _trim([(Fraction(rng.randint(-span, span)), Fraction(rng.randint(-span, span)))
                     for _ in range(rng.randint(1, 3))])
        den = _trim([(Fraction(rng.randint(-span, span)), Fraction(rng.randint(-1, 1)))
                     for _ in range(rng.randint(1, 3))])
        if not den:
            den = (_GONE,)
        if not num:
            return self.zero
        shift = rng.randint(-2, 2)
        x = ExactScalar.make(self, num, den)
        return x * self.s ** shift

    # parsing --------------------------------------------------------------
    def parse(self, text: str) -> Scalar:
        """Evaluate an arithmetic expression in s, q, i, m, integers and parameters.

        ``^`` and ``**`` both denote powers, e.g. ``"-q*z1"`` or ``"i*s^3/z2"``.
        """
        try:
            tree = ast.parse(text.replace("^", "**"), mode="eval")
        except SyntaxError as exc:
            raise ConfigError(f"cannot parse scalar expression {text!r}") from exc
        return self._eval(tree.body, text)

    def _eval(self, node, text):
        if isinstance(node, ast.BinOp):
            left = self._eval(node.left, text)
            if isinstance(node.op, ast.Pow):
                if not isinstance(node.right, (ast.Constant, ast.UnaryOp)):
                    raise ConfigError(f"exponent must be an integer in {text!r}")
                k = self._eval_int(node.right, text)
                return left ** k
            right = self._eval(node.right, text)
            ops = {ast.Add: lambda a, b: a + b, ast.Sub: lambda a, b: a - b,
                   ast.Mult: lambda a, b: a * b, ast.Div: lambda a, b: a / b}
            for kind, fn in ops.items():
                if isinstance(node.op, kind):
                    return fn(left, right)
        elif isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            val = self._eval(node.operand, text)
            return -val if isinstance(node.op, ast.USub) else val
        elif isinstance(node, ast.Constant) and isinstance(node.value, int):
            return self.scalar(node.value)
        elif isinstance(node, ast.Name):
            named = {"s": self.s, "q": self.q, "i": self.i, "m": self.m}
            return named[node.id] if node.id in named else self.z(node.id)
        raise ConfigError(f"unsupported construct in scalar expression {text!r}")

    def _eval_int(self, node, text):
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -self._eval_int(node.operand, text)
        raise ConfigError(f"exponent must be an integer in {text!r}")
