from fractions import Fraction

import pytest

from tlfusion import ConfigError, DegenerateScalar, Field


@pytest.mark.parametrize("field", [Field.exact(), Field.modp(), Field.cyclotomic(5)], ids=lambda f: f.backend)
def test_basic_identities(field):
    q, s, i, m = field.q, field.s, field.i, field.m
    assert s * s == q
    assert i * i == -field.one
    assert m == q + q.inverse()
    assert q * q.inverse() == field.one
    # braid generator coefficients satisfy g g^-1 = 1 in the quotient e^2 = m e
    a, b = field.braid_coeffs(1)
    c, d = field.braid_coeffs(-1)
    assert a * c == field.one
    assert a * d + b * c + b * d * m == field.zero


def test_cyclotomic_root_of_unity():
    for p in (3, 4, 5):
        f = Field.cyclotomic(p)
        assert f.q ** (2 * p) == f.one
        assert f.q ** p == -f.one
    # q = exp(i pi / 3) gives loop weight 1; q = exp(i pi / 4) gives m^2 = 2
    assert Field.cyclotomic(3).m == Field.cyclotomic(3).one
    f4 = Field.cyclotomic(4)
    assert f4.m * f4.m == f4.scalar(2)


def test_exact_specializes_to_modp():
    e, f = Field.exact(), Field.modp()
    x = e.parse("(q^2 - 1) / (s + i)")
    assert f.scalar(x) == f.parse("(q^2 - 1) / (s + i)")


def test_modp_parameters_are_seeded():
    a, b, c = Field.modp(seed=0), Field.modp(seed=0), Field.modp(seed=1)
    assert int(a.z("z1")) == int(b.z("z1"))
    assert int(a.z("z1")) != int(c.z("z1"))


def test_parse_and_bind(modp):
    f = Field.modp()
    f.bind("z1", 7)
    f.bind("z2", "-q*z1")
    assert f.z("z2") == -f.q * f.scalar(7)
    assert f.parse("s^-2") == f.q.inverse()
    assert f.parse("3/4") == f.scalar(Fraction(3, 4))
    with pytest.raises(ConfigError):
        f.parse("z1 +")
    with pytest.raises(ConfigError):
        f.parse("q^z1")
    with pytest.raises(DegenerateScalar):
        f.bind("z3", "q - q")


def test_bad_modp_prime():
    with pytest.raises(ConfigError):
        Field.modp(2147483647)  # 3 mod 4: no square root of -1
