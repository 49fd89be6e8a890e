from fractions import Fraction

import mpmath
import pytest
from hypothesis import given

from e6painleve.scalars import (
    SQRT2, Poly, ProbeFraction, QuadExt, poly_gcd, probe_limit, quad_arith, real_context,
    to_fraction, to_real,
)
from strategies import nonzero_quads, quads, rationals


def test_examples():
    assert QuadExt(1, 1) * QuadExt(1, -1) == QuadExt(-1)
    assert SQRT2.inverse() == QuadExt(0, Fraction(1, 2))
    assert QuadExt(3, 2) + QuadExt(-3, 1) == QuadExt(0, 3)
    assert quad_arith("mul", QuadExt(1, 1), QuadExt(1, -1)) == -1
    assert quad_arith("inv", SQRT2) == QuadExt(0, Fraction(1, 2))


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        QuadExt(0).inverse()


def test_str():
    assert str(QuadExt(0, -2)) == "-2*sqrt(2)"
    assert str(QuadExt(1, 1)) == "1+sqrt(2)"
    assert str(QuadExt(Fraction(1, 3))) == "1/3"


@pytest.mark.parametrize("bad", ["0.5", "1e3", "2.0"])
def test_decimals_refused(bad):
    with pytest.raises(ValueError):
        to_fraction(bad)


def test_to_fraction():
    assert to_fraction("-3/6") == Fraction(-1, 2)
    assert to_fraction(4) == Fraction(4)


@given(quads, quads, quads)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == 0


@given(nonzero_quads)
def test_inverse(a):
    assert a * a.inverse() == 1
    assert a.norm() == (a * a.conjugate()).u
    assert (a * a.conjugate()).v == 0


@given(quads, quads)
def test_conjugation_is_a_field_map(a, b):
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert (a + b).conjugate() == a.conjugate() + b.conjugate()


@given(quads)
def test_hash_consistent_with_eq(a):
    assert hash(a) == hash(QuadExt(a.u, a.v))
    if a.is_rational():
        assert hash(a) == hash(a.u)


# --------------------------------------------------------------------------
# Rounding to reals


def test_to_real_examples():
    ctx = real_context(400)
    assert abs(to_real(SQRT2, 128) - ctx.sqrt(2)) < ctx.mpf(2) ** -126
    assert to_real(QuadExt(0), 64) == 0
    got = to_real(QuadExt(1, -1), 256)
    assert abs(got - (1 - ctx.sqrt(2))) < ctx.mpf(2) ** -254


def test_to_real_rejects_low_precision():
    with pytest.raises(ValueError):
        real_context(32)


@given(quads)
def test_to_real_correctly_rounded(a):
    # oracle: evaluate with 200 extra bits and compare in relative terms
    ctx = real_context(512)
    exact = ctx.mpf(a.u.numerator) / a.u.denominator + ctx.mpf(a.v.numerator) / a.v.denominator * ctx.sqrt(2)
    got = to_real(a, 128)
    if exact == 0:
        assert got == 0
    else:
        assert abs(got - exact) <= abs(exact) * ctx.mpf(2) ** -126


def test_contexts_are_private():
    before = mpmath.mp.prec
    to_real(SQRT2, 1000)
    assert mpmath.mp.prec == before


# --------------------------------------------------------------------------
# Probe fractions

eps = ProbeFraction.eps()


def test_probe_examples():
    assert probe_limit((eps ** 2 + eps) / eps).value == 1
    assert probe_limit(1 / eps).pole
    lim = probe_limit(eps * QuadExt(2, 1) / (eps * 2))
    assert lim.value == QuadExt(1, Fraction(1, 2))
    assert lim.indeterminate


def test_gcd_reduction():
    e = Poly.eps()
    a = (e + 1) * (e - 2)
    b = (e + 1) * (e + 3)
    assert poly_gcd(a, b) == (e + 1).monic()
    f = ProbeFraction(a, b)
    assert f == ProbeFraction(e - 2, e + 3)


@given(quads, quads, nonzero_quads, quads)
def test_limit_matches_small_eps(a, b, c, d):
    # (a + b e) / (c + d e) -> a / c, checked against evaluation near 0
    f = ProbeFraction(Poly([a, b]), Poly([c, d]))
    lim = probe_limit(f)
    assert lim.value == a / c
    ctx = real_context(128)
    target = to_real(a / c, 128)
    for e in ("1e-6", "1e-8"):
        x = ctx.mpf(e)
        near = f.evaluate_real(x, ctx)
        scale = 1 + abs(to_real(b, 128)) + abs(to_real(d, 128)) + abs(target)
        assert abs(near - target) <= 10 * x * scale * (1 + 1 / abs(to_real(c, 128))) ** 2


@given(rationals)
def test_fraction_arithmetic_agrees_with_evaluation(r):
    f = (eps + r) ** 2 / (eps - 1)
    at = Fraction(1, 3)
    assert f(at) == (at + r) ** 2 / (at - 1)
