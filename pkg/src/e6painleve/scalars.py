"""Number kernels: the field Q(sqrt 2), precision-scoped reals, and rational
functions in a probe variable eps for limit computations."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

import mpmath

DEFAULT_PRECISION = 512

Number = Union[int, Fraction, "QuadExt"]


def to_fraction(x) -> Fraction:
    """Parse ints, Fractions and "p/q" strings. Decimal strings are refused."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        text = x.strip()
        if any(ch in text for ch in ".eE"):
            raise ValueError(f"exact rational expected, got decimal {x!r}")
        return Fraction(text)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class QuadExt:
    """An element u + v*sqrt(2) of Q(sqrt 2), immutable."""

    __slots__ = ("u", "v")

    def __init__(self, u=0, v=0):
        object.__setattr__(self, "u", to_fraction(u))
        object.__setattr__(self, "v", to_fraction(v))

    def __setattr__(self, name, value):
        raise AttributeError("QuadExt is immutable")

    @classmethod
    def coerce(cls, x) -> "QuadExt":
        if isinstance(x, QuadExt):
            return x
        return cls(to_fraction(x), 0)

    def _other(self, other):
        if isinstance(other, QuadExt):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExt(other, 0)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.u + o.u, self.v + o.v)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.u, -self.v)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.u - o.u, self.v - o.v)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.u * o.u + 2 * self.v * o.v, self.u * o.v + self.v * o.u)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.u, -self.v)

    def norm(self) -> Fraction:
        return self.u * self.u - 2 * self.v * self.v

    def inverse(self) -> "QuadExt":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(sqrt 2)")
        nrm = self.norm()
        return QuadExt(self.u / nrm, -self.v / nrm)

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = QuadExt(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_zero(self) -> bool:
        return self.u == 0 and self.v == 0

    def is_rational(self) -> bool:
        return self.v == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.u == o.u and self.v == o.v

    def __hash__(self):
        if self.v == 0:
            return hash(self.u)
        return hash((self.u, self.v))

    def __repr__(self):
        return f"QuadExt({self.u!s}, {self.v!s})"

    def __str__(self):
        if self.v == 0:
            return str(self.u)
        rad = "sqrt(2)" if self.v == 1 else "-sqrt(2)" if self.v == -1 else f"{self.v}*sqrt(2)"
        if self.u == 0:
            return rad
        if rad.startswith("-"):
            return f"{self.u}{rad}"
        return f"{self.u}+{rad}"


SQRT2 = QuadExt(0, 1)


def quad_arith(op: str, lhs: QuadExt, rhs: QuadExt | None = None) -> QuadExt:
    """Dispatch one field operation by name: add, mul, neg or inv."""
    lhs = QuadExt.coerce(lhs)
    if op == "add":
        return lhs + QuadExt.coerce(rhs)
    if op == "mul":
        return lhs * QuadExt.coerce(rhs)
    if op == "neg":
        return -lhs
    if op == "inv":
        return lhs.inverse()
    raise ValueError(f"unknown operation {op!r}")


def real_context(precision: int = DEFAULT_PRECISION) -> mpmath.ctx_mp.MPContext:
    """A private mpmath context at ``precision`` bits.

    Each computation owns its context, so nothing depends on the process-wide
    ``mpmath.mp`` setting.
    """
    if precision < 64:
        raise ValueError("precision must be at least 64 bits")
    ctx = mpmath.MPContext()
    ctx.prec = precision
    return ctx


def to_real(x, precision: int = DEFAULT_PRECISION, ctx=None):
    """Round an element of Q(sqrt 2) to a binary float of ``precision`` bits.

    When u and v*sqrt(2) have opposite signs the value is formed as
    (u^2 - 2v^2)/(u - v*sqrt(2)) so that no cancellation occurs.
    """
    if ctx is None:
        ctx = real_context(precision)
    x = QuadExt.coerce(x)
    u, v = x.u, x.v
    with ctx.workprec(ctx.prec + 16):
        fu = ctx.mpf(u.numerator) / u.denominator
        fv = ctx.mpf(v.numerator) / v.denominator
        r2 = ctx.sqrt(2)
        if u * v < 0:
            nrm = x.norm()
            value = (ctx.mpf(nrm.numerator) / nrm.denominator) / (fu - fv * r2)
        else:
            value = fu + fv * r2
    return +value


# --------------------------------------------------------------------------
# Polynomials and rational functions in the probe variable eps
# --------------------------------------------------------------------------


def _trim(coeffs: Sequence[QuadExt]) -> tuple[QuadExt, ...]:
    cs = list(coeffs)
    while cs and cs[-1].is_zero():
        cs.pop()
    return tuple(cs)


class Poly:
    """Univariate polynomial in eps with Q(sqrt 2) coefficients, low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "coeffs", _trim(QuadExt.coerce(c) for c in coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def eps(cls) -> "Poly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def order(self) -> float:
        """Order of vanishing at eps = 0 (infinity for the zero polynomial)."""
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                return i
        return float("inf")

    def lead(self) -> QuadExt:
        return self.coeffs[-1]

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction, QuadExt)):
            return Poly.const(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (QuadExt(),) * (n - len(self.coeffs))
        b = o.coeffs + (QuadExt(),) * (n - len(o.coeffs))
        return Poly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_zero() or o.is_zero():
            return Poly()
        out = [QuadExt()] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = Poly.const(1)
        for _ in range(k):
            result = result * self
        return result

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quo = [QuadExt()] * max(len(rem) - len(other.coeffs) + 1, 0)
        inv_lead = other.lead().inverse()
        dd = other.degree
        for k in range(len(rem) - 1 - dd, -1, -1):
            c = rem[k + dd] * inv_lead
            quo[k] = c
            if c.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                rem[k + j] = rem[k + j] - c * b
        return Poly(quo), Poly(rem[:dd])

    def monic(self) -> "Poly":
        inv = self.lead().inverse()
        return Poly(c * inv for c in self.coeffs)

    def __call__(self, at):
        acc = 0 * at
        for c in reversed(self.coeffs):
            acc = acc * at + c
        return acc

    def evaluate_real(self, at, ctx):
        acc = ctx.mpf(0)
        for c in reversed(self.coeffs):
            acc = acc * at + to_real(c, ctx=ctx)
        return acc

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly([{', '.join(str(c) for c in self.coeffs)}])"


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic() if not a.is_zero() else Poly.const(1)


class ProbeFraction:
    """A rational function num(eps)/den(eps) kept in lowest terms.

    The orders of vanishing of the numerator and denominator as first given
    are kept in ``raw_orders`` so that 0/0 behaviour before cancellation can
    still be reported.
    """

    __slots__ = ("num", "den", "raw_orders")

    def __init__(self, num, den=1):
        num = num if isinstance(num, Poly) else Poly.const(num)
        den = den if isinstance(den, Poly) else Poly.const(den)
        if den.is_zero():
            raise ZeroDivisionError("ProbeFraction with zero denominator")
        raw = (num.order(), den.order())
        if num.is_zero():
            num, den = Poly(), Poly.const(1)
        else:
            g = poly_gcd(num, den)
            num, den = num.divmod(g)[0], den.divmod(g)[0]
            scale = den.lead().inverse()
            num, den = num * scale, den * scale
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "raw_orders", raw)

    def __setattr__(self, name, value):
        raise AttributeError("ProbeFraction is immutable")

    @classmethod
    def eps(cls) -> "ProbeFraction":
        return cls(Poly.eps())

    def _coerce(self, other):
        if isinstance(other, ProbeFraction):
            return other
        if isinstance(other, Poly):
            return ProbeFraction(other)
        if isinstance(other, (int, Fraction, QuadExt)):
            return ProbeFraction(Poly.const(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ProbeFraction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return ProbeFraction(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ProbeFraction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return ProbeFraction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if k < 0:
            return ProbeFraction(1) / (self ** (-k))
        return ProbeFraction(self.num ** k, self.den ** k)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __call__(self, at):
        return self.num(at) / self.den(at)

    def evaluate_real(self, at, ctx):
        return self.num.evaluate_real(at, ctx) / self.den.evaluate_real(at, ctx)

    def __repr__(self):
        return f"ProbeFraction({self.num!r}, {self.den!r})"


@dataclass(frozen=True)
class ProbeLimit:
    """Outcome of eps -> 0 on a ProbeFraction.

    ``value`` is None exactly when ``pole`` is True.  ``num_order`` and
    ``den_order`` are the vanishing orders before cancellation.
    """

    value: QuadExt | None
    pole: bool
    num_order: float
    den_order: float

    @property
    def indeterminate(self) -> bool:
        return self.num_order > 0 and self.den_order > 0


def probe_limit(f: ProbeFraction) -> ProbeLimit:
    num_raw, den_raw = f.raw_orders
    on, od = f.num.order(), f.den.order()
    if on == float("inf"):
        return ProbeLimit(QuadExt(0), False, num_raw, den_raw)
    if on < od:
        return ProbeLimit(None, True, num_raw, den_raw)
    if on > od:
        return ProbeLimit(QuadExt(0), False, num_raw, den_raw)
    return ProbeLimit(f.num.coeffs[on] / f.den.coeffs[od], False, num_raw, den_raw)
