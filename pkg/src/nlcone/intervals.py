"""Certified interval arithmetic over exact rational endpoints.

Every operation returns an interval guaranteed to contain the true real
value; endpoints are Fractions so no rounding ever occurs inside the
arithmetic itself.  Only the transcendental constructors (pi, exp, log,
zeta, trig) truncate series, and they always push the truncation error
outward.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

Rat = Fraction


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @staticmethod
    def point(x) -> "Interval":
        x = Fraction(x)
        return Interval(x, x)

    def __add__(self, other) -> "Interval":
        other = _coerce(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other) -> "Interval":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "Interval":
        return _coerce(other) + (-self)

    def __mul__(self, other) -> "Interval":
        other = _coerce(other)
        cands = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return Interval(min(cands), max(cands))

    __rmul__ = __mul__

    def inverse(self) -> "Interval":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval contains 0")
        return Interval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other) -> "Interval":
        return self * _coerce(other).inverse()

    def __rtruediv__(self, other) -> "Interval":
        return _coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "Interval":
        if n < 0:
            return (self ** (-n)).inverse()
        out = Interval.point(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        x = Fraction(x)
        return self.lo <= x <= self.hi

    def is_positive(self) -> bool:
        return self.lo > 0

    def is_negative(self) -> bool:
        return self.hi < 0

    def unique_integer(self) -> int:
        """The single integer inside, if there is exactly one."""
        import math

        lo_i = math.ceil(self.lo)
        hi_i = math.floor(self.hi)
        if lo_i != hi_i:
            raise ValueError(f"interval [{float(self.lo)}, {float(self.hi)}] "
                             f"does not isolate one integer")
        return lo_i

    def __float__(self) -> float:
        return float(self.mid)

    def __repr__(self) -> str:
        return f"Interval({float(self.lo)!r}, {float(self.hi)!r})"


def _coerce(x) -> Interval:
    if isinstance(x, Interval):
        return x
    return Interval.point(Fraction(x))


def sqrt_interval(x, bits: int = 96) -> Interval:
    """Enclosure of sqrt(x) for x an Interval or nonnegative rational."""
    x = _coerce(x)
    if x.lo < 0:
        raise ValueError("sqrt of negative interval")
    M = 1 << bits
    lo_scaled = (x.lo.numerator * M * M) // x.lo.denominator
    s = isqrt(lo_scaled)
    lo = Fraction(s, M)
    hi_scaled = -((-x.hi.numerator * M * M) // x.hi.denominator)  # ceil
    s2 = isqrt(hi_scaled)
    if s2 * s2 < hi_scaled:
        s2 += 1
    hi = Fraction(s2, M)
    return Interval(lo, hi)


def _atan_inv(x: int, terms: int) -> Interval:
    """arctan(1/x) for integer x >= 2, alternating series bracket."""
    s = Fraction(0)
    sign = 1
    lo = hi = None
    for k in range(terms):
        term = Fraction(sign, (2 * k + 1) * x ** (2 * k + 1))
        s += term
        if k >= terms - 2:
            if lo is None:
                lo = hi = s
            else:
                lo, hi = min(lo, s), max(hi, s)
        sign = -sign
    return Interval(lo, hi)


def pi_interval(terms: int = 30) -> Interval:
    """Machin: pi = 16*arctan(1/5) - 4*arctan(1/239)."""
    return 16 * _atan_inv(5, terms) - 4 * _atan_inv(239, max(terms // 2, 4))


def exp_interval(x, terms: int = 40) -> Interval:
    """Enclosure of exp(x) for an interval/rational argument."""
    x = _coerce(x)

    def exp_point(q: Fraction) -> Interval:
        # range-reduce so |q| <= 1/2, then square back up
        k = 0
        while abs(q) > Fraction(1, 2):
            q /= 2
            k += 1
        s = Fraction(1)
        term = Fraction(1)
        for j in range(1, terms + 1):
            term *= q / j
            s += term
        # |tail| <= |q|^(terms+1)/(terms+1)! * 2  (geometric with ratio <= 1/2)
        tail = 2 * abs(q) ** (terms + 1) / _factorial(terms + 1)
        out = Interval(s - tail, s + tail)
        for _ in range(k):
            out = out * out
        return out

    lo = exp_point(x.lo)
    hi = exp_point(x.hi)
    return Interval(min(lo.lo, hi.lo), max(lo.hi, hi.hi))


def _factorial(n: int) -> int:
    out = 1
    for j in range(2, n + 1):
        out *= j
    return out


def ln2_interval(terms: int = 40) -> Interval:
    # ln 2 = 2 atanh(1/3)
    return 2 * _atanh(Fraction(1, 3), terms)


def _atanh(t: Fraction, terms: int) -> Interval:
    s = Fraction(0)
    t2 = t * t
    tp = t
    for k in range(terms):
        s += tp / (2 * k + 1)
        tp *= t2
    # tail <= t^(2N+1)/(2N+1) * 1/(1-t^2)
    tail = tp / ((2 * terms + 1) * (1 - t2))
    if t >= 0:
        return Interval(s, s + tail)
    return Interval(s + tail, s)


def log_interval(x, terms: int = 48) -> Interval:
    """Enclosure of log(x), x a positive interval/rational."""
    x = _coerce(x)
    if x.lo <= 0:
        raise ValueError("log of nonpositive value")
    ln2 = ln2_interval(terms)

    def log_point(q: Fraction) -> Interval:
        a = 0
        while q > Fraction(3, 2):
            q /= 2
            a += 1
        while q < Fraction(3, 4):
            q *= 2
            a -= 1
        t = (q - 1) / (q + 1)
        return 2 * _atanh(t, terms) + a * ln2

    lo = log_point(x.lo)
    hi = log_point(x.hi)
    return Interval(min(lo.lo, hi.lo), max(lo.hi, hi.hi))


def pow_interval(x, exponent: Fraction, terms: int = 48) -> Interval:
    """x^exponent for positive x and rational exponent."""
    exponent = Fraction(exponent)
    if exponent.denominator == 1:
        return _coerce(x) ** exponent.numerator
    if exponent.denominator == 2:
        n = exponent.numerator
        base = _coerce(x) ** abs(n)
        r = sqrt_interval(base)
        return r if n > 0 else r.inverse()
    return exp_interval(log_interval(x, terms) * exponent, terms)


def zeta_interval(s: Fraction, terms: int = 64) -> Interval:
    """Enclosure of zeta(s) for rational s > 1 (integer or half-integer)."""
    s = Fraction(s)
    if s <= 1:
        raise ValueError("zeta interval needs s > 1")
    partial = Interval.point(0)
    for j in range(1, terms + 1):
        partial = partial + _recip_power(j, s)
    # sum_{j>J} j^-s  in  [0, J^(1-s)/(s-1)]
    tail_hi = _recip_power_upper(terms, s - 1) / (s - 1)
    return Interval(partial.lo, partial.hi + tail_hi)


def _recip_power(j: int, s: Fraction) -> Interval:
    """j^(-s) for rational s with denominator 1 or 2."""
    if s.denominator == 1:
        return Interval.point(Fraction(1, j**s.numerator))
    if s.denominator == 2:
        n = s.numerator  # j^(-n/2) = 1/sqrt(j^n)
        return sqrt_interval(Fraction(1, j**n))
    raise ValueError("only integer or half-integer exponents supported")


def _recip_power_upper(j: int, s: Fraction) -> Fraction:
    return _recip_power(j, s).hi


def cos2pi_interval(r: Fraction, terms: int = 24) -> Interval:
    """Enclosure of cos(2*pi*r) for rational r."""
    r = Fraction(r) % 1
    # fold into [0, 1/4] with sign bookkeeping, angle theta = 2 pi r
    sign = 1
    if r > Fraction(1, 2):
        r = 1 - r
    if r > Fraction(1, 4):
        r = Fraction(1, 2) - r
        sign = -1
    theta = 2 * pi_interval(max(terms, 24)) * r
    out = _cos_small(theta, terms)
    return out if sign == 1 else -out


def sin2pi_interval(r: Fraction, terms: int = 24) -> Interval:
    return cos2pi_interval(Fraction(1, 4) - Fraction(r), terms)


def _cos_small(theta: Interval, terms: int) -> Interval:
    """cos on |theta| <= pi/2 via alternating Taylor with tail bound."""
    t2 = theta * theta
    s = Interval.point(1)
    term = Interval.point(1)
    for k in range(1, terms + 1):
        term = term * t2 * Fraction(-1, (2 * k) * (2 * k - 1))
        s = s + term
    bound = (t2 ** (terms + 1)).hi / _factorial(2 * terms + 2)
    return Interval(s.lo - bound, s.hi + bound)


def sqrt_pi_interval(terms: int = 30) -> Interval:
    return sqrt_interval(pi_interval(terms))


def gamma_interval(k: Fraction, terms: int = 30) -> Interval:
    """Gamma(k) for positive integer or half-integer k."""
    k = Fraction(k)
    if k <= 0:
        raise ValueError("need k > 0")
    if k.denominator == 1:
        return Interval.point(Fraction(_factorial(k.numerator - 1)))
    if k.denominator == 2:
        n = (k.numerator - 1) // 2  # k = n + 1/2
        coeff = Fraction(_factorial(2 * n), 4**n * _factorial(n))
        return coeff * sqrt_pi_interval(terms)
    raise ValueError("gamma only for integer/half-integer arguments")
