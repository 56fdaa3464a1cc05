"""Exact truncated q-expansions: scalar modular forms and vector-valued ones.

All coefficients are Fractions; no floating point enters this module.
A VVExpansion stores one Fourier coefficient per (coset, exponent) pair and
enforces the support convention of forms of type rho_Lambda: the component at
mu only carries exponents m with m + Q(mu) integral.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import bernoulli, divisors
from .lattice import DiscriminantForm, GramMatrix, Lattice

Coords = tuple[int, ...]


class PrecisionError(ValueError):
    pass


@dataclass
class ScalarQSeries:
    coeffs: dict[int, Fraction]
    prec: int
    weight: Fraction = Fraction(0)

    def __getitem__(self, m: int) -> Fraction:
        if m >= self.prec:
            raise PrecisionError(f"coefficient q^{m} beyond precision {self.prec}")
        return self.coeffs.get(m, Fraction(0))

    @property
    def min_exponent(self) -> int:
        return min(self.coeffs, default=0)

    def __mul__(self, other: "ScalarQSeries") -> "ScalarQSeries":
        lo1, lo2 = self.min_exponent, other.min_exponent
        prec = min(self.prec + lo2, other.prec + lo1)
        out: dict[int, Fraction] = {}
        for i, a in self.coeffs.items():
            if not a:
                continue
            for j, b in other.coeffs.items():
                m = i + j
                if m < prec and b:
                    out[m] = out.get(m, Fraction(0)) + a * b
        return ScalarQSeries({m: c for m, c in out.items() if c}, prec,
                             self.weight + other.weight)

    def truncate(self, prec: int) -> "ScalarQSeries":
        if prec > self.prec:
            raise PrecisionError(f"cannot extend precision {self.prec} to {prec}")
        return ScalarQSeries({m: c for m, c in self.coeffs.items() if m < prec},
                             prec, self.weight)


def _euler_product(prec: int) -> list[Fraction]:
    """prod_{n>=1} (1 - q^n) to prec, via the pentagonal number theorem."""
    out = [Fraction(0)] * prec
    out[0] = Fraction(1)
    k = 1
    while True:
        e1 = k * (3 * k - 1) // 2
        e2 = k * (3 * k + 1) // 2
        if e1 >= prec and e2 >= prec:
            break
        sign = -1 if k % 2 else 1
        if e1 < prec:
            out[e1] += sign
        if e2 < prec:
            out[e2] += sign
        k += 1
    return out


def _series_pow(base: list[Fraction], e: int, prec: int) -> list[Fraction]:
    result = [Fraction(0)] * prec
    result[0] = Fraction(1)
    acc = list(base)
    while e:
        if e & 1:
            result = _series_mul(result, acc, prec)
        e >>= 1
        if e:
            acc = _series_mul(acc, acc, prec)
    return result


def _series_mul(a, b, prec):
    out = [Fraction(0)] * prec
    for i, x in enumerate(a):
        if x:
            top = min(prec - i, len(b))
            for j in range(top):
                if b[j]:
                    out[i + j] += x * b[j]
    return out


def _series_inverse(a, prec):
    if a[0] == 0:
        raise ZeroDivisionError("series has zero constant term")
    inv = [Fraction(0)] * prec
    inv[0] = 1 / a[0]
    for m in range(1, prec):
        s = Fraction(0)
        for i in range(1, min(m, len(a) - 1) + 1):
            if a[i]:
                s += a[i] * inv[m - i]
        inv[m] = -s / a[0]
    return inv


def delta_power(b: int, prec: int) -> ScalarQSeries:
    """q-expansion of Delta^b (eta^24b); negative b allowed.

    Coefficients are stored for exponents b <= m < prec.
    """
    inner = prec - b if b < 0 else prec
    if inner <= 0:
        raise PrecisionError("requested precision does not reach the leading term")
    eta24 = _series_pow(_euler_product(inner + abs(b)), 24, inner + abs(b))
    if b >= 0:
        core = _series_pow(eta24, b, inner)
    else:
        core = _series_pow(_series_inverse(eta24, inner), -b, inner)
    coeffs = {m + b: c for m, c in enumerate(core) if c and m + b < prec}
    return ScalarQSeries(coeffs, prec, Fraction(12 * b))


def scalar_eisenstein(k: int, prec: int) -> ScalarQSeries:
    """Normalized E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n, exact."""
    if k < 4 or k % 2:
        raise ValueError("scalar Eisenstein series needs even k >= 4")
    factor = Fraction(-2 * k) / bernoulli(k)
    coeffs = {0: Fraction(1)}
    for n in range(1, prec):
        coeffs[n] = factor * sum(d ** (k - 1) for d in divisors(n))
    return ScalarQSeries(coeffs, prec, Fraction(k))


@dataclass
class VVExpansion:
    """Truncated vector-valued q-expansion with exact rational coefficients.

    coeffs maps (mu, m) -> coefficient, with mu in SNF coordinates of `disc`
    and m rational.  support_sign = +1 means components satisfy
    m + Q(mu) in Z (type rho_Lambda in the convention used throughout).
    """

    disc: DiscriminantForm
    weight: Fraction
    coeffs: dict[tuple[Coords, Fraction], Fraction]
    prec: Fraction
    support_sign: int = 1
    validated: bool = field(default=False, repr=False)

    def __post_init__(self):
        self.weight = Fraction(self.weight)
        self.prec = Fraction(self.prec)

    def validate(self):
        for (mu, m), c in self.coeffs.items():
            if (m + self.support_sign * self.disc.q(mu)) % 1 != 0:
                raise ValueError(f"index {m} at {mu} violates the support condition")
        for (mu, m), c in self.coeffs.items():
            if self.coeffs.get((self.disc.neg(mu), m), Fraction(0)) != c:
                raise ValueError(f"coefficient symmetry c(m,mu)=c(m,-mu) fails at {(mu, m)}")
        self.validated = True
        return self

    def coefficient(self, m, mu: Coords) -> Fraction:
        m = Fraction(m)
        if m >= self.prec:
            raise PrecisionError(
                f"coefficient at exponent {m} requested, expansion only reaches {self.prec}"
            )
        return self.coeffs.get((tuple(mu), m), Fraction(0))

    @property
    def min_exponent(self) -> Fraction:
        return min((m for (_, m) in self.coeffs), default=Fraction(0))

    def admissible_exponents(self, mu: Coords, lo, hi):
        """Exponents m in [lo, hi) with m = -support_sign*Q(mu) mod 1."""
        import math

        base = (-self.support_sign * self.disc.q(mu)) % 1
        m = base + math.ceil(Fraction(lo) - base)
        out = []
        while m < hi:
            out.append(m)
            m += 1
        return out

    def __add__(self, other: "VVExpansion") -> "VVExpansion":
        if self.disc is not other.disc and self.disc.orders != other.disc.orders:
            raise ValueError("cannot add expansions on different discriminant forms")
        if self.weight != other.weight:
            raise ValueError("cannot add expansions of different weights")
        prec = min(self.prec, other.prec)
        out = {}
        for key, c in list(self.coeffs.items()) + list(other.coeffs.items()):
            if key[1] < prec:
                out[key] = out.get(key, Fraction(0)) + c
        return VVExpansion(self.disc, self.weight,
                           {k: c for k, c in out.items() if c}, prec, self.support_sign)

    def scale(self, c) -> "VVExpansion":
        c = Fraction(c)
        return VVExpansion(self.disc, self.weight,
                           {k: c * v for k, v in self.coeffs.items() if c * v},
                           self.prec, self.support_sign)

    def truncate(self, prec) -> "VVExpansion":
        prec = Fraction(prec)
        if prec > self.prec:
            raise PrecisionError(f"cannot extend precision {self.prec} to {prec}")
        return VVExpansion(self.disc, self.weight,
                           {k: v for k, v in self.coeffs.items() if k[1] < prec},
                           prec, self.support_sign)

    def to_json(self) -> str:
        items = [
            {"mu": list(mu), "m": str(m), "c": str(c)}
            for (mu, m), c in sorted(self.coeffs.items())
        ]
        return json.dumps(
            {
                "gram": [list(r) for r in self.disc.lattice.gram.entries],
                "weight": str(self.weight),
                "prec": str(self.prec),
                "coeffs": items,
            },
            indent=1,
        )

    @staticmethod
    def from_json(text: str) -> "VVExpansion":
        data = json.loads(text)
        disc = DiscriminantForm(Lattice(GramMatrix(data["gram"])))
        coeffs = {}
        for item in data["coeffs"]:
            key = (tuple(item["mu"]), Fraction(item["m"]))
            coeffs[key] = Fraction(item["c"])
        return VVExpansion(disc, Fraction(data["weight"]), coeffs, Fraction(data["prec"]))


def scalar_times_vv(s: ScalarQSeries, F: VVExpansion, min_prec=None) -> VVExpansion:
    """Cauchy product of a scalar q-series with a vector-valued expansion."""
    prec = min(F.prec + s.min_exponent, Fraction(s.prec) + F.min_exponent)
    if min_prec is not None and prec < Fraction(min_prec):
        raise PrecisionError(
            f"product precision {prec} below requested {min_prec}; extend the "
            f"factors to at least {Fraction(min_prec) - s.min_exponent} "
            f"(vector factor) / {Fraction(min_prec) - F.min_exponent} (scalar factor)"
        )
    out: dict[tuple[Coords, Fraction], Fraction] = {}
    for (mu, m), c in F.coeffs.items():
        if not c:
            continue
        for i, a in s.coeffs.items():
            tot = m + i
            if tot < prec and a:
                key = (mu, tot)
                out[key] = out.get(key, Fraction(0)) + a * c
    return VVExpansion(F.disc, F.weight + s.weight,
                       {k: v for k, v in out.items() if v}, prec, F.support_sign)
