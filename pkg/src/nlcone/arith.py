"""Exact number-theoretic helpers shared across the package.

Everything here works over Python ints and fractions.Fraction; nothing is
approximate.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, gcd, isqrt


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b), g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


@lru_cache(maxsize=None)
def _prime_list(limit: int) -> tuple[int, ...]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = b"\x00" * len(range(p * p, limit + 1, p))
    return tuple(i for i in range(limit + 1) if sieve[i])


def primes_up_to(limit: int) -> tuple[int, ...]:
    return _prime_list(limit)


@lru_cache(maxsize=None)
def factor(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of |n| as ((p, e), ...), ascending p."""
    n = abs(n)
    if n <= 1:
        return ()
    out = []
    for p in (2, 3, 5):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    f = 7
    increments = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while f * f <= n:
        if n % f == 0:
            e = 0
            while n % f == 0:
                n //= f
                e += 1
            out.append((f, e))
        f += increments[i]
        i = (i + 1) % 8
    if n > 1:
        out.append((n, 1))
    out.sort()
    return tuple(out)


def prime_divisors(n: int) -> tuple[int, ...]:
    return tuple(p for p, _ in factor(n))


def divisors(n: int) -> list[int]:
    ds = [1]
    for p, e in factor(n):
        ds = [d * p**j for d in ds for j in range(e + 1)]
    return sorted(ds)


def moebius(n: int) -> int:
    if n < 1:
        raise ValueError("moebius defined for n >= 1")
    fac = factor(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def sigma0(n: int) -> int:
    out = 1
    for _, e in factor(n):
        out *= e + 1
    return out


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def frac_valuation(x: Fraction, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    if x == 0:
        raise ValueError("valuation of 0")
    return valuation(x.numerator, p) - valuation(x.denominator, p)


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n)."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -sign
    e = 0
    while n % 2 == 0:
        n //= 2
        e += 1
    if e:
        if a % 2 == 0:
            return 0
        if e % 2 and a % 8 in (3, 5):
            sign = -sign
    a %= n
    # Jacobi symbol on odd n
    t = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                t = -t
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            t = -t
        a %= n
    if n != 1:
        return 0
    return sign * t


def squarefree_part(n: int) -> int:
    """The squarefree integer s with n = s * (square), preserving sign."""
    if n == 0:
        raise ValueError("squarefree part of 0")
    s = -1 if n < 0 else 1
    for p, e in factor(n):
        if e % 2:
            s *= p
    return s


def fundamental_discriminant(n: int) -> int:
    """Discriminant of Q(sqrt(n)); 1 if n is a square."""
    s = squarefree_part(n)
    if s == 1:
        return 1
    return s if s % 4 == 1 else 4 * s


def sqrt_exact(x: Fraction) -> Fraction:
    """Square root of a rational that must be a perfect square."""
    num, den = x.numerator, x.denominator
    if num < 0:
        raise ValueError(f"negative radicand {x}")
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn != num or rd * rd != den:
        raise ValueError(f"{x} is not a rational square")
    return Fraction(rn, rd)


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n, convention B_1 = -1/2."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(-1, 2)
    if n % 2:
        return Fraction(0)
    s = Fraction(0)
    for j in range(n):
        s += comb(n + 1, j) * bernoulli(j)
    return -s / (n + 1)


def bernoulli_polynomial(n: int, x: Fraction) -> Fraction:
    """B_n(x) = sum_j C(n, j) B_j x^(n-j)."""
    return sum((comb(n, j) * bernoulli(j) * x ** (n - j) for j in range(n + 1)), Fraction(0))


@lru_cache(maxsize=None)
def generalized_bernoulli(disc: int, n: int) -> Fraction:
    """B_{n,chi} for the quadratic character chi of fundamental discriminant disc.

    L(1-n, chi) = -B_{n,chi}/n.  Rejects non-fundamental discriminants.
    """
    if fundamental_discriminant(disc) != disc and disc != 1:
        raise ValueError(f"{disc} is not a fundamental discriminant")
    if n < 1:
        raise ValueError("n must be >= 1")
    if disc == 1:
        # trivial character mod 1; B_{1} enters with the +1/2 convention
        return Fraction(1, 2) if n == 1 else bernoulli(n)
    f = abs(disc)
    # B_{n,chi} = f^(n-1) * sum_{a<f} chi(a) B_n(a/f), expanded into integer
    # power sums so no huge intermediate fractions appear.
    power_sums = [0] * (n + 1)
    a_pow = [1] * f  # a^t running values
    for t in range(n + 1):
        if t:
            for a in range(f):
                a_pow[a] *= a
        acc = 0
        for a in range(1, f):
            chi = kronecker(disc, a)
            if chi:
                acc += chi * a_pow[a]
        power_sums[t] = acc
    total = Fraction(0)
    for j in range(n + 1):
        total += comb(n, j) * bernoulli(j) * Fraction(f, 1) ** (j - 1) * power_sums[n - j]
    return total


def zeta_negative_odd(n: int) -> Fraction:
    """zeta(1 - n) for even n >= 2, as -B_n/n."""
    if n < 2 or n % 2:
        raise ValueError("need even n >= 2")
    return -bernoulli(n) / n
