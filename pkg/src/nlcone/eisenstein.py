"""Exact Fourier coefficients of vector-valued Eisenstein series.

The series E_{k,Lambda} (constant term e_0, support m = -Q(mu) mod 1) has
coefficients

    e(m, mu) = sign * eps_oo(m) * prod_p alpha_p(m, mu)

where eps_oo = (2 pi)^k m^(k-1) / (Gamma(k) sqrt|det|) and alpha_p are the
local densities.  Densities at primes dividing 2*det*num(m) are computed by
exact counting (localdensity); the remaining Euler product collapses to a
ratio of Dirichlet L-values at integers, evaluated through generalized
Bernoulli numbers, so every coefficient is an exact rational number.

An interval mode evaluates the same formula with certified enclosures of the
transcendental block; it is used for bulk cone-verification where exact
L-values would be needlessly expensive.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import (
    bernoulli,
    fundamental_discriminant,
    generalized_bernoulli,
    kronecker,
    prime_divisors,
    sqrt_exact,
)
from .intervals import (
    Interval,
    gamma_interval,
    pi_interval,
    pow_interval,
    sqrt_interval,
    zeta_interval,
)
from .lattice import DiscriminantForm, LatticeError, milgram_signature
from .localdensity import good_density, local_density
from .qseries import VVExpansion

Coords = tuple[int, ...]


class WeightError(LatticeError):
    pass


@dataclass
class EisensteinSeries:
    base: VVExpansion
    k: Fraction

    def coefficient(self, m, mu):
        return self.base.coefficient(m, mu)


class _Engine:
    """Coefficient engine for one (discriminant form, weight) pair."""

    def __init__(self, disc: DiscriminantForm, k: Fraction):
        self.disc = disc
        self.k = Fraction(k)
        if self.k <= 2:
            raise WeightError("Eisenstein series requires weight k > 2")
        counting = disc.lattice.twist(-1)
        self.counting = counting
        sigma = milgram_signature(DiscriminantForm(counting))
        if (2 * self.k - sigma) % 4 != 0:
            raise WeightError(
                f"no Eisenstein series of weight {self.k} for this discriminant "
                f"form (parity violation)"
            )
        self.sign = (-1) ** (int((2 * self.k - sigma) / 4) % 2)
        l2 = 2 * self.k
        if l2.denominator != 1:
            raise WeightError("2k must be an integer")
        self.l = int(l2)
        r = counting.rank
        if self.l < r or (self.l - r) % 2:
            raise WeightError(
                f"cannot realize weight {self.k} on a rank-{r} core; need an even "
                f"lattice of rank 2k = {self.l} with this discriminant form"
            )
        self.fill = (self.l - r) // 2
        self.det_eff = counting.gram.det * (-1) ** self.fill
        self.bad_primes = prime_divisors(2 * self.det_eff)

    # -- local data ---------------------------------------------------------

    def local_parts(self, m: Fraction, mu: Coords):
        """(product of alpha_p over p in S, the set S) for the index (m, mu)."""
        coset = self.disc.dual_vector(mu)
        S = sorted(
            set(self.bad_primes)
            | set(prime_divisors(m.numerator))
            | set(prime_divisors(m.denominator))
        )
        prod = Fraction(1)
        for p in S:
            if p in self.bad_primes:
                alpha = local_density(p, self.counting.gram.entries, self.fill, coset, m)
            else:
                alpha = good_density(p, self.l, self.det_eff, m)
            if alpha == 0:
                return Fraction(0), S
            prod *= alpha
        return prod, S

    def character_data(self, m: Fraction):
        """(D0, f, chi-parity check) for the L-value attached to (m)."""
        if self.l % 2:
            n = int(self.k - Fraction(1, 2))
            raw = (
                (-1) ** ((self.l + 3) // 2)
                * 2**self.l
                * self.det_eff
                * m.numerator
                * m.denominator
            )
            d0 = fundamental_discriminant(raw)
            if (1 if d0 > 0 else -1) != (-1) ** n:
                raise ArithmeticError("criticality violated; convention error")
            return d0, n
        n = int(self.k)
        raw = (-1) ** n * self.det_eff
        d0 = fundamental_discriminant(raw)
        if (1 if d0 > 0 else -1) != (-1) ** n:
            raise ArithmeticError("criticality violated; convention error")
        return d0, n

    # -- exact value ----------------------------------------------------------

    def exact(self, m, mu: Coords) -> Fraction:
        m = Fraction(m)
        if m < 0:
            raise ValueError("Eisenstein coefficients live at m >= 0")
        if m == 0:
            return Fraction(1) if all(a == 0 for a in mu) else Fraction(0)
        if (m + self.disc.q(mu)) % 1 != 0:
            return Fraction(0)
        A, S = self.local_parts(m, mu)
        if A == 0:
            return Fraction(0)
        d0, n = self.character_data(m)
        f = abs(d0)
        if self.l % 2:
            for p in S:
                A *= Fraction(1 - kronecker(d0, p) * Fraction(1, p**n))
                A /= Fraction(1) - Fraction(1, p ** (2 * n))
            t_sign = (-1) ** (n // 2) if d0 > 0 else (-1) ** ((n - 1) // 2)
            rad = m * abs(self.det_eff) * f / 2
            root = sqrt_exact(rad)
            x = (
                Fraction(4) ** n
                * m**n
                * A
                * (-generalized_bernoulli(d0, n))
                * (-1) ** (n + 1)
                * t_sign
                / (bernoulli(2 * n) * f ** (n - 1) * root)
            )
        else:
            for p in S:
                A /= Fraction(1) - kronecker(d0, p) * Fraction(1, p**n)
            t_sign = (-1) ** (n // 2) if d0 > 0 else (-1) ** ((n - 1) // 2)
            root = sqrt_exact(Fraction(f, abs(self.det_eff)))
            x = (
                2
                * n
                * m ** (n - 1)
                * Fraction(f) ** (n - 1)
                * t_sign
                * A
                * root
                / (-generalized_bernoulli(d0, n))
            )
        if x < 0:
            raise ArithmeticError(f"internal sign error at (m, mu)=({m}, {mu})")
        return self.sign * x

    # -- certified interval value ---------------------------------------------

    def interval(self, m, mu: Coords, terms: int = 60) -> Interval:
        m = Fraction(m)
        if m <= 0 or (m + self.disc.q(mu)) % 1 != 0:
            return Interval.point(self.exact(m, mu))
        A, S = self.local_parts(m, mu)
        if A == 0:
            return Interval.point(0)
        d0, n = self.character_data(m)
        if self.l % 2:
            for p in S:
                A *= Fraction(1 - kronecker(d0, p) * Fraction(1, p**n))
                A /= Fraction(1) - Fraction(1, p ** (2 * n))
            lseries = _l_value_interval(d0, n, terms)
            zeta = zeta_interval(Fraction(2 * n), terms)
            block = lseries / zeta
        else:
            for p in S:
                A /= Fraction(1) - kronecker(d0, p) * Fraction(1, p**n)
            block = _l_value_interval(d0, n, terms).inverse()
        two_pi = 2 * pi_interval(max(terms // 2, 24))
        arch = (
            pow_interval(two_pi, self.k)
            * pow_interval(m, self.k - 1)
            / (gamma_interval(self.k) * sqrt_interval(Fraction(abs(self.det_eff))))
        )
        return self.sign * A * arch * block


def _l_value_interval(d0: int, n: int, terms: int) -> Interval:
    """Enclosure of L(n, chi_d0) by direct Dirichlet series with tail bound."""
    partial = Fraction(0)
    for a in range(1, terms + 1):
        c = kronecker(d0, a)
        if c:
            partial += Fraction(c, a**n)
    tail = Fraction(1, (n - 1) * terms ** (n - 1))
    return Interval(partial - tail, partial + tail)


@lru_cache(maxsize=None)
def _engine(gram_key, k: Fraction) -> _Engine:
    from .lattice import Lattice

    return _Engine(DiscriminantForm(Lattice(gram_key)), k)


def engine_for(disc: DiscriminantForm, k) -> _Engine:
    return _engine(disc.lattice.gram.entries, Fraction(k))


def eisenstein_coefficients(
    disc: DiscriminantForm, k, prec, components=None
) -> EisensteinSeries:
    """E_{k,Lambda} for any Lambda with the given discriminant form.

    Components are indexed by the SNF coordinates of `disc`; the component at
    mu is supported on exponents m = -Q(mu) mod 1, all m < prec included.
    """
    eng = engine_for(disc, k)
    k = Fraction(k)
    prec = Fraction(prec)
    coeffs = {}
    targets = components if components is not None else disc.elements()
    seen = set()
    for mu in targets:
        mu = tuple(mu)
        rep = disc.orbit_rep(mu)
        if rep in seen:
            continue
        seen.add(rep)
        pair = {rep, disc.neg(rep)}
        m = (-disc.q(rep)) % 1
        while m < prec:
            if m > 0:
                val = eng.exact(m, rep)
            elif rep == disc.zero():
                val = Fraction(1)
            else:
                val = Fraction(0)  # isotropic constant terms vanish
            for nu in pair:
                if val or m == 0:
                    coeffs[(nu, m)] = val
            m += 1
    base = VVExpansion(disc, k, coeffs, prec, support_sign=1)
    return EisensteinSeries(base, k)


def eisenstein_series(disc: DiscriminantForm, k, prec) -> VVExpansion:
    return eisenstein_coefficients(disc, k, prec).base


def local_factor(disc: DiscriminantForm, p: int, m, mu) -> Fraction:
    """The local Euler factor alpha_p(m, mu), computed from counts."""
    eng = engine_for(disc, Fraction(disc.lattice.rank, 2) + 0)
    # weight plays no role in the local counting; realize on the core itself
    coset = disc.dual_vector(tuple(mu))
    counting = disc.lattice.twist(-1)
    return local_density(p, counting.gram.entries, 0, coset, Fraction(m))
