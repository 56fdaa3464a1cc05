"""Even lattices, their discriminant forms, and elementary vector invariants."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from .arith import prime_divisors
from .intervals import Interval, cos2pi_interval, sin2pi_interval, sqrt_interval

Vector = tuple[Fraction, ...]
Coords = tuple[int, ...]


class LatticeError(ValueError):
    pass


def _as_int_matrix(entries) -> tuple[tuple[int, ...], ...]:
    M = tuple(tuple(int(x) for x in row) for row in entries)
    n = len(M)
    if any(len(row) != n for row in M):
        raise LatticeError("gram matrix must be square")
    return M


def _det(M) -> int:
    """Integer determinant by fraction-free Gaussian elimination (Bareiss)."""
    n = len(M)
    A = [list(row) for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[-1][-1]


@dataclass(frozen=True)
class GramMatrix:
    entries: tuple[tuple[int, ...], ...]

    def __init__(self, entries):
        M = _as_int_matrix(entries)
        n = len(M)
        for i in range(n):
            for j in range(n):
                if M[i][j] != M[j][i]:
                    raise LatticeError("gram matrix must be symmetric")
            if M[i][i] % 2:
                raise LatticeError("lattice not even")
        if _det(M) == 0:
            raise LatticeError("degenerate lattice")
        object.__setattr__(self, "entries", M)

    @property
    def rank(self) -> int:
        return len(self.entries)

    @property
    def det(self) -> int:
        return _det(self.entries)


def signature_of(gram: GramMatrix) -> tuple[int, int]:
    """(p, q) = numbers of positive/negative eigenvalues; exact.

    Uses rational congruent diagonalization, which preserves signature.
    """
    n = gram.rank
    A = [[Fraction(x) for x in row] for row in gram.entries]
    pos = neg = 0
    idx = list(range(n))
    for k in range(n):
        # find nonzero pivot on the diagonal, else create one
        piv = next((i for i in range(k, n) if A[i][i] != 0), None)
        if piv is None:
            i, j = next(
                (i, j)
                for i in range(k, n)
                for j in range(i + 1, n)
                if A[i][j] != 0
            )
            for t in range(n):
                A[i][t] += A[j][t]
            for t in range(n):
                A[t][i] += A[t][j]
            piv = i
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            for row in A:
                row[k], row[piv] = row[piv], row[k]
        d = A[k][k]
        if d > 0:
            pos += 1
        else:
            neg += 1
        for i in range(k + 1, n):
            if A[i][k]:
                c = A[i][k] / d
                for t in range(n):
                    A[i][t] -= c * A[k][t]
                for t in range(n):
                    A[t][i] -= c * A[t][k]
    return pos, neg


def smith_normal_form(A) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return (U, D, V) with U*A*V = D diagonal, d1 | d2 | ..., U,V unimodular."""
    M = [list(map(int, row)) for row in A]
    n = len(M)
    if any(len(r) != n for r in M):
        raise LatticeError("need a square matrix")
    if _det(M) == 0:
        raise LatticeError("degenerate lattice")
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_op(i, j, c):  # row_i += c*row_j
        M[i] = [a + c * b for a, b in zip(M[i], M[j])]
        U[i] = [a + c * b for a, b in zip(U[i], U[j])]

    def col_op(i, j, c):  # col_i += c*col_j
        for r in range(n):
            M[r][i] += c * M[r][j]
            V[r][i] += c * V[r][j]

    def row_swap(i, j):
        M[i], M[j] = M[j], M[i]
        U[i], U[j] = U[j], U[i]

    def col_swap(i, j):
        for r in range(n):
            M[r][i], M[r][j] = M[r][j], M[r][i]
            V[r][i], V[r][j] = V[r][j], V[r][i]

    for k in range(n):
        while True:
            # move a minimal nonzero entry of the k.. block to (k, k)
            best = None
            for i in range(k, n):
                for j in range(k, n):
                    if M[i][j] and (best is None or abs(M[i][j]) < best[0]):
                        best = (abs(M[i][j]), i, j)
            _, bi, bj = best
            if bi != k:
                row_swap(k, bi)
            if bj != k:
                col_swap(k, bj)
            done = True
            for i in range(k + 1, n):
                if M[i][k] % M[k][k]:
                    row_op(i, k, -(M[i][k] // M[k][k]))
                    done = False
            for j in range(k + 1, n):
                if M[k][j] % M[k][k]:
                    col_op(j, k, -(M[k][j] // M[k][k]))
                    done = False
            if not done:
                continue
            for i in range(k + 1, n):
                if M[i][k]:
                    row_op(i, k, -(M[i][k] // M[k][k]))
            for j in range(k + 1, n):
                if M[k][j]:
                    col_op(j, k, -(M[k][j] // M[k][k]))
            # divisibility of the remaining block by the pivot
            bad = next(
                (
                    (i, j)
                    for i in range(k + 1, n)
                    for j in range(k + 1, n)
                    if M[i][j] % M[k][k]
                ),
                None,
            )
            if bad is None:
                break
            row_op(k, bad[0], 1)
        if M[k][k] < 0:
            M[k] = [-x for x in M[k]]
            U[k] = [-x for x in U[k]]
    return U, M, V


@dataclass(frozen=True)
class Lattice:
    gram: GramMatrix
    signature: tuple[int, int] = field(default=None)

    def __init__(self, gram, signature=None):
        if not isinstance(gram, GramMatrix):
            gram = GramMatrix(gram)
        sig = signature_of(gram)
        if signature is not None and tuple(signature) != sig:
            raise LatticeError(f"stored signature {signature} != computed {sig}")
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "signature", sig)

    @property
    def rank(self) -> int:
        return self.gram.rank

    def bilinear(self, v, w) -> Fraction:
        S = self.gram.entries
        return sum(
            Fraction(v[i]) * S[i][j] * Fraction(w[j])
            for i in range(self.rank)
            for j in range(self.rank)
        )

    def q(self, v) -> Fraction:
        return self.bilinear(v, v) / 2

    def twist(self, sign: int = -1) -> "Lattice":
        return Lattice([[sign * x for x in row] for row in self.gram.entries])


def divisibility(L: Lattice, v) -> int:
    """div(v) = gcd of <v, Lambda> = gcd of the entries of gram*v."""
    if all(x == 0 for x in v):
        raise LatticeError("divisibility of zero vector")
    S = L.gram.entries
    vals = [sum(S[i][j] * v[j] for j in range(L.rank)) for i in range(L.rank)]
    return gcd(*vals) if len(vals) > 1 else abs(vals[0])


class DiscriminantForm:
    """Finite quadratic form (D(L), Q) presented in Smith normal form coordinates."""

    def __init__(self, lattice: Lattice):
        self.lattice = lattice
        U, D, V = smith_normal_form(lattice.gram.entries)
        n = lattice.rank
        full_orders = [D[i][i] for i in range(n)]
        keep = [i for i in range(n) if full_orders[i] > 1]
        self.orders: Coords = tuple(full_orders[i] for i in keep)
        self.gens_dual: tuple[Vector, ...] = tuple(
            tuple(Fraction(V[r][i], full_orders[i]) for r in range(n)) for i in keep
        )
        self._U = U
        self._full_orders = full_orders
        self.order = 1
        for d in self.orders:
            self.order *= d
        if self.order != abs(lattice.gram.det):
            raise LatticeError("SNF inconsistent with determinant")
        self._q_cache: dict[Coords, Fraction] = {}
        self.level = self._level()

    # -- element bookkeeping ------------------------------------------------

    def elements(self) -> list[Coords]:
        out = [()]
        for d in self.orders:
            out = [e + (a,) for e in out for a in range(d)]
        return out if self.orders else [()]

    def zero(self) -> Coords:
        return (0,) * len(self.orders)

    def neg(self, mu: Coords) -> Coords:
        return tuple((-a) % d for a, d in zip(mu, self.orders))

    def add(self, mu: Coords, nu: Coords) -> Coords:
        return tuple((a + b) % d for a, b, d in zip(mu, nu, self.orders))

    def scale(self, r: int, mu: Coords) -> Coords:
        return tuple((r * a) % d for a, d in zip(mu, self.orders))

    def element_order(self, mu: Coords) -> int:
        return lcm(*(d // gcd(a, d) for a, d in zip(mu, self.orders))) if self.orders else 1

    def dual_vector(self, mu: Coords) -> Vector:
        n = self.lattice.rank
        v = [Fraction(0)] * n
        for a, g in zip(mu, self.gens_dual):
            for r in range(n):
                v[r] += a * g[r]
        return tuple(v)

    def coords_of_dual(self, v) -> Coords:
        """SNF coordinates of a dual vector (entries of U*S*v mod the orders)."""
        S = self.lattice.gram.entries
        n = self.lattice.rank
        Sv = [sum(Fraction(S[i][j]) * Fraction(v[j]) for j in range(n)) for i in range(n)]
        w = [sum(self._U[i][j] * Sv[j] for j in range(n)) for i in range(n)]
        keep = [i for i in range(n) if self._full_orders[i] > 1]
        out = []
        for i in keep:
            if w[i].denominator != 1:
                raise LatticeError("vector is not in the dual lattice")
            out.append(int(w[i]) % self._full_orders[i])
        return tuple(out)

    # -- the quadratic form -------------------------------------------------

    def q(self, mu: Coords) -> Fraction:
        """Q(mu) in Q/Z, represented in [0, 1)."""
        if mu not in self._q_cache:
            self._q_cache[mu] = self.lattice.q(self.dual_vector(mu)) % 1
        return self._q_cache[mu]

    def bilinear(self, mu: Coords, nu: Coords) -> Fraction:
        return self.lattice.bilinear(self.dual_vector(mu), self.dual_vector(nu)) % 1

    def _level(self) -> int:
        N = 1
        for mu in self.elements():
            N = lcm(N, self.q(mu).denominator)
        return N

    def isotropic_elements(self) -> list[Coords]:
        return [mu for mu in self.elements() if self.q(mu) == 0]

    def orbits(self) -> list[tuple[Coords, ...]]:
        """Partition into {mu} / {mu, -mu} with lexicographically smallest rep first."""
        seen = set()
        out = []
        for mu in self.elements():
            if mu in seen:
                continue
            nu = self.neg(mu)
            if nu == mu:
                out.append((mu,))
                seen.add(mu)
            else:
                rep = min(mu, nu)
                out.append((rep, max(mu, nu)))
                seen.update((mu, nu))
        return out

    def orbit_rep(self, mu: Coords) -> Coords:
        return min(mu, self.neg(mu))

    def twist(self) -> "DiscriminantForm":
        """The discriminant form of L(-1) (same group, negated Q)."""
        return DiscriminantForm(self.lattice.twist())

    def __repr__(self):
        return f"DiscriminantForm(orders={self.orders}, level={self.level})"


def negation_orbits(D: DiscriminantForm):
    return D.orbits()


def elements(D: DiscriminantForm):
    return D.elements()


def discriminant_form(L: Lattice) -> DiscriminantForm:
    return DiscriminantForm(L)


# -- Milgram signature --------------------------------------------------------


def _cyclotomic_poly(n: int) -> list[int]:
    """Coefficients of Phi_n, ascending degree, by recursive exact division."""
    poly = [0] * n + [1]
    poly[0] = -1  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            phi_d = _cyclotomic_poly(d)
            poly = _poly_divide_exact(poly, phi_d)
    return poly


@lru_cache(maxsize=None)
def _cyclotomic_cached(n: int) -> tuple[int, ...]:
    return tuple(_cyclotomic_poly(n))


def _poly_divide_exact(num: list[int], den) -> list[int]:
    num = list(num)
    den = list(den)
    out = [0] * (len(num) - len(den) + 1)
    while len(num) >= len(den) and any(num):
        while num and num[-1] == 0:
            num.pop()
        if len(num) < len(den):
            break
        c, r = divmod(num[-1], den[-1])
        if r:
            raise ArithmeticError("inexact polynomial division")
        k = len(num) - len(den)
        out[k] = c
        for i, dc in enumerate(den):
            num[k + i] -= c * dc
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return out


def _poly_mod_cyclotomic(coeffs: dict[int, int], n: int) -> tuple[int, ...]:
    """Reduce an element of Z[x]/(x^n - 1) modulo Phi_n."""
    phi = list(_cyclotomic_cached(n))
    dense = [0] * n
    for e, c in coeffs.items():
        dense[e % n] += c
    deg_phi = len(phi) - 1
    for e in range(n - 1, deg_phi - 1, -1):
        c = dense[e]
        if c:
            for i, pc in enumerate(phi):
                dense[e - deg_phi + i] -= c * pc
    return tuple(dense[:deg_phi])


def milgram_signature(D: DiscriminantForm) -> int:
    """s mod 8 with sum_mu e(Q(mu)) = sqrt(|D|) * e(s/8).

    s mod 4 is found by exact cyclotomic arithmetic on the squared Gauss sum;
    the remaining sign is certified with interval trigonometry.
    """
    if D.order == 1:
        return 0
    L = lcm(8, D.level)
    gauss: dict[int, int] = {}
    for mu in D.elements():
        e = int(D.q(mu) * L) % L
        gauss[e] = gauss.get(e, 0) + 1
    # squared Gauss sum, as an element of Z[x]/(x^L - 1)
    sq: dict[int, int] = {}
    for e1, c1 in gauss.items():
        for e2, c2 in gauss.items():
            e = (e1 + e2) % L
            sq[e] = sq.get(e, 0) + c1 * c2
    sq_red = _poly_mod_cyclotomic(sq, L)
    candidates = []
    for s4 in range(4):
        target = {(s4 * L // 4) % L: D.order}
        if _poly_mod_cyclotomic(target, L) == sq_red:
            candidates.append(s4)
    if len(candidates) != 1:
        raise LatticeError("inconsistent discriminant form (Gauss sum test)")
    s4 = candidates[0]
    # distinguish s4 from s4 + 4: compare the certified enclosure of G with
    # the two candidate points sqrt(|D|) * e(s/8)
    for terms in (24, 48, 96):
        re = Interval.point(0)
        im = Interval.point(0)
        for e, c in gauss.items():
            re = re + c * cos2pi_interval(Fraction(e, L), terms)
            im = im + c * sin2pi_interval(Fraction(e, L), terms)
        root = sqrt_interval(Fraction(D.order))
        viable = []
        for s in (s4, s4 + 4):
            cand_re = root * cos2pi_interval(Fraction(s, 8), terms)
            cand_im = root * sin2pi_interval(Fraction(s, 8), terms)
            if not ((re - cand_re).is_positive() or (re - cand_re).is_negative()
                    or (im - cand_im).is_positive() or (im - cand_im).is_negative()):
                viable.append(s)
        if len(viable) == 1:
            return viable[0]
        if not viable:
            raise LatticeError("inconsistent discriminant form (Gauss sum sign)")
    raise LatticeError("could not certify Milgram sign")


# -- reflections and vectors with invariants ----------------------------------


@dataclass(frozen=True)
class Reflection:
    matrix: tuple[tuple[Fraction, ...], ...]
    integral: bool
    fixes_disc: bool
    neg_fixes_disc: bool
    swaps: tuple


def reflection(L: Lattice, rho) -> Reflection:
    """sigma_rho(v) = v - 2<v,rho>/<rho,rho> rho, for negative-norm rho."""
    nn = L.bilinear(rho, rho)
    if nn == 0:
        raise LatticeError("reflection in isotropic vector")
    n = L.rank
    S = L.gram.entries
    Srho = [sum(S[i][j] * rho[j] for j in range(n)) for i in range(n)]
    mat = tuple(
        tuple(
            Fraction(int(i == j)) - Fraction(2 * rho[i] * Srho[j], nn)
            for j in range(n)
        )
        for i in range(n)
    )
    integral = all(x.denominator == 1 for row in mat for x in row)
    fixes = neg_fixes = False
    swaps = ()
    if integral:
        D = DiscriminantForm(L)
        imgs = []
        for idx, g in enumerate(D.gens_dual):
            img = tuple(
                sum(mat[i][j] * g[j] for j in range(n)) for i in range(n)
            )
            imgs.append((idx, D.coords_of_dual(img)))
        gens_coords = [
            tuple(int(i == j) * 1 for j in range(len(D.orders)))
            for i in range(len(D.orders))
        ]
        fixes = all(img == gens_coords[idx] for idx, img in imgs)
        neg_fixes = all(D.neg(img) == gens_coords[idx] for idx, img in imgs)
        swaps = tuple(imgs)
    return Reflection(mat, integral, fixes, neg_fixes, swaps)


def find_vector_with_invariants(L: Lattice, norm: int, div: int, u_split=(0, 1)):
    """A primitive vector of the given even norm and divisibility, or None.

    Requires the lattice to contain a marked hyperbolic plane spanned by basis
    vectors u_split = (index of e, index of f) with <e,f> = 1, <e,e> = <f,f> = 0.
    The search is complete: it enumerates candidate discriminant cosets and
    either constructs a vector or certifies none exists.
    """
    ie, jf = u_split
    S = L.gram.entries
    if not (S[ie][ie] == 0 and S[jf][jf] == 0 and S[ie][jf] == 1):
        raise LatticeError("u_split does not mark a standard hyperbolic plane")
    if norm % 2:
        raise LatticeError("norm must be even")
    D = DiscriminantForm(L)
    target = Fraction(norm, 2 * div * div)
    for mu in D.elements():
        # needs: order of mu exactly div (primitivity), Q(mu) = target mod 1
        if D.element_order(mu) != div and not (div == 1 and mu == D.zero()):
            continue
        if (D.q(mu) - target) % 1 != 0:
            continue
        w = D.dual_vector(mu)
        # v = div*(w + e + t*f); choose t to land on the requested norm
        ww = L.bilinear(w, w)
        we = L.bilinear(w, [int(r == ie) for r in range(L.rank)])
        wf = L.bilinear(w, [int(r == jf) for r in range(L.rank)])
        if we != 0 or wf != 0:
            continue  # only use cosets supported away from the marked plane
        t2 = Fraction(norm, div * div) - ww
        if t2 % 2 != 0:
            continue
        t = t2 / 2
        if t.denominator != 1:
            continue
        v = [div * w[r] for r in range(L.rank)]
        v[ie] += div
        v[jf] += div * int(t)
        if any(x.denominator != 1 for x in map(Fraction, v)):
            continue
        v = [int(x) for x in v]
        assert L.bilinear(v, v) == norm and divisibility(L, v) == div
        return tuple(v)
    return None
