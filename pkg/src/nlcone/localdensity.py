"""Exact p-adic representation densities of even quadratic lattices.

alpha_p(m, mu) = lim_j  #{x in (Z/p^j)^l : Q(x + mu) = m mod p^j} / p^(j(l-1))

The lattice is split p-adically into 1- and 2-dimensional Jordan blocks; the
value distribution of each block (with its coset shift) is an explicit "class
function" on Z_p -- constant mass on each set {v_p(t) = v, unit(t) = u mod p^w}
and uniform beyond the window w.  Convolving the blocks and reading off the
mass of the residue class of m gives the density.

Counts stabilize in the depth j; we start at a Hensel-motivated depth and
insist two consecutive depths agree.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .arith import frac_valuation, valuation

ZERO = ("Z",)  # the residue 0 mod p^T, i.e. valuation >= T


# ---------------------------------------------------------------------------
# p-adic Jordan splitting of a small Gram matrix
# ---------------------------------------------------------------------------


def jordan_blocks(gram, p: int):
    """Split an even Gram matrix over Z_(p) into orthogonal 1/2-dim blocks.

    Returns (blocks, basis): blocks is a list of ("d1", gram_entry, [index])
    or ("bin", ((a,b),(b,d)), [i, j]) (p = 2 only); basis rows are the new
    basis vectors in the original coordinates, with p-unit denominators.
    """
    n = len(gram)
    A = [[Fraction(x) for x in row] for row in gram]
    basis = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    live = list(range(n))
    blocks = []

    def val(x: Fraction):
        return frac_valuation(x, p)

    while live:
        best = None
        for ii, i in enumerate(live):
            for j in live[ii:]:
                if A[i][j]:
                    v = val(A[i][j])
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            raise ValueError("degenerate block in Jordan splitting")
        vmin, bi, bj = best
        diag = next((i for i in live if A[i][i] and val(A[i][i]) == vmin), None)
        if p != 2 and diag is None:
            # p odd: adding the two rows puts the minimal valuation on the
            # diagonal, since 2*A[bi][bj] then dominates
            for t in range(n):
                basis[bi][t] += basis[bj][t]
            for t in live:
                if t != bi:
                    A[bi][t] = A[bi][t] + A[bj][t]
                    A[t][bi] = A[bi][t]
            A[bi][bi] = A[bi][bi] + 2 * A[bi][bj] + A[bj][bj]
            diag = bi
        if diag is not None:
            i = diag
            pivot = A[i][i]
            for t in list(live):
                if t != i and A[t][i]:
                    c = A[t][i] / pivot
                    if c.denominator % p == 0:
                        raise ValueError("non p-integral elimination")
                    for r in range(n):
                        basis[t][r] -= c * basis[i][r]
                    for r in live:
                        A[t][r] -= c * A[i][r]
                    for r in live:
                        A[r][t] = A[t][r]
            blocks.append(("d1", A[i][i], [i]))
            live.remove(i)
            continue
        # p = 2 and the minimal valuation sits off-diagonal: split 2x2
        i, j = bi, bj
        det = A[i][i] * A[j][j] - A[i][j] ** 2
        for t in list(live):
            if t in (i, j):
                continue
            c1 = (A[j][j] * A[t][i] - A[i][j] * A[t][j]) / det
            c2 = (A[i][i] * A[t][j] - A[i][j] * A[t][i]) / det
            if c1.denominator % p == 0 or c2.denominator % p == 0:
                raise ValueError("projection not p-integral")
            if c1 or c2:
                for r in range(n):
                    basis[t][r] -= c1 * basis[i][r] + c2 * basis[j][r]
                for r in live:
                    A[t][r] -= c1 * A[i][r] + c2 * A[j][r]
                for r in live:
                    A[r][t] = A[t][r]
        blocks.append(("bin", ((A[i][i], A[i][j]), (A[i][j], A[j][j])), [i, j]))
        live.remove(i)
        live.remove(j)
    return blocks, basis


def _solve_coset(basis, vec):
    """Coordinates of vec with respect to the rows of `basis`."""
    n = len(vec)
    M = [[basis[r][c] for r in range(n)] + [Fraction(vec[c])] for c in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if M[r][col])
        M[col], M[piv] = M[piv], M[col]
        d = M[col][col]
        M[col] = [x / d for x in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


# ---------------------------------------------------------------------------
# class functions: dicts mapping (v, w, u) or ZERO to total probability mass
# ---------------------------------------------------------------------------


def _class_size(p: int, T: int, cls) -> int:
    if cls == ZERO:
        return 1
    v, w, _ = cls
    return p ** (T - v - w)


def _make_class(p: int, T: int, v: int, w: int, u: int):
    if v >= T:
        return ZERO
    w = max(1, min(w, T - v))
    return (v, w, u % p**w)


def _add(dist, cls, mass):
    if mass:
        dist[cls] = dist.get(cls, Fraction(0)) + mass


def _uniform_from(p: int, T: int, v0: int) -> dict:
    """Uniform distribution on p^v0 Z_p, as classes mod p^T; total mass 1."""
    out = {}
    if v0 >= T:
        return {ZERO: Fraction(1)}
    for v in range(v0, T):
        for a in range(1, p):
            _add(out, (v, 1, a), Fraction(1, p ** (v - v0 + 1)))
    _add(out, ZERO, Fraction(1, p ** (T - v0)))
    return out


def _spread_cancel(out, p, T, v, w, mass):
    for cls, frac_mass in _uniform_from(p, T, v + w).items():
        _add(out, cls, mass * frac_mass)


def convolve(p: int, T: int, f: dict, g: dict) -> dict:
    out: dict = {}
    for c1, m1 in f.items():
        for c2, m2 in g.items():
            mass = m1 * m2
            if not mass:
                continue
            if c1 == ZERO:
                _add(out, c2, mass)
                continue
            if c2 == ZERO:
                _add(out, c1, mass)
                continue
            v1, w1, u1 = c1
            v2, w2, u2 = c2
            if v1 > v2:
                v1, w1, u1, v2, w2, u2 = v2, w2, u2, v1, w1, u1
            if v1 < v2:
                delta = v2 - v1
                w = min(w1, delta + w2, T - v1)
                _add(out, _make_class(p, T, v1, w, u1 + p**delta * u2), mass)
                continue
            v, w = v1, min(w1, w2)
            s = (u1 + u2) % p**w
            if s == 0:
                _spread_cancel(out, p, T, v, w, mass)
            else:
                c = valuation(s, p)
                _add(out, _make_class(p, T, v + c, w - c, s // p**c), mass)
    return out


def evaluate(p: int, T: int, dist: dict, target: int) -> Fraction:
    """Per-element probability mass at an integer residue mod p^T."""
    target %= p**T
    if target == 0:
        return dist.get(ZERO, Fraction(0))
    v = valuation(target, p)
    u = target // p**v
    total = Fraction(0)
    for cls, mass in dist.items():
        if cls == ZERO:
            continue
        cv, cw, cu = cls
        if cv != v:
            continue
        if (u - cu) % p**cw == 0:
            total += mass / _class_size(p, T, cls)
    return total


# ---------------------------------------------------------------------------
# block value distributions (probability semantics: total mass 1)
# ---------------------------------------------------------------------------


def _unit_part(x: Fraction, p: int, digits: int) -> int:
    v = frac_valuation(x, p)
    num, den = x.numerator, x.denominator
    if v >= 0:
        num //= p**v
    else:
        den //= p ** (-v)
    mod = p**digits
    return num * pow(den, -1, mod) % mod


def _p_shift(s: Fraction, p: int) -> Fraction:
    """The class of s in Q_p / Z_p, as a fraction with pure p-power denominator."""
    if not s:
        return Fraction(0)
    w = -frac_valuation(s, p)
    if w <= 0:
        return Fraction(0)
    pe = p**w
    num = s.numerator * pow(s.denominator // pe, -1, pe) % pe
    return Fraction(num, pe)


def dist_square(p: int, T: int, e: int, alpha: Fraction, s: Fraction) -> dict:
    """Distribution of p^e * alpha * (x + s)^2, x Haar-random in Z_p."""
    va = frac_valuation(alpha, p)
    if s:
        w = -frac_valuation(s, p)
        assert w > 0, "integral shifts must be removed before calling"
        s0 = _unit_part(s, p, w + 8)
        ua = _unit_part(alpha, p, w + 8)
        if p == 2:
            wprime = w + 1 if w >= 2 else 3
        else:
            wprime = w
        v_val = e + va - 2 * w
        if v_val < 0:
            raise ValueError("scaling exponent e too small for this block")
        u_val = ua * s0 * s0
        return {_make_class(p, T, v_val, wprime, u_val): Fraction(1)}
    out: dict = {}
    base = e + va
    if base < 0:
        raise ValueError("scaling exponent e too small for this block")
    ua = _unit_part(alpha, p, 8)
    i = 0
    while base + 2 * i < T:
        mass_i = Fraction(p - 1, p ** (i + 1))  # P(v_p(x) = i)
        if p == 2:
            _add(out, _make_class(p, T, base + 2 * i, 3, ua), mass_i)
        else:
            qrs = sorted({(a * a) % p for a in range(1, p)})
            for r in qrs:
                _add(out, _make_class(p, T, base + 2 * i, 1, ua * r),
                     mass_i / len(qrs))
        i += 1
    _add(out, ZERO, Fraction(1, p**i))  # P(v_p(x) >= i)
    return out


def dist_hyperbolic(p: int, T: int, e: int, nu: int) -> dict:
    """Distribution of p^(e+nu) * x * y, (x, y) Haar-random in Z_p^2."""
    out: dict = {}
    base = e + nu
    v = 0
    cum = Fraction(0)
    while base + v < T:
        mass = Fraction((v + 1) * (p - 1) ** 2, p ** (v + 2))  # P(v_p(xy) = v)
        for a in range(1, p):
            _add(out, (base + v, 1, a), mass / (p - 1))
        cum += mass
        v += 1
    _add(out, ZERO, 1 - cum)
    return out


def dist_v_block(T: int, e: int, nu: int) -> dict:
    """Distribution of 2^(e+nu) (x^2 + xy + y^2), (x, y) Haar-random in Z_2^2.

    x^2+xy+y^2 is odd on primitive pairs, uniformly over the odd residues.
    """
    out: dict = {}
    base = e + nu
    k = 0
    cum = Fraction(0)
    while base + 2 * k < T:
        mass = Fraction(3, 4 ** (k + 1))  # P(both x,y = 0 mod 2^k, primitive)
        _add(out, (base + 2 * k, 1, 1), mass)
        cum += mass
        k += 1
    _add(out, ZERO, 1 - cum)
    return out


def dist_binary(p: int, T: int, e: int, gram2, coset) -> dict:
    (a, b), (_, d) = gram2
    nu = min(frac_valuation(Fraction(x), p) for x in (a, b, d) if x)
    for s in coset:
        if s and frac_valuation(Fraction(s), p) < 0:
            raise NotImplementedError(
                "nontrivial coset shift on a 2-adic binary Jordan block"
            )
    det_scaled = (Fraction(a) * Fraction(d) - Fraction(b) ** 2) / Fraction(p) ** (2 * nu)
    if det_scaled.denominator != 1:
        raise ValueError("binary block determinant is not p-integral after scaling")
    res = int(det_scaled) % 8
    if res == 7:
        return dist_hyperbolic(p, T, e, nu)
    if res == 3:
        return dist_v_block(T, e, nu)
    raise ValueError("binary block is not an even unimodular 2-adic form")


# ---------------------------------------------------------------------------
# the density
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _blocks_cached(gram_key, p):
    return jordan_blocks([list(r) for r in gram_key], p)


@lru_cache(maxsize=None)
def _value_dist(p: int, gram_key, coset_key, n_planes: int, e: int, T: int) -> dict:
    """Convolved value distribution of all blocks, scaled by p^e, mod p^T."""
    if gram_key:
        blocks, basis = _blocks_cached(gram_key, p)
        new_coset = _solve_coset(basis, [Fraction(x) for x in coset_key])
    else:
        blocks, new_coset = [], []
    dist = None
    for kind, data, idxs in blocks:
        if kind == "d1":
            alpha = Fraction(data) / 2
            s = _p_shift(new_coset[idxs[0]], p)
            d = dist_square(p, T, e, alpha, s)
        else:
            cos = tuple(_p_shift(new_coset[i], p) for i in idxs)
            d = dist_binary(p, T, e, data, cos)
        dist = d if dist is None else convolve(p, T, dist, d)
    if n_planes:
        dU = dist_hyperbolic(p, T, e, 0)
        pow_dist = None
        k = n_planes
        acc = dU
        while k:
            if k & 1:
                pow_dist = acc if pow_dist is None else convolve(p, T, pow_dist, acc)
            k >>= 1
            if k:
                acc = convolve(p, T, acc, acc)
        dist = pow_dist if dist is None else convolve(p, T, dist, pow_dist)
    if dist is None:
        raise ValueError("empty lattice")
    return dist


def _scaling_exponent(p, gram_key, coset_key, m: Fraction) -> int:
    e = max(0, -frac_valuation(m, p)) if m else 0
    if gram_key:
        blocks, basis = _blocks_cached(gram_key, p)
        new_coset = _solve_coset(basis, [Fraction(x) for x in coset_key])
        for kind, data, idxs in blocks:
            if kind == "d1":
                alpha = Fraction(data) / 2
                v = frac_valuation(alpha, p)
                s = _p_shift(new_coset[idxs[0]], p)
                if s:
                    v += 2 * frac_valuation(s, p)
                e = max(e, -v)
            else:
                (a, b), (_, d) = data
                nu = min(frac_valuation(Fraction(x), p) for x in (a, b, d) if x)
                e = max(e, -nu)
    return e


def density_at_depth(p: int, gram, n_planes: int, coset, m: Fraction, j: int) -> Fraction:
    gram_key = tuple(tuple(int(x) for x in row) for row in gram)
    coset_key = tuple(Fraction(x) for x in coset)
    m = Fraction(m)
    e = _scaling_exponent(p, gram_key, coset_key, m)
    T = j + e
    dist = _value_dist(p, gram_key, coset_key, n_planes, e, T)
    target = m * p**e
    target_int = target.numerator * pow(target.denominator, -1, p**T) % p**T
    prob = evaluate(p, T, dist, target_int)
    return prob * p**j


def local_density(p: int, gram, n_planes: int, coset, m: Fraction) -> Fraction:
    """The stabilized local density alpha_p(m, coset) of core + n_planes * U."""
    m = Fraction(m)
    gram_key = tuple(tuple(int(x) for x in row) for row in gram)
    max_scale = 0
    if gram_key:
        blocks, _ = _blocks_cached(gram_key, p)
        for kind, data, _idx in blocks:
            if kind == "d1":
                max_scale = max(max_scale, frac_valuation(Fraction(data) / 2, p))
            else:
                (a, b), (_, d) = data
                max_scale = max(
                    max_scale,
                    min(frac_valuation(Fraction(x), p) for x in (a, b, d) if x),
                )
    vm = abs(frac_valuation(m, p)) if m else 0
    j0 = 2 * (vm + max_scale + 1) + 3
    prev = None
    for j in range(j0, j0 + 8):
        cur = density_at_depth(p, gram, n_planes, coset, m, j)
        if prev is not None and cur == prev:
            return cur
        prev = cur
    raise ArithmeticError(f"local density did not stabilize (p={p}, m={m})")


# ---------------------------------------------------------------------------
# closed form at good primes (lattice unimodular at p, trivial coset)
# ---------------------------------------------------------------------------


def good_density(p: int, l: int, det: int, m: Fraction) -> Fraction:
    """alpha_p(m, 0) for a p-unimodular even lattice of rank l, det class det.

    Valid for odd p not dividing det, with v_p(m) >= 0.  Derived from the
    quadratic Gauss sum evaluation of the Igusa series; cross-checked against
    the generic counting machinery in the tests.
    """
    from .arith import kronecker

    if p == 2 or det % p == 0:
        raise ValueError("good_density requires an odd prime not dividing det")
    m = Fraction(m)
    if m == 0:
        raise ValueError("m must be nonzero")
    v = frac_valuation(m, p)
    if v < 0:
        return Fraction(0)
    # det is the Gram determinant; the Gauss sums see the quadratic-form
    # determinant det/2^l, so a factor (2|p)^l enters for odd rank
    dq = kronecker(det, p) * kronecker(2, p) ** l
    if l % 2 == 0:
        k = l // 2
        chi = dq * kronecker(-1, p) ** k
        total = Fraction(1)
        for j in range(1, v + 1):
            total += Fraction(chi**j) * Fraction(p**j - p ** (j - 1), p ** (j * k))
        total -= Fraction(chi ** (v + 1)) * Fraction(p**v, p ** ((v + 1) * k))
        return total
    total = Fraction(1)
    for i in range(1, v // 2 + 1):
        total += Fraction(p ** (2 * i) - p ** (2 * i - 1), p ** (i * l))
    if v % 2 == 1:
        i = (v + 1) // 2
        total -= Fraction(p**v, p ** (i * l))
    else:
        mu = m / p**v  # p-unit rational
        sym = kronecker(-mu.numerator * mu.denominator, p)
        eps = kronecker(-1, p) ** ((l + 1) // 2)
        exp2 = Fraction(2 * v + 1 - (v + 1) * l, 2)
        assert exp2.denominator == 1
        total += eps * dq ** (v + 1) * sym * Fraction(1, p ** (-int(exp2)))
    return total
