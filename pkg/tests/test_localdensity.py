"""Brute-force validation of the p-adic density machinery."""

from fractions import Fraction
from itertools import product
from math import lcm

import pytest

from nlcone.arith import valuation
from nlcone.localdensity import density_at_depth, local_density


def brute_density_int(p, gram, n_planes, coset, m, j, slack=2):
    core = [list(row) for row in gram]
    for _ in range(n_planes):
        size = len(core)
        for row in core:
            row.extend([0, 0])
        core.append([0] * size + [0, 1])
        core.append([0] * size + [1, 0])
    l = len(core)
    coset = [Fraction(x) for x in coset] + [Fraction(0)] * (2 * n_planes)
    m = Fraction(m)
    D = lcm(2, m.denominator, *(s.denominator for s in coset))
    smallmod = p ** (j + slack)
    s_num = [int(s * D) for s in coset]
    # 2 D^2 (Q(x+s) - m) is an integer; condition v_p(Q-m) >= j becomes
    # v_p(2 D^2 (Q - m)) >= j + v_p(2 D^2)
    thresh = p ** (j + valuation(2 * D * D, p))
    m2 = int(2 * D * D * m)
    count = 0
    for x in product(range(smallmod), repeat=l):
        v = [D * xi + si for xi, si in zip(x, s_num)]
        q2 = sum(core[a][b] * v[a] * v[b] for a in range(l) for b in range(l))
        if (q2 - m2) % thresh == 0:
            count += 1
    return Fraction(count, smallmod**l) * p**j


CASES = [
    # (p, gram, planes, coset, m, j, slack)
    (2, ((-2,),), 1, (Fraction(0),), Fraction(1), 3, 2),
    (2, ((-2,),), 1, (Fraction(1, 2),), Fraction(3, 4), 3, 2),
    (2, ((-4,),), 1, (Fraction(1, 4),), Fraction(7, 8), 3, 2),
    (2, ((-4,),), 1, (Fraction(2, 4),), Fraction(1, 2), 4, 2),
    (2, ((2, 1), (1, 2)), 1, (Fraction(0), Fraction(0)), Fraction(1), 2, 2),
    (2, ((2, 1), (1, 4)), 1, (Fraction(0), Fraction(0)), Fraction(2), 2, 2),
    (2, ((0, 2), (2, 0)), 1, (Fraction(0), Fraction(0)), Fraction(2), 2, 2),
    (2, ((4, 2), (2, 4)), 0, (Fraction(0), Fraction(0)), Fraction(2), 4, 2),
    (2, ((-2, 0), (0, -6)), 0,
     (Fraction(1, 2), Fraction(1, 6)), Fraction(2) - Fraction(1, 4) - Fraction(1, 12), 3, 2),
    (3, ((2, 1), (1, 2)), 1, (Fraction(1, 3), Fraction(2, 3)), Fraction(1, 3), 2, 1),
    (3, ((-6,),), 1, (Fraction(1, 6),), Fraction(11, 12), 2, 1),
    (3, ((-18,),), 0, (Fraction(1, 3),), Fraction(0), 3, 2),
    (5, ((-10, 0), (0, 2)), 0, (Fraction(1, 5), Fraction(0)), Fraction(4, 5), 2, 1),
    (7, ((2, 1), (1, 4)), 0, (Fraction(0), Fraction(0)), Fraction(3), 2, 1),
]


@pytest.mark.parametrize("p,gram,planes,coset,m,j,slack", CASES)
def test_density_matches_bruteforce(p, gram, planes, coset, m, j, slack):
    got = density_at_depth(p, gram, planes, coset, m, j)
    want = brute_density_int(p, gram, planes, coset, m, j, slack)
    assert got == want


def test_stabilized_density_agrees_with_deep_bruteforce():
    p, gram, coset, m = 2, ((-2,),), (Fraction(1, 2),), Fraction(3, 4)
    alpha = local_density(p, gram, 1, coset, m)
    deep = brute_density_int(p, gram, 1, coset, m, 6, slack=2)
    assert alpha == deep


def test_unimodular_u4_density_at_2():
    # alpha_2(1) on U^4 is 15/16: matches the classical E_4 = 240 computation
    alpha = local_density(2, (), 4, (), Fraction(1))
    assert alpha == Fraction(15, 16)
