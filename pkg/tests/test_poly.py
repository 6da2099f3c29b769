import random
from fractions import Fraction

import pytest

from isochk.poly import (Poly, poly_gcd, poly_xgcd, resultant,
                         squarefree_decomposition)
from isochk.qi import QI


def P(*coeffs):
    return Poly([QI(c) if not isinstance(c, QI) else c for c in coeffs])


def random_poly(rng, max_deg=5):
    return Poly([QI(Fraction(rng.randint(-5, 5), rng.randint(1, 3)))
                 for _ in range(rng.randint(0, max_deg + 1))])


def test_construction_trims_zeros():
    assert P(1, 2, 0, 0).degree() == 1
    assert P().is_zero()
    assert P(0, 0).is_zero()


def test_ring_axioms_randomized():
    rng = random.Random(3)
    for _ in range(80):
        a, b, c = (random_poly(rng) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a


def test_divmod_and_gcd():
    a = P(-6, 1, 1)           # t^2 + t - 6 = (t+3)(t-2)
    b = P(-2, 1)              # t - 2
    q, r = a.divmod(b)
    assert r.is_zero() and q == P(3, 1)
    g = poly_gcd(a, P(2, 1))  # gcd with t + 2 is 1
    assert g.degree() == 0
    g = poly_gcd(a, P(-4, 0, 1))   # t^2 - 4 shares t - 2
    assert g == P(-2, 1)


def test_xgcd_bezout():
    rng = random.Random(5)
    for _ in range(40):
        a, b = random_poly(rng, 4), random_poly(rng, 4)
        if a.is_zero() and b.is_zero():
            continue
        g, s, t = poly_xgcd(a, b)
        assert s * a + t * b == g


def test_squarefree_decomposition():
    # (t-1)^2 (t+2)
    u = P(-1, 1) * P(-1, 1) * P(2, 1)
    parts = squarefree_decomposition(u)
    assert [(tuple(str(c) for c in f.coeffs), m) for f, m in parts] == [
        (("2", "1"), 1), (("-1", "1"), 2)]
    # t^3: single factor t with multiplicity 3
    parts = squarefree_decomposition(P(0, 0, 0, 1))
    assert len(parts) == 1 and parts[0][1] == 3


def test_resultant_univariate():
    # res(t^2 - 1, t - 2) = value of t^2-1 at 2 (lead 1) -> 3
    r = resultant(P(-1, 0, 1), P(-2, 1))
    assert r == QI(3)
    # common root -> 0
    r = resultant(P(-1, 0, 1), P(-1, 1))
    assert r == QI(0)
    # classic discriminant-style check: res(t^2+1, t^2+4) = 9
    r = resultant(P(1, 0, 1), P(4, 0, 1))
    assert r == QI(9)


def test_resultant_swap_sign():
    a, b = P(-1, 0, 1), P(5, 1)
    assert resultant(a, b) == resultant(b, a)  # even degree product
    a, b = P(0, 1), P(3, 2, 1)
    # deg 1 * deg 2: swap keeps sign parity even
    assert resultant(a, b) == resultant(b, a)


def test_pow():
    t = P(0, 1)
    assert t ** 3 == P(0, 0, 0, 1)
    assert (P(1, 1) ** 2) == P(1, 2, 1)
    assert P(2) ** 0 == P(1)


def test_eval():
    u = P(1, 0, 1)
    assert u(QI(0, 1)) == QI(0)
    assert abs(u.eval_complex(2.0) - 5.0) < 1e-14
