import random
from fractions import Fraction

import pytest

from isochk.bipoly import BiPoly, bipoly_resultant
from isochk.qi import QI
from isochk.textio import parse_poly

X = BiPoly.variable("x")
Y = BiPoly.variable("y")


def random_bipoly(rng, max_deg=4, max_terms=6):
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        i, j = rng.randint(0, max_deg), rng.randint(0, max_deg)
        terms[(i, j)] = QI(Fraction(rng.randint(-4, 4), rng.randint(1, 3)),
                           Fraction(rng.randint(-2, 2), 1))
    return BiPoly(terms)


def test_product_difference_of_squares():
    assert (X + Y) * (X - Y) == X * X - Y * Y


def test_mul_by_zero():
    p = parse_poly("x^2 + i*y")
    assert (p * BiPoly.zero()).is_zero()


def test_square_of_half_sum():
    p = parse_poly("1/2*x^2 + 1/2*y^2")
    sq = p * p
    assert sq == parse_poly("1/4*x^4 + 1/2*x^2*y^2 + 1/4*y^4")


def test_ring_axioms_randomized():
    rng = random.Random(17)
    for _ in range(60):
        a, b, c = (random_bipoly(rng) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


def test_partial_derivatives():
    p = parse_poly("1/2*x^2 + 1/2*y^2")
    assert p.partial_derivative("y") == Y
    assert (X ** 3).partial_derivative("x") == parse_poly("3*x^2")
    q = parse_poly("x^2*y + i*y^2")
    assert q.partial_derivative("y") == parse_poly("x^2 + 2*i*y")


def test_homogeneous_part():
    H = parse_poly("1/2*x^2 + 1/2*y^2 + x^3")
    assert H.homogeneous_part(3) == X ** 3
    assert H.homogeneous_part(7).is_zero()
    Hs = parse_poly("1/2*x^2 + 1/2*(y + x^2)^2")
    assert Hs.homogeneous_part(4) == parse_poly("1/2*x^4")
    total = BiPoly.zero()
    for k in range(H.total_degree() + 1):
        total = total + H.homogeneous_part(k)
    assert total == H


def test_resultant_examples():
    r = bipoly_resultant(X, Y + X * X, "y")
    assert r == X.univariate("x")
    r = bipoly_resultant(Y * Y - X, Y, "y")
    assert [str(c) for c in r.coeffs] == ["0", "-1"]
    assert bipoly_resultant(Y * Y - X, Y * Y - X, "y").is_zero()


def test_resultant_vanishes_at_common_zeros():
    # f = y - x^2, g = y - 1 meet at x = +-1
    f = Y - X * X
    g = Y - BiPoly.constant(1)
    r = bipoly_resultant(f, g, "y")
    assert abs(r.eval_complex(1.0)) < 1e-12
    assert abs(r.eval_complex(-1.0)) < 1e-12
    assert abs(r.eval_complex(2.0)) > 0.5


def test_resultant_requires_variable():
    with pytest.raises(ValueError):
        bipoly_resultant(BiPoly.constant(2), BiPoly.constant(3), "y")


def test_compose_linear_identity_and_shear():
    H = parse_poly("1/2*x^2 + 1/2*y^2 + x^3")
    assert H.compose_linear(QI(1), QI(0), QI(0), QI(1)) == H
    # x -> x, y -> y + x^2 is not linear; use y -> y + 2x instead
    sheared = H.compose_linear(QI(1), QI(0), QI(2), QI(1))
    assert sheared == parse_poly("1/2*x^2 + 1/2*(2*x + y)^2 + x^3")


def test_eval_exact_matches_complex():
    rng = random.Random(23)
    for _ in range(20):
        p = random_bipoly(rng)
        x0 = QI(Fraction(1, 3), Fraction(-1, 2))
        exact = p.eval_exact(x0, QI(2, 1))
        approx = p.eval_complex(complex(x0), complex(QI(2, 1)))
        assert abs(complex(exact) - approx) < 1e-10
