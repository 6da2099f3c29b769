import random
from fractions import Fraction

import pytest

from isochk.bipoly import BiPoly
from isochk.qi import QI
from isochk.textio import ParseError, format_poly, parse_poly


def test_parse_basic():
    p = parse_poly("1/2*x^2 + 1/2*y^2 + x^3")
    assert p.terms == {(2, 0): QI(Fraction(1, 2)), (0, 2): QI(Fraction(1, 2)),
                       (3, 0): QI(1)}


def test_parse_imaginary():
    assert parse_poly("i*x*y").terms == {(1, 1): QI(0, 1)}
    assert parse_poly("-i*x*y").terms == {(1, 1): QI(0, -1)}


def test_parse_error_position():
    with pytest.raises(ParseError) as err:
        parse_poly("x^2*(y")
    assert err.value.position == 6


def test_decimals_rejected():
    with pytest.raises(ParseError, match="exact rationals only"):
        parse_poly("0.5*x")


def test_no_implicit_multiplication():
    with pytest.raises(ParseError):
        parse_poly("2x")


def test_no_variable_division():
    with pytest.raises(ParseError):
        parse_poly("x/2")


def test_zero_denominator():
    with pytest.raises(ParseError):
        parse_poly("1/0")


def test_format_zero():
    assert format_poly(BiPoly.zero()) == "0"


def test_format_examples():
    p = BiPoly({(2, 0): QI(Fraction(1, 2)), (0, 2): QI(Fraction(1, 2))})
    assert format_poly(p) == "1/2*x^2 + 1/2*y^2"
    assert format_poly(BiPoly({(1, 1): QI(0, -1)})) == "-i*x*y"


def test_parentheses_and_powers():
    p = parse_poly("(x + y)^2")
    assert p == parse_poly("x^2 + 2*x*y + y^2")
    assert parse_poly("x^0") == BiPoly.constant(1)


def random_bipoly(rng):
    terms = {}
    for _ in range(rng.randint(0, 8)):
        i, j = rng.randint(0, 5), rng.randint(0, 5)
        terms[(i, j)] = QI(Fraction(rng.randint(-9, 9), rng.randint(1, 7)),
                           Fraction(rng.randint(-9, 9), rng.randint(1, 7)))
    return BiPoly(terms)


def test_roundtrip_500_random():
    rng = random.Random(42)
    for _ in range(500):
        p = random_bipoly(rng)
        assert parse_poly(format_poly(p)) == p


def test_format_deterministic():
    rng = random.Random(43)
    p = random_bipoly(rng)
    assert format_poly(p) == format_poly(BiPoly(dict(p.terms)))
