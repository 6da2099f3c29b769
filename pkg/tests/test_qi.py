import random
from fractions import Fraction

import pytest

from isochk.qi import QI, qi_sqrt, rational_isqrt


def random_qi(rng):
    return QI(Fraction(rng.randint(-8, 8), rng.randint(1, 6)),
              Fraction(rng.randint(-8, 8), rng.randint(1, 6)))


def test_basic_arithmetic():
    i = QI(0, 1)
    assert i * i == QI(-1)
    assert (QI(1, 2) + QI(3, -2)) == QI(4)
    assert QI(2, 1) * QI(2, -1) == QI(5)
    assert QI(1) / QI(0, 1) == QI(0, -1)


def test_field_axioms_randomized():
    rng = random.Random(7)
    for _ in range(200):
        a, b, c = (random_qi(rng) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)
        if b:
            assert (a / b) * b == a


def test_pow_and_conjugate():
    z = QI(Fraction(1, 2), Fraction(-3, 4))
    assert z ** 0 == QI(1)
    assert z ** 3 == z * z * z
    assert z * z.conjugate() == QI(z.norm())


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        QI(1) / QI(0)


def test_str_forms():
    assert str(QI(Fraction(1, 2))) == "1/2"
    assert str(QI(0, 1)) == "i"
    assert str(QI(0, -1)) == "-i"
    assert str(QI(1, 1)) == "1+i"
    assert str(QI(Fraction(1, 2), Fraction(-3, 4))) == "1/2-3/4*i"


def test_rational_isqrt():
    assert rational_isqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert rational_isqrt(Fraction(2)) is None
    assert rational_isqrt(Fraction(-1)) is None


def test_qi_sqrt_exact_cases():
    assert qi_sqrt(QI(4)) in (QI(2), QI(-2))
    root = qi_sqrt(QI(0, 2))          # sqrt(2i) = 1 + i
    assert root is not None and root * root == QI(0, 2)
    root = qi_sqrt(QI(-9))
    assert root is not None and root * root == QI(-9)
    assert qi_sqrt(QI(2)) is None
    root = qi_sqrt(QI(Fraction(-7, 4), Fraction(6, 4)))  # ((1+3i)/2)^2
    assert root is not None and root * root == QI(Fraction(-7, 4), Fraction(3, 2))


def test_qi_sqrt_random_squares():
    rng = random.Random(11)
    for _ in range(100):
        z = random_qi(rng)
        sq = z * z
        root = qi_sqrt(sq)
        assert root is not None and root * root == sq
