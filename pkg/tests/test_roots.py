import cmath
import math

import pytest

from isochk.poly import Poly
from isochk.qi import QI
from isochk.roots import (RootFindingError, aberth_roots, deflate_root,
                          exact_qi_roots, roots_clustered)


def P(*coeffs):
    return Poly([QI(c) if not isinstance(c, QI) else c for c in coeffs])


def test_fourth_roots_of_minus_one():
    u = P(1, 0, 0, 0, 1)                      # Y^4 + 1
    clusters = roots_clustered(u)
    assert len(clusters) == 4
    assert all(c.multiplicity == 1 for c in clusters)
    expected = sorted((cmath.exp(1j * math.pi * (2 * k + 1) / 4)
                       for k in range(4)),
                      key=lambda z: (round(z.real, 8), round(z.imag, 8)))
    got = [c.value for c in clusters]
    for g, e in zip(got, expected):
        assert abs(g - e) < 1e-10


def test_triple_root_at_zero():
    clusters = roots_clustered(P(0, 0, 0, 1))   # Y^3
    assert len(clusters) == 1
    assert clusters[0].multiplicity == 3
    assert abs(clusters[0].value) < 1e-12


def test_mixed_multiplicities():
    u = P(-1, 1) * P(-1, 1) * P(2, 1)           # (Y-1)^2 (Y+2)
    clusters = roots_clustered(u)
    table = {round(c.value.real): c.multiplicity for c in clusters}
    assert table == {1: 2, -2: 1}


def test_multiplicity_sum_and_residuals():
    u = P(3, 0, -2, 1) * P(-1, 1) ** 2
    clusters = roots_clustered(u)
    assert sum(c.multiplicity for c in clusters) == u.degree()
    bound = 1e-8 * (1 + sum(abs(complex(c)) for c in u.coeffs))
    for c in clusters:
        assert abs(u.eval_complex(c.value)) <= bound


def test_nonconvergence_reports_residuals():
    with pytest.raises(RootFindingError, match="residual"):
        aberth_roots([1 + 0j, 0j, 1 + 0j], max_rounds=1)


def test_deflate_root():
    q = deflate_root(P(-6, 1, 1), QI(2))
    assert q == P(3, 1)
    with pytest.raises(ValueError):
        deflate_root(P(1, 1), QI(5))


def test_exact_qi_roots_gaussian():
    u = P(1, 0, 1)                              # Y^2 + 1
    roots, remainders = exact_qi_roots(u)
    assert sorted(str(r) for r, _ in roots) == ["-i", "i"]
    assert not remainders


def test_exact_qi_roots_irrational_remainder():
    u = P(-2, 0, 1)                             # Y^2 - 2
    roots, remainders = exact_qi_roots(u)
    assert not roots
    assert len(remainders) == 1 and remainders[0][0].degree() == 2
