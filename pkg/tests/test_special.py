import math
from fractions import Fraction
from math import comb, factorial

import pytest

from degen_laguerre.errors import DomainError
from degen_laguerre.exact_core import MultiPoly, TruncSeries, poly_eval, series_pow
from degen_laguerre.special import (
    deg_exp_eval,
    deg_exp_series,
    falling_factorial_poly,
    falling_lambda,
    lah,
    lah_triangle,
    rising_factorial_poly,
)

x = MultiPoly.var("x")
lam = MultiPoly.var("lambda")


def test_falling_lambda_examples():
    assert falling_lambda(1, 0) == 1
    assert falling_lambda(1, 2) == 1 - lam
    for n in range(6):
        assert poly_eval(falling_lambda(x, n), {"lambda": 0}) == x**n


def test_factorial_polys():
    assert rising_factorial_poly(0) == 1 == falling_factorial_poly(0)
    assert rising_factorial_poly(2) == x**2 + x
    assert falling_factorial_poly(2) == x**2 - x
    assert poly_eval(rising_factorial_poly(5), {"x": 1}) == factorial(5)


@pytest.mark.parametrize("n, k, expected", [(0, 0, 1), (3, 3, 1), (3, 2, 6), (4, 2, 36), (4, 3, 12), (5, 0, 0), (5, 1, 120)])
def test_lah_values(n, k, expected):
    assert lah(n, k) == expected


def test_lah_rejects_k_above_n():
    with pytest.raises(ValueError):
        lah(2, 3)


def test_lah_triangle_recurrence_matches_closed_form():
    tri = lah_triangle(25)
    for n, row in enumerate(tri):
        assert len(row) == n + 1
        assert row == [lah(n, k) for k in range(n + 1)]
        assert all(v >= 0 for v in row)


def test_rising_in_terms_of_falling():
    for n in range(16):
        rhs = sum((falling_factorial_poly(k) * lah(n, k) for k in range(n + 1)), MultiPoly())
        assert rising_factorial_poly(n) == rhs


def test_lah_generating_series():
    order = 20
    u = TruncSeries.from_list("t", [0] + [1] * order, order)
    for k in range(11):
        s = series_pow(u, k) * Fraction(1, factorial(k))
        for n in range(order + 1):
            expected = Fraction(lah(n, k), factorial(n)) if n >= k else 0
            assert s[n] == expected


def test_lah_binomial_product_form():
    for n in range(1, 21):
        for k in range(1, n + 1):
            assert lah(n, k) == comb(n - 1, k - 1) * comb(n, k) * factorial(n - k)


def test_deg_exp_series_coefficients():
    s = deg_exp_series(x, 4)
    assert s[0] == 1
    assert s[2] == x * (x - lam) / 2
    classical = s.map(lambda c: poly_eval(c, {"lambda": 0}))
    assert classical.coeffs == tuple(x**k / factorial(k) for k in range(5))


def test_deg_exp_eval_examples():
    assert deg_exp_eval(1.7, 0.3, 0.0) == math.exp(1.7 * 0.3)
    assert deg_exp_eval(1.0, 1.0, -0.5) == pytest.approx(4.0, rel=1e-15)
    assert deg_exp_eval(2.5, 0.0, 0.3) == 1.0
    with pytest.raises(DomainError):
        deg_exp_eval(1.0, 2.0, -0.5)


def test_deg_exp_partial_sums_converge_to_closed_form():
    t, lv = Fraction(1, 2), Fraction(1, 4)
    target = deg_exp_eval(1.0, float(t), float(lv))
    s = deg_exp_series(1, 40)
    residuals = []
    partial = Fraction(0)
    for k in range(41):
        partial += poly_eval(s[k], {"lambda": lv}).const_value() * t**k
        residuals.append(abs(float(partial) - target))
    tail = residuals[5:]
    assert all(b <= a for a, b in zip(tail, tail[1:]))
    assert residuals[-1] < 1e-14
