"""Degenerate generalized Laguerre polynomials.

``L_{n,lam}^{(alpha)}(x)`` is the coefficient of ``t**n`` in
``(1-t)**-(alpha+1) * e_lam(-x t / (1-t))``.  This module builds it three
independent ways (closed sum, generating-function expansion, Lah sum at
``alpha = -1``), evaluates the Gamma-function form numerically, checks the
Rodrigues-type identity as an exact series residual, and produces the
right-hand sides of the two derivative recurrences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Sequence

import mpmath

from .errors import DomainError
from .exact_core import (
    MultiPoly,
    TruncSeries,
    binom_poly,
    poly_eval,
    series_from_poly,
    series_diff,
    series_mul,
    series_scale_arg,
)
from .special import deg_exp_series, falling_lambda, lah

__all__ = [
    "LaguerrePoly",
    "explicit",
    "gf_expand",
    "gamma_form_eval",
    "eval_exact",
    "theorem4_poly",
    "theorem4_binomial_form",
    "classical",
    "alpha_weight_series",
    "seq_from_A",
    "deriv_recurrence_rhs",
    "rodrigues_residual",
]

_X = MultiPoly.var("x")
_LAM = MultiPoly.var("lambda")


@dataclass(frozen=True)
class LaguerrePoly:
    n: int
    poly: MultiPoly

    def __post_init__(self):
        if self.poly.degree("x") != self.n:
            raise ValueError(f"degree-{self.n} polynomial has x-degree {self.poly.degree('x')}")

    def subs(self, **bindings) -> MultiPoly:
        return self.poly.subs(**bindings)


@lru_cache(maxsize=None)
def _explicit_poly(n: int) -> MultiPoly:
    p = MultiPoly()
    for m in range(n + 1):
        term = binom_poly(n, n - m) * falling_lambda(1, m) * (_X ** m)
        p = p + term * Fraction((-1) ** m, factorial(m))
    return p


def explicit(n: int) -> LaguerrePoly:
    """Closed sum ``sum_m C(n+alpha, n-m) (-1)^m (1)_{m,lam} x^m / m!``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return LaguerrePoly(n, _explicit_poly(n))


def classical(n: int) -> MultiPoly:
    """Classical generalized Laguerre polynomial in ``x`` and ``alpha``."""
    p = MultiPoly()
    for i in range(n + 1):
        p = p + binom_poly(n, n - i) * (_X ** i) * Fraction((-1) ** i, factorial(i))
    return p


def gf_expand(order: int) -> list[LaguerrePoly]:
    """Coefficients of ``t^0..t^order`` of the generating function.

    The m-th term of the degenerate exponential contributes
    ``(1)_{m,lam} (-x)^m / m! * t^m * sum_l C(m+alpha+l, l) t^l``.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    acc = [MultiPoly() for _ in range(order + 1)]
    for m in range(order + 1):
        head = falling_lambda(1, m) * (_X ** m) * Fraction((-1) ** m, factorial(m))
        for l in range(order - m + 1):
            acc[m + l] = acc[m + l] + head * binom_poly(m + l, l)
    return [LaguerrePoly(n, p) for n, p in enumerate(acc)]


_GAMMA_DPS = 40


def gamma_form_eval(n: int, alpha: float, lam: float, x: float) -> float:
    """Evaluate via ``Gamma(n+alpha+1)/Gamma(n+1) * sum_m (1)_{m,lam} C(n,m) (-x)^m / Gamma(m+alpha+1)``.

    The alternating sum cancels badly near zeros of the polynomial, so it is
    accumulated at 40 significant digits (inputs are taken as exact binary
    values) and rounded once.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    for m in range(n + 1):
        z = alpha + m + 1
        if z <= 0 and z == math.floor(z):
            raise DomainError(f"Gamma pole: alpha + {m} + 1 = {z} is a nonpositive integer")
    with mpmath.workdps(_GAMMA_DPS):
        a, l, xv = mpmath.mpf(alpha), mpmath.mpf(lam), mpmath.mpf(x)
        top = a + n + 1
        if top > 0:
            lead = mpmath.exp(mpmath.loggamma(top) - mpmath.loggamma(n + 1))
        else:
            # loggamma is complex on the negative axis
            lead = mpmath.gamma(top) / mpmath.factorial(n)
        total = mpmath.mpf(0)
        falling = mpmath.mpf(1)
        for m in range(n + 1):
            total += falling * comb(n, m) * (-xv) ** m * mpmath.rgamma(a + m + 1)
            falling *= 1 - m * l
        return float(lead * total)


def eval_exact(n: int, alpha: float | Fraction, lam: float | Fraction, x: float | Fraction) -> Fraction:
    """Exact value of ``explicit(n)`` at the given point (floats are read exactly)."""
    v = poly_eval(_explicit_poly(n), {"x": Fraction(x), "lambda": Fraction(lam), "alpha": Fraction(alpha)})
    return v.const_value()


@lru_cache(maxsize=None)
def theorem4_poly(n: int) -> MultiPoly:
    """``alpha = -1`` case through Lah numbers: ``(1/n!) sum_k (-x)^k (1)_{k,lam} L(n,k)``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    p = MultiPoly()
    for k in range(n + 1):
        p = p + falling_lambda(1, k) * ((-_X) ** k) * lah(n, k)
    return p / factorial(n)


def theorem4_binomial_form(n: int) -> MultiPoly:
    """Same polynomial written as ``sum_{k>=1} (1)_{k,lam} (-x)^k C(n-1,k-1) / k!`` (empty sum at n=0 is 1)."""
    if n == 0:
        return MultiPoly.const(1)
    p = MultiPoly()
    for k in range(1, n + 1):
        p = p + falling_lambda(1, k) * ((-_X) ** k) * Fraction(comb(n - 1, k - 1), factorial(k))
    return p


def alpha_weight_series(order: int) -> TruncSeries:
    """``(1-t)^{-(alpha+1)} = sum_k C(alpha+k, k) t^k`` with symbolic alpha."""
    return TruncSeries("t", order, tuple(binom_poly(k, k) for k in range(order + 1)))


def _deg_exp_of_t_over_1mt(order: int) -> TruncSeries:
    """``e_lam(-x t/(1-t))`` as a series in t, by raising ``t/(1-t)`` to powers."""
    u = TruncSeries.from_list("t", [0] + [1] * order, order)
    acc = [MultiPoly() for _ in range(order + 1)]
    power = TruncSeries.from_list("t", [1], order)
    for m in range(order + 1):
        head = falling_lambda(1, m) * (_X ** m) * Fraction((-1) ** m, factorial(m))
        for k in range(m, order + 1):
            if not power[k].is_zero():
                acc[k] = acc[k] + head * power[k]
        power = series_mul(power, u)
    return TruncSeries("t", order, tuple(acc))


def seq_from_A(A: TruncSeries, order: int) -> list[MultiPoly]:
    """Coefficients ``y_0..y_order`` of ``A(t) e_lam(-x t/(1-t))``."""
    if A.var != "t":
        raise ValueError("A must be a series in t")
    if A.order < order:
        raise ValueError(f"A is only known through t^{A.order}, need t^{order}")
    if any(c.mentions("x") for c in A.coeffs):
        raise ValueError("A(t) coefficients may not depend on x")
    if A[0].is_zero():
        raise ValueError("A(t) is not invertible: A(0) = 0")
    prod = series_mul(A.truncate(order), _deg_exp_of_t_over_1mt(order))
    return list(prod.coeffs)


def deriv_recurrence_rhs(n: int, lower: Sequence[MultiPoly], form: str) -> MultiPoly:
    """Right-hand side of a derivative recurrence for ``y_n'``.

    ``lower`` holds ``y_0, ..., y_{n-1}`` (``three_term`` only reads the last).
    ``three_term``: ``(1 + x lam) y_{n-1}' - y_{n-1}``.
    ``lah_sum``: ``-sum_{k=1}^n sum_{l=1}^k x^{l-1} lam^{l-1} C(k-1, k-l) y_{n-k}``.
    """
    if n < 1:
        raise ValueError("recurrences start at n = 1")
    if form == "three_term":
        if len(lower) < n:
            raise ValueError(f"three_term needs y_{n - 1}; got {len(lower)} lower polynomials")
        prev = lower[n - 1]
        return (1 + _X * _LAM) * prev.diff("x") - prev
    if form == "lah_sum":
        if len(lower) < n:
            raise ValueError(f"lah_sum needs y_0..y_{n - 1}; got {len(lower)} lower polynomials")
        total = MultiPoly()
        for k in range(1, n + 1):
            weight = MultiPoly()
            for l in range(1, k + 1):
                weight = weight + (_X * _LAM) ** (l - 1) * comb(k - 1, k - l)
            total = total + weight * lower[n - k]
        return -total
    raise ValueError(f"unknown recurrence form {form!r}; expected 'three_term' or 'lah_sum'")


def rodrigues_residual(n: int, alpha: int, order: int) -> TruncSeries:
    """Exact residual of the Rodrigues-type identity for integer ``alpha >= 0``.

    With ``E = e_lam(-x)`` this returns, as a series in x over Q[lam],

        d^n/dx^n [E x^{n+alpha}] (1 - lam x)^n
          - n! E x^alpha sum_m c_m x^m (1 - lam x)^{n-m}

    where ``c_m`` is the x^m coefficient of ``L_{n,lam}^{(alpha)}``.  It is
    zero through ``x^order`` exactly when the identity holds.
    """
    if n < 0 or alpha < 0:
        raise ValueError("n and alpha must be nonnegative integers")
    if order < n + alpha + 4:
        raise ValueError(f"order {order} too small; need at least n + alpha + 4 = {n + alpha + 4}")
    # e_lam(-x) through x^(order+n) so that the n-th derivative is exact through x^order
    E_long = series_scale_arg(deg_exp_series(1, order + n, var="x"), -1)
    E = E_long.truncate(order)
    one_minus = 1 - _LAM * _X

    lhs = series_diff(E_long.shift(n + alpha), n)
    lhs = series_mul(lhs, series_from_poly(one_minus ** n, "x", order))

    coeffs = poly_eval(_explicit_poly(n), {"alpha": alpha})
    bracket = MultiPoly()
    for m in range(n + 1):
        bracket = bracket + coeffs.coeff_of("x", m) * (_X ** m) * one_minus ** (n - m)
    rhs = series_mul(E, series_from_poly(bracket * _X ** alpha, "x", order)) * factorial(n)
    return lhs - rhs
