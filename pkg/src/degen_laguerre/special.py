"""Factorial sequences, Lah numbers and the degenerate exponential."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .errors import DomainError
from .exact_core import MultiPoly, TruncSeries

__all__ = [
    "falling_lambda",
    "rising_factorial_poly",
    "falling_factorial_poly",
    "lah",
    "lah_triangle",
    "deg_exp_series",
    "deg_exp_eval",
    "falling_lambda_float",
]

_X = MultiPoly.var("x")
_LAM = MultiPoly.var("lambda")


def falling_lambda(base: MultiPoly | int | Fraction, n: int) -> MultiPoly:
    """``base (base - lam) ... (base - (n-1) lam)`` with symbolic lambda.

    For ``base = 1`` this is the degenerate factorial ``(1)_{n,lam}``.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    base = MultiPoly.coerce(base)
    p = MultiPoly.const(1)
    for j in range(n):
        p = p * (base - _LAM * j)
    return p


def falling_lambda_float(base: float, n: int, lam: float) -> float:
    p = 1.0
    for j in range(n):
        p *= base - j * lam
    return p


@lru_cache(maxsize=None)
def rising_factorial_poly(n: int) -> MultiPoly:
    """``x (x+1) ... (x+n-1)``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    p = MultiPoly.const(1)
    for j in range(n):
        p = p * (_X + j)
    return p


@lru_cache(maxsize=None)
def falling_factorial_poly(n: int) -> MultiPoly:
    """``x (x-1) ... (x-n+1)``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    p = MultiPoly.const(1)
    for j in range(n):
        p = p * (_X - j)
    return p


def lah(n: int, k: int) -> int:
    """Unsigned Lah number ``C(n-1, k-1) n! / k!``.

    ``lah(0, 0) = 1`` and ``lah(n, 0) = 0`` for ``n >= 1``.
    """
    if n < 0 or k < 0:
        raise ValueError("n and k must be nonnegative")
    if k > n:
        raise ValueError(f"lah({n}, {k}) undefined: k > n")
    if k == 0:
        return 1 if n == 0 else 0
    return comb(n - 1, k - 1) * (factorial(n) // factorial(k))


def lah_triangle(n_max: int) -> list[list[int]]:
    """Rows ``0..n_max`` built by the recurrence L(n+1,k) = (n+k) L(n,k) + L(n,k-1).

    Independent of the closed form used by :func:`lah`.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    rows = [[1]]
    for n in range(n_max):
        prev = rows[-1] + [0]
        row = [0] * (n + 2)
        for k in range(1, n + 2):
            row[k] = (n + k) * prev[k] + prev[k - 1]
        rows.append(row)
    return rows


def deg_exp_series(exponent: MultiPoly | int | Fraction, order: int, var: str = "t") -> TruncSeries:
    """Series of ``e_lam^{exponent}(var) = sum (exponent)_{k,lam} var^k / k!``."""
    exponent = MultiPoly.coerce(exponent)
    if var == "x" and exponent.mentions("x"):
        raise ValueError("exponent may not mention the series variable")
    coeffs = []
    p = MultiPoly.const(1)
    for k in range(order + 1):
        coeffs.append(p / factorial(k))
        p = p * (exponent - _LAM * k)
    return TruncSeries(var, order, tuple(coeffs))


def deg_exp_eval(xv: float, tv: float, lv: float) -> float:
    """Closed form ``(1 + lv*tv)**(xv/lv)``; ``exp(xv*tv)`` at ``lv == 0``."""
    if lv == 0:
        return math.exp(xv * tv)
    base = 1.0 + lv * tv
    if base <= 0:
        raise DomainError(f"1 + lambda*t must be positive (got {base!r})")
    return base ** (xv / lv)
