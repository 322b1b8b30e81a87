"""Taylor-mode arithmetic on truncated jets at a real point.

A :class:`Jet` stores normalized Taylor coefficients ``c[k] = f^(k)(x0)/k!``.
Composites are propagated coefficient by coefficient, so the n-th derivative
of e.g. ``x**alpha * e_lam(-a/x)`` comes out without finite differencing.

:func:`verify_derivative_identity` compares such jet derivatives with the
closed-form right-hand sides of three derivative identities, and
:func:`central_difference` gives an independent numeric estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb, factorial

import numpy as np

from .errors import DomainError
from .laguerre import eval_exact, gamma_form_eval
from .special import deg_exp_eval, falling_lambda_float, lah

__all__ = [
    "Jet",
    "jet_var",
    "jet_const",
    "jet_add",
    "jet_mul",
    "jet_recip",
    "jet_exp",
    "jet_pow_real",
    "jet_deg_exp",
    "jet_nth_derivative",
    "IDENTITIES",
    "default_tol",
    "lhs_jet",
    "rhs_closed_form",
    "scalar_function",
    "central_difference",
    "verify_derivative_identity",
    "finite_difference_check",
    "sample_params",
    "verify_batch",
]

IDENTITIES = ("thm2", "thm3", "thm5")


@dataclass(frozen=True)
class Jet:
    x0: float
    c: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "c", np.asarray(self.c, dtype=float))

    @property
    def K(self) -> int:
        return len(self.c) - 1

    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            if other.x0 != self.x0 or other.K != self.K:
                raise ValueError("jets must share the expansion point and order")
            return other
        return jet_const(self.x0, self.K, float(other))

    def __add__(self, other):
        return jet_add(self, self._coerce(other))

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.x0, -self.c)

    def __sub__(self, other):
        return jet_add(self, -self._coerce(other))

    def __rsub__(self, other):
        return jet_add(-self, self._coerce(other))

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Jet(self.x0, self.c * other)
        return jet_mul(self, self._coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return Jet(self.x0, self.c / other)
        return jet_mul(self, jet_recip(self._coerce(other)))

    def __rtruediv__(self, other):
        return jet_mul(self._coerce(other), jet_recip(self))


def jet_var(x0: float, K: int) -> Jet:
    """Jet of the identity function ``f(x) = x``."""
    if K < 0:
        raise ValueError("K must be nonnegative")
    c = np.zeros(K + 1)
    c[0] = x0
    if K >= 1:
        c[1] = 1.0
    return Jet(float(x0), c)


def jet_const(x0: float, K: int, value: float) -> Jet:
    c = np.zeros(K + 1)
    c[0] = value
    return Jet(float(x0), c)


def _check(a: Jet, b: Jet):
    if a.x0 != b.x0 or a.K != b.K:
        raise ValueError("jets must share the expansion point and order")


def jet_add(a: Jet, b: Jet) -> Jet:
    _check(a, b)
    return Jet(a.x0, a.c + b.c)


def jet_mul(a: Jet, b: Jet) -> Jet:
    _check(a, b)
    return Jet(a.x0, np.convolve(a.c, b.c)[: a.K + 1])


def jet_recip(a: Jet) -> Jet:
    a0 = a.c[0]
    if a0 == 0:
        raise DomainError("reciprocal of a jet with zero constant term")
    b = np.zeros_like(a.c)
    b[0] = 1.0 / a0
    for k in range(1, a.K + 1):
        b[k] = -np.dot(a.c[1 : k + 1], b[k - 1 :: -1][:k]) / a0
    return Jet(a.x0, b)


def jet_exp(a: Jet) -> Jet:
    b = np.zeros_like(a.c)
    b[0] = math.exp(a.c[0])
    for k in range(1, a.K + 1):
        j = np.arange(1, k + 1)
        b[k] = np.dot(j * a.c[1 : k + 1], b[k - 1 :: -1][:k]) / k
    return Jet(a.x0, b)


def jet_pow_real(a: Jet, r: float) -> Jet:
    """Jet of ``u**r``.

    Nonnegative integer exponents use repeated multiplication; otherwise the
    recurrence from ``u (u^r)' = r u' u^r`` needs ``u(x0) != 0`` (and
    ``u(x0) > 0`` for non-integer r).
    """
    if float(r).is_integer() and r >= 0:
        result, base, k = jet_const(a.x0, a.K, 1.0), a, int(r)
        while k:
            if k & 1:
                result = jet_mul(result, base)
            base = jet_mul(base, base)
            k >>= 1
        return result
    a0 = a.c[0]
    if a0 == 0:
        raise DomainError("power of a jet with zero constant term")
    if a0 < 0 and not float(r).is_integer():
        raise DomainError(f"non-integer power {r} of a negative base {a0}")
    b = np.zeros_like(a.c)
    b[0] = a0 ** r
    for k in range(1, a.K + 1):
        j = np.arange(1, k + 1)
        b[k] = np.dot((r * j - (k - j)) * a.c[1 : k + 1], b[k - 1 :: -1][:k]) / (k * a0)
    return Jet(a.x0, b)


def jet_deg_exp(u: Jet, lam: float) -> Jet:
    """Jet of ``e_lam(u) = (1 + lam u)**(1/lam)``, or ``exp(u)`` at ``lam == 0``."""
    if lam == 0:
        return jet_exp(u)
    base = 1.0 + lam * u
    if base.c[0] <= 0:
        raise DomainError(f"1 + lambda*u must be positive at x0 (got {base.c[0]!r})")
    return jet_pow_real(base, 1.0 / lam)


def jet_nth_derivative(a: Jet, n: int) -> float:
    if n < 0 or n > a.K:
        raise ValueError(f"derivative order {n} outside jet order {a.K}")
    return factorial(n) * float(a.c[n])


# identity checks

def default_tol(n: int) -> float:
    return 1e-8 if n <= 6 else 1e-6


def _check_domain(ident: str, params: dict, x0: float) -> None:
    lam = params["lam"]
    if ident == "thm2":
        a = params["a"]
        if x0 <= 0:
            raise DomainError("thm2 requires x0 > 0")
        if x0 <= a * lam:
            raise DomainError("thm2 requires x0 > a*lambda")
        if 1 - lam * a / x0 <= 0:
            raise DomainError("thm2 requires 1 - lambda*a/x0 > 0")
    elif ident == "thm3":
        if params["alpha"] <= -1:
            raise DomainError("thm3 requires alpha > -1")
        if x0 <= 0:
            raise DomainError("thm3 requires x0 > 0")
        if 1 - lam * x0 <= 0:
            raise DomainError("thm3 requires 1 - lambda*x0 > 0")
    elif ident == "thm5":
        if x0 == 0:
            raise DomainError("thm5 requires x0 != 0")
        if x0 + lam == 0:
            raise DomainError("thm5 requires x0 + lambda != 0")
        if 1 + lam / x0 <= 0:
            raise DomainError("thm5 requires 1 + lambda/x0 > 0")
    else:
        raise ValueError(f"unknown identity {ident!r}; expected one of {IDENTITIES}")


def lhs_jet(ident: str, params: dict, x0: float, K: int) -> Jet:
    """Jet of the function whose n-th derivative the identity describes."""
    lam = params["lam"]
    x = jet_var(x0, K)
    if ident == "thm2":
        return jet_pow_real(x, params["alpha"]) * jet_deg_exp(-params["a"] * jet_recip(x), lam)
    if ident == "thm3":
        return jet_deg_exp(-x, lam) * jet_pow_real(x, params["n"] + params["alpha"])
    if ident == "thm5":
        return jet_deg_exp(jet_recip(x), lam)
    raise ValueError(f"unknown identity {ident!r}")


def scalar_function(ident: str, params: dict):
    """Plain float version of the differentiated composite (for finite differences)."""
    lam = params["lam"]
    if ident == "thm2":
        al, a = params["alpha"], params["a"]
        return lambda x: x ** al * deg_exp_eval(1.0, -a / x, lam)
    if ident == "thm3":
        p = params["n"] + params["alpha"]
        return lambda x: deg_exp_eval(1.0, -x, lam) * x ** p
    if ident == "thm5":
        return lambda x: deg_exp_eval(1.0, 1.0 / x, lam)
    raise ValueError(f"unknown identity {ident!r}")


def rhs_closed_form(ident: str, params: dict, x0: float) -> float:
    n, lam = params["n"], params["lam"]
    if ident == "thm2":
        al, a = params["alpha"], params["a"]
        lag = float(eval_exact(n, -al - 1, lam, a / (x0 - a * lam)))
        return (-1) ** n * x0 ** (al - n) * factorial(n) * deg_exp_eval(1.0, -a / x0, lam) * lag
    if ident == "thm3":
        al = params["alpha"]
        lag = gamma_form_eval(n, al, lam, x0 / (1 - lam * x0))
        return factorial(n) * deg_exp_eval(1.0, -x0, lam) * x0 ** al * lag
    if ident == "thm5":
        s = sum(lah(n, l) * falling_lambda_float(1.0, l, lam) * (1.0 / (x0 + lam)) ** l for l in range(n + 1))
        return (-1) ** n * x0 ** (-n) * deg_exp_eval(1.0, 1.0 / x0, lam) * s
    raise ValueError(f"unknown identity {ident!r}")


def verify_derivative_identity(ident: str, params: dict, x0: float, tol: float | None = None, K: int | None = None) -> dict:
    """Compare the jet n-th derivative against the closed form.

    ``params`` carries ``n`` and ``lam`` plus ``alpha`` and ``a`` (thm2) or
    ``alpha`` (thm3).  Relative error is taken against ``max(|lhs|, |rhs|)``.
    """
    if ident not in IDENTITIES:
        raise ValueError(f"unknown identity {ident!r}; expected one of {IDENTITIES}")
    n = params["n"]
    if n < 0:
        raise ValueError("n must be nonnegative")
    if tol is None:
        tol = default_tol(n)
    if K is None:
        K = n + 2
    _check_domain(ident, params, x0)
    lhs = jet_nth_derivative(lhs_jet(ident, params, x0, K), n)
    rhs = rhs_closed_form(ident, params, x0)
    abs_err = abs(lhs - rhs)
    scale = max(abs(lhs), abs(rhs))
    rel_err = abs_err / scale if scale else abs_err
    return {
        "id": ident,
        "params": dict(params),
        "x0": x0,
        "lhs": lhs,
        "rhs": rhs,
        "abs_err": abs_err,
        "rel_err": rel_err,
        "pass": bool(rel_err <= tol),
    }


def central_difference(f, x0: float, n: int, h: float) -> float:
    """Iterated central difference ``h^-n sum_j (-1)^j C(n,j) f(x0 + (n/2 - j) h)``."""
    s = math.fsum((-1) ** j * comb(n, j) * f(x0 + (n / 2 - j) * h) for j in range(n + 1))
    return s / h ** n


def finite_difference_check(ident: str, params: dict, x0: float, margin: float = 0.1) -> dict:
    """Check the jet derivative against central differences within their error band.

    The band is the Richardson estimate of the O(h^2) truncation error
    (``|D(2h) - D(h)| / 3``, times a safety factor of 4) plus a rounding bound
    ``2^n * eps * max|f| / h^n`` over the stencil.
    """
    n = params["n"]
    _check_domain(ident, params, x0)
    lhs = jet_nth_derivative(lhs_jet(ident, params, x0, n), n)
    f = scalar_function(ident, params)
    eps = np.finfo(float).eps
    if n == 0:
        fv = f(x0)
        band = 16 * eps * abs(fv)
        return {"jet": lhs, "fd": fv, "h": 0.0, "band": band, "pass": bool(abs(lhs - fv) <= band)}
    # stencil for D(2h) reaches x0 +- n*h; keep it inside the margin
    h = min(eps ** (1.0 / (n + 2)) * max(1.0, abs(x0)), 0.5 * margin / n)
    d1 = central_difference(f, x0, n, h)
    d2 = central_difference(f, x0, n, 2 * h)
    fmax = max(abs(f(x0 + (n / 2 - j) * s)) for s in (h, 2 * h) for j in range(n + 1))
    band = 4 * abs(d2 - d1) / 3 + 10 * 2 ** n * eps * fmax / h ** n
    return {"jet": lhs, "fd": d1, "h": h, "band": band, "pass": bool(abs(lhs - d1) <= band)}


def sample_params(ident: str, rng: np.random.Generator, n: int | None = None, margin: float = 0.1):
    """Draw a valid ``(params, x0)`` pair with every domain constraint met by ``margin``.

    lambda is uniform on [-0.4, 0.4]; draws with |lambda| < 0.01 are snapped
    to exactly 0 so the classical branch is exercised.
    """
    lo_n = 1 if ident == "thm5" else 0
    if n is None:
        n = int(rng.integers(lo_n, 7))
    lam = float(rng.uniform(-0.4, 0.4))
    if abs(lam) < 0.01:
        lam = 0.0
    if ident == "thm2":
        alpha = float(rng.uniform(-2.0, 2.0))
        a = float(rng.uniform(-2.0, 2.0))
        lo = max(0.0, a * lam) + margin
        x0 = float(rng.uniform(lo, lo + 3.0))
        return {"n": n, "alpha": alpha, "a": a, "lam": lam}, x0
    if ident == "thm3":
        alpha = float(rng.uniform(-1.0 + margin, 3.0))
        hi = 3.0 if lam <= 0 else min(3.0, (1 - margin) / lam)
        x0 = float(rng.uniform(margin, hi))
        return {"n": n, "alpha": alpha, "lam": lam}, x0
    if ident == "thm5":
        x0 = float(rng.uniform(0.5, 3.5))
        return {"n": n, "lam": lam}, x0
    raise ValueError(f"unknown identity {ident!r}; expected one of {IDENTITIES}")


def verify_batch(ident: str, draws: int, seed: int, n: int | None = None, tol: float | None = None, fd: bool = False) -> list[dict]:
    """Randomized identity checks; deterministic for a given seed."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(draws):
        params, x0 = sample_params(ident, rng, n)
        rep = verify_derivative_identity(ident, params, x0, tol)
        if fd:
            chk = finite_difference_check(ident, params, x0)
            rep["fd"] = chk
            rep["pass"] = rep["pass"] and chk["pass"]
        out.append(rep)
    return out
