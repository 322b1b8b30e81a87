"""Degenerate Poisson random variable.

The mass function is ``p(k) = e_lam(alpha)^-1 alpha^k (1)_{k,lam} / k!``.
It is a genuine probability distribution only for ``lam <= 0`` with
``1 + alpha*lam > 0``; for ``lam > 0`` the factor ``(1)_{k,lam}`` eventually
changes sign.  Sampling and series summation therefore require ``lam <= 0``,
while :func:`moment_exact` accepts any ``lam`` with ``1 + alpha*lam > 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .special import falling_lambda_float

__all__ = [
    "DegPoissonParams",
    "pmf",
    "pmf_direct",
    "sample",
    "moment_exact",
    "moment_series",
    "moment_mc",
    "K_CAP",
]

K_CAP = 10**6


@dataclass(frozen=True)
class DegPoissonParams:
    alpha: float
    lam: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "lam", float(self.lam))
        if not self.alpha > 0:
            raise DomainError(f"alpha must be positive (got {self.alpha})")
        if not 1 + self.alpha * self.lam > 0:
            raise DomainError(f"1 + alpha*lambda must be positive (got {1 + self.alpha * self.lam})")

    @property
    def samplable(self) -> bool:
        return self.lam <= 0

    def require_samplable(self):
        if not self.samplable:
            raise DomainError(
                f"lambda = {self.lam} > 0: the mass function takes negative values, "
                "so it is not a probability distribution"
            )

    def p0(self) -> float:
        """``e_lam(alpha)^-1``."""
        if self.lam == 0:
            return math.exp(-self.alpha)
        return (1 + self.lam * self.alpha) ** (-1 / self.lam)

    def ratio(self, k: int) -> float:
        """``p(k+1) / p(k)``."""
        return self.alpha * (1 - k * self.lam) / (k + 1)


def pmf(k: int, p: DegPoissonParams) -> float:
    """Mass at ``k`` by the recurrence ``p(k+1) = p(k) alpha (1 - k lam) / (k+1)``."""
    p.require_samplable()
    if k < 0:
        return 0.0
    v = p.p0()
    for j in range(k):
        v *= p.ratio(j)
    return v


def pmf_direct(k: int, p: DegPoissonParams) -> float:
    """Mass at ``k`` straight from the defining product (no recurrence)."""
    return p.p0() * p.alpha ** k * falling_lambda_float(1.0, k, p.lam) / math.factorial(k)


def sample(p: DegPoissonParams, seed: int, count: int) -> np.ndarray:
    """Inverse-CDF draws.

    The mass function is generated by its recurrence while walking k upward;
    all outstanding uniforms are resolved against the running CDF at each
    step.  If the CDF saturates below a uniform through rounding, the
    remaining draws are assigned the current k.
    """
    p.require_samplable()
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    u = rng.random(count)
    out = np.full(count, -1, dtype=np.int64)
    order = np.argsort(u, kind="stable")
    us = u[order]
    pos, k, mass, cdf = 0, 0, p.p0(), 0.0
    while pos < count:
        if k > K_CAP:
            raise RuntimeError(f"sampling exceeded k = {K_CAP}")
        prev = cdf
        cdf += mass
        end = int(np.searchsorted(us, cdf, side="left")) if cdf < 1.0 else count
        if cdf == prev and k > p.alpha:
            end = count
        out[order[pos:end]] = k
        pos = max(pos, end)
        mass *= p.ratio(k)
        k += 1
    return out


def moment_exact(n: int, p: DegPoissonParams) -> float:
    """``E[(X)_n] = alpha^n (1)_{n,lam} / (1 + alpha lam)^n``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return p.alpha ** n * falling_lambda_float(1.0, n, p.lam) / (1 + p.alpha * p.lam) ** n


def moment_series(n: int, p: DegPoissonParams, tol: float = 1e-12, max_terms: int = K_CAP) -> float:
    """``sum_k (k)_n p(k)``, stopped once a geometric bound on the tail is below ``tol``.

    For ``k >= n`` the term ratio ``alpha (1 - k lam) / (k + 1 - n)`` is
    monotone in k with limit ``-alpha lam < 1``, so the larger of its current
    value and the limit bounds every later ratio.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    p.require_samplable()
    limit = -p.alpha * p.lam
    # first nonzero term is k = n
    term = p.p0() * p.alpha ** n * falling_lambda_float(1.0, n, p.lam)
    terms = []
    for k in range(n, n + max_terms):
        terms.append(term)
        r = p.alpha * (1 - k * p.lam) / (k + 1 - n)
        nxt = term * r
        rho = max(r, limit)
        if rho < 1 and nxt / (1 - rho) < tol:
            return math.fsum(terms)
        term = nxt
    raise RuntimeError(f"moment series did not converge within {max_terms} terms")


def moment_mc(n: int, p: DegPoissonParams, count: int, seed: int) -> tuple[float, float]:
    """Monte Carlo mean and standard error of ``(X)_n``."""
    xs = sample(p, seed, count).astype(float)
    ff = np.ones(count)
    for j in range(n):
        ff *= xs - j
    if count == 1:
        return float(ff[0]), 0.0
    return float(ff.mean()), float(ff.std(ddof=1) / math.sqrt(count))
