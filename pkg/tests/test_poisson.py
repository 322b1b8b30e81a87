import math

import numpy as np
import pytest

from degen_laguerre.errors import DomainError
from degen_laguerre.poisson import (
    DegPoissonParams,
    moment_exact,
    moment_mc,
    moment_series,
    pmf,
    pmf_direct,
    sample,
)

P = DegPoissonParams(1.0, -0.5)


def test_params_validation():
    with pytest.raises(DomainError):
        DegPoissonParams(0.0, -0.1)
    with pytest.raises(DomainError):
        DegPoissonParams(2.0, -0.5)
    assert DegPoissonParams(2.0, 0.3).samplable is False


def test_pmf_classical():
    p = DegPoissonParams(2.5, 0.0)
    for k in range(20):
        assert pmf(k, p) == pytest.approx(math.exp(-2.5) * 2.5**k / math.factorial(k), rel=1e-13)


def test_pmf_closed_form_case():
    assert pmf(0, P) == 0.25
    assert pmf(1, P) == 0.25
    assert pmf(2, P) == 0.1875
    for k in range(31):
        assert abs(pmf(k, P) - (k + 1) / 2 ** (k + 2)) <= 1e-12


def test_pmf_zero_mass():
    for a, l in [(1.0, -0.5), (3.0, -0.2), (0.4, 0.0)]:
        p = DegPoissonParams(a, l)
        assert pmf(0, p) == pytest.approx((1 + l * a) ** (-1 / l) if l else math.exp(-a), rel=1e-15)


def test_pmf_rejects_positive_lambda():
    with pytest.raises(DomainError):
        pmf(1, DegPoissonParams(1.0, 0.2))


@pytest.mark.parametrize("a, l", [(1.0, -0.5), (2.0, -0.25), (0.7, -1.0), (4.0, -0.1), (3.0, 0.0)])
def test_normalization(a, l):
    p = DegPoissonParams(a, l)
    total, k = 0.0, 0
    while True:
        m = pmf(k, p)
        total += m
        if k > a and m < 1e-18:
            break
        k += 1
    assert total == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("a, l", [(1.0, -0.5), (2.0, -0.25), (3.0, -0.3)])
def test_recurrence_matches_direct_formula(a, l):
    p = DegPoissonParams(a, l)
    for k in range(51):
        assert pmf(k, p) == pytest.approx(pmf_direct(k, p), rel=1e-12)


def test_moment_exact_examples():
    assert moment_exact(1, P) == 2.0
    assert moment_exact(0, P) == 1.0
    for n in range(6):
        assert moment_exact(n, DegPoissonParams(1.7, 0.0)) == pytest.approx(1.7**n, rel=1e-15)
    # formal value outside the probabilistic range
    assert moment_exact(2, DegPoissonParams(1.0, 0.5)) == pytest.approx(1.0 * 0.5 / 1.5**2)


def test_moment_exact_lambda_continuity():
    a = 1.3
    gaps = [abs(moment_exact(4, DegPoissonParams(a, -(10.0**-j))) - a**4) for j in range(1, 8)]
    assert all(b < g for g, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-5


def test_moment_series_examples():
    assert moment_series(0, P, 1e-12) == pytest.approx(1.0, abs=1e-12)
    assert moment_series(1, P, 1e-12) == pytest.approx(2.0, rel=1e-11)
    p = DegPoissonParams(2.0, -0.25)
    assert moment_series(3, p, 1e-12) == pytest.approx(moment_exact(3, p), rel=1e-11)


def test_sampling_is_deterministic():
    assert sample(P, 42, 5).tolist() == sample(P, 42, 5).tolist()
    assert sample(P, 42, 5).tolist() != sample(P, 43, 5).tolist()


def test_sampling_rejects_bad_input():
    with pytest.raises(DomainError):
        sample(DegPoissonParams(1.0, 0.1), 0, 10)
    with pytest.raises(ValueError):
        sample(P, 0, 0)


def test_sample_empirical_zero_mass():
    n = 10**6
    xs = sample(P, 7, n)
    f0 = np.mean(xs == 0)
    se = math.sqrt(0.25 * 0.75 / n)
    assert abs(f0 - 0.25) <= 4 * se


def test_classical_sample_mean():
    n = 10**6
    xs = sample(DegPoissonParams(1.0, 0.0), 8, n)
    assert abs(xs.mean() - 1.0) <= 4 * xs.std(ddof=1) / math.sqrt(n)


def test_moment_mc_examples():
    assert moment_mc(0, P, 1000, 1) == (1.0, 0.0)
    est, se = moment_mc(1, P, 10**6, 2)
    assert abs(est - 2.0) <= 4 * se
    est, se = moment_mc(2, DegPoissonParams(1.0, 0.0), 10**6, 3)
    assert abs(est - 1.0) <= 4 * se
