"""Distribution families: validation, formula oracles, and statistics.

Formula oracles replay the same stream through an independently written
inverse transform; statistical checks compare empirical moments against the
closed forms and KS distance against the CDF oracle.
"""

import math

import numpy as np
import pytest
from scipy.special import ndtri

from pvclean.distributions import (DistributionSpec, ParameterError, sample,
                                   sample_many)
from pvclean.rng import RandomStream


def draws(spec, n, seed=0, clamp=False):
    return sample_many(spec, RandomStream(seed), n, clamp=clamp)


# -- validation ------------------------------------------------------------


def test_unknown_family_rejected():
    with pytest.raises(ParameterError):
        DistributionSpec("cauchy", (0.0, 1.0))


@pytest.mark.parametrize("family, params", [
    ("normal", (0.0,)),
    ("normal", (0.0, 1.0, 2.0)),
    ("lognormal", (0.0, 1.0)),
    ("beta", (0.0, 1.0, 2.0)),
])
def test_wrong_arity_rejected(family, params):
    with pytest.raises(ParameterError):
        DistributionSpec(family, params)


@pytest.mark.parametrize("family, params", [
    ("normal", (0.0, 0.0)),
    ("normal", (0.0, -1.0)),
    ("lognormal", (0.0, 1.0, -0.5)),
    ("triangular", (1.0, 0.0, 0.5)),       # min > max
    ("triangular", (0.0, 1.0, 2.0)),       # mode outside
    ("weibull", (0.0, -1.0, 1.0)),
    ("weibull", (0.0, 1.0, 0.0)),
    ("gamma", (0.0, 0.0, 1.0)),
    ("loglogistic", (0.0, 0.0, 1.0)),
    ("beta", (1.0, 1.0, 2.0, 2.0)),        # min == max
    ("beta", (0.0, 1.0, -1.0, 2.0)),
    ("johnsonsb", (0.0, -1.0, 0.0, 1.0)),
    ("johnsonsb", (0.0, 1.0, 0.0, 0.0)),
    ("normal", (float("nan"), 1.0)),
])
def test_invalid_parameters_rejected(family, params):
    with pytest.raises(ParameterError):
        DistributionSpec(family, params)


def test_invalid_clamp_rejected():
    with pytest.raises(ParameterError):
        DistributionSpec("normal", (0.0, 1.0), clamp_lo=1.0, clamp_hi=0.0)


def test_family_name_case_insensitive():
    assert DistributionSpec("Normal", (0.0, 1.0)).family == "normal"


# -- formula oracles (exact replay of the stream's uniforms) ----------------


def test_normal_formula():
    spec = DistributionSpec("normal", (3.0, 2.0))
    u = RandomStream(1).uniforms(100)
    np.testing.assert_array_equal(draws(spec, 100, seed=1), 3.0 + 2.0 * ndtri(u))


def test_lognormal_formula():
    spec = DistributionSpec("lognormal", (17.0, 1.16, 0.559))
    u = RandomStream(2).uniforms(100)
    np.testing.assert_array_equal(
        draws(spec, 100, seed=2), 17.0 + np.exp(1.16 + 0.559 * ndtri(u)))


def test_triangular_formula():
    lo, hi, mode = 18.0, 31.6, 22.2
    spec = DistributionSpec("triangular", (lo, hi, mode))
    u = RandomStream(3).uniforms(200)
    c = (mode - lo) / (hi - lo)
    expect = np.where(u < c,
                      lo + np.sqrt(u * c) * (hi - lo),
                      hi - np.sqrt((1 - u) * (1 - c)) * (hi - lo))
    np.testing.assert_array_equal(draws(spec, 200, seed=3), expect)


def test_weibull_formula():
    spec = DistributionSpec("weibull", (1.93e3, 4.79, 2.7e3))
    u = RandomStream(4).uniforms(100)
    np.testing.assert_array_equal(
        draws(spec, 100, seed=4), 1.93e3 + 2.7e3 * (-np.log(u)) ** (1 / 4.79))


def test_johnsonsb_formula():
    spec = DistributionSpec("johnsonsb", (0.0, 89.0, -0.606, 1.89))
    z = RandomStream(5).standard_normals(100)
    np.testing.assert_array_equal(
        draws(spec, 100, seed=5), 89.0 / (1 + np.exp(-(z + 0.606) / 1.89)))


def test_loglogistic_formula():
    spec = DistributionSpec("loglogistic", (0.0, 12.0, 61.7))
    u = RandomStream(6).uniforms(100)
    np.testing.assert_array_equal(
        draws(spec, 100, seed=6), 61.7 * (u / (1 - u)) ** (1 / 12.0))


def test_triangular_hits_both_branches_and_stays_in_range():
    spec = DistributionSpec("triangular", (0.0, 10.0, 2.0))
    x = draws(spec, 5000, seed=7)
    assert np.all((x >= 0.0) & (x <= 10.0))
    assert np.any(x < 2.0) and np.any(x > 2.0)


# -- moment checks against closed forms ------------------------------------

_MOMENT_SPECS = [
    DistributionSpec("normal", (34.9, 1.64)),
    DistributionSpec("lognormal", (3.77, 1.82, 0.672)),
    DistributionSpec("triangular", (18.0, 31.6, 22.2)),
    DistributionSpec("weibull", (1.93e3, 4.79, 2.7e3)),
    DistributionSpec("gamma", (0.0, 59.1, 1.06)),
    DistributionSpec("beta", (1.61e3, 6.7e3, 4.96, 2.23)),
]


@pytest.mark.parametrize("spec", _MOMENT_SPECS, ids=lambda s: s.family)
def test_empirical_moments_match_closed_form(spec):
    n = 100_000
    x = draws(spec, n, seed=11)
    se_mean = x.std(ddof=1) / math.sqrt(n)
    assert abs(x.mean() - spec.mean()) < 4 * se_mean
    m = x.mean()
    se_var = np.sqrt((((x - m) ** 2).var(ddof=1)) / n)
    assert abs(x.var(ddof=1) - spec.variance()) < 4 * se_var


@pytest.mark.parametrize("spec", [
    DistributionSpec("johnsonsb", (0.0, 80.4, -1.19, 1.48)),
    DistributionSpec("loglogistic", (0.0, 10.3, 45.2)),
], ids=lambda s: s.family)
def test_ks_distance_against_cdf_oracle(spec):
    n = 100_000
    x = np.sort(draws(spec, n, seed=13))
    cdf = spec.cdf(x)
    empirical_hi = np.arange(1, n + 1) / n
    empirical_lo = np.arange(0, n) / n
    ks = max(np.abs(cdf - empirical_hi).max(), np.abs(cdf - empirical_lo).max())
    assert ks <= 0.01


def test_gamma_small_shape_boost_path():
    spec = DistributionSpec("gamma", (0.0, 1.0, 0.5))
    x = draws(spec, 50_000, seed=17)
    assert np.all(x >= 0.0)
    assert abs(x.mean() - 0.5) < 4 * x.std(ddof=1) / math.sqrt(len(x))


def test_beta_johnk_path_small_shapes():
    spec = DistributionSpec("beta", (0.0, 1.0, 0.6, 0.9))
    x = draws(spec, 50_000, seed=19)
    assert np.all((x >= 0.0) & (x <= 1.0))
    assert abs(x.mean() - 0.4) < 4 * x.std(ddof=1) / math.sqrt(len(x))


# -- clamping and reproducibility ------------------------------------------


def test_clamp_applied():
    spec = DistributionSpec("normal", (0.0, 1.0), clamp_lo=-0.5, clamp_hi=0.5)
    x = sample_many(spec, RandomStream(23), 1000)
    assert np.all((x >= -0.5) & (x <= 0.5))
    assert np.any(x == -0.5) and np.any(x == 0.5)


def test_unclamped_draws_exceed_clamp():
    spec = DistributionSpec("normal", (0.0, 1.0), clamp_lo=-0.5, clamp_hi=0.5)
    x = sample_many(spec, RandomStream(23), 1000, clamp=False)
    assert np.any(x < -0.5) and np.any(x > 0.5)


def test_sample_matches_sample_many():
    spec = DistributionSpec("gamma", (1.0, 2.0, 3.0))
    a = RandomStream(29)
    b = RandomStream(29)
    singles = np.array([sample(spec, a) for _ in range(32)])
    np.testing.assert_array_equal(singles, sample_many(spec, b, 32))


def test_rejection_samplers_are_reproducible():
    for spec in (DistributionSpec("gamma", (0.0, 59.1, 1.06)),
                 DistributionSpec("beta", (0.0, 73.0, 5.98, 1.74))):
        np.testing.assert_array_equal(draws(spec, 500, seed=31),
                                      draws(spec, 500, seed=31))
