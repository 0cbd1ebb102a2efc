"""
Tests for overlap probabilities under uniform and damped-gaussian target priors.
"""

import math

import pytest
from scipy.special import betainc

from analysis.overlap_prior import (
    PriorSpec,
    density,
    log_density,
    normalization_constant,
    prior_sweep,
    prob_overlap_at_least,
    uniform_prob_closed_check,
)
from analysis.quadrature import adaptive_simpson
from core.errors import DomainError


def test_density_values():
    damped = PriorSpec(16, 1.0)
    assert density(damped, 0.0) == 1.0
    assert density(PriorSpec(16, kind="uniform"), 0.7) == 1.0
    expected = math.exp(-math.pi ** 2 / 32.0) / (1.0 + (10.0 * math.sqrt(0.5)) ** 30)
    assert density(damped, math.pi / 4) == pytest.approx(expected, rel=1e-12)
    assert log_density(damped, math.pi / 4) == pytest.approx(math.log(expected), rel=1e-12)


def test_density_rejects_angles_outside_quadrant():
    with pytest.raises(DomainError):
        density(PriorSpec(4), -0.1)
    with pytest.raises(DomainError):
        density(PriorSpec(4), 2.0)


@pytest.mark.parametrize("kwargs", [
    {"hilbert_dim": 1},
    {"hilbert_dim": 4, "sigma_sq": 0.0},
    {"hilbert_dim": 4, "kind": "cauchy"},
])
def test_prior_spec_validation(kwargs):
    with pytest.raises(DomainError):
        PriorSpec(**kwargs)


def test_uniform_prior_tail():
    result = prob_overlap_at_least(PriorSpec(16, kind="uniform"), 0.95)
    assert 3.1e-17 <= result.value <= 3.3e-17
    oracle = uniform_prob_closed_check(16, 0.95)
    assert result.value == pytest.approx(oracle, rel=0.05)
    assert result.value == pytest.approx(betainc(15.5, 0.5, 1.0 - 0.95 ** 2), rel=1e-6)


@pytest.mark.parametrize("sigma_sq, low, high", [
    (1.0, 0.195, 0.225),
    (0.1, 0.57, 0.59),
    (0.01, 0.98, 1.00),
])
def test_damped_gaussian_probabilities(sigma_sq, low, high):
    result = prob_overlap_at_least(PriorSpec(16, sigma_sq), 0.95)
    assert low <= result.value <= high
    assert result.abs_error_estimate <= 1e-6 * result.value


def test_smaller_variance_concentrates_on_target():
    values = [prob_overlap_at_least(PriorSpec(16, s), 0.95).value for s in (10.0, 1.0, 0.1, 0.01)]
    assert values == sorted(values)


def test_probability_decreases_with_threshold():
    spec = PriorSpec(16, 1.0)
    values = [prob_overlap_at_least(spec, x).value for x in (0.1, 0.5, 0.8, 0.95, 0.99)]
    assert all(a >= b for a, b in zip(values, values[1:]))


def test_probability_limits():
    spec = PriorSpec(8, kind="uniform")
    assert prob_overlap_at_least(spec, 1e-9).value == pytest.approx(1.0, abs=1e-8)
    assert prob_overlap_at_least(spec, 1.0 - 1e-9).value == pytest.approx(0.0, abs=1e-10)
    with pytest.raises(DomainError):
        prob_overlap_at_least(spec, 1.0)


def test_closed_check_elementary_case():
    expected = (math.pi / 6.0 - math.sqrt(3.0) / 8.0) / (math.pi / 4.0)
    assert uniform_prob_closed_check(2, 0.5) == pytest.approx(expected, rel=1e-12)
    assert uniform_prob_closed_check(2, 1e-12) == pytest.approx(1.0, abs=1e-11)
    assert uniform_prob_closed_check(2, 0.0) == 1.0


@pytest.mark.parametrize("N", [2, 3, 16, 64, 500])
@pytest.mark.parametrize("x_bar", [0.05, 0.5, 0.7, 0.95])
def test_closed_check_matches_incomplete_beta(N, x_bar):
    assert uniform_prob_closed_check(N, x_bar) == pytest.approx(
        betainc(N - 0.5, 0.5, 1.0 - x_bar * x_bar), rel=1e-9, abs=1e-300)


@pytest.mark.parametrize("N", [4, 16, 100, 2000])
@pytest.mark.parametrize("x_bar", [1e-6, 0.01, 0.1])
def test_closed_check_wide_caps(N, x_bar):
    assert uniform_prob_closed_check(N, x_bar) == pytest.approx(
        betainc(N - 0.5, 0.5, 1.0 - x_bar * x_bar), rel=1e-9)


def test_polar_cap_of_three_sphere():
    # sin^2 marginal: fraction of the cap within angle pi/3 of the pole.
    spec = PriorSpec(2, kind="uniform")
    expected = (math.pi / 6.0 - math.sqrt(3.0) / 8.0) / (math.pi / 4.0)
    assert prob_overlap_at_least(spec, 0.5).value == pytest.approx(expected, rel=1e-9)


def test_normalization_constant():
    assert normalization_constant(PriorSpec(16, kind="uniform")) == pytest.approx(2.0 / math.pi)
    spec = PriorSpec(16, 1.0)
    constant = normalization_constant(spec)
    total = adaptive_simpson(lambda t: constant * density(spec, t), 0.0, math.pi / 2)
    assert total.value == pytest.approx(1.0, rel=1e-9)


def test_normalization_constant_wide_prior_limit():
    limit = adaptive_simpson(lambda t: 1.0 / (1.0 + 100.0 * math.sin(t) ** 2), 0.0, math.pi / 2).value
    assert normalization_constant(PriorSpec(2, 1e8)) == pytest.approx(1.0 / limit, rel=1e-6)


def test_large_dimension_switches_to_log_domain():
    result = prob_overlap_at_least(PriorSpec(400, kind="uniform"), 0.3)
    assert result.log_space_used
    assert result.value == pytest.approx(betainc(399.5, 0.5, 1.0 - 0.09), rel=1e-6)


def test_prior_sweep_order_and_workers():
    serial = prior_sweep(16, [1.0, 0.1], [0.5, 0.95])
    parallel = prior_sweep(16, [1.0, 0.1], [0.5, 0.95], workers=3)
    assert [(r["sigma_sq"], r["x_bar"]) for r in serial] == [(1.0, 0.5), (1.0, 0.95), (0.1, 0.5), (0.1, 0.95)]
    assert serial == parallel
