"""
Tests for the search-time lower bounds and the full-space distance inequalities.
"""

import logging
import math

import numpy as np
import pytest

from analysis.bounds import (
    amplitude_l1_check,
    exact_min_time,
    min_time_lower_bound,
    verify_distance_growth,
    verify_terminal_distance,
)
from core.errors import DomainError
from core.kinematics import SearchConfig, imperfection_angle, peak_time_general, peak_time_special
from propagators.hamiltonians import StateVector, basis_state, uniform_state

HBAR = 1.0 / (2.0 * math.pi)


def test_min_time_lower_bound_examples():
    assert min_time_lower_bound(4, 0.0, 1.0, 1.0) == pytest.approx(1.0)
    assert min_time_lower_bound(16, 0.1, 1.0, 1.0) == pytest.approx(1.8)
    bound = min_time_lower_bound(16, 0.0, 1.0, 1.0)
    assert bound == pytest.approx(2.0)
    actual = peak_time_special(SearchConfig(0.25, energy=1.0, hbar=1.0))
    assert actual == pytest.approx(2.0 * math.pi)
    assert actual >= bound


def test_min_time_lower_bound_guards():
    with pytest.raises(DomainError):
        min_time_lower_bound(3, 0.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        min_time_lower_bound(16, 0.3, 1.0, 1.0)
    assert min_time_lower_bound(16, 0.3, 1.0, 1.0, enforce_small_delta=False) == pytest.approx(1.4)


def test_min_time_lower_bound_warns_outside_small_angles(caplog):
    with caplog.at_level(logging.WARNING, logger="analysis.bounds"):
        min_time_lower_bound(16, 0.15, 1.0, 1.0)
    assert "small-angle" in caplog.text


def test_exact_min_time():
    assert exact_min_time(64, 2.0, 1.0) == pytest.approx(2.0)
    assert exact_min_time(16, 1.0, 1.0) == pytest.approx(min_time_lower_bound(16, 0.0, 1.0, 1.0))


def test_amplitude_l1_check():
    assert amplitude_l1_check(uniform_state(16))
    assert amplitude_l1_check(basis_state(16, 3))
    rng = np.random.default_rng(7)
    for _ in range(1000):
        raw = rng.normal(size=16) + 1j * rng.normal(size=16)
        assert amplitude_l1_check(StateVector(raw / np.linalg.norm(raw)))


def test_distance_growth_starts_at_zero():
    reports = verify_distance_growth(4, 1.0, 1.0, 1.0, [0.0, 0.5])
    assert reports[0].lhs == 0.0
    assert reports[0].rhs_growth == 0.0
    assert all(r.growth_ok for r in reports)


def test_distance_growth_rejects_bad_grids():
    with pytest.raises(DomainError):
        verify_distance_growth(4, 1.0, 1.0, 1.0, [0.1, 0.5])
    with pytest.raises(DomainError):
        verify_distance_growth(4, 1.0, 1.0, 1.0, [0.0, 0.5, 0.2])
    with pytest.raises(DomainError):
        verify_distance_growth(2, 1.0, 1.0, 1.0, [0.0])


def test_distance_growth_over_long_sweep():
    reports = verify_distance_growth(16, 1.1, 1.0, HBAR, np.linspace(0.0, 3.0, 61))
    assert all(r.growth_ok for r in reports)


@pytest.mark.parametrize("N", [4, 8, 16, 64])
@pytest.mark.parametrize("gamma", [1.0, 1.05, 1.1])
def test_proof_inequality_chain(N, gamma):
    terminal = verify_terminal_distance(N, gamma, 1.0, HBAR)
    cfg = SearchConfig(1.0 / math.sqrt(N), gamma, hbar=HBAR)
    assert terminal.t_check == pytest.approx(peak_time_general(cfg))
    assert terminal.delta == pytest.approx(imperfection_angle(cfg.x, gamma))
    assert terminal.rhs_terminal <= terminal.lhs <= terminal.rhs_growth
    assert terminal.terminal_ok and terminal.growth_ok and terminal.time_bound_ok
    assert terminal.t_check >= terminal.time_bound
    assert terminal.spread <= 1e-10

    growth = verify_distance_growth(N, gamma, 1.0, HBAR, np.linspace(0.0, terminal.t_check, 50))
    assert all(r.growth_ok for r in growth)
    assert max(r.spread for r in growth) <= 1e-10


def test_exact_search_point():
    report = verify_terminal_distance(4, 1.0, 1.0, HBAR)
    assert report.delta == pytest.approx(0.0, abs=1e-7)
    assert report.satisfied


def test_parallel_harness_matches_serial():
    times = np.linspace(0.0, 0.5, 11)
    serial = verify_distance_growth(8, 1.05, 1.0, HBAR, times)
    parallel = verify_distance_growth(8, 1.05, 1.0, HBAR, times, workers=4)
    assert [r.lhs for r in serial] == [r.lhs for r in parallel]
