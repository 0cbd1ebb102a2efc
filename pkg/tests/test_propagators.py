"""
Tests for the state and Hamiltonian types and the exact and Runge-Kutta propagators.
"""

import math

import numpy as np
import pytest

from core.errors import DomainError, NumericError, ResourceError
from core.kinematics import (
    SearchConfig,
    max_transition_probability,
    oscillation_period,
    peak_time_general,
    peak_time_special,
    transition_probability_general,
)
from propagators.exact import ExactPropagator, evolve_exact
from propagators.hamiltonians import (
    HamiltonianSpec,
    StateVector,
    basis_state,
    build_fullspace_hamiltonians,
    build_hamiltonian_2d,
    fidelity,
    hamiltonian_2d_matrix,
    source_state_2d,
    target_state_2d,
    uniform_state,
)
from propagators.rk4 import RK4Propagator, evolve_ode

HBAR = 1.0 / (2.0 * math.pi)


def test_state_vector_requires_unit_norm():
    with pytest.raises(NumericError):
        StateVector([1.0, 1.0])
    state = StateVector([0.6, 0.8j], basis_tag="wr-2d")
    assert state.dimension == 2
    assert state.norm == pytest.approx(1.0)


def test_state_vector_is_read_only():
    state = uniform_state(4)
    with pytest.raises(ValueError):
        state.amplitudes[0] = 1.0


def test_state_vector_rejects_unknown_basis():
    with pytest.raises(DomainError):
        StateVector([1.0, 0.0], basis_tag="momentum")


def test_hamiltonian_must_be_hermitian():
    with pytest.raises(NumericError):
        HamiltonianSpec(np.array([[1.0, 1.0j], [1.0j, 0.0]]))
    with pytest.raises(DomainError):
        HamiltonianSpec(np.ones((1, 1)))


def test_build_hamiltonian_2d_entries():
    x, gamma = 0.6, 1.5
    H = build_hamiltonian_2d(SearchConfig(x, gamma, energy=2.0)).matrix
    r = math.sqrt(1.0 - x * x)
    expected = 2.0 * np.array([[1.0 + gamma * x * x, gamma * x * r],
                               [gamma * x * r, gamma * r * r]])
    np.testing.assert_allclose(H.real, expected, atol=1e-15)


def test_zero_overlap_matrix_is_diagonal():
    np.testing.assert_allclose(hamiltonian_2d_matrix(0.0, 1.2, 1.0), np.diag([1.0, 1.2]), atol=1e-15)


def test_fidelity_checks_dimensions():
    assert fidelity(uniform_state(4), uniform_state(4)) == pytest.approx(1.0)
    assert fidelity(basis_state(4, 0), basis_state(4, 1)) == 0.0
    with pytest.raises(DomainError):
        fidelity(uniform_state(4), uniform_state(8))


def test_exact_propagator_matches_closed_form_on_grid():
    propagator = ExactPropagator(HBAR)
    target = target_state_2d()
    for x in np.linspace(0.05, 0.95, 10):
        for gamma in np.linspace(1.0, 5.0, 10):
            cfg = SearchConfig(float(x), float(gamma), hbar=HBAR)
            times = np.linspace(0.0, 2.0 * peak_time_special(cfg), 100)
            states = propagator.evolve_many(build_hamiltonian_2d(cfg), source_state_2d(cfg.x), times)
            numeric = np.array([fidelity(target, s) for s in states])
            np.testing.assert_allclose(numeric, transition_probability_general(cfg, times), atol=1e-10)


def test_exact_propagation_at_table_point():
    cfg = SearchConfig(0.65, 1.1, hbar=HBAR)
    state = evolve_exact(build_hamiltonian_2d(cfg), source_state_2d(0.65), 0.18, HBAR)
    assert fidelity(target_state_2d(), state) == pytest.approx(
        transition_probability_general(cfg, 0.18), abs=1e-10)


def test_exact_propagation_preserves_norm_in_full_space():
    family = build_fullspace_hamiltonians(16, 1.1, 1.0)
    psi0 = uniform_state(16)
    for t in (0.1, 1.0, 10.0):
        state = ExactPropagator(HBAR).evolve(family.target(3), psi0, t)
        assert state.norm == pytest.approx(1.0, abs=1e-12)


def test_zero_time_returns_initial_state():
    psi0 = source_state_2d(0.4)
    H = build_hamiltonian_2d(SearchConfig(0.4, 1.3, hbar=HBAR))
    assert evolve_exact(H, psi0, 0.0, HBAR) is psi0
    assert evolve_ode(H, psi0, 0.0, HBAR) is psi0


def test_dimension_mismatch_rejected():
    H = build_hamiltonian_2d(SearchConfig(0.4, hbar=HBAR))
    with pytest.raises(DomainError):
        evolve_exact(H, uniform_state(4), 1.0, HBAR)


def test_full_space_reduces_to_two_level_dynamics():
    N, gamma = 16, 1.1
    cfg = SearchConfig(1.0 / math.sqrt(N), gamma, hbar=HBAR)
    family = build_fullspace_hamiltonians(N, gamma, 1.0)
    t_peak = peak_time_general(cfg)
    state = evolve_exact(family.target(5), uniform_state(N), t_peak, HBAR)
    assert fidelity(basis_state(N, 5), state) == pytest.approx(
        max_transition_probability(cfg.x, gamma), abs=1e-10)


def test_full_space_family():
    family = build_fullspace_hamiltonians(8, 1.05, 2.0)
    assert len(family) == 8
    assert family.overlap == pytest.approx(1.0 / math.sqrt(8))
    difference = family.target(2).matrix - family.driver.matrix
    expected = np.zeros((8, 8))
    expected[2, 2] = 2.0
    np.testing.assert_allclose(difference.real, expected, atol=1e-14)
    assert [spec.label for spec in family] == [f"target-{w}" for w in range(8)]


def test_full_space_limits():
    with pytest.raises(DomainError):
        build_fullspace_hamiltonians(3, 1.0, 1.0)
    with pytest.raises(ResourceError):
        build_fullspace_hamiltonians(8192, 1.0, 1.0)


@pytest.mark.parametrize("x, gamma, fraction", [
    (0.8, 1.1, 1.0), (0.65, 1.1, 0.6), (0.3, 1.0, 1.0), (0.5, 2.0, 0.3), (0.9, 1.5, 0.8),
    (0.2, 3.0, 1.0), (0.7, 1.05, 0.45), (0.45, 1.2, 0.9), (0.95, 4.0, 0.5), (0.1, 1.01, 0.7),
])
def test_rk4_agrees_with_closed_form(x, gamma, fraction):
    cfg = SearchConfig(x, gamma, hbar=HBAR)
    t = fraction * peak_time_general(cfg)
    state = evolve_ode(build_hamiltonian_2d(cfg), source_state_2d(x), t, HBAR, dt=t / 1e5)
    assert fidelity(target_state_2d(), state) == pytest.approx(
        transition_probability_general(cfg, t), abs=1e-8)


def test_rk4_step_limits():
    H = build_hamiltonian_2d(SearchConfig(0.5, hbar=HBAR))
    with pytest.raises(DomainError):
        RK4Propagator(HBAR, dt=0.1).evolve(H, source_state_2d(0.5), 1.0)
    with pytest.raises(ResourceError):
        RK4Propagator(HBAR, dt=1e-9).evolve(H, source_state_2d(0.5), 1.0)
    with pytest.raises(DomainError):
        RK4Propagator(HBAR, dt=0.0)


def test_rk4_agrees_with_exact_in_full_space():
    N, gamma = 16, 1.1
    family = build_fullspace_hamiltonians(N, gamma, 1.0)
    t = peak_time_general(SearchConfig(1.0 / math.sqrt(N), gamma, hbar=HBAR))
    H, psi0 = family.target(7), uniform_state(N)
    ode = evolve_ode(H, psi0, t, HBAR)
    exact = evolve_exact(H, psi0, t, HBAR)
    assert np.max(np.abs(ode.amplitudes - exact.amplitudes)) <= 1e-8


def test_rk4_norm_drift_over_one_period():
    cfg = SearchConfig(0.8, 1.1, hbar=HBAR)
    state = evolve_ode(build_hamiltonian_2d(cfg), source_state_2d(cfg.x),
                       oscillation_period(cfg), HBAR)
    assert abs(float(np.linalg.norm(state.amplitudes)) - 1.0) <= 1e-8


def test_full_space_evolution_stays_in_target_source_plane():
    N, w = 16, 5
    family = build_fullspace_hamiltonians(N, 1.1, 1.0)
    s = uniform_state(N).amplitudes
    target = basis_state(N, w).amplitudes
    remainder = s - np.vdot(target, s) * target
    remainder = remainder / np.linalg.norm(remainder)
    for t in (0.05, 0.4, 0.9, 2.5, 10.0):
        psi = evolve_exact(family.target(w), uniform_state(N), t, HBAR).amplitudes
        in_plane = abs(np.vdot(target, psi)) ** 2 + abs(np.vdot(remainder, psi)) ** 2
        assert 1.0 - in_plane <= 1e-10
