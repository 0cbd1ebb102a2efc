"""
Fixed-step classical Runge-Kutta integration of i*hbar dpsi/dt = H psi.

Used as an independent cross-check of the exact propagator. The state is
never renormalized, so norm drift stays visible.
"""

import math
from typing import Callable, Optional

import numpy as np

from core.errors import DomainError, ResourceError

from .base_propagator import BasePropagator
from .hamiltonians import HamiltonianSpec, StateVector

MAX_STEPS = 100_000_000

# Largest ||H|| dt / hbar accepted for a fourth-order step.
MAX_STEP_PHASE = 0.01


def rk4_step(psi: np.ndarray, rhs: Callable[[np.ndarray], np.ndarray], dt: float) -> np.ndarray:
    k1 = rhs(psi)
    k2 = rhs(psi + 0.5 * dt * k1)
    k3 = rhs(psi + 0.5 * dt * k2)
    k4 = rhs(psi + dt * k3)
    return psi + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


class RK4Propagator(BasePropagator):
    """RK4 propagator with step count ceil(t/dt) and uniform effective step."""

    def __init__(self, hbar: float, dt: float):
        super().__init__(hbar)
        if not dt > 0.0:
            raise DomainError("dt", f"must be positive, got {dt}")
        self.dt = dt

    def evolve(self, hamiltonian: HamiltonianSpec, psi0: StateVector, t: float) -> StateVector:
        self._check_inputs(hamiltonian, psi0, t)
        if t == 0.0:
            return psi0
        norm = float(np.linalg.norm(hamiltonian.matrix, 2))
        if norm * self.dt / self.hbar > MAX_STEP_PHASE:
            raise DomainError(
                "dt", f"||H|| dt / hbar = {norm * self.dt / self.hbar:.3g} exceeds {MAX_STEP_PHASE}")

        steps = math.ceil(t / self.dt)
        if steps > MAX_STEPS:
            raise ResourceError(f"{steps} RK4 steps requested, cap is {MAX_STEPS}")
        step = t / steps
        generator = -1j * np.asarray(hamiltonian.matrix) / self.hbar
        rhs = lambda psi: generator @ psi

        psi = np.array(psi0.amplitudes)
        for _ in range(steps):
            psi = rk4_step(psi, rhs, step)
        self.logger.debug(f"RK4 {steps} steps, norm drift {abs(np.linalg.norm(psi) - 1.0):.3e}")
        return StateVector(psi, psi0.basis_tag)


def evolve_ode(hamiltonian: HamiltonianSpec, psi0: StateVector, t: float, hbar: float,
               dt: Optional[float] = None) -> StateVector:
    """RK4 evolution; dt defaults to t / 100000."""
    if dt is None:
        dt = t / 100_000 if t > 0 else 1.0
    return RK4Propagator(hbar, dt).evolve(hamiltonian, psi0, t)
