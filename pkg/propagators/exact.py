"""
Exact propagation by eigendecomposition: U(t) = V exp(-i Lambda t / hbar) V^dagger.
"""

import math
from typing import List, Sequence, Tuple

import numpy as np

from core.errors import NumericError

from .base_propagator import BasePropagator
from .hamiltonians import HamiltonianSpec, StateVector


def _eigh_2x2(matrix: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Closed-form eigenpairs of a 2x2 Hermitian matrix, ascending eigenvalues."""
    a = matrix[0, 0].real
    d = matrix[1, 1].real
    b = complex(matrix[0, 1])
    mean = 0.5 * (a + d)
    radius = math.hypot(0.5 * (a - d), abs(b))
    theta = 0.5 * math.atan2(2.0 * abs(b), a - d)
    phase = np.exp(-1j * math.atan2(b.imag, b.real))
    upper = np.array([math.cos(theta), math.sin(theta) * phase])
    lower = np.array([-math.sin(theta), math.cos(theta) * phase])
    return np.array([mean - radius, mean + radius]), np.column_stack([lower, upper])


def eigendecompose(hamiltonian: HamiltonianSpec) -> Tuple[np.ndarray, np.ndarray]:
    if hamiltonian.dimension == 2:
        return _eigh_2x2(hamiltonian.matrix)
    try:
        return np.linalg.eigh(hamiltonian.matrix)
    except np.linalg.LinAlgError as e:
        raise NumericError(f"eigendecomposition of {hamiltonian.label or 'matrix'} failed: {e}") from e


class ExactPropagator(BasePropagator):
    """Spectral propagator; exact up to rounding for any t."""

    def evolve(self, hamiltonian: HamiltonianSpec, psi0: StateVector, t: float) -> StateVector:
        return self.evolve_many(hamiltonian, psi0, [t])[0]

    def evolve_many(self, hamiltonian: HamiltonianSpec, psi0: StateVector,
                    times: Sequence[float]) -> List[StateVector]:
        """Decompose once, then evolve to every requested time."""
        for t in times:
            self._check_inputs(hamiltonian, psi0, t)
        eigenvalues, eigenvectors = eigendecompose(hamiltonian)
        coefficients = eigenvectors.conj().T @ psi0.amplitudes

        states = []
        for t in times:
            if t == 0.0:
                states.append(psi0)
                continue
            phases = np.exp(-1j * eigenvalues * t / self.hbar)
            states.append(StateVector(eigenvectors @ (phases * coefficients), psi0.basis_tag))
        return states


def evolve_exact(hamiltonian: HamiltonianSpec, psi0: StateVector, t: float,
                 hbar: float) -> StateVector:
    return ExactPropagator(hbar).evolve(hamiltonian, psi0, t)
