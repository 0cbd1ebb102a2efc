"""
Base propagator class for consistent interface across time-evolution backends.
"""

import logging
from abc import ABC, abstractmethod
from typing import List, Sequence

from core.errors import DomainError

from .hamiltonians import HamiltonianSpec, StateVector


class BasePropagator(ABC):
    """Abstract base class for Schrodinger-equation propagators."""

    def __init__(self, hbar: float):
        if not hbar > 0.0:
            raise DomainError("hbar", f"must be positive, got {hbar}")
        self.hbar = hbar
        self.name = self.__class__.__name__.lower().replace('propagator', '')
        self.logger = logging.getLogger(__name__)

    @abstractmethod
    def evolve(self, hamiltonian: HamiltonianSpec, psi0: StateVector, t: float) -> StateVector:
        """
        Evolve psi0 under a time-independent Hamiltonian for time t.

        Returns:
            Unit-norm state in the same basis as psi0.
        """
        pass

    def evolve_many(self, hamiltonian: HamiltonianSpec, psi0: StateVector,
                    times: Sequence[float]) -> List[StateVector]:
        return [self.evolve(hamiltonian, psi0, t) for t in times]

    def _check_inputs(self, hamiltonian: HamiltonianSpec, psi0: StateVector, t: float) -> None:
        if hamiltonian.dimension != psi0.dimension:
            raise DomainError(
                "dimension",
                f"Hamiltonian is {hamiltonian.dimension}-dimensional, state is {psi0.dimension}")
        if not t >= 0.0:
            raise DomainError("t", f"must be non-negative, got {t}")
