"""
State vectors and search Hamiltonians in the reduced {|w>, |r>} basis and
in the full N-dimensional computational basis.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from core.errors import DomainError, NumericError, ResourceError
from core.kinematics import SearchConfig
from core.utils import clamp_probability

BASIS_TAGS = ("wr-2d", "computational-Nd")

NORM_TOLERANCE = 1e-10
HERMITICITY_TOLERANCE = 1e-12

# Dense eigendecompositions beyond this dimension are not desk-scale.
MAX_DIMENSION = 4096

logger = logging.getLogger(__name__)


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class StateVector:
    """Unit-norm vector of complex amplitudes tagged with its basis."""

    amplitudes: np.ndarray
    basis_tag: str = "computational-Nd"

    def __post_init__(self):
        amplitudes = _frozen_array(self.amplitudes, complex)
        if amplitudes.ndim != 1 or amplitudes.size < 2:
            raise DomainError("amplitudes", "expected a 1-d sequence of at least 2 values")
        if self.basis_tag not in BASIS_TAGS:
            raise DomainError("basis_tag", f"must be one of {BASIS_TAGS}, got {self.basis_tag!r}")
        norm_sq = float(np.vdot(amplitudes, amplitudes).real)
        if abs(norm_sq - 1.0) > NORM_TOLERANCE:
            raise NumericError(f"state norm^2 {norm_sq!r} deviates from 1 by more than {NORM_TOLERANCE}")
        object.__setattr__(self, "amplitudes", amplitudes)

    @property
    def dimension(self) -> int:
        return int(self.amplitudes.size)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True, eq=False)
class HamiltonianSpec:
    """Hermitian matrix in energy units."""

    matrix: np.ndarray
    label: str = ""
    dimension: int = field(init=False)

    def __post_init__(self):
        matrix = _frozen_array(self.matrix, complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DomainError("matrix", f"expected a square matrix, got shape {matrix.shape}")
        if matrix.shape[0] < 2:
            raise DomainError("dimension", "must be at least 2")
        deviation = float(np.max(np.abs(matrix - matrix.conj().T)))
        if deviation > HERMITICITY_TOLERANCE:
            raise NumericError(f"{self.label or 'matrix'} is not Hermitian (max deviation {deviation:.3e})")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "dimension", int(matrix.shape[0]))


def hamiltonian_2d_matrix(x: float, gamma: float, energy: float) -> np.ndarray:
    """E|w><w| + gamma*E|s><s| in the {|w>, |r>} basis, any overlap x in [0, 1]."""
    if not 0.0 <= x <= 1.0:
        raise DomainError("x", f"overlap must lie in [0, 1], got {x}")
    s = np.array([x, math.sqrt(1.0 - x * x)])
    return energy * np.outer([1.0, 0.0], [1.0, 0.0]) + gamma * energy * np.outer(s, s)


def build_hamiltonian_2d(cfg: SearchConfig) -> HamiltonianSpec:
    matrix = hamiltonian_2d_matrix(cfg.x, cfg.gamma, cfg.energy)
    return HamiltonianSpec(matrix, label=f"2d(x={cfg.x}, gamma={cfg.gamma})")


def source_state_2d(x: float) -> StateVector:
    """|s> = x|w> + sqrt(1-x^2)|r>."""
    return StateVector([x, math.sqrt(1.0 - x * x)], basis_tag="wr-2d")


def target_state_2d() -> StateVector:
    return StateVector([1.0, 0.0], basis_tag="wr-2d")


def uniform_state(dimension: int) -> StateVector:
    """Uniform superposition over the computational basis."""
    return StateVector(np.full(dimension, 1.0 / math.sqrt(dimension)))


def basis_state(dimension: int, index: int) -> StateVector:
    if not 0 <= index < dimension:
        raise DomainError("index", f"must lie in [0, {dimension}), got {index}")
    amplitudes = np.zeros(dimension)
    amplitudes[index] = 1.0
    return StateVector(amplitudes)


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|^2."""
    if a.dimension != b.dimension:
        raise DomainError("dimension", f"state dimensions differ ({a.dimension} vs {b.dimension})")
    return clamp_probability(abs(complex(np.vdot(a.amplitudes, b.amplitudes))) ** 2, "fidelity")


@dataclass(frozen=True)
class FullspaceHamiltonians:
    """The N target Hamiltonians E|w><w| + gamma*E|s><s| plus the driver alone.

    Target matrices are built on demand; holding all N of them at once is
    quadratic in memory per target.
    """

    dimension: int
    gamma: float
    energy: float
    driver: HamiltonianSpec

    @property
    def overlap(self) -> float:
        return 1.0 / math.sqrt(self.dimension)

    def target(self, index: int) -> HamiltonianSpec:
        """Hamiltonian whose marked state is the computational basis state `index`."""
        if not 0 <= index < self.dimension:
            raise DomainError("index", f"must lie in [0, {self.dimension}), got {index}")
        matrix = np.array(self.driver.matrix)
        matrix[index, index] += self.energy
        return HamiltonianSpec(matrix, label=f"target-{index}")

    def __iter__(self) -> Iterator[HamiltonianSpec]:
        for index in range(self.dimension):
            yield self.target(index)

    def __len__(self) -> int:
        return self.dimension


def build_fullspace_hamiltonians(dimension: int, gamma: float,
                                 energy: float) -> FullspaceHamiltonians:
    """Search Hamiltonians over the computational basis with uniform |s>."""
    if dimension < 4:
        raise DomainError("N", f"the optimality argument needs N >= 4, got {dimension}")
    if dimension > MAX_DIMENSION:
        raise ResourceError(f"N={dimension} exceeds the desk-scale cap {MAX_DIMENSION}")
    if not gamma >= 1.0:
        raise DomainError("gamma", f"energy ratio must be >= 1, got {gamma}")
    if not energy > 0.0:
        raise DomainError("energy", f"must be positive, got {energy}")
    if dimension & (dimension - 1):
        logger.debug(f"N={dimension} is not a power of two")

    s = uniform_state(dimension).amplitudes
    driver = HamiltonianSpec(gamma * energy * np.outer(s, s.conj()), label="driver")
    return FullspaceHamiltonians(dimension, gamma, energy, driver)
