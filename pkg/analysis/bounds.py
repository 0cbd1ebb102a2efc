"""
Desk-scale verification of the sqrt(N) lower bound on nearly optimal search time.

For every marked state w the register evolves from the uniform state under
E|w><w| + gamma*E|s><s|, and a reference copy evolves under the driver
alone. The summed squared distances between the two must stay below
2E sqrt(N) t / hbar at all times and must exceed N(1 - delta) once the
nearly optimal fidelity cos^2(delta) is reached.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from core.errors import DomainError
from core.kinematics import SearchConfig, imperfection_angle, peak_time_general
from propagators.exact import ExactPropagator
from propagators.hamiltonians import (
    FullspaceHamiltonians,
    StateVector,
    build_fullspace_hamiltonians,
    uniform_state,
)

# Small-angle regime of the approximate bound.
DELTA_WARN = 0.1
DELTA_LIMIT = 0.2

L1_TOLERANCE = 1e-10

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundReport:
    """Both sides of the distance inequalities at one instant."""

    N: int
    gamma: float
    delta: float
    t_check: float
    lhs: float
    rhs_growth: float
    rhs_terminal: float
    growth_ok: bool
    terminal_ok: Optional[bool] = None
    time_bound: Optional[float] = None
    time_bound_ok: Optional[bool] = None
    spread: float = 0.0

    @property
    def satisfied(self) -> bool:
        checks = [self.growth_ok, self.terminal_ok, self.time_bound_ok]
        return all(check for check in checks if check is not None)


def _check_dimension(N: int) -> None:
    if N < 4:
        raise DomainError("N", f"the optimality argument needs N >= 4, got {N}")


def min_time_lower_bound(N: int, delta: float, energy: float, hbar: float,
                         enforce_small_delta: bool = True) -> float:
    """(hbar / 2E)(1 - delta) sqrt(N).

    The bound is derived for delta << 1; above DELTA_LIMIT it is rejected
    unless enforce_small_delta is False.
    """
    _check_dimension(N)
    if not delta >= 0.0:
        raise DomainError("delta", f"must be non-negative, got {delta}")
    if enforce_small_delta and delta > DELTA_LIMIT:
        raise DomainError("delta", f"approximate bound needs delta <= {DELTA_LIMIT}, got {delta}")
    if delta > DELTA_WARN:
        logger.warning(f"delta={delta:.4g} is outside the small-angle regime of the time bound")
    return hbar / (2.0 * energy) * (1.0 - delta) * math.sqrt(N)


def exact_min_time(N: int, energy: float, hbar: float) -> float:
    """(hbar / 2E) sqrt(N), the bound for unit fidelity."""
    _check_dimension(N)
    return hbar / (2.0 * energy) * math.sqrt(N)


def amplitude_l1_check(state: StateVector) -> bool:
    """Cauchy-Schwarz: sum |c_j| <= sqrt(N) for a unit vector."""
    return float(np.sum(np.abs(state.amplitudes))) <= math.sqrt(state.dimension) + L1_TOLERANCE


def _distance_table(family: FullspaceHamiltonians, hbar: float, times: Sequence[float],
                    workers: int = 1) -> np.ndarray:
    """Squared distances, shape (len(times), N), column w for target w."""
    propagator = ExactPropagator(hbar)
    psi0 = uniform_state(family.dimension)
    reference = [s.amplitudes for s in propagator.evolve_many(family.driver, psi0, times)]

    def column(index: int) -> np.ndarray:
        states = propagator.evolve_many(family.target(index), psi0, times)
        return np.array([np.linalg.norm(s.amplitudes - ref) ** 2
                         for s, ref in zip(states, reference)])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            columns = list(executor.map(column, range(family.dimension)))
    else:
        columns = [column(index) for index in range(family.dimension)]
    return np.column_stack(columns)


def _sum_in_target_order(row: np.ndarray) -> float:
    return math.fsum(float(value) for value in row)


def verify_distance_growth(N: int, gamma: float, energy: float, hbar: float,
                           t_grid: Sequence[float], workers: int = 1) -> List[BoundReport]:
    """Check sum_w ||psi_w(t) - psi(t)||^2 <= 2E sqrt(N) t / hbar on a time grid."""
    _check_dimension(N)
    times = [float(t) for t in t_grid]
    if not times or times[0] != 0.0:
        raise DomainError("t_grid", "time grid must start at 0")
    if any(b < a for a, b in zip(times, times[1:])):
        raise DomainError("t_grid", "time grid must be sorted ascending")

    family = build_fullspace_hamiltonians(N, gamma, energy)
    delta = float(imperfection_angle(1.0 / math.sqrt(N), gamma))
    table = _distance_table(family, hbar, times, workers)

    reports = []
    for t, row in zip(times, table):
        lhs = _sum_in_target_order(row)
        rhs = 2.0 * energy * math.sqrt(N) * t / hbar
        reports.append(BoundReport(
            N=N, gamma=gamma, delta=delta, t_check=t, lhs=lhs,
            rhs_growth=rhs, rhs_terminal=N * (1.0 - delta),
            growth_ok=lhs <= rhs, spread=float(np.ptp(row)),
        ))
    failures = sum(not r.growth_ok for r in reports)
    logger.info(f"Distance growth N={N} gamma={gamma}: {len(reports) - failures}/{len(reports)} points hold")
    return reports


def verify_terminal_distance(N: int, gamma: float, energy: float, hbar: float,
                             workers: int = 1) -> BoundReport:
    """Check N(1 - delta) <= sum <= 2E sqrt(N) t~ / hbar at the peak time t~.

    Together the two sides give t~ >= (hbar / 2E)(1 - delta) sqrt(N), which
    is reported as time_bound_ok.
    """
    _check_dimension(N)
    x = 1.0 / math.sqrt(N)
    cfg = SearchConfig(x=x, gamma=gamma, energy=energy, hbar=hbar)
    t_peak = peak_time_general(cfg)
    delta = float(imperfection_angle(x, gamma))

    family = build_fullspace_hamiltonians(N, gamma, energy)
    row = _distance_table(family, hbar, [t_peak], workers)[0]
    lhs = _sum_in_target_order(row)
    rhs_growth = 2.0 * energy * math.sqrt(N) * t_peak / hbar
    rhs_terminal = N * (1.0 - delta)
    time_bound = min_time_lower_bound(N, delta, energy, hbar, enforce_small_delta=False)

    report = BoundReport(
        N=N, gamma=gamma, delta=delta, t_check=t_peak, lhs=lhs,
        rhs_growth=rhs_growth, rhs_terminal=rhs_terminal,
        growth_ok=lhs <= rhs_growth, terminal_ok=lhs >= rhs_terminal,
        time_bound=time_bound, time_bound_ok=t_peak >= time_bound,
        spread=float(np.ptp(row)),
    )
    logger.info(f"Terminal distance N={N} gamma={gamma}: satisfied={report.satisfied}")
    return report
