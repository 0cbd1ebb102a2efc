"""
Adaptive Simpson quadrature in linear and log domain.

Panels are refined from an explicit stack against one global tolerance,
rel_tol * |coarse estimate|, shared out in proportion to panel width. The
log-domain variant combines panels with log-sum-exp so integrands spanning
hundreds of orders of magnitude neither underflow nor overflow.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np
from scipy.special import logsumexp

from core.errors import DomainError, QuadratureError, ResourceError

SEED_PANELS = 64
MAX_DEPTH = 50
MAX_EVALUATIONS = 2_000_000

# Relative error above which a result is rejected.
FAILURE_RELATIVE_ERROR = 1e-6

# Integrands leaving [LOG_TINY, LOG_HUGE] are integrated in log domain.
LOG_TINY = math.log(1e-280)
LOG_HUGE = math.log(1e280)

LOG_FOUR = math.log(4.0)
LOG_FIFTEEN = math.log(15.0)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    evaluations: int
    log_space_used: bool = False
    log_value: float = -math.inf

    @property
    def relative_error(self) -> float:
        if self.log_space_used:
            if self.log_value == -math.inf:
                return 0.0
            return math.exp(math.log(self.abs_error_estimate) - self.log_value) \
                if self.abs_error_estimate > 0.0 else 0.0
        return self.abs_error_estimate / abs(self.value) if self.value else 0.0


def _check_interval(a: float, b: float) -> None:
    if not (math.isfinite(a) and math.isfinite(b)) or b < a:
        raise DomainError("interval", f"need finite a <= b, got [{a}, {b}]")


def _log_abs_diff(lx: float, ly: float) -> float:
    """log|e^lx - e^ly|."""
    hi, lo = max(lx, ly), min(lx, ly)
    if hi == lo:
        return -math.inf
    if lo == -math.inf:
        return hi
    return hi + math.log(-math.expm1(lo - hi))


def _log_add(lx: float, ly: float) -> float:
    return float(np.logaddexp(lx, ly))


def _simpson(fa: float, fm: float, fb: float, width: float) -> float:
    return width / 6.0 * (fa + 4.0 * fm + fb)


def _log_simpson(la: float, lm: float, lb: float, width: float) -> float:
    return math.log(width / 6.0) + float(logsumexp([la, lm + LOG_FOUR, lb]))


def _seed(g: Callable[[float], float], a: float, b: float, panels: int):
    edges = np.linspace(a, b, 2 * panels + 1)
    values = [float(g(float(t))) for t in edges]
    return edges, values


def adaptive_simpson(f: Callable[[float], float], a: float, b: float,
                     rel_tol: float = 1e-10, seed_panels: int = SEED_PANELS,
                     max_depth: int = MAX_DEPTH,
                     max_evaluations: int = MAX_EVALUATIONS) -> QuadratureResult:
    """Integrate f over [a, b] to relative tolerance rel_tol."""
    _check_interval(a, b)
    if a == b:
        return QuadratureResult(0.0, 0.0, 0)

    edges, values = _seed(f, a, b, seed_panels)
    evaluations = len(values)
    stack: List[Tuple] = []
    coarse = 0.0
    for i in range(seed_panels):
        lo, mid, hi = edges[2 * i], edges[2 * i + 1], edges[2 * i + 2]
        fa, fm, fb = values[2 * i], values[2 * i + 1], values[2 * i + 2]
        whole = _simpson(fa, fm, fb, hi - lo)
        coarse += whole
        stack.append((lo, mid, hi, fa, fm, fb, whole, 0))

    tolerance = rel_tol * abs(coarse)
    total = 0.0
    error = 0.0
    depth_hits = 0
    while stack:
        lo, mid, hi, fa, fm, fb, whole, depth = stack.pop()
        left_mid, right_mid = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = f(left_mid), f(right_mid)
        evaluations += 2
        if evaluations > max_evaluations:
            raise ResourceError(f"quadrature exceeded {max_evaluations} integrand evaluations")

        left = _simpson(fa, flm, fm, mid - lo)
        right = _simpson(fm, frm, fb, hi - mid)
        difference = left + right - whole
        panel_tolerance = tolerance * (hi - lo) / (b - a)
        if abs(difference) <= 15.0 * panel_tolerance or depth >= max_depth:
            depth_hits += depth >= max_depth
            total += left + right + difference / 15.0
            error += abs(difference) / 15.0
        else:
            stack.append((lo, left_mid, mid, fa, flm, fm, left, depth + 1))
            stack.append((mid, right_mid, hi, fm, frm, fb, right, depth + 1))

    if depth_hits:
        logger.debug(f"{depth_hits} panels stopped at depth {max_depth}")
    result = QuadratureResult(total, error, evaluations)
    _check_converged(result)
    return result


def log_adaptive_simpson(log_f: Callable[[float], float], a: float, b: float,
                         rel_tol: float = 1e-10, seed_panels: int = SEED_PANELS,
                         max_depth: int = MAX_DEPTH,
                         max_evaluations: int = MAX_EVALUATIONS) -> QuadratureResult:
    """Integrate exp(log_f) over [a, b]; the integrand must be non-negative."""
    _check_interval(a, b)
    if a == b:
        return QuadratureResult(0.0, 0.0, 0, log_space_used=True)

    edges, values = _seed(log_f, a, b, seed_panels)
    evaluations = len(values)
    stack: List[Tuple] = []
    seeds = []
    for i in range(seed_panels):
        lo, mid, hi = edges[2 * i], edges[2 * i + 1], edges[2 * i + 2]
        la, lm, lb = values[2 * i], values[2 * i + 1], values[2 * i + 2]
        whole = _log_simpson(la, lm, lb, hi - lo)
        seeds.append(whole)
        stack.append((lo, mid, hi, la, lm, lb, whole, 0))

    log_tolerance = math.log(rel_tol) + float(logsumexp(seeds))
    log_width = math.log(b - a)
    accepted: List[float] = []
    errors: List[float] = []
    while stack:
        lo, mid, hi, la, lm, lb, whole, depth = stack.pop()
        left_mid, right_mid = 0.5 * (lo + mid), 0.5 * (mid + hi)
        llm, lrm = log_f(left_mid), log_f(right_mid)
        evaluations += 2
        if evaluations > max_evaluations:
            raise ResourceError(f"quadrature exceeded {max_evaluations} integrand evaluations")

        left = _log_simpson(la, llm, lm, mid - lo)
        right = _log_simpson(lm, lrm, lb, hi - mid)
        combined = _log_add(left, right)
        log_difference = _log_abs_diff(combined, whole)
        panel_tolerance = log_tolerance + math.log(hi - lo) - log_width
        if log_difference <= LOG_FIFTEEN + panel_tolerance or depth >= max_depth:
            accepted.append(combined)
            errors.append(log_difference - LOG_FIFTEEN)
        else:
            stack.append((lo, left_mid, mid, la, llm, lm, left, depth + 1))
            stack.append((mid, right_mid, hi, lm, lrm, lb, right, depth + 1))

    log_value = float(logsumexp(accepted))
    log_error = float(logsumexp(errors))
    result = QuadratureResult(
        value=math.exp(log_value) if log_value > -745.0 else 0.0,
        abs_error_estimate=math.exp(log_error) if log_error > -745.0 else 0.0,
        evaluations=evaluations,
        log_space_used=True,
        log_value=log_value,
    )
    if log_value > -math.inf and log_error - log_value > math.log(FAILURE_RELATIVE_ERROR):
        raise QuadratureError(
            f"log-domain quadrature did not converge on [{a}, {b}]",
            estimate=math.exp(log_error - log_value))
    return result


def needs_log_domain(log_f: Callable[[float], float], a: float, b: float,
                     samples: int = 2 * SEED_PANELS + 1) -> bool:
    """True when a finite sample of log_f falls outside [LOG_TINY, LOG_HUGE]."""
    logs = np.array([log_f(float(t)) for t in np.linspace(a, b, samples)])
    finite = logs[np.isfinite(logs)]
    return bool(finite.size and (finite.min() < LOG_TINY or finite.max() > LOG_HUGE))


def integrate_log_integrand(log_f: Callable[[float], float], a: float, b: float,
                            rel_tol: float = 1e-10,
                            log_domain: bool = False) -> QuadratureResult:
    """Integrate exp(log_f), in log domain when forced or when the range demands it."""
    if log_domain or needs_log_domain(log_f, a, b):
        return log_adaptive_simpson(log_f, a, b, rel_tol)
    linear = lambda t: math.exp(log_f(t))
    result = adaptive_simpson(linear, a, b, rel_tol)
    log_value = math.log(result.value) if result.value > 0.0 else -math.inf
    return QuadratureResult(result.value, result.abs_error_estimate, result.evaluations,
                            log_space_used=False, log_value=log_value)


def _check_converged(result: QuadratureResult) -> None:
    if result.value and result.relative_error > FAILURE_RELATIVE_ERROR:
        raise QuadratureError("quadrature did not converge", estimate=result.relative_error)
