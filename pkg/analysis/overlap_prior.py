"""
Probability that the source-target overlap exceeds a threshold when the
target's polar angle theta on the (2N-1)-sphere follows a prior density.

The polar marginal of the sphere's surface measure is sin^(2N-2)(theta), so

    Prob(x >= x_bar) = int_0^acos(x_bar) rho sin^(2N-2) / int_0^(pi/2) rho sin^(2N-2)

and any normalization of rho cancels.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Sequence

import numpy as np
from scipy.special import logsumexp

from core.errors import DomainError

from .quadrature import QuadratureResult, integrate_log_integrand, needs_log_domain

PRIOR_KINDS = ("damped-gaussian", "uniform")

HALF_PI = 0.5 * math.pi

# Series terms below this fraction of the running sum are dropped.
SERIES_CUTOFF = 1e-17
MAX_SERIES_TERMS = 100_000

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PriorSpec:
    """Target prior: zero-mean gaussian in theta damped by 1 + (base sin theta)^(2N-2)."""

    hilbert_dim: int
    sigma_sq: float = 1.0
    kind: str = "damped-gaussian"
    damping_base: float = 10.0

    def __post_init__(self):
        if self.hilbert_dim < 2:
            raise DomainError("hilbert_dim", f"must be at least 2, got {self.hilbert_dim}")
        if self.kind not in PRIOR_KINDS:
            raise DomainError("kind", f"must be one of {PRIOR_KINDS}, got {self.kind!r}")
        if not self.sigma_sq > 0.0:
            raise DomainError("sigma_sq", f"variance must be positive, got {self.sigma_sq}")
        if not self.damping_base > 0.0:
            raise DomainError("damping_base", f"must be positive, got {self.damping_base}")

    @property
    def sphere_exponent(self) -> int:
        return 2 * self.hilbert_dim - 2


def _check_theta(theta: float) -> None:
    if not 0.0 <= theta <= HALF_PI:
        raise DomainError("theta", f"polar angle must lie in [0, pi/2], got {theta}")


def _log_sin(theta: float) -> float:
    s = math.sin(theta)
    return math.log(s) if s > 0.0 else -math.inf


def log_density(spec: PriorSpec, theta: float) -> float:
    """Log of the unnormalized prior density at theta."""
    _check_theta(theta)
    if spec.kind == "uniform":
        return 0.0
    damping_log = spec.sphere_exponent * (math.log(spec.damping_base) + _log_sin(theta))
    return -theta * theta / (2.0 * spec.sigma_sq) - float(np.logaddexp(0.0, damping_log))


def density(spec: PriorSpec, theta: float) -> float:
    return math.exp(log_density(spec, theta))


def _log_weighted(spec: PriorSpec):
    exponent = spec.sphere_exponent
    return lambda theta: log_density(spec, theta) + exponent * _log_sin(theta)


def prob_overlap_at_least(spec: PriorSpec, x_bar: float,
                          rel_tol: float = 1e-10) -> QuadratureResult:
    """Prob(x >= x_bar) as a ratio of two integrals taken with one scheme."""
    if not 0.0 < x_bar < 1.0:
        raise DomainError("x_bar", f"must lie in (0, 1), got {x_bar}")
    integrand = _log_weighted(spec)
    upper = math.acos(x_bar)
    log_domain = needs_log_domain(integrand, 0.0, upper) or needs_log_domain(integrand, 0.0, HALF_PI)

    numerator = integrate_log_integrand(integrand, 0.0, upper, rel_tol, log_domain)
    denominator = integrate_log_integrand(integrand, 0.0, HALF_PI, rel_tol, log_domain)
    log_ratio = numerator.log_value - denominator.log_value
    value = min(math.exp(log_ratio), 1.0) if log_ratio > -745.0 else 0.0
    relative = numerator.relative_error + denominator.relative_error
    logger.debug(
        f"Prob(x >= {x_bar}) N={spec.hilbert_dim} kind={spec.kind}: {value!r} "
        f"({numerator.evaluations + denominator.evaluations} evaluations, log={log_domain})")
    return QuadratureResult(
        value=value,
        abs_error_estimate=value * relative,
        evaluations=numerator.evaluations + denominator.evaluations,
        log_space_used=log_domain,
        log_value=log_ratio,
    )


def normalization_constant(spec: PriorSpec) -> float:
    """Factor giving the prior unit integral over theta in [0, pi/2]."""
    if spec.kind == "uniform":
        return 2.0 / math.pi
    result = integrate_log_integrand(lambda theta: log_density(spec, theta), 0.0, HALF_PI)
    return 1.0 / result.value


def _log_wallis(m: int) -> float:
    """log int_0^(pi/2) sin^m, via W_m = (m-1)/m W_(m-2)."""
    log_w = math.log(HALF_PI) if m % 2 == 0 else 0.0
    for k in range(2 if m % 2 == 0 else 3, m + 1, 2):
        log_w += math.log((k - 1) / k)
    return log_w


def _log_positive_series(log_terms) -> float:
    """Sum exp(terms) in log domain until terms stop contributing."""
    collected: List[float] = []
    running = -math.inf
    previous = math.inf
    for k, log_term in enumerate(log_terms):
        collected.append(log_term)
        running = float(np.logaddexp(running, log_term))
        decreasing = log_term < previous
        previous = log_term
        if decreasing and log_term - running < math.log(SERIES_CUTOFF):
            break
        if k >= MAX_SERIES_TERMS:
            break
    return float(logsumexp(collected))


def _log_cap_integral(m: int, log_s: float):
    """Terms of int_0^s u^m / sqrt(1 - u^2) du, the sin^m integral up to asin(s)."""
    log_c = 0.0
    k = 0
    while True:
        power = m + 2 * k + 1
        yield log_c + power * log_s - math.log(power)
        log_c += math.log((2 * k + 1) / (2 * k + 2))
        k += 1


def _log_complement_integral(m: int, x_bar: float, log_s: float) -> float:
    """log of the sin^m integral from acos(x_bar) to pi/2, by parts in log space.

    J_k = sin^(k-1) cos / k + (k-1)/k J_(k-2), from J_0 = asin(x_bar) or J_1 = x_bar.
    """
    log_cos = math.log(x_bar)
    k = m % 2
    log_j = log_cos if k else math.log(math.asin(x_bar))
    while k < m:
        k += 2
        log_j = float(np.logaddexp((k - 1) * log_s + log_cos - math.log(k),
                                   math.log((k - 1) / k) + log_j))
    return log_j


def uniform_prob_closed_check(N: int, x_bar: float) -> float:
    """Uniform-prior Prob(x >= x_bar) from sin^m integrals carried in logarithms.

    Wide caps subtract the by-parts complement from the Wallis integral;
    narrow caps sum a power series instead.
    """
    if N < 2:
        raise DomainError("N", f"must be at least 2, got {N}")
    if not 0.0 <= x_bar <= 1.0:
        raise DomainError("x_bar", f"must lie in [0, 1], got {x_bar}")
    if x_bar == 0.0:
        return 1.0
    if x_bar == 1.0:
        return 0.0

    m = 2 * N - 2
    log_wallis = _log_wallis(m)
    s_sq = (1.0 - x_bar) * (1.0 + x_bar)
    if s_sq > 0.5:
        log_complement = _log_complement_integral(m, x_bar, 0.5 * math.log(s_sq))
        prob = -math.expm1(log_complement - log_wallis)
        # 1 - complement loses all digits once the tail is small.
        if prob >= 0.5:
            return min(prob, 1.0)
    log_cap = _log_positive_series(_log_cap_integral(m, 0.5 * math.log(s_sq)))
    return min(math.exp(log_cap - log_wallis), 1.0)


def prior_sweep(N: int, sigma_sqs: Sequence[float], x_bars: Sequence[float],
                kind: str = "damped-gaussian", workers: int = 1) -> List[Dict[str, Any]]:
    """Prob(x >= x_bar) over a (sigma_sq, x_bar) grid, rows in sigma-major order."""
    points = [(s, xb) for s in sigma_sqs for xb in x_bars]

    def evaluate(point) -> Dict[str, Any]:
        sigma_sq, x_bar = point
        result = prob_overlap_at_least(PriorSpec(N, sigma_sq, kind), x_bar)
        return {
            "N": N,
            "sigma_sq": sigma_sq,
            "x_bar": x_bar,
            "probability": result.value,
            "abs_error": result.abs_error_estimate,
            "log_space": result.log_space_used,
        }

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            rows = list(executor.map(evaluate, points))
    else:
        rows = [evaluate(point) for point in points]
    logger.info(f"Prior sweep N={N} kind={kind}: {len(rows)} points")
    return rows
