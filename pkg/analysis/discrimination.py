"""
Minimum-error (ambiguous) discrimination of the evolved state from the target,
and the fidelity thresholds it justifies.

A nearly optimal run stops at fidelity cos^2(delta). The search is worth
running whenever the fidelity deficit 1 - cos^2(delta) does not exceed the
smallest error any measurement could make telling the two states apart.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Sequence

import numpy as np
from scipy.optimize import brentq

from core.errors import DomainError, NumericError
from core.utils import CLAMP_TOLERANCE, safe_acos

HALF_PI = 0.5 * math.pi

# Number of delta samples spanning [0, pi/2] for deficit/error curves.
CURVE_POINTS = 1000

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DiscriminationSetup:
    """Priors of the target state w and its competitor w~.

    Only p_w is stored; p_wtilde is always 1 - p_w.
    """

    p_w: float
    alpha: float = field(init=False)

    def __post_init__(self):
        if not 0.0 < self.p_w < 1.0:
            raise DomainError("p_w", f"prior must lie in (0, 1), got {self.p_w}")
        object.__setattr__(self, "alpha", self.p_wtilde / self.p_w)

    @classmethod
    def from_asymmetry(cls, alpha: float) -> "DiscriminationSetup":
        """Setup with p_wtilde / p_w = alpha."""
        _check_alpha(alpha)
        return cls(p_w=1.0 / (1.0 + alpha))

    @property
    def p_wtilde(self) -> float:
        return 1.0 - self.p_w

    @property
    def prior_product(self) -> float:
        return self.p_w * self.p_wtilde


@dataclass(frozen=True)
class FidelityBudget:
    """Largest tolerated fidelity deficit and the matching angle cap."""

    epsilon: float
    delta_max: float

    @property
    def min_fidelity(self) -> float:
        return 1.0 - self.epsilon


def _check_alpha(alpha: float) -> None:
    if not alpha > 0.0:
        raise DomainError("alpha", f"asymmetry must be positive, got {alpha}")


def _check_delta(delta: float) -> None:
    if not 0.0 <= delta <= HALF_PI:
        raise DomainError("delta", f"angle must lie in [0, pi/2], got {delta}")


def min_error_probability(delta: float, setup: DiscriminationSetup) -> float:
    """1/2 (1 - sqrt(1 - 4 p_w p_wtilde cos^2 delta))."""
    _check_delta(delta)
    radicand = 1.0 - 4.0 * setup.prior_product * math.cos(delta) ** 2
    if radicand < -CLAMP_TOLERANCE:
        raise NumericError(f"negative radicand {radicand!r} in minimum error probability")
    return 0.5 * (1.0 - math.sqrt(max(radicand, 0.0)))


def fidelity_deficit(delta: float) -> float:
    """1 - cos^2 delta."""
    _check_delta(delta)
    return 1.0 - math.cos(delta) ** 2


def nearly_optimal_fidelity(delta: float) -> float:
    _check_delta(delta)
    return math.cos(delta) ** 2


def delta_max_from_epsilon(epsilon: float) -> float:
    """Angle cap acos(sqrt(1 - epsilon)) for a tolerated deficit epsilon."""
    if not 0.0 <= epsilon < 1.0:
        raise DomainError("epsilon", f"must lie in [0, 1), got {epsilon}")
    return safe_acos(math.sqrt(1.0 - epsilon), "delta_max cosine")


def delta_max_from_prior(p_w: float) -> float:
    if not 0.0 < p_w < 1.0:
        raise DomainError("p_w", f"prior must lie in (0, 1), got {p_w}")
    return delta_max_from_epsilon(p_w * (1.0 - p_w))


def epsilon_of_asymmetry(alpha: float) -> float:
    """alpha / (1 + alpha)^2, invariant under alpha -> 1/alpha."""
    _check_alpha(alpha)
    return alpha / (1.0 + alpha) ** 2


def delta_max_from_asymmetry(alpha: float) -> float:
    return delta_max_from_epsilon(epsilon_of_asymmetry(alpha))


def fidelity_budget_from_epsilon(epsilon: float) -> FidelityBudget:
    return FidelityBudget(epsilon=epsilon, delta_max=delta_max_from_epsilon(epsilon))


def fidelity_budget_from_asymmetry(alpha: float) -> FidelityBudget:
    return fidelity_budget_from_epsilon(epsilon_of_asymmetry(alpha))


def search_beats_discrimination(delta: float, setup: DiscriminationSetup) -> bool:
    """True iff 0 <= 1 - cos^2 delta <= p_E(delta); equality counts."""
    return fidelity_deficit(delta) <= min_error_probability(delta, setup)


def deficit_crossing_angle(setup: DiscriminationSetup) -> float:
    """Angle at which the deficit curve meets the minimum error curve."""
    gap = lambda delta: fidelity_deficit(delta) - min_error_probability(delta, setup)
    return float(brentq(gap, 0.0, HALF_PI, xtol=1e-15, rtol=4 * np.finfo(float).eps))


def deficit_error_curves(prior_ratios: Sequence[float],
                         points: int = CURVE_POINTS) -> Dict[str, np.ndarray]:
    """Deficit and minimum error probability on a uniform delta grid over [0, pi/2].

    Keys are "delta", "deficit" and "p_error_<ratio>" per prior ratio.
    """
    if points < 2:
        raise DomainError("points", f"need at least 2 samples, got {points}")
    deltas = np.linspace(0.0, HALF_PI, points)
    deltas[-1] = HALF_PI
    curves = {"delta": deltas, "deficit": 1.0 - np.cos(deltas) ** 2}
    for ratio in prior_ratios:
        setup = DiscriminationSetup.from_asymmetry(ratio)
        radicand = np.maximum(1.0 - 4.0 * setup.prior_product * np.cos(deltas) ** 2, 0.0)
        curves[f"p_error_{ratio:g}"] = 0.5 * (1.0 - np.sqrt(radicand))
    logger.debug(f"Built deficit/error curves for ratios {list(prior_ratios)}")
    return curves
