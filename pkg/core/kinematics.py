"""
Closed-form kinematics of the modified and original analog search Hamiltonians.

The modified Hamiltonian is H = E|w><w| + gamma*E|s><s| with overlap x = <s|w>.
Every probability is the transition probability |<w|exp(-iHt/hbar)|s>|^2;
gamma = 1 recovers the original equal-energy search.

Functions taking overlaps or times accept scalars or numpy arrays and return
a float for scalar input, an ndarray otherwise.
"""

import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import DomainError, NumericError, UnreachableThresholdError
from .utils import CLAMP_TOLERANCE, h_from_hbar, hbar_from_h

ArrayLike = Union[float, np.ndarray]

CURVES = ("general", "special")

# Bracketing resolution of the crossing search, in units of the curve period.
CROSSING_SAMPLES_PER_PERIOD = 1024
CROSSING_RELATIVE_TOLERANCE = 1e-12

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchConfig:
    """Physical parameters (x, gamma, E, hbar) of one search instance."""

    x: float
    gamma: float = 1.0
    energy: float = 1.0
    hbar: float = 1.0 / (2.0 * math.pi)

    def __post_init__(self):
        if not 0.0 < self.x <= 1.0:
            raise DomainError("x", f"overlap must lie in (0, 1], got {self.x}")
        if not self.gamma >= 1.0:
            raise DomainError("gamma", f"energy ratio must be >= 1, got {self.gamma}")
        if not self.energy > 0.0:
            raise DomainError("energy", f"must be positive, got {self.energy}")
        if not self.hbar > 0.0:
            raise DomainError("hbar", f"must be positive, got {self.hbar}")

    @classmethod
    def from_h(cls, x: float, gamma: float = 1.0, energy: float = 1.0,
               h: float = 1.0) -> "SearchConfig":
        """Build a config from Planck's constant h instead of hbar."""
        return cls(x=x, gamma=gamma, energy=energy, hbar=hbar_from_h(h))

    @property
    def h(self) -> float:
        return h_from_hbar(self.hbar)

    @property
    def energy_prime(self) -> float:
        return self.gamma * self.energy

    @property
    def discriminant(self) -> float:
        """4x^2 gamma + (1 - gamma)^2, the squared dimensionless frequency."""
        return float(_discriminant(self.x, self.gamma))

    def original(self) -> "SearchConfig":
        """The same instance with the original driver strength (gamma = 1)."""
        return dataclasses.replace(self, gamma=1.0)


@dataclass(frozen=True)
class Crossing:
    """First time a curve reaches a threshold."""

    time: float
    satisfied_at_start: bool = False


def _as_result(values) -> ArrayLike:
    arr = np.asarray(values, dtype=float)
    return float(arr) if arr.ndim == 0 else arr


def _discriminant(x, gamma):
    return 4.0 * x * x * gamma + (1.0 - gamma) ** 2


def _check_overlap(x, upper_open: bool = False) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0.0)) or np.any(arr > 1.0) or (upper_open and np.any(arr >= 1.0)):
        interval = "(0, 1)" if upper_open else "(0, 1]"
        raise DomainError("x", f"overlap must lie in {interval}")
    return arr


def _check_gamma(gamma) -> np.ndarray:
    arr = np.asarray(gamma, dtype=float)
    if np.any(~(arr >= 1.0)):
        raise DomainError("gamma", "energy ratio must be >= 1")
    return arr


def _check_times(t) -> np.ndarray:
    arr = np.asarray(t, dtype=float)
    if np.any(~(arr >= 0.0)):
        raise DomainError("t", "times must be non-negative")
    return arr


def _clip_probabilities(values, name: str = "probability") -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if np.any(arr < -CLAMP_TOLERANCE) or np.any(arr > 1.0 + CLAMP_TOLERANCE):
        raise NumericError(f"{name} outside [0, 1]: range [{arr.min()!r}, {arr.max()!r}]")
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        logger.debug(f"Clamping {name}: raw range [{arr.min()!r}, {arr.max()!r}]")
    return np.clip(arr, 0.0, 1.0)


def _clip_unit(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if np.any(arr < -1.0 - CLAMP_TOLERANCE) or np.any(arr > 1.0 + CLAMP_TOLERANCE):
        raise NumericError(f"{name} outside [-1, 1]: range [{arr.min()!r}, {arr.max()!r}]")
    return np.clip(arr, -1.0, 1.0)


def max_transition_probability(x: ArrayLike, gamma: ArrayLike) -> ArrayLike:
    """Peak fidelity x^2 (1+gamma)^2 / (4x^2 gamma + (1-gamma)^2)."""
    x = _check_overlap(x)
    gamma = _check_gamma(gamma)
    pmax = x * x * (1.0 + gamma) ** 2 / _discriminant(x, gamma)
    return _as_result(_clip_probabilities(pmax, "peak probability"))


def transition_probability_energies(x: float, energy: float, energy_prime: float,
                                    hbar: float, t: ArrayLike) -> ArrayLike:
    """Transition probability for independent marked and driver energies.

    Unlike SearchConfig this accepts any positive driver energy, so drivers
    weaker than the marked-state term (gamma < 1) can be explored.
    """
    x = float(_check_overlap(x))
    if not energy > 0.0:
        raise DomainError("energy", f"must be positive, got {energy}")
    if not energy_prime > 0.0:
        raise DomainError("energy_prime", f"must be positive, got {energy_prime}")
    if not hbar > 0.0:
        raise DomainError("hbar", f"must be positive, got {hbar}")
    t = _check_times(t)

    gamma = energy_prime / energy
    discriminant = _discriminant(x, gamma)
    amplitude = x * x * (1.0 + gamma) ** 2 / discriminant
    frequency = math.sqrt(4.0 * x * x * energy * energy_prime
                          + (energy_prime - energy) ** 2) / (2.0 * hbar)
    phase = frequency * t
    p = amplitude * np.sin(phase) ** 2 + x * x * np.cos(phase) ** 2
    return _as_result(_clip_probabilities(p))


def transition_probability_general(cfg: SearchConfig, t: ArrayLike) -> ArrayLike:
    """P_g(t) of the modified algorithm (driver energy gamma*E)."""
    t = _check_times(t)
    discriminant = cfg.discriminant
    pmax = cfg.x ** 2 * (1.0 + cfg.gamma) ** 2 / discriminant
    phase = cfg.energy * math.sqrt(discriminant) * t / (2.0 * cfg.hbar)
    p = pmax * np.sin(phase) ** 2 + cfg.x ** 2 * np.cos(phase) ** 2
    return _as_result(_clip_probabilities(p))


def transition_probability_special(cfg: SearchConfig, t: ArrayLike) -> ArrayLike:
    """P_s(t) = sin^2(Ext/hbar) + x^2 cos^2(Ext/hbar); gamma is ignored."""
    t = _check_times(t)
    phase = cfg.energy * cfg.x * t / cfg.hbar
    p = np.sin(phase) ** 2 + cfg.x ** 2 * np.cos(phase) ** 2
    return _as_result(_clip_probabilities(p))


def peak_time_general(cfg: SearchConfig) -> float:
    """First instant at which P_g reaches its maximum."""
    discriminant = cfg.discriminant
    if discriminant <= 0.0:
        raise DomainError("x", "vanishing discriminant (x = 0 and gamma = 1)")
    return cfg.h / (4.0 * cfg.energy) * 2.0 / math.sqrt(discriminant)


def peak_time_special(cfg: SearchConfig) -> float:
    """h / (4Ex), the original algorithm's time to unit fidelity."""
    return cfg.h / (4.0 * cfg.energy * cfg.x)


def matched_time_special(x: ArrayLike, gamma: ArrayLike, energy: float = 1.0,
                         h: float = 1.0) -> ArrayLike:
    """Time at which the original algorithm first reaches P_g^max(x, gamma)."""
    x = _check_overlap(x, upper_open=True)
    gamma = _check_gamma(gamma)
    if not energy > 0.0:
        raise DomainError("energy", f"must be positive, got {energy}")
    if not h > 0.0:
        raise DomainError("h", f"must be positive, got {h}")

    pmax = np.asarray(max_transition_probability(x, gamma))
    ratio = (1.0 - pmax) / (1.0 - x * x)
    argument = _clip_unit(np.sqrt(np.maximum(ratio, 0.0)), "matched-time cosine")
    return _as_result(h / (2.0 * math.pi * energy * x) * np.arccos(argument))


def imperfection_angle(x: ArrayLike, gamma: ArrayLike) -> ArrayLike:
    """delta(x, gamma): cos^2(delta) is the peak fidelity of the modified algorithm."""
    x = _check_overlap(x)
    gamma = _check_gamma(gamma)
    argument = (1.0 + gamma) * x / np.sqrt((1.0 - gamma) ** 2 + 4.0 * gamma * x * x)
    return _as_result(np.arccos(_clip_unit(argument, "imperfection cosine")))


def oscillation_period(cfg: SearchConfig) -> float:
    """Oscillation period 4*pi*hbar / (E*sqrt(discriminant)) of the evolution."""
    return 2.0 * math.pi * 2.0 * cfg.hbar / math.sqrt(
        4.0 * cfg.x ** 2 * cfg.gamma * cfg.energy ** 2
        + (cfg.energy_prime - cfg.energy) ** 2)


def probability_period(curve: str, cfg: SearchConfig) -> float:
    """Fundamental period of the chosen curve, half its oscillation period."""
    if curve not in CURVES:
        raise DomainError("curve", f"must be one of {CURVES}, got {curve!r}")
    return 0.5 * oscillation_period(cfg if curve == "general" else cfg.original())


def first_crossing_time(curve: str, cfg: SearchConfig, threshold: float) -> Crossing:
    """Smallest t >= 0 at which the chosen curve reaches threshold.

    The first rise is bracketed on a grid of 1/1024 of the curve's own
    period and refined by bisection down to 1e-12 of that period.
    """
    period = probability_period(curve, cfg)
    if curve == "general":
        probability: Callable = lambda t: transition_probability_general(cfg, t)
        maximum = float(max_transition_probability(cfg.x, cfg.gamma))
        peak = peak_time_general(cfg)
    else:
        probability = lambda t: transition_probability_special(cfg, t)
        maximum = 1.0
        peak = peak_time_special(cfg)

    if threshold <= cfg.x ** 2:
        return Crossing(0.0, satisfied_at_start=True)
    if threshold > maximum + CLAMP_TOLERANCE:
        raise UnreachableThresholdError(
            "threshold", f"{threshold} exceeds the {curve} curve maximum {maximum}")
    if threshold >= maximum:
        return Crossing(peak)

    step = period / CROSSING_SAMPLES_PER_PERIOD
    times = np.append(np.arange(0.0, peak, step), peak)
    reached = np.asarray(probability(times)) >= threshold
    if not reached.any():
        # threshold sits within rounding of the sampled peak value
        return Crossing(peak)
    idx = int(np.argmax(reached))
    lo, hi = float(times[idx - 1]), float(times[idx])

    tolerance = CROSSING_RELATIVE_TOLERANCE * period
    while hi - lo > tolerance:
        mid = 0.5 * (lo + hi)
        if probability(mid) >= threshold:
            hi = mid
        else:
            lo = mid
    return Crossing(0.5 * (lo + hi))
