"""
Scans of the (x, gamma) plane comparing the modified and original algorithms.

R_t: at the modified algorithm's peak time it is ahead in fidelity.
R_P: it reaches its own peak fidelity sooner than the original does.
r_P: cells of R_P above a fidelity threshold whose deficit the minimum
     discrimination error covers.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, List, Sequence, Tuple

import numpy as np

from core.errors import DomainError
from core.kinematics import (
    SearchConfig,
    imperfection_angle,
    matched_time_special,
    max_transition_probability,
    peak_time_general,
)

from .discrimination import DiscriminationSetup, min_error_probability

# Margins within this are ties and belong to no region.
TIE_TOLERANCE = 1e-12

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RegionGrid:
    """Masks indexed [i, j] for x_axis[i] and gamma_axis[j]."""

    x_axis: np.ndarray
    gamma_axis: np.ndarray
    pmax_layer: np.ndarray
    mask_Rt: np.ndarray
    mask_RP: np.ndarray
    mask_rP: np.ndarray
    threshold: float
    prior_ratio: float

    @property
    def shape(self) -> Tuple[int, int]:
        return self.pmax_layer.shape

    def rows(self) -> Iterator[Tuple[float, float, float, bool, bool, bool]]:
        """(x, gamma, pmax, in_Rt, in_RP, in_rP), x-major."""
        for i, x in enumerate(self.x_axis):
            for j, gamma in enumerate(self.gamma_axis):
                yield (float(x), float(gamma), float(self.pmax_layer[i, j]),
                       bool(self.mask_Rt[i, j]), bool(self.mask_RP[i, j]),
                       bool(self.mask_rP[i, j]))


@dataclass(frozen=True)
class TableRow:
    x: float
    delta: float
    pmax: float
    deltaF: float
    p_E: float
    t_special: float
    t_general: float


def midpoint_axis(n: int, lo: float = 0.0, hi: float = 1.0) -> np.ndarray:
    """Cell midpoints lo + (i + 1/2)(hi - lo)/n; never hits the endpoints."""
    if n < 1:
        raise DomainError("n", f"need at least one sample, got {n}")
    return lo + (np.arange(n) + 0.5) * (hi - lo) / n


def gamma_axis(n: int, gamma_max: float = 10.0) -> np.ndarray:
    """n evenly spaced ratios from 1 to gamma_max inclusive."""
    if n < 1:
        raise DomainError("n", f"need at least one sample, got {n}")
    if n == 1:
        return np.array([1.0])
    if not gamma_max > 1.0:
        raise DomainError("gamma_max", f"must exceed 1, got {gamma_max}")
    return np.linspace(1.0, gamma_max, n)


def _check_axes(x_axis, gamma_axis_) -> Tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x_axis, dtype=float)
    g = np.asarray(gamma_axis_, dtype=float)
    if x.ndim != 1 or x.size == 0 or np.any(~(x > 0.0)) or np.any(~(x < 1.0)):
        raise DomainError("x_axis", "samples must lie in the open interval (0, 1)")
    if g.ndim != 1 or g.size == 0 or np.any(~(g >= 1.0)):
        raise DomainError("gamma_axis", "samples must be >= 1")
    if np.any(np.diff(x) <= 0.0):
        raise DomainError("x_axis", "samples must be strictly increasing")
    if np.any(np.diff(g) <= 0.0):
        raise DomainError("gamma_axis", "samples must be strictly increasing")
    return x, g


def pmax_grid(x_axis, gamma_axis_) -> np.ndarray:
    """Peak fidelity on the grid, ready for contouring."""
    x = np.asarray(x_axis, dtype=float)
    g = np.asarray(gamma_axis_, dtype=float)
    X, G = np.meshgrid(x, g, indexing="ij")
    return np.asarray(max_transition_probability(X, G))


def _scan_block(x: np.ndarray, g: np.ndarray, threshold: float,
                prior_product: float) -> Tuple[np.ndarray, ...]:
    X, G = np.meshgrid(x, g, indexing="ij")
    pmax = np.asarray(max_transition_probability(X, G))

    # Times in units of h/E; only their ratio and phases enter.
    t_general = 1.0 / (2.0 * np.sqrt(4.0 * X * X * G + (1.0 - G) ** 2))
    t_special = np.asarray(matched_time_special(X, G))
    in_RP = t_general / t_special < 1.0 - TIE_TOLERANCE

    phase = 2.0 * math.pi * X * t_general
    special_at_peak = np.sin(phase) ** 2 + X * X * np.cos(phase) ** 2
    in_Rt = pmax - special_at_peak > TIE_TOLERANCE

    # The deficit of cos^2(delta) is 1 - pmax.
    p_error = 0.5 * (1.0 - np.sqrt(np.maximum(1.0 - 4.0 * prior_product * pmax, 0.0)))
    beats = 1.0 - pmax <= p_error
    in_rP = in_RP & (pmax > threshold) & beats
    return pmax, in_Rt, in_RP, in_rP


def scan_regions(x_axis, gamma_axis_, threshold: float,
                 prior_setup: DiscriminationSetup, workers: int = 1) -> RegionGrid:
    """Fill peak fidelity and region masks over the grid.

    With workers > 1 the x rows are split into contiguous blocks written into
    preallocated arrays, so the result does not depend on the worker count.
    """
    x, g = _check_axes(x_axis, gamma_axis_)
    if not 0.0 <= threshold < 1.0:
        raise DomainError("threshold", f"must lie in [0, 1), got {threshold}")

    shape = (x.size, g.size)
    pmax = np.empty(shape)
    mask_Rt = np.empty(shape, dtype=bool)
    mask_RP = np.empty(shape, dtype=bool)
    mask_rP = np.empty(shape, dtype=bool)

    def fill(block: slice) -> None:
        layers = _scan_block(x[block], g, threshold, prior_setup.prior_product)
        for target, layer in zip((pmax, mask_Rt, mask_RP, mask_rP), layers):
            target[block] = layer

    if workers > 1:
        bounds = np.linspace(0, x.size, min(workers, x.size) + 1).astype(int)
        blocks = [slice(lo, hi) for lo, hi in zip(bounds, bounds[1:])]
        with ThreadPoolExecutor(max_workers=workers) as executor:
            list(executor.map(fill, blocks))
    else:
        fill(slice(0, x.size))

    grid = RegionGrid(x, g, pmax, mask_Rt, mask_RP, mask_rP,
                      threshold=threshold, prior_ratio=prior_setup.alpha)
    logger.info(f"Scanned {shape[0]}x{shape[1]} grid: |R_t|={int(mask_Rt.sum())} "
                f"|R_P|={int(mask_RP.sum())} |r_P|={int(mask_rP.sum())}")
    return grid


def regions_coincide(grid: RegionGrid) -> bool:
    return bool(np.array_equal(grid.mask_Rt, grid.mask_RP))


def make_table1(x_list: Sequence[float], gamma: float, alpha: float,
                energy: float = 1.0, h: float = 1.0) -> List[TableRow]:
    """Peak fidelity, deficit, discrimination error and both run times per overlap."""
    setup = DiscriminationSetup.from_asymmetry(alpha)
    rows = []
    for x in x_list:
        if not 0.0 < x < 1.0:
            raise DomainError("x", f"overlap must lie in (0, 1), got {x}")
        cfg = SearchConfig.from_h(x, gamma, energy, h)
        delta = float(imperfection_angle(x, gamma))
        pmax = float(max_transition_probability(x, gamma))
        rows.append(TableRow(
            x=x,
            delta=delta,
            pmax=pmax,
            deltaF=1.0 - pmax,
            p_E=min_error_probability(delta, setup),
            t_special=float(matched_time_special(x, gamma, energy, h)),
            t_general=peak_time_general(cfg),
        ))
    return rows
