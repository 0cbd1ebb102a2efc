"""
Central runner that orchestrates the analog search lab.
Loads defaults, dispatches a command to its module, and writes the result document.
"""

import importlib
import logging
import math
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from analysis.bounds import (
    exact_min_time,
    min_time_lower_bound,
    verify_distance_growth,
    verify_terminal_distance,
)
from analysis.discrimination import (
    DiscriminationSetup,
    deficit_crossing_angle,
    deficit_error_curves,
    delta_max_from_asymmetry,
)
from analysis.overlap_prior import prior_sweep, uniform_prob_closed_check
from analysis.regions import (
    gamma_axis,
    make_table1,
    midpoint_axis,
    pmax_grid,
    regions_coincide,
    scan_regions,
)

from . import __version__
from .errors import DomainError
from .kinematics import (
    SearchConfig,
    first_crossing_time,
    imperfection_angle,
    peak_time_general,
    peak_time_special,
    transition_probability_general,
    transition_probability_special,
)
from .models import RunConfig, ResultDocument
from .utils import DEFAULT_CONFIG_DIR, filter_enabled_items, hbar_from_h, load_config


class LabRunner:
    """Main orchestrator for the analog search lab."""

    def __init__(self, config_dir: Optional[str] = None):
        self.config_dir = Path(config_dir) if config_dir else DEFAULT_CONFIG_DIR
        self.logger = logging.getLogger(__name__)

        self.defaults = load_config(str(self.config_dir / "defaults.json"))
        self.writers_config = filter_enabled_items(load_config(str(self.config_dir / "writers.json")))

        self.logger.debug(f"Loaded defaults for {len(self.defaults)} commands, "
                          f"{len(self.writers_config)} writers")

        self._commands: Dict[str, Callable[[Dict[str, Any], int], ResultDocument]] = {
            "curve": self._run_curve,
            "maxfid": self._run_maxfid,
            "delta": self._run_delta,
            "discrim": self._run_discrim,
            "bound": self._run_bound,
            "verify-proof": self._run_verify_proof,
            "regions": self._run_regions,
            "table1": self._run_table1,
            "prior": self._run_prior,
            "crossing": self._run_crossing,
        }

    def _import_module(self, module_type: str, module_name: str):
        """Dynamically import a module."""
        try:
            module_path = f"{module_type}.{module_name}"
            return importlib.import_module(module_path)
        except ImportError as e:
            self.logger.error(f"Failed to import {module_path}: {e}")
            return None

    def resolve_parameters(self, config: RunConfig) -> Dict[str, Any]:
        """Command defaults overridden by the parameters actually given."""
        params = dict(self.defaults.get(config.command, {}))
        params.update(config.given())
        if "h" in params or "hbar" in params or "energy" in params:
            hbar = params.pop("hbar", None)
            h = params.pop("h", None)
            params["hbar"] = hbar if hbar is not None else hbar_from_h(1.0 if h is None else h)
        return params

    def run(self, config: RunConfig) -> ResultDocument:
        params = self.resolve_parameters(config)
        self.logger.info(f"Running {config.command} with {params}")

        doc = self._commands[config.command](params, config.workers)
        doc.metadata = {
            "command": config.command,
            "parameters": params,
            "version": __version__,
            "timestamp": datetime.now(timezone.utc).isoformat(),
            **doc.metadata,
        }
        self.logger.info(f"{config.command} produced {len(doc.rows)} rows")
        return doc

    def write_document(self, doc: ResultDocument, fmt: str = "csv", destination: Any = "-") -> None:
        if fmt not in self.writers_config:
            raise DomainError("format", f"no enabled writer for {fmt!r}")
        writer_config = self.writers_config[fmt]
        writer_module = self._import_module("writers", writer_config["module"])
        if not writer_module:
            raise DomainError("format", f"writer module {writer_config['module']!r} is unavailable")
        writer_module.write(doc, destination, writer_config.get("config", {}))
        self.logger.debug(f"Wrote {len(doc.rows)} rows as {fmt} to {destination}")

    @staticmethod
    def _search_config(params: Dict[str, Any]) -> SearchConfig:
        return SearchConfig(x=params["x"], gamma=params["gamma"],
                            energy=params["energy"], hbar=params["hbar"])

    def _run_curve(self, params: Dict[str, Any], workers: int) -> ResultDocument:
        cfg = self._search_config(params)
        t_max = params.get("t_max") or 2.0 * peak_time_special(cfg)
        times = np.linspace(0.0, t_max, params["points"])
        general = np.atleast_1d(transition_probability_general(cfg, times))
        special = np.atleast_1d(transition_probability_special(cfg, times))
        rows = [list(row) for row in zip(times, general, special)]
        return ResultDocument(
            ["t", "p_general", "p_special"], rows,
            {"peak_time_general": peak_time_general(cfg),
             "peak_time_special": peak_time_special(cfg)},
        )

    def _run_maxfid(self, params: Dict[str, Any], workers: int) -> ResultDocument:
        x_axis = midpoint_axis(params["x_points"])
        g_axis = gamma_axis(params["gamma_points"], params["gamma_max"])
        grid = pmax_grid(x_axis, g_axis)
        rows = [[x, g, grid[i, j]] for i, x in enumerate(x_axis) for j, g in enumerate(g_axis)]
        return ResultDocument(["x", "gamma", "pmax"], rows)

    def _run_delta(self, params: Dict[str, Any], workers: int) -> ResultDocument:
        x_axis = midpoint_axis(params["x_points"])
        rows = []
        for gamma in params["gammas"]:
            deltas = np.atleast_1d(imperfection_angle(x_axis, gamma))
            rows.extend([x, gamma, d] for x, d in zip(x_axis, deltas))
        return ResultDocument(["x", "gamma", "delta"], rows)

    def _run_discrim(self, params: Dict[str, Any], workers: int) -> ResultDocument:
        ratios = list(params["ratios"])
        curves = deficit_error_curves(ratios, params["points"])
        columns = list(curves)
        rows = [list(values) for values in zip(*(curves[c] for c in columns))]
        metadata = {
            "delta_max": {f"{r:g}": delta_max_from_asymmetry(r) for r in ratios},
            "crossing_angle": {f"{r:g}": deficit_crossing_angle(DiscriminationSetup.from_asymmetry(r))
                               for r in ratios},
        }
        return ResultDocument(columns, rows, metadata)

    def _run_bound(self, params: Dict[str, Any], workers: int) -> ResultDocument:
        N, delta = params["dim"], params["delta"]
        approximate = min_time_lower_bound(N, delta, params["energy"], params["hbar"])
        exact = exact_min_time(N, params["energy"], params["hbar"])
        return ResultDocument(["N", "delta", "t_min_approximate", "t_min_exact"],
                              [[N, delta, approximate, exact]])

    def _run_verify_proof(self, params: Dict[str, Any], workers: int) -> ResultDocument:
        energy, hbar = params["energy"], params["hbar"]
        rows: List[List[Any]] = []
        all_hold = True
        for N in params["dims"]:
            for gamma in params["gammas"]:
                terminal = verify_terminal_distance(N, gamma, energy, hbar, workers)
                times = np.linspace(0.0, terminal.t_check, params["points"])
                for report in verify_distance_growth(N, gamma, energy, hbar, times, workers):
                    rows.append(["growth", N, gamma, report.delta, report.t_check,
                                 report.lhs, report.rhs_growth, report.growth_ok])
                    all_hold &= report.growth_ok
                rows.append(["terminal", N, gamma, terminal.delta, terminal.t_check,
                             terminal.lhs, terminal.rhs_terminal, terminal.terminal_ok])
                rows.append(["time-bound", N, gamma, terminal.delta, terminal.t_check,
                             terminal.t_check, terminal.time_bound, terminal.time_bound_ok])
                all_hold &= terminal.satisfied
        return ResultDocument(["check", "N", "gamma", "delta", "t", "lhs", "rhs", "holds"],
                              rows, {"all_hold": bool(all_hold)})

    def _run_regions(self, params: Dict[str, Any], workers: int) -> ResultDocument:
        x_axis = midpoint_axis(params["x_points"])
        g_axis = gamma_axis(params["gamma_points"], params["gamma_max"])
        setup = DiscriminationSetup.from_asymmetry(params["alpha"])
        grid = scan_regions(x_axis, g_axis, params["threshold"], setup, workers)
        coincide = regions_coincide(grid)
        subset = bool(np.all(~grid.mask_rP | grid.mask_RP))
        self.logger.info(f"R_t and R_P coincide: {coincide}")
        return ResultDocument(["x", "gamma", "pmax", "in_Rt", "in_RP", "in_rP"],
                              [list(row) for row in grid.rows()],
                              {"regions_coincide": coincide, "rP_subset_of_RP": subset})

    def _run_table1(self, params: Dict[str, Any], workers: int) -> ResultDocument:
        h = 2.0 * math.pi * params["hbar"]
        table = make_table1(params["x_list"], params["gamma"], params["alpha"], params["energy"], h)
        columns = ["x", "delta", "pmax", "deltaF", "p_E", "t_special", "t_general"]
        rows = [[getattr(row, c) for c in columns] for row in table]
        return ResultDocument(columns, rows)

    def _run_prior(self, params: Dict[str, Any], workers: int) -> ResultDocument:
        kind, N = params["kind"], params["dim"]
        uniform = kind == "uniform"
        sigma_sqs = [1.0] if uniform else list(params["sigma_sqs"])
        sweep = prior_sweep(N, sigma_sqs, list(params["x_bars"]), kind, workers)
        columns = ["N", "sigma_sq", "x_bar", "probability", "abs_error", "log_space", "closed_form"]
        rows = []
        for record in sweep:
            record["sigma_sq"] = None if uniform else record["sigma_sq"]
            record["closed_form"] = uniform_prob_closed_check(N, record["x_bar"]) if uniform else None
            rows.append([record[c] for c in columns])
        return ResultDocument(columns, rows, {"kind": kind})

    def _run_crossing(self, params: Dict[str, Any], workers: int) -> ResultDocument:
        cfg = self._search_config(params)
        rows = []
        for threshold in params["thresholds"]:
            general = first_crossing_time("general", cfg, threshold)
            special = first_crossing_time("special", cfg, threshold)
            rows.append([threshold, general.time, special.time,
                         general.satisfied_at_start, special.satisfied_at_start])
        return ResultDocument(
            ["threshold", "t_general", "t_special", "general_at_start", "special_at_start"], rows)

