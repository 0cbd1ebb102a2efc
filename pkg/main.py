#!/usr/bin/env python3
"""
Main entry point for the analog search lab.
Reproduces the closed-form results and their numerical cross-checks from the command line.
"""

import logging
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import click
from click.core import ParameterSource
from dotenv import dotenv_values

# Add the project root to Python path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from core.errors import DomainError, NumericError, ResourceError
from core.models import COMMANDS, OUTPUT_FORMATS, RunConfig
from core.runner import LabRunner
from core.utils import setup_logging
from analysis.overlap_prior import PRIOR_KINDS

logger = logging.getLogger(__name__)

OVERLAP = click.FloatRange(0.0, 1.0, min_open=True)
OPEN_OVERLAP = click.FloatRange(0.0, 1.0, min_open=True, max_open=True)
GAMMA = click.FloatRange(min=1.0)
POSITIVE = click.FloatRange(min=0.0, min_open=True)
PROBABILITY = click.FloatRange(0.0, 1.0)


def physics_options(f):
    """Marked-state energy and Planck constant, shared by the time-domain commands."""
    options = [
        click.option("--energy", type=POSITIVE, help="Marked-state energy E (default 1)."),
        click.option("--h", "h", type=POSITIVE, help="Planck constant h (default 1)."),
        click.option("--hbar", type=POSITIVE, help="Reduced Planck constant; excludes --h."),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def _option_names(command: click.Command) -> Dict[str, click.Parameter]:
    names = {}
    for param in command.params:
        names[param.name] = param
        for opt in getattr(param, "opts", []):
            names[opt.lstrip("-").replace("-", "_")] = param
    return names


def _file_defaults(config_file: str, command: click.Command) -> Dict[str, Any]:
    """Map a key=value run file onto the command's parameters."""
    known = _option_names(command)
    values = {}
    for key, raw in dotenv_values(config_file, interpolate=False).items():
        name = key.strip().lower().replace("-", "_")
        if name not in known:
            raise click.UsageError(f"{config_file}: unknown key {key!r} for {command.name}")
        param = known[name]
        raw = raw or ""
        values[param.name] = [v.strip() for v in raw.split(",") if v.strip()] if param.multiple else raw
    return values


def _drop_file_unit(ctx: click.Context, params: Dict[str, Any]) -> Dict[str, Any]:
    """A run-file h or hbar yields to the other one given as a flag."""
    if params.get("h") is None or params.get("hbar") is None:
        return params
    from_file = [name for name in ("h", "hbar")
                 if ctx.get_parameter_source(name) is ParameterSource.DEFAULT_MAP]
    if len(from_file) == 1:
        logger.debug(f"Command-line flag overrides run-file {from_file[0]}")
        params = {**params, from_file[0]: None}
    return params


def _make_config(command: str, params: Dict[str, Any]) -> RunConfig:
    ctx = click.get_current_context()
    root = ctx.find_root()
    params = _drop_file_unit(ctx, params)
    try:
        return RunConfig(
            command=command,
            parameters=params,
            output_format=root.obj["format"],
            output=root.obj["output"],
            workers=root.obj["workers"],
        )
    except DomainError as e:
        raise click.UsageError(str(e))


@click.group(help=f"Analog quantum search lab. Commands: {', '.join(COMMANDS)}.")
@click.option("--config", "config_file", type=click.Path(exists=True, dir_okay=False),
              help="Flat key=value run file for the invoked command.")
@click.option("--config-dir", type=click.Path(file_okay=False),
              help="Directory holding defaults.json and writers.json.")
@click.option("--format", "output_format", type=click.Choice(OUTPUT_FORMATS), default="csv",
              show_default=True, help="Result document format.")
@click.option("--output", default="-", show_default=True, help="Output path, '-' for stdout.")
@click.option("--log-level", default="INFO", show_default=True,
              type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False))
@click.option("--log-file", type=click.Path(dir_okay=False), help="Also log to this file.")
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True,
              help="Worker threads for sweeps and the bounds harness.")
@click.pass_context
def cli(ctx, config_file, config_dir, output_format, output, log_level, log_file, workers):
    obj = ctx.ensure_object(dict)
    obj.update(config_dir=config_dir, format=output_format, output=output, workers=workers)
    if not obj.get("parse_only"):
        setup_logging(log_level, log_file)

    if config_file and ctx.invoked_subcommand:
        command = cli.get_command(ctx, ctx.invoked_subcommand)
        ctx.default_map = {ctx.invoked_subcommand: _file_defaults(config_file, command)}
        logger.debug(f"Loaded run file {config_file}")


@cli.result_callback()
@click.pass_context
def execute(ctx, config: RunConfig, **kwargs):
    """Run the parsed command and emit its document."""
    if ctx.obj.get("parse_only"):
        return config
    try:
        runner = LabRunner(config_dir=ctx.obj["config_dir"])
        doc = runner.run(config)
        runner.write_document(doc, config.output_format, config.output)
        if doc.metadata.get("all_hold") is False:
            raise NumericError("at least one proof inequality failed; see the holds column")
    except DomainError as e:
        logger.error(str(e))
        raise click.UsageError(str(e))
    except (NumericError, ResourceError) as e:
        logger.error(str(e))
        raise click.ClickException(str(e))
    return config


@cli.command()
@click.option("--x", "x", type=OVERLAP, help="Overlap <s|w>.")
@click.option("--gamma", type=GAMMA, help="Driver energy ratio E'/E.")
@physics_options
@click.option("--t-max", type=POSITIVE, help="End of the time grid (default two special peak times).")
@click.option("--points", type=click.IntRange(min=2), help="Number of time samples.")
def curve(**params):
    """Modified and original transition probabilities over time."""
    return _make_config("curve", params)


@cli.command()
@click.option("--x-points", type=click.IntRange(min=1))
@click.option("--gamma-points", type=click.IntRange(min=1))
@click.option("--gamma-max", type=click.FloatRange(min=1.0, min_open=True))
def maxfid(**params):
    """Peak fidelity over the (x, gamma) plane."""
    return _make_config("maxfid", params)


@cli.command()
@click.option("--gamma", "gammas", type=GAMMA, multiple=True, help="Energy ratio; repeatable.")
@click.option("--x-points", type=click.IntRange(min=1))
def delta(**params):
    """Imperfection angle against overlap for several energy ratios."""
    return _make_config("delta", params)


@cli.command()
@click.option("--ratio", "ratios", type=POSITIVE, multiple=True, help="Prior ratio; repeatable.")
@click.option("--points", type=click.IntRange(min=2))
def discrim(**params):
    """Fidelity deficit and minimum discrimination error against delta."""
    return _make_config("discrim", params)


@cli.command()
@click.option("--dim", type=click.IntRange(min=4), help="Hilbert space dimension N.")
@click.option("--delta", type=click.FloatRange(0.0, math.pi / 2))
@physics_options
def bound(**params):
    """Lower bounds on the search time."""
    return _make_config("bound", params)


@cli.command("verify-proof")
@click.option("--dim", "dims", type=click.IntRange(min=4), multiple=True)
@click.option("--gamma", "gammas", type=GAMMA, multiple=True)
@physics_options
@click.option("--points", type=click.IntRange(min=2), help="Time samples up to the peak time.")
def verify_proof(**params):
    """Check the distance inequalities of the optimality argument."""
    return _make_config("verify-proof", params)


@cli.command()
@click.option("--x-points", type=click.IntRange(min=1))
@click.option("--gamma-points", type=click.IntRange(min=1))
@click.option("--gamma-max", type=click.FloatRange(min=1.0, min_open=True))
@click.option("--threshold", type=click.FloatRange(0.0, 1.0, max_open=True))
@click.option("--alpha", type=POSITIVE, help="Prior asymmetry p_wtilde / p_w.")
def regions(**params):
    """Region masks R_t, R_P and r_P over the (x, gamma) plane."""
    return _make_config("regions", params)


@cli.command()
@click.option("--x", "x_list", type=OPEN_OVERLAP, multiple=True, help="Overlap; repeatable.")
@click.option("--gamma", type=GAMMA)
@click.option("--alpha", type=POSITIVE)
@physics_options
def table1(**params):
    """Peak fidelity, error bounds and run times per overlap."""
    return _make_config("table1", params)


@cli.command()
@click.option("--kind", type=click.Choice(PRIOR_KINDS))
@click.option("--dim", type=click.IntRange(min=2))
@click.option("--sigma-sq", "sigma_sqs", type=POSITIVE, multiple=True)
@click.option("--xbar", "x_bars", type=OPEN_OVERLAP, multiple=True)
def prior(**params):
    """Probability that the overlap exceeds x_bar under a target prior."""
    return _make_config("prior", params)


@cli.command()
@click.option("--x", "x", type=OVERLAP)
@click.option("--gamma", type=GAMMA)
@physics_options
@click.option("--threshold", "thresholds", type=PROBABILITY, multiple=True)
def crossing(**params):
    """First times at which each curve reaches the thresholds."""
    return _make_config("crossing", params)


def parse_args(argv: Sequence[str]) -> Optional[RunConfig]:
    """Parse without running; raises click.UsageError on bad input."""
    result = cli.main(args=list(argv), prog_name="analog-search-lab",
                      standalone_mode=False, obj={"parse_only": True})
    return result if isinstance(result, RunConfig) else None


def main(argv: Optional[List[str]] = None):
    cli.main(args=argv, prog_name="analog-search-lab")


if __name__ == "__main__":
    main()
