"""
Command group creation for hypocalc.
This module creates the click group and the handler registry that command
modules import.
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import click
import pandas as pd

from config_manager import OUTPUT_FORMATS, RunConfig, config
from utils.verdicts import Status

USAGE_ERROR = 3


@dataclass
class CommandOutcome:
    """What a handler hands back to run(): the report body and the statuses behind the exit code."""

    result: Dict[str, Any]
    statuses: List[Status]
    certificates: Dict[str, Any] = field(default_factory=dict)
    tags: List[str] = field(default_factory=list)
    tables: Dict[str, pd.DataFrame] = field(default_factory=dict)
    stem: Optional[str] = None


handlers: Dict[str, Callable[[RunConfig], CommandOutcome]] = {}


def handler(name: str):
    """Register the computation behind a subcommand."""
    def decorate(fn):
        handlers[name] = fn
        return fn
    return decorate


class HypocalcGroup(click.Group):
    """click group whose usage errors exit with status 3."""

    def make_context(self, info_name, args, parent=None, **extra):
        try:
            return super().make_context(info_name, args, parent=parent, **extra)
        except click.UsageError as e:
            e.exit_code = USAGE_ERROR
            raise

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except click.UsageError as e:
            e.exit_code = USAGE_ERROR
            raise


@click.group(cls=HypocalcGroup)
@click.option('--config', 'config_path', type=click.Path(dir_okay=False), default=None,
              help="YAML configuration overriding config.yaml")
@click.option('--output-dir', default=None, help="Directory for report files")
@click.option('--format', 'output_format', type=click.Choice(OUTPUT_FORMATS), default=None,
              help="Report format")
@click.option('--seed', type=int, default=None, help="Seed for randomized fields")
@click.pass_context
def cli(ctx, config_path, output_dir, output_format, seed):
    """Global hypoellipticity and solvability toolkit for tube-type systems on tori."""
    if config_path is not None:
        config.use(config_path)
    ctx.ensure_object(dict)
    ctx.obj.update({'output_dir': output_dir, 'output_format': output_format, 'seed': seed})


def build_run_config(ctx: click.Context, command: str, **options) -> RunConfig:
    """RunConfig from the group options plus the subcommand's own; bad flags are usage errors."""
    shared = ctx.find_root().obj or {}
    try:
        return RunConfig.from_options(command, output_dir=shared.get('output_dir'),
                                      output_format=shared.get('output_format'),
                                      seed=shared.get('seed'), **options)
    except ValueError as e:
        raise click.UsageError(str(e), ctx=ctx) from e


def decay_status(report) -> Status:
    """RapidDecay holds, PolynomialGrowth fails, anything else is undetermined."""
    verdict = getattr(report.verdict, 'value', report.verdict)
    if verdict == 'RapidDecay':
        return Status.HOLDS
    if verdict == 'PolynomialGrowth':
        return Status.FAILS
    return Status.UNDETERMINED
