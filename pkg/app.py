"""
Main entry point for the hypocalc command line.
"""

import logging
import sys

import click

# Create the command group first
from app_instance import USAGE_ERROR, cli, handlers

# Import all commands (this registers them with the group)
import commands  # noqa: F401

from _version import __version__
from config_manager import RunConfig, config
from utils.errors import HypocalcError, InconsistentVerdict
from utils.reporting import build_report, write_report
from utils.verdicts import exit_code


def _flags(run_config: RunConfig) -> dict:
    flags = {
        'xi_max': run_config.xi_max,
        't_window': run_config.t_window,
        'divisor_floor': run_config.divisor_floor,
        'fan_resolution': run_config.fan_resolution,
        'k_max': run_config.k_max,
        'format': run_config.output_format,
        'seed': run_config.seed,
    }
    flags.update({k: list(v) if isinstance(v, tuple) else v for k, v in sorted(run_config.options.items())})
    return flags


def run(run_config: RunConfig) -> int:
    """
    Execute one subcommand and write its report.

    Returns:
    --------
    int : 0 all hold, 1 any failure, 2 undetermined, 3 usage error
    """
    overrides = {
        'diophantine.xi_max': run_config.xi_max,
        'spectral.t_window': run_config.t_window,
        'solver.divisor_floor': run_config.divisor_floor,
        'microlocal.fan_resolution': run_config.fan_resolution,
        'microlocal.k_max': run_config.k_max,
    }
    with config.overrides(overrides):
        try:
            outcome = handlers[run_config.command](run_config)
        except InconsistentVerdict:
            raise
        except (HypocalcError, ValueError) as e:
            click.echo(f"Error: {e}", err=True)
            return USAGE_ERROR

    report = build_report(run_config.command, outcome.result, outcome.certificates, outcome.tags,
                          _flags(run_config))
    report['statuses'] = [s.value for s in outcome.statuses]
    code = exit_code(outcome.statuses)
    report['exit_code'] = code
    write_report(report, run_config.output_dir, outcome.stem or run_config.command,
                 run_config.output_format, outcome.tables)
    logging.info(f"{run_config.command} finished with exit code {code}")
    return code


@cli.result_callback()
@click.pass_context
def _dispatch(ctx, run_config, **kwargs):
    ctx.exit(run(run_config))


def main(argv=None) -> int:
    logging.basicConfig(level=config.get_logging_config()['level'],
                        format='%(levelname)s %(name)s: %(message)s', stream=sys.stderr)
    logging.debug(f"hypocalc {__version__}")
    return cli.main(args=argv, prog_name='hypocalc', standalone_mode=False)


if __name__ == '__main__':
    try:
        sys.exit(main())
    except click.ClickException as e:
        e.show()
        sys.exit(e.exit_code)
    except click.Abort:
        sys.exit(USAGE_ERROR)
