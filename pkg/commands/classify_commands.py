"""
Classification commands for hypocalc.
"""

import click
import pandas as pd

from app_instance import CommandOutcome, build_run_config, cli, handler
from config_manager import RunConfig
from utils.classifier import ALL_PROPERTIES, classify, cross_validate
from utils.file_parsers import parse_system


@cli.command('classify')
@click.argument('system_path', type=click.Path())
@click.option('--xi-max', type=int, default=None, help="Largest |xi| scanned")
@click.option('--xi-zero/--no-xi-zero', default=True,
              help="Include the xi = 0 stratum in the solvability condition")
@click.option('--cross-validate/--no-cross-validate', 'cross', default=False,
              help="Confirm the GH verdict numerically")
@click.pass_context
def classify_command(ctx, system_path, xi_max, xi_zero, cross):
    """Nine GH/GS/AGH verdicts for X, P and the averaged system X0."""
    return build_run_config(ctx, 'classify', system_path=system_path, xi_max=xi_max,
                            include_xi_zero=xi_zero, cross_validate=cross)


@handler('classify')
def run_classify(run_config: RunConfig) -> CommandOutcome:
    sys = parse_system(run_config.system_path)
    result = classify(sys, run_config.xi_max, run_config.options.get('include_xi_zero', True),
                      workers=run_config.workers)
    body = {'system': sys.to_dict(), 'verdicts': [result.verdicts[p].to_dict() for p in ALL_PROPERTIES]}
    if run_config.options.get('cross_validate'):
        body['cross_validation'] = cross_validate(sys, result, t_window=min(run_config.t_window, 8),
                                                  seed=run_config.seed)

    tags = [reason.tag for v in result.verdicts.values() for reason in v.reasons]
    table = pd.DataFrame({
        'property': [p.value for p in ALL_PROPERTIES],
        'status': [result.status(p).value for p in ALL_PROPERTIES],
        'reasons': [';'.join(r.tag for r in result.verdicts[p].reasons) for p in ALL_PROPERTIES],
    })
    return CommandOutcome(body, [result.status(p) for p in ALL_PROPERTIES],
                          certificates=result.certificates, tags=tags, tables={'verdicts': table})
