"""
Decay diagnostics for hypocalc.
"""

import click

from app_instance import CommandOutcome, build_run_config, cli, decay_status, handler
from config_manager import RunConfig
from utils.errors import SpecError
from utils.file_parsers import parse_field
from utils.solver import decay_report


def _parse_point(ctx, param, value):
    if value is None:
        return None
    try:
        return tuple(float(v) for v in value.split(','))
    except ValueError as e:
        raise click.BadParameter(f"expected comma-separated numbers, got '{value}'") from e


@cli.command('decay')
@click.argument('field_path', type=click.Path())
@click.option('--mode', type=click.Choice(('sup_t', 'at_point')), default='sup_t',
              help="Band maxima over all t, or at one base point")
@click.option('--point', callback=_parse_point, default=None,
              help="Base point t in radians, comma-separated (at_point mode)")
@click.option('--threshold', type=float, default=None, help="Exponent required for RapidDecay")
@click.pass_context
def decay_command(ctx, field_path, mode, point, threshold):
    """Dyadic decay profile of a partial Fourier field."""
    if mode == 'at_point' and point is None:
        raise click.BadParameter("at_point mode needs --point", param_hint='--point')
    return build_run_config(ctx, 'decay', system_path=field_path, mode=mode, point=point,
                            threshold=threshold)


@handler('decay')
def run_decay(run_config: RunConfig) -> CommandOutcome:
    u = parse_field(run_config.system_path)
    point = run_config.options.get('point')
    if point is not None and len(point) != u.n:
        raise SpecError(f"point has {len(point)} coordinates, field has n={u.n}")
    report = decay_report(u, run_config.options.get('mode', 'sup_t'), point, run_config.options.get('threshold'))
    body = {'n': u.n, 'xi_window': u.xi_window, 'lossy': u.lossy, 'decay': report.to_dict()}
    return CommandOutcome(body, [decay_status(report)], tags=['dyadic-decay-fit'],
                          tables={'bands': report.to_frame()})
