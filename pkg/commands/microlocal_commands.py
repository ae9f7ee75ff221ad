"""
Microlocal checks for hypocalc: singular directions, symbol inclusion,
elliptic regularity and the t-elliptic cone of the sum of squares.
"""

import logging
import math

import click
import pandas as pd

from app_instance import CommandOutcome, build_run_config, cli, handler
from config_manager import RunConfig
from utils.errors import HypothesisFailed, InclusionFailure, NoConeFound, OutOfClass, SpecError
from utils.file_parsers import parse_field, parse_system
from utils.generate_synthetic_data import (gaussian_fourier_field, gaussian_taper_field, line_fourier_field,
                                           power_law_fourier_field, rough_fourier_field)
from utils.microlocal import (CATALOGUE, Cone, cone_norm_consistency, elliptic_in_direction,
                              elliptic_regularity_limit, kernel_decay_constants, restrict_classical_symbol,
                              singular_directions, t_elliptic_cone_decay, verify_elliptic_regularity,
                              verify_microlocal_inclusion)
from utils.verdicts import Status

CHECKS = ('singular', 'inclusion', 'ellipticity', 'regularity', 't-elliptic')
FIELDS = ('power_law', 'gaussian', 'line', 'rough')


def build_field(kind: str, n: int, window: int, k: float, seed: int):
    """Synthetic full Fourier field by name."""
    if kind == 'power_law':
        return power_law_fourier_field(n, window, k, seed=seed)
    if kind == 'gaussian':
        return gaussian_fourier_field(n, window)
    if kind == 'line':
        return line_fourier_field(n, window)
    return rough_fourier_field(n, window, seed=seed)


def axis_cones(n: int):
    """Cone of aperture pi/4 around e_1 and the inner cone of aperture pi/8."""
    axis = (1.0,) + (0.0,) * (n - 1)
    return Cone(axis, math.pi / 4), Cone(axis, math.pi / 8)


@cli.command('microlocal')
@click.option('--check', type=click.Choice(CHECKS), default='singular', help="Which check to run")
@click.option('--field', 'field_kind', type=click.Choice(FIELDS), default='power_law', help="Synthetic field")
@click.option('--dim', type=int, default=2, help="Torus dimension of the synthetic field")
@click.option('--window', type=int, default=None, help="Lattice window |xi_i| <= window")
@click.option('--power', type=float, default=10.0, help="Decay exponent of the power_law field")
@click.option('--symbol', type=click.Choice(CATALOGUE), default='laplacian', help="Catalogue symbol")
@click.option('--order', type=float, default=None, help="Order of the bessel symbols")
@click.option('--fan-resolution', type=int, default=None, help="Fan cones in the plane")
@click.option('--k-max', type=float, default=None, help="Decay order required inside a cone")
@click.option('--system', 'system_path', type=click.Path(), default=None,
              help="System file (t-elliptic check)")
@click.option('--field-file', type=click.Path(), default=None,
              help="Partial Fourier field (t-elliptic check); defaults to a Gaussian taper")
@click.pass_context
def microlocal_command(ctx, check, field_kind, dim, window, power, symbol, order, fan_resolution, k_max,
                       system_path, field_file):
    """Cone decay, symbol and ellipticity checks on discrete Fourier fields."""
    if dim < 1:
        raise click.BadParameter("dim must be >= 1", param_hint='--dim')
    if window is not None and window < 1:
        raise click.BadParameter("window must be >= 1", param_hint='--window')
    if check == 't-elliptic' and system_path is None:
        raise click.BadParameter("the t-elliptic check needs --system", param_hint='--system')
    return build_run_config(ctx, 'microlocal', system_path=system_path, fan_resolution=fan_resolution,
                            k_max=k_max, check=check, field_kind=field_kind, dim=dim, window=window,
                            power=power, symbol=symbol, order=order, field_file=field_file)


def _status_of(fn):
    """Run a check: success holds, a failed assertion fails, an unmet hypothesis is undetermined."""
    try:
        return Status.HOLDS, fn(), None
    except (InclusionFailure, OutOfClass, NoConeFound) as e:
        return Status.FAILS, None, str(e)
    except HypothesisFailed as e:
        return Status.UNDETERMINED, None, str(e)


@handler('microlocal')
def run_microlocal(run_config: RunConfig) -> CommandOutcome:
    opts = run_config.options
    check = opts['check']
    window = opts.get('window') or 64
    n = opts['dim']
    body = {'check': check}
    tables = {}

    if check == 't-elliptic':
        sys = parse_system(run_config.system_path)
        u = parse_field(opts['field_file']) if opts.get('field_file') else \
            gaussian_taper_field(sys.n, 16, min(run_config.t_window, 8), seed=run_config.seed)
        if u.n != sys.n:
            raise SpecError(f"field has n={u.n}, system has n={sys.n}")
        status, found, message = _status_of(lambda: t_elliptic_cone_decay(sys, u, window, run_config.k_max))
        if found is not None:
            c, report = found
            body.update({'c': c, 'decay': report.to_dict()})
            tables['bands'] = report.to_frame()
        return CommandOutcome({**body, 'message': message}, [status], tags=['t-elliptic-cone'], tables=tables)

    u = build_field(opts['field_kind'], n, window, opts['power'], run_config.seed)
    body['field'] = {'kind': opts['field_kind'], 'n': n, 'window': window}

    if check == 'singular':
        report = singular_directions(u, run_config.fan_resolution, run_config.k_max)
        body['singular_directions'] = report.to_dict()
        tables['directions'] = report.to_frame()
        cone_norm = cone_norm_consistency(u, axis_cones(n)[0], run_config.k_max / 2,
                                          run_config.fan_resolution, run_config.k_max)
        if not cone_norm['consistent']:
            logging.warning("cone norm and singular directions disagree in the e_1 cone")
        body['cone_norm'] = cone_norm
        status = Status.FAILS if report.singular else Status.HOLDS
        return CommandOutcome(body, [status], tags=['singular-directions'], tables=tables)

    cone, inner = axis_cones(n)
    body['cones'] = {'outer': cone.to_dict(), 'inner': inner.to_dict()}
    body['symbol'] = opts['symbol']
    status, a, message = _status_of(lambda: restrict_classical_symbol(opts['symbol'], n, window, order=opts.get('order')))
    if a is None:
        return CommandOutcome({**body, 'message': message}, [status], tags=['symbol-class'])

    if check == 'ellipticity':
        report = elliptic_in_direction(a, cone.axis, cone)
        body['ellipticity'] = report.to_dict()
        body['kernel_constants'] = {str(k): v for k, v in kernel_decay_constants(a).items()}
        tables['bands'] = pd.DataFrame({'band': sorted(report.band_constants),
                                        'constant': [report.band_constants[b] for b in sorted(report.band_constants)]})
        return CommandOutcome(body, [Status.HOLDS if report.elliptic else Status.FAILS],
                              tags=['symbol-class', 'ellipticity'], tables=tables)
    if check == 'inclusion':
        status, report, message = _status_of(lambda: verify_microlocal_inclusion(a, u, cone, inner,
                                                                                 k_max=run_config.k_max))
        body.update({'inclusion': report.to_dict() if report is not None else None, 'message': message})
        return CommandOutcome(body, [status], tags=['symbol-class', 'microlocal-inclusion'])

    status, report, message = _status_of(lambda: verify_elliptic_regularity(a, u, cone, inner))
    body.update({'regularity': report, 'message': message})
    limit_status, limit, limit_message = _status_of(lambda: elliptic_regularity_limit(a, u, cone, inner,
                                                                                   k_max=run_config.k_max))
    body['regularity_limit'] = {'status': limit_status.value, 'report': limit, 'message': limit_message}
    return CommandOutcome(body, [status], tags=['symbol-class', 'elliptic-regularity'])
