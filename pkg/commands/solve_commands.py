"""
Solver and counterexample commands for hypocalc.
"""

import click
import pandas as pd

from app_instance import CommandOutcome, build_run_config, cli, decay_status, handler
from config_manager import RunConfig
from utils.diophantine import DiophantineStatus, classify_sa
from utils.file_parsers import parse_field, parse_system
from utils.generate_synthetic_data import gaussian_taper_field
from utils.solver import build_counterexample, decay_report, solve_system
from utils.spectral import add_fields, apply_system_field, from_blocks
from utils.verdicts import Status

MANUFACTURED_TOLERANCE = 1e-8


def _restricted(u, xis):
    return from_blocks(u.n, {xi: u.modes[xi] for xi in xis if xi in u.modes}, u.xi_window)


def _recovery_error(u, u0, xis) -> float:
    expected = _restricted(u0, xis)
    norm = expected.l2_norm()
    return add_fields(u, expected, -1.0).l2_norm() / norm if norm > 0 else 0.0


@cli.command('solve')
@click.argument('system_path', type=click.Path())
@click.argument('rhs_paths', nargs=-1, type=click.Path())
@click.option('--xi-max', type=int, default=None, help="xi-window of the manufactured solution")
@click.option('--t-window', type=int, default=None, help="t-window of the manufactured solution")
@click.option('--divisor-floor', type=float, default=None, help="Smallest divisor the solver inverts")
@click.pass_context
def solve_command(ctx, system_path, rhs_paths, xi_max, t_window, divisor_floor):
    """Solve X_j u = f_j; without right-hand sides, recover a manufactured solution."""
    return build_run_config(ctx, 'solve', system_path=system_path, xi_max=xi_max, t_window=t_window,
                            divisor_floor=divisor_floor, rhs_paths=list(rhs_paths))


@handler('solve')
def run_solve(run_config: RunConfig) -> CommandOutcome:
    sys = parse_system(run_config.system_path)
    rhs_paths = run_config.options.get('rhs_paths') or []
    manufactured = None
    if rhs_paths:
        f_list = [parse_field(path) for path in rhs_paths]
    else:
        manufactured = gaussian_taper_field(sys.n, min(run_config.xi_max, 32), min(run_config.t_window, 8),
                                            seed=run_config.seed, include_zero=False)
        f_list = [apply_system_field(manufactured, sys, j) for j in range(1, sys.n + 1)]

    u, report = solve_system(f_list, sys)
    u_decay = decay_report(u)
    body = {'solve': report.to_dict(), 'decay': u_decay.to_dict(), 'solution': u.to_dict()}
    statuses = [Status.UNDETERMINED if report.obstructions else Status.HOLDS]
    if manufactured is not None:
        error = _recovery_error(u, manufactured, report.chosen)
        body['manufactured'] = {'relative_error': error, 'tolerance': MANUFACTURED_TOLERANCE}
        statuses.append(Status.HOLDS if error <= MANUFACTURED_TOLERANCE else Status.FAILS)

    modes = pd.DataFrame({
        'xi': sorted(report.residuals),
        'field': [report.chosen[xi] for xi in sorted(report.residuals)],
        'residual': [report.residuals[xi] for xi in sorted(report.residuals)],
    })
    tags = ['mode-solver'] + sorted({o.reason for o in report.obstructions})
    return CommandOutcome(body, statuses, certificates={'solve': report.to_dict()}, tags=tags,
                          tables={'modes': modes, 'decay': u_decay.to_frame()})


@cli.command('counterexample')
@click.argument('system_path', type=click.Path())
@click.option('--xi-max', type=int, default=None, help="Largest |xi| scanned")
@click.option('--depth', type=int, default=None, help="Witness levels to materialise")
@click.pass_context
def counterexample_command(ctx, system_path, xi_max, depth):
    """Build a non-smooth u with smooth X_j u from a simultaneous approximation witness."""
    if depth is not None and depth < 1:
        raise click.BadParameter("depth must be >= 1", param_hint='--depth')
    return build_run_config(ctx, 'counterexample', system_path=system_path, xi_max=xi_max, depth=depth)


@handler('counterexample')
def run_counterexample(run_config: RunConfig) -> CommandOutcome:
    sys = parse_system(run_config.system_path)
    depth = run_config.options.get('depth')
    sa = classify_sa(sys.alphas(), run_config.xi_max, depth=depth, workers=run_config.workers)
    certificates = {'simultaneous-approximability': sa.certificate()}
    if sa.status is not DiophantineStatus.SA:
        status = Status.HOLDS if sa.status is DiophantineStatus.NOT_SA else Status.UNDETERMINED
        body = {'simultaneous_approximability': sa.status.value, 'counterexample': None}
        return CommandOutcome(body, [status], certificates=certificates,
                              tags=['simultaneous-approximability'])

    _, report = build_counterexample(sa.witness, sys, min(depth or len(sa.witness), len(sa.witness)))
    certificates['counterexample'] = report.to_dict()
    body = {
        'simultaneous_approximability': sa.status.value,
        'counterexample': report.to_dict(),
        'u_status': decay_status(report.u_decay).value,
        'x_status': [decay_status(d).value for d in report.x_decays],
    }
    levels = pd.DataFrame([{
        'nu': lv.nu, 'xi': str(lv.xi), 'materialized': lv.materialized, 'sup_u': lv.sup_u,
        'log_p': lv.log_p, 'log_bound': lv.log_bound,
        **{f"log_x{j + 1}": value for j, value in enumerate(lv.log_x)},
    } for lv in report.levels])
    return CommandOutcome(body, [Status.FAILS], certificates=certificates,
                          tags=['simultaneous-approximability', 'counterexample', *sa.notes],
                          tables={'levels': levels})
