"""
Diophantine scan commands for hypocalc.
"""

import click
import pandas as pd

from app_instance import CommandOutcome, build_run_config, cli, handler
from config_manager import RunConfig
from utils.diophantine import DiophantineStatus, classify_sa, exp_lower_bound_check, gs_condition_check
from utils.file_parsers import load_json, parse_alphas, parse_system
from utils.verdicts import Status

_SA_STATUS = {
    DiophantineStatus.NOT_SA: Status.HOLDS,
    DiophantineStatus.SA: Status.FAILS,
}
_GS_STATUS = {
    DiophantineStatus.HOLDS: Status.HOLDS,
    DiophantineStatus.FAILS: Status.FAILS,
}


def load_alphas(path: str):
    """Constants from an alphas document or from a closed system document."""
    doc = load_json(path)
    if isinstance(doc, dict) and 'n' in doc:
        return parse_system(doc).alphas()
    return parse_alphas(doc)


@cli.command('scan')
@click.argument('system_path', type=click.Path())
@click.option('--xi-max', type=int, default=None, help="Largest |xi| scanned")
@click.option('--depth', type=int, default=None, help="Witness entries to build")
@click.option('--ell', type=int, default=None,
              help="Also check the exponential lower bound at this order for every scanned xi")
@click.pass_context
def scan_command(ctx, system_path, xi_max, depth, ell):
    """Simultaneous approximability and the solvability condition for constant coefficients."""
    if depth is not None and depth < 1:
        raise click.BadParameter("depth must be >= 1", param_hint='--depth')
    if ell is not None and ell < 0:
        raise click.BadParameter("ell must be >= 0", param_hint='--ell')
    return build_run_config(ctx, 'scan', system_path=system_path, xi_max=xi_max, depth=depth, ell=ell)


@handler('scan')
def run_scan(run_config: RunConfig) -> CommandOutcome:
    alphas = load_alphas(run_config.system_path)
    sa = classify_sa(alphas, run_config.xi_max, depth=run_config.options.get('depth'),
                     workers=run_config.workers)
    gs = gs_condition_check(alphas, run_config.xi_max, workers=run_config.workers)
    body = {
        'alphas': [a.to_dict() for a in alphas],
        'simultaneous_approximability': sa.status.value,
        'solvability_condition': gs.status.value,
    }
    certificates = {'simultaneous-approximability': sa.certificate(),
                    'solvability-condition': gs.certificate()}
    tags = ['simultaneous-approximability', 'solvability-condition', *sa.notes, *gs.notes]
    tables = {'scan': sa.scan.to_frame()}

    ell = run_config.options.get('ell')
    if ell is not None:
        rows = []
        for j, alpha in enumerate(alphas, start=1):
            for xi in range(1, run_config.xi_max + 1):
                check = exp_lower_bound_check(alpha, xi, ell)
                rows.append({'j': j, 'xi': xi, 'hypothesis': check.hypothesis_holds,
                             'conclusion': check.conclusion_holds, 'distance': check.distance,
                             'modulus': check.modulus})
        frame = pd.DataFrame(rows)
        body['exponential_bound'] = {'ell': ell, 'checked': len(rows),
                                     'hypothesis_count': int(frame['hypothesis'].sum()),
                                     'conclusion_count': int(frame['conclusion'].sum())}
        tags.append('exponential-lower-bound')
        tables['exp_bound'] = frame

    statuses = [_SA_STATUS.get(sa.status, Status.UNDETERMINED), _GS_STATUS.get(gs.status, Status.UNDETERMINED)]
    return CommandOutcome(body, statuses, certificates=certificates, tags=tags, tables=tables)
