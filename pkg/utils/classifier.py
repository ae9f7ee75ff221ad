"""
Verdict engine for global hypoellipticity (GH), almost global
hypoellipticity (AGH) and global solvability (GS) of the system X, its
averaged system X0 and the sum of squares P.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from config_manager import config
from .coeffs import SystemSpec, TrigPoly, exact_value_at, finite_type_exists, pythagorean_value_at
from .diophantine import (DiophantineStatus, DiophantineVerdict, ExactReal, QuadraticIrrational,
                          Rational, add_exact, classify_sa, gs_condition_check)
from .errors import HypothesisFailed, InconsistentVerdict
from .generate_synthetic_data import axis_line_field, gaussian_taper_field
from .solver import PropagationInput, build_counterexample, decay_report, propagation_check, solve_system
from .spectral import PartialFourierField, add_fields, apply_system_field
from .verdicts import Property, Reason, Status, Verdict

ALL_PROPERTIES = tuple(Property)


@dataclass(frozen=True)
class RangeSearch:
    """Outcome of searching the range of the averaged coefficients."""

    status: DiophantineStatus
    coordinate: Optional[int] = None
    certificate: Optional[Dict[str, Any]] = None


def _quad_from_eighths(a: Fraction, b: Fraction) -> ExactReal:
    return Rational(a) if b == 0 else QuadraticIrrational(a, b, 2)


def range_search(sys: SystemSpec) -> RangeSearch:
    """Look for a quadratic irrational in the range of some non-constant a_{j0}.

    Values are taken exactly at the grid points 2 pi m / 8.  A grid value
    a + b sqrt(2) with b != 0 is itself a witness; two distinct values v1
    < v2 certify the intermediate value v1 + (v2 - v1)(sqrt(2) - 1).  When
    the eighths grid sees a single value (frequencies divisible by 8), the
    search moves to the points t_j = m_j theta with cos(theta) = 3/5.
    """
    for j in range(1, sys.n + 1):
        varying = sys.averaged_part(j)
        if varying.is_zero():
            continue
        mean = sys.mean(j)
        constant = sys.constants[j - 1]
        seen: Dict[Tuple[Fraction, Fraction], Tuple[int, ...]] = {}
        for point in itertools.product(range(8), repeat=sys.n):
            a, b = exact_value_at(mean, point)
            seen.setdefault((a, b), point)
        irrational = sorted((v, p) for v, p in seen.items() if v[1] != 0)
        if irrational:
            (a, b), point = irrational[0]
            value = add_exact(_quad_from_eighths(a, b), constant)
            return RangeSearch(DiophantineStatus.NOT_SA, j, {
                'kind': 'grid-value', 'coordinate': j, 'point_eighths': list(point),
                'value': value.to_dict()})
        rationals = sorted(a for a, _ in seen)
        if len(rationals) < 2 or rationals[0] == rationals[-1]:
            rationals, grid = _pythagorean_values(mean), 'pythagorean'
        else:
            grid = 'eighths'
        if len(rationals) >= 2 and rationals[0] != rationals[-1]:
            v1, v2 = rationals[0], rationals[-1]
            witness = QuadraticIrrational(v1 - (v2 - v1), v2 - v1, 2)
            value = add_exact(witness, constant)
            return RangeSearch(DiophantineStatus.NOT_SA, j, {
                'kind': 'intermediate-value', 'coordinate': j, 'grid': grid,
                'endpoints': [f"{v1.numerator}/{v1.denominator}", f"{v2.numerator}/{v2.denominator}"],
                'value': value.to_dict()})
    return RangeSearch(DiophantineStatus.UNDETERMINED)


def _pythagorean_values(mean: TrigPoly) -> List[Fraction]:
    """Two distinct exact values of a non-constant mean, sorted; one value if it is constant."""
    first = None
    for point in itertools.product(range(2 * mean.bandwidth + 1), repeat=mean.dim):
        value = pythagorean_value_at(mean, point)
        if first is None:
            first = value
        elif value != first:
            return sorted((first, value))
    return [] if first is None else [first]


def _all_constant(sys: SystemSpec) -> bool:
    return all(sys.averaged_part(j).is_zero() for j in range(1, sys.n + 1))


def _averaged_alphas(sys: SystemSpec) -> List[ExactReal]:
    return [sys.constant_term(j) for j in range(1, sys.n + 1)]


def _status_from_sa(verdict: DiophantineVerdict) -> Status:
    return {DiophantineStatus.NOT_SA: Status.HOLDS,
            DiophantineStatus.SA: Status.FAILS}.get(verdict.status, Status.UNDETERMINED)


def _status_from_gs(verdict: DiophantineVerdict) -> Status:
    return {DiophantineStatus.HOLDS: Status.HOLDS,
            DiophantineStatus.FAILS: Status.FAILS}.get(verdict.status, Status.UNDETERMINED)


@dataclass(frozen=True)
class Classification:
    verdicts: Dict[Property, Verdict]
    certificates: Dict[str, Dict[str, Any]]

    def status(self, prop: Property) -> Status:
        return self.verdicts[prop].status

    def to_dict(self) -> Dict[str, Any]:
        return {'verdicts': [self.verdicts[p].to_dict() for p in ALL_PROPERTIES],
                'certificates': self.certificates}


def classify(sys: SystemSpec, xi_max: Optional[int] = None, include_xi_zero: bool = True,
             workers: int = 1) -> Classification:
    """Nine verdicts for X, P and X0 with their reason chains."""
    xi_max = xi_max or int(config.get('diophantine.xi_max', 256))
    certificates: Dict[str, Dict[str, Any]] = {}
    verdicts: Dict[Property, Verdict] = {}

    # averaged system X0
    if _all_constant(sys):
        alphas = _averaged_alphas(sys)
        sa = classify_sa(alphas, xi_max, workers=workers)
        gs = gs_condition_check(alphas, xi_max, include_xi_zero=include_xi_zero, workers=workers)
        certificates['simultaneous-approximability'] = sa.certificate()
        certificates['solvability-condition'] = gs.certificate()
        gh0 = _status_from_sa(sa)
        gs0 = _status_from_gs(gs)
        gh0_reason = Reason('simultaneous-approximability', 'simultaneous-approximability')
        gs0_reason = Reason('solvability-condition', 'solvability-condition')
    else:
        search = range_search(sys)
        if search.status is DiophantineStatus.NOT_SA:
            certificates['range-search'] = search.certificate
            gh0 = Status.HOLDS
            tag = 'intermediate-value' if search.certificate['kind'] == 'intermediate-value' else 'range-search'
            gh0_reason = Reason(tag, 'range-search')
            gs0 = Status.HOLDS
            gs0_reason = Reason('hypoellipticity-implies-solvability', 'range-search')
        else:
            certificates['range-search'] = {'kind': 'inconclusive'}
            gh0 = gs0 = Status.UNDETERMINED
            gh0_reason = gs0_reason = Reason('range-search', 'range-search')

    verdicts[Property.GH_X0] = Verdict(Property.GH_X0, gh0, (gh0_reason,))
    verdicts[Property.GS_X0] = Verdict(Property.GS_X0, gs0, (gs0_reason,))
    verdicts[Property.AGH_X0] = Verdict(Property.AGH_X0, gs0, (Reason('solvability-equivalence', gs0_reason.certificate),))

    report = finite_type_exists(sys)
    if report.exists:
        certificates['finite-type'] = report.to_dict()
        reason = Reason('finite-type-propagation', 'finite-type')
        for prop in (Property.GH_X, Property.GH_P, Property.GS_X, Property.GS_P, Property.AGH_X, Property.AGH_P):
            verdicts[prop] = Verdict(prop, Status.HOLDS, (reason,))
    else:
        certificates['finite-type'] = report.to_dict()
        chain = (Reason('averaged-system-equivalence', gh0_reason.certificate),)
        verdicts[Property.GH_X] = Verdict(Property.GH_X, gh0, chain)
        verdicts[Property.GH_P] = Verdict(Property.GH_P, gh0, chain + (Reason('system-sum-equivalence', 'finite-type'),))
        gs_chain = (Reason('solvability-equivalence', gs0_reason.certificate),)
        for prop in (Property.GS_X, Property.GS_P, Property.AGH_X, Property.AGH_P):
            verdicts[prop] = Verdict(prop, gs0, gs_chain)

    result = Classification(verdicts, certificates)
    check_equivalence_closure(result)
    logging.info("verdicts: " + ", ".join(f"{p.value}={result.status(p).value}" for p in ALL_PROPERTIES))
    return result


def check_equivalence_closure(result: Classification) -> None:
    """Independent pass over the equivalences between the nine verdicts."""
    s = result.status
    if s(Property.GH_X) is not s(Property.GH_P):
        raise InconsistentVerdict("GH(X) and GH(P) differ")
    solvability = {s(Property.GS_X), s(Property.GS_P), s(Property.AGH_X), s(Property.AGH_P)}
    if len(solvability) != 1:
        raise InconsistentVerdict("GS(X), GS(P), AGH(X), AGH(P) differ")
    if s(Property.GS_X0) is not s(Property.AGH_X0):
        raise InconsistentVerdict("GS(X0) and AGH(X0) differ")
    if s(Property.GH_X) is Status.HOLDS and s(Property.GS_X) is not Status.HOLDS:
        raise InconsistentVerdict("GH(X) holds but GS(X) does not")
    if s(Property.GH_X0) is Status.HOLDS and s(Property.GS_X0) is not Status.HOLDS:
        raise InconsistentVerdict("GH(X0) holds but GS(X0) does not")
    if 'finite-type' in result.certificates and not result.certificates['finite-type']['exists']:
        if s(Property.GH_X) is not s(Property.GH_X0):
            raise InconsistentVerdict("GH(X) and GH(X0) differ without a finite-type point")
        if s(Property.GS_X) is not s(Property.GS_X0):
            raise InconsistentVerdict("GS(X) and GS(X0) differ without a finite-type point")


# ---------------------------------------------------------------------------
# numerical cross validation
# ---------------------------------------------------------------------------

def cross_validate(sys: SystemSpec, result: Classification, xi_window: int = 64,
                   t_window: int = 4, seed: Optional[int] = None,
                   u: Optional[PartialFourierField] = None) -> Dict[str, Any]:
    """Confirm verdicts numerically; contradictions raise InconsistentVerdict.

    ``u`` replaces the tapered field of the finite-type check.  A check
    whose hypotheses do not hold on its own field is a contradiction too.
    """
    seed = seed if seed is not None else int(config.get('cli.seed', 20261018))
    gh = result.status(Property.GH_X)
    report: Dict[str, Any] = {'checks': []}

    if gh is Status.FAILS and _all_constant(sys):
        alphas = _averaged_alphas(sys)
        if all(isinstance(a, Rational) for a in alphas) and all(a.value == 0 for a in alphas) \
                and all(c.is_zero() for c in sys.coefficients):
            u = axis_line_field(sys.n, xi_window, seed=seed)
            rhs = [apply_system_field(u, sys, j) for j in range(1, sys.n + 1)]
            u_decay = decay_report(u)
            if u_decay.is_rapid or not all(f.is_zero() for f in rhs):
                raise InconsistentVerdict("x-only field does not confirm the failure of GH")
            report['checks'].append({'kind': 'x-only-kernel', 'u_decay': u_decay.to_dict(),
                                     'x_decay': 'RapidDecay(inf)'})
        else:
            sa = classify_sa(alphas, 16)
            depth = int(config.get('diophantine.witness_depth', 4))
            u, cx = build_counterexample(sa.witness, sys, min(depth, len(sa.witness)))
            if cx.u_decay.is_rapid or not all(d.is_rapid for d in cx.x_decays) or not cx.p_decay.is_rapid:
                raise InconsistentVerdict("counterexample does not separate u from X u")
            report['checks'].append({'kind': 'counterexample', **cx.to_dict()})
    elif gh is Status.HOLDS and 'finite-type' in result.certificates and result.certificates['finite-type']['exists']:
        ft = finite_type_exists(sys)
        if u is None:
            # narrow taper: the band maxima fall far faster than the k = 3 threshold
            u = gaussian_taper_field(sys.n, 32, min(t_window, 3), sigma=0.5, seed=seed,
                                     include_zero=False)
        rhs = tuple(apply_system_field(u, sys, j) for j in range(1, sys.n + 1))
        try:
            verdict = propagation_check(PropagationInput(u, ft.witness_radians(), rhs, sys, ft), k=3)
        except HypothesisFailed as e:
            raise InconsistentVerdict(f"propagation cross-check could not run: {e}") from e
        if verdict.status is not Status.HOLDS:
            raise InconsistentVerdict("propagation did not confirm GH at a finite-type point")
        report['checks'].append({'kind': 'propagation', 'verdict': verdict.to_dict(),
                                 'sweep': verdict.certificates['sweep']})
    elif gh is Status.HOLDS and _all_constant(sys):
        u0 = gaussian_taper_field(sys.n, min(xi_window, 16), t_window, seed=seed, include_zero=False)
        rhs = [apply_system_field(u0, sys, j) for j in range(1, sys.n + 1)]
        u, solve = solve_system(rhs, sys)
        error = _relative_error(u, u0)
        if solve.obstructions or error > 1e-8:
            raise InconsistentVerdict(f"solver round trip failed (relative error {error:.2e})")
        report['checks'].append({'kind': 'solve-round-trip', 'relative_error': error})
    else:
        report['checks'].append({'kind': 'none', 'reason': f"GH(X) {gh.value}"})
    return report


def _relative_error(u, u0) -> float:
    norm = u0.l2_norm()
    return add_fields(u, u0, -1.0).l2_norm() / norm if norm > 0 else 0.0
