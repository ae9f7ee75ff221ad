"""
Mode-by-mode solutions of X_j u = f, counterexample distributions built
from witness sequences, decay diagnostics and the numerical propagation
of regularity from a single base point.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import comb

from config_manager import config
from .calculations import DecayReport, band_table, fit_decay_profile
from .coeffs import (FiniteTypeReport, SystemSpec, TrigPoly, global_primitive_A,
                     mean_in_variable, partial_derivative, primitive_A_j)
from .diophantine import (ExactReal, FloatApprox, Rational, WitnessSequence, dist_to_integer,
                          log_abs, offset_value, scaled_enclosure)
from .errors import (DivisorTooSmall, HypothesisFailed, InconsistentVerdict, Resonance,
                     SpecError)
from .spectral import (ModeBlock, PartialFourierField, _analyze_grid, _synthesize_grid,
                       add_fields, apply_system_field, conjugate_block,
                       diagonal_symbol, from_blocks, get_spectral_settings, modulus_at, phase_width,
                       split_coefficient, sup_difference, sup_modulus, vector_field_block)
from .verdicts import Reason, Status, Verdict


def get_solver_settings() -> Dict[str, float]:
    defaults = config.get_solver_defaults()
    return {
        'divisor_floor': float(defaults['divisor_floor']),
        'residual_tolerance': float(defaults['residual_tolerance']),
    }


# ---------------------------------------------------------------------------
# small divisors
# ---------------------------------------------------------------------------

def _averaged(sys: SystemSpec, j: int) -> Tuple[TrigPoly, ExactReal]:
    """a_{j0} split into its varying part and its exact constant."""
    return split_coefficient(mean_in_variable(sys.coefficient(j), j), sys.constants[j - 1])


def _phase_fraction(alpha: ExactReal, xi: int) -> float:
    lo, hi = scaled_enclosure(alpha, xi, 64)
    mid = (lo + hi) / 2
    return float(mid - math.floor(mid))


def is_resonant(sys: SystemSpec, j: int, xi: int) -> bool:
    """exp(2 pi i a_{j0} xi) = 1 somewhere (exactly where the tags allow)."""
    if xi == 0:
        return True
    varying, alpha = _averaged(sys, j)
    if varying.is_zero():
        if isinstance(alpha, Rational):
            return (alpha.value * xi).denominator == 1
        if isinstance(alpha, FloatApprox):
            x = alpha.value * xi
            return abs(x - round(x)) < 1e-14
        return False
    values = (varying.grid_values(4 * (varying.bandwidth + 1)) + float(alpha)) * xi
    return bool(np.min(np.abs(values - np.round(values))) < 1e-14)


def mode_divisor(sys: SystemSpec, j: int, xi: int) -> float:
    """min over the grid of |exp(2 pi i a_{j0}(t) xi) - 1|."""
    if xi == 0:
        return 0.0
    varying, alpha = _averaged(sys, j)
    if varying.is_zero():
        dist = dist_to_integer(alpha, xi)
        if dist is not None:
            d = float((dist[0] + dist[1]) / 2)
        else:
            frac = _phase_fraction(alpha, xi)
            d = min(frac, 1.0 - frac)
        return 2.0 * math.sin(math.pi * d)
    values = (varying.grid_values(4 * (varying.bandwidth + 1)) + float(alpha)) * xi
    return float(np.min(2.0 * np.abs(np.sin(np.pi * values))))


# ---------------------------------------------------------------------------
# mode solver
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ModeSolution:
    xi: int
    j: int
    block: ModeBlock
    divisor: float
    residual: float
    lossy: bool


def _solve_averaged(g: ModeBlock, xi: int, j: int, varying: TrigPoly, alpha: ExactReal) -> ModeBlock:
    """Solve (d/dt_j + i a_{j0}(t) xi) w = g for a_{j0} independent of t_j."""
    n = g.dim
    w = g.width
    if varying.is_zero():
        taus = [int(g.center[j - 1]) + r for r in range(-w, w + 1)]
        symbol = diagonal_symbol(alpha, xi, taus)
        shape = [1] * n
        shape[j - 1] = 2 * w + 1
        symbol = symbol.reshape(shape)
        # the period integral of exp(i (tau + beta) s) carries the divisor exp(2 pi i beta) - 1 as a
        # factor, so the averaging formula reduces to 1 / (i (tau + beta)); zero and small
        # divisors are rejected in solve_mode
        return ModeBlock(g.center, g.coeffs / (1j * symbol))

    guard = get_spectral_settings()['phase_guard']
    width = w + guard
    m = 2 * width + 1
    values = _synthesize_grid(g.coeffs, m)
    line = np.fft.fft(values, axis=j - 1) / m
    rel = np.fft.fftfreq(m, 1.0 / m).astype(int)
    tau_shape = [1] * n
    tau_shape[j - 1] = m
    taus = (rel + int(g.center[j - 1])).reshape(tau_shape).astype(float)
    beta = varying.grid_values(m) + float(alpha)
    line = line / (1j * (taus + beta * xi))
    solved = np.fft.ifft(line, axis=j - 1) * m
    return ModeBlock(g.center, _analyze_grid(solved, width))


def solve_mode(f: PartialFourierField, sys: SystemSpec, j: int, xi: int) -> ModeSolution:
    """
    Solve (d/dt_j + i a_j(t) xi) u^(., xi) = f^(., xi) by conjugating to the
    averaged operator and applying the averaging formula.

    Raises Resonance when the divisor vanishes and DivisorTooSmall when it
    is below the configured floor.
    """
    settings = get_solver_settings()
    if is_resonant(sys, j, xi):
        raise Resonance(xi)
    divisor = mode_divisor(sys, j, xi)
    if divisor < settings['divisor_floor']:
        raise DivisorTooSmall(xi, divisor, settings['divisor_floor'])

    block = f.block(xi)
    if block is None:
        block = ModeBlock((0,) * sys.n, np.zeros((1,) * sys.n, dtype=complex))
    a = sys.coefficient(j)
    A_j = primitive_A_j(a, j)
    g, lost_in = conjugate_block(block, xi, A_j, 1)
    varying, alpha = _averaged(sys, j)
    w_hat = _solve_averaged(g, xi, j, varying, alpha)
    solution, lost_out = conjugate_block(w_hat, xi, A_j, -1)

    varying_a, alpha_a = split_coefficient(a, sys.constants[j - 1])
    check = vector_field_block(solution, xi, varying_a, j, alpha_a)
    width = max(check.width, block.width)
    diff = check.padded(width).coeffs - block.padded(width).coeffs
    scale = max(float(np.sum(np.abs(block.coeffs))), 1e-300)
    residual = float(np.sum(np.abs(diff))) / scale if np.any(block.coeffs) else float(np.sum(np.abs(diff)))
    if residual > settings['residual_tolerance']:
        logging.warning(f"mode xi={xi}: relative residual {residual:.2e} above tolerance")
    return ModeSolution(xi, j, solution, divisor, residual, lost_in or lost_out)


@dataclass(frozen=True)
class Obstruction:
    xi: int
    reason: str
    skipped_modes: int

    def to_dict(self) -> Dict[str, Any]:
        return {'xi': self.xi, 'reason': self.reason, 'skipped_modes': self.skipped_modes}


@dataclass(frozen=True)
class SolveReport:
    residuals: Dict[int, float]
    chosen: Dict[int, int]
    obstructions: Tuple[Obstruction, ...]
    compatibility_defect: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'residuals': {str(xi): r for xi, r in sorted(self.residuals.items())},
            'chosen_field': {str(xi): j for xi, j in sorted(self.chosen.items())},
            'obstructions': [o.to_dict() for o in self.obstructions],
            'compatibility_defect': self.compatibility_defect,
            'max_residual': max(self.residuals.values(), default=0.0),
        }


def compatibility_defect(f_list: Sequence[PartialFourierField], sys: SystemSpec) -> float:
    """max over pairs of ||X_j f_l - X_l f_j||."""
    worst = 0.0
    for j, l in itertools.combinations(range(1, sys.n + 1), 2):
        left = apply_system_field(f_list[l - 1], sys, j)
        right = apply_system_field(f_list[j - 1], sys, l)
        worst = max(worst, add_fields(left, right, -1.0).l2_norm())
    return worst


def solve_system(f_list: Sequence[PartialFourierField], sys: SystemSpec,
                 xi_window: Optional[int] = None) -> Tuple[PartialFourierField, SolveReport]:
    """Solve X_j u = f_j for all j, one x-frequency at a time."""
    if len(f_list) != sys.n:
        raise SpecError(f"expected {sys.n} right-hand sides, got {len(f_list)}")
    floor = get_solver_settings()['divisor_floor']
    xis = sorted({xi for f in f_list for xi, b in f.modes.items() if not b.is_zero()})
    blocks: Dict[int, ModeBlock] = {}
    residuals: Dict[int, float] = {}
    chosen: Dict[int, int] = {}
    obstructions: List[Obstruction] = []
    for xi in xis:
        skipped = sum(int(np.count_nonzero(f.modes[xi].coeffs)) for f in f_list if xi in f.modes)
        candidates = [(mode_divisor(sys, j, xi), j) for j in range(1, sys.n + 1) if not is_resonant(sys, j, xi)]
        if not candidates:
            obstructions.append(Obstruction(xi, 'resonance', skipped))
            continue
        divisor, j = max(candidates, key=lambda c: (c[0], -c[1]))
        if divisor < floor:
            logging.warning(f"xi={xi}: largest divisor {divisor:.2e} below floor")
            obstructions.append(Obstruction(xi, 'small-divisor', skipped))
            continue
        solution = solve_mode(f_list[j - 1], sys, j, xi)
        blocks[xi] = solution.block
        residuals[xi] = solution.residual
        chosen[xi] = j
    window = xi_window or max(f.xi_window for f in f_list)
    report = SolveReport(residuals, chosen, tuple(obstructions), compatibility_defect(f_list, sys))
    return from_blocks(sys.n, blocks, window), report


# ---------------------------------------------------------------------------
# decay diagnostics
# ---------------------------------------------------------------------------

def _log(value: float) -> float:
    return math.log(value) if value > 0 else -math.inf


def decay_report(u: PartialFourierField, mode: str = 'sup_t', point: Optional[Sequence[float]] = None,
                 threshold: Optional[float] = None) -> DecayReport:
    """Band maxima of sup_t |u^(t, xi)| (or |u^(s, xi)| at a point) and their fit."""
    if mode not in ('sup_t', 'at_point'):
        raise SpecError(f"unknown decay mode '{mode}'")
    if mode == 'at_point' and point is None:
        raise SpecError("at_point mode needs a base point")
    values = []
    for xi in u.xis:
        if xi == 0:
            continue
        v = sup_modulus(u, xi) if mode == 'sup_t' else modulus_at(u, xi, point)
        values.append((xi, _log(v)))
    return fit_decay_profile(band_table(values, u.xi_window), threshold)


# ---------------------------------------------------------------------------
# counterexample
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CounterexampleLevel:
    nu: int
    xi: int
    tau: Tuple[int, ...]
    materialized: bool
    sup_u: float
    log_x: Tuple[float, ...]
    log_p: float
    log_bound: float

    def to_dict(self) -> Dict[str, Any]:
        return {'nu': self.nu, 'xi': str(self.xi), 'tau': [str(t) for t in self.tau],
                'materialized': self.materialized, 'sup_u': self.sup_u,
                'log_x': list(self.log_x), 'log_p': self.log_p, 'log_bound': self.log_bound}


@dataclass(frozen=True)
class CounterexampleReport:
    levels: Tuple[CounterexampleLevel, ...]
    u_decay: DecayReport
    x_decays: Tuple[DecayReport, ...]
    p_decay: DecayReport

    def to_dict(self) -> Dict[str, Any]:
        return {'levels': [lv.to_dict() for lv in self.levels],
                'u_decay': self.u_decay.to_dict(),
                'x_decays': [d.to_dict() for d in self.x_decays],
                'p_decay': self.p_decay.to_dict()}


def _enclosure_magnitude(lo: Fraction, hi: Fraction) -> Fraction:
    return max(abs(lo), abs(hi))


def build_counterexample(witness: WitnessSequence, sys: SystemSpec,
                         depth: int) -> Tuple[PartialFourierField, CounterexampleReport]:
    """u = S^{-1} v with v = sum over witness levels of exp(i(<tau, t> + xi x)).

    Every level has sup_t |u^| = 1 while |X_j u^| at level nu is below the
    witness bound; magnitudes are reported as exact natural logarithms.
    """
    A = global_primitive_A(sys)
    alphas = sys.alphas()
    witness.validate(alphas)
    entries = witness.entries[:depth]
    if len(entries) < depth:
        logging.warning(f"witness has {len(entries)} entries, fewer than depth {depth}")
    cap = get_spectral_settings()['max_t_window']
    n = sys.n

    blocks: Dict[int, ModeBlock] = {}
    levels: List[CounterexampleLevel] = []
    for entry in entries:
        v_block = ModeBlock(tuple(entry.tau), np.ones((1,) * n, dtype=complex))
        materialized = True
        if A.is_zero():
            blocks[entry.xi] = v_block
            sup_u = 1.0
        elif phase_width(A, entry.xi) <= cap:
            u_block, lost = conjugate_block(v_block, entry.xi, A, -1)
            blocks[entry.xi] = u_block
            materialized = not lost
            sup_u = float(np.max(np.abs(_synthesize_grid(u_block.coeffs, 2 * u_block.width + 1))))
        else:
            # modulus identity: |u^(t, xi)| = |v^(t, xi)| = 1
            materialized = False
            sup_u = 1.0

        magnitudes = []
        for alpha, tau in zip(alphas, entry.tau):
            lo, hi = offset_value(alpha, entry.xi, tau)
            magnitudes.append(_enclosure_magnitude(lo, hi))
        log_x = tuple(log_abs(mag) for mag in magnitudes)
        log_p = log_abs(sum((mag * mag for mag in magnitudes), Fraction(0)))
        log_bound = log_abs(witness.c0) - entry.nu * math.log1p(entry.norm_upper())
        if any(lx > log_bound for lx in log_x):
            raise InconsistentVerdict(f"level nu={entry.nu} exceeds its witness bound")
        levels.append(CounterexampleLevel(entry.nu, entry.xi, tuple(entry.tau), materialized,
                                          sup_u, log_x, log_p, log_bound))

    max_xi = max(e.xi for e in entries)
    xi_window = (1 << max_xi.bit_length()) - 1
    u = from_blocks(n, blocks, xi_window)

    u_decay = fit_decay_profile(band_table([(lv.xi, _log(lv.sup_u)) for lv in levels], xi_window))
    x_decays = tuple(fit_decay_profile(band_table([(lv.xi, lv.log_x[j]) for lv in levels], xi_window))
                     for j in range(n))
    p_decay = fit_decay_profile(band_table([(lv.xi, lv.log_p) for lv in levels], xi_window))
    logging.info(f"counterexample with {len(levels)} levels; u {u_decay.verdict.value}, "
                 f"X u exponents {[round(d.fitted_exponent, 3) for d in x_decays]}")
    return u, CounterexampleReport(tuple(levels), u_decay, x_decays, p_decay)


# ---------------------------------------------------------------------------
# propagation of regularity
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PropagationInput:
    u: PartialFourierField
    base_point: Tuple[float, ...]
    smooth_rhs: Tuple[PartialFourierField, ...]
    system: SystemSpec
    finite_type: Optional[FiniteTypeReport] = None


def coefficient_l1(u: PartialFourierField, xi: int) -> float:
    """sum |c_tau|, an upper bound for sup_t |u^(t, xi)|."""
    block = u.modes.get(xi)
    return float(np.sum(np.abs(block.coeffs))) if block is not None else 0.0


def bracket_base_point_values(u: PartialFourierField, sys: SystemSpec, report: FiniteTypeReport,
                              rhs: Sequence[PartialFourierField]) -> Dict[int, float]:
    """|u^(s, xi)| = |[X_j, X_l] u^(s, xi)| / (|xi| |b(s)|) at a finite-type point s."""
    if not report.exists:
        raise SpecError("bracket base point needs a finite-type report")
    j, l = report.witness_pair
    s = report.witness_radians()
    b_s = report.bracket.eval(s)
    commutator = add_fields(apply_system_field(rhs[l - 1], sys, j),
                            apply_system_field(rhs[j - 1], sys, l), -1.0)
    values = {}
    for xi in u.xis:
        if xi == 0:
            continue
        values[xi] = modulus_at(commutator, xi, s) / (abs(xi) * abs(b_s))
    return values


def propagation_check(inp: PropagationInput, k: int) -> Verdict:
    """
    Propagate a pointwise base-point bound to the whole torus mode by mode.

    For each xi the coordinates are swept from t_n down to t_1.  A
    coordinate whose divisor exceeds (1 + |xi|)**(-k - M) gives the direct
    averaging bound; every other coordinate is crossed along a segment,
    adding 2 pi sup|f_c|.  The measured sup_t |u^| must respect the bound.
    """
    u, sys = inp.u, inp.system
    if len(inp.smooth_rhs) != sys.n:
        raise SpecError(f"expected {sys.n} right-hand sides")

    for j in range(1, sys.n + 1):
        applied = apply_system_field(u, sys, j)
        scale = max(1.0, max((coefficient_l1(inp.smooth_rhs[j - 1], xi) for xi in inp.smooth_rhs[j - 1].xis), default=0.0))
        gap = sup_difference(applied, inp.smooth_rhs[j - 1])
        if gap > 1e-9 * scale:
            raise HypothesisFailed('consistency', f"X_{j} u differs from f_{j} by {gap:.3e}")

    u_report = decay_report(u)
    growth = u_report.growth_order or 0.0
    rhs_threshold = 2 * k + growth
    rhs_reports = []
    for j, f in enumerate(inp.smooth_rhs, start=1):
        report = decay_report(f, threshold=rhs_threshold)
        if not report.is_rapid:
            raise HypothesisFailed('rhs', f"f_{j} does not decay at order {rhs_threshold:g}")
        rhs_reports.append(report)

    if inp.finite_type is not None:
        base_values = bracket_base_point_values(u, sys, inp.finite_type, inp.smooth_rhs)
        base_point = inp.finite_type.witness_radians()
    else:
        base_point = tuple(inp.base_point)
        base_values = {xi: modulus_at(u, xi, base_point) for xi in u.xis if xi != 0}
    base_report = fit_decay_profile(band_table([(xi, _log(v)) for xi, v in base_values.items()], u.xi_window),
                                    threshold=k)
    if not base_report.is_rapid:
        raise HypothesisFailed('base_point', f"|u^(s, xi)| does not decay at order {k} at s={base_point}")

    constant_coords = [c for c in range(1, sys.n + 1) if _averaged(sys, c)[0].is_zero()]
    cap_hits = 0
    violations = []
    bound_logs = []
    worst_constant = 0.0
    for xi in u.xis:
        if xi == 0:
            continue
        sup_f = {c: coefficient_l1(inp.smooth_rhs[c - 1], xi) for c in range(1, sys.n + 1)}
        chain = base_values.get(xi, 0.0) + 2 * math.pi * sum(sup_f.values())
        cutoff = (1.0 + abs(xi)) ** (-k - growth)
        direct = []
        for c in range(sys.n, 0, -1):
            if c not in constant_coords or is_resonant(sys, c, xi):
                continue
            divisor = mode_divisor(sys, c, xi)
            if divisor >= cutoff:
                direct.append(2 * math.pi * sup_f[c] / divisor)
        if not direct:
            cap_hits += 1
        bound = min([chain] + direct)
        measured = sup_modulus(u, xi)
        if measured > bound * (1 + 1e-8) + 1e-12:
            violations.append(xi)
        bound_logs.append((xi, _log(bound)))
        worst_constant = max(worst_constant, bound * (1.0 + abs(xi)) ** k)

    if violations:
        raise InconsistentVerdict(f"measured modes exceed the propagated bound at xi={violations[:8]}")
    if cap_hits:
        logging.warning(f"sweep crossed all {sys.n} coordinates for {cap_hits} modes")
    logging.info(f"propagated constant sup (1+|xi|)^k * bound = {worst_constant:.4g}")

    conclusion = decay_report(u, threshold=k)
    status = Status.HOLDS if conclusion.is_rapid else Status.UNDETERMINED
    certificates = {
        'u_decay': conclusion.to_dict(),
        'base_point_decay': base_report.to_dict(),
        'rhs_decay': [r.to_dict() for r in rhs_reports],
        'sweep': {'cap_hits': cap_hits, 'measured_constant': worst_constant,
                  'base_point': list(base_point),
                  'bracket_base_point': inp.finite_type is not None},
    }
    reasons = (Reason('finite-type-propagation', 'sweep'), Reason('decay-fit', 'u_decay'))
    return Verdict('regularity-propagation', status, reasons, certificates)


# ---------------------------------------------------------------------------
# derivative closure and a-priori growth
# ---------------------------------------------------------------------------

def _t_derivative_block(block: ModeBlock, alpha: Sequence[int]) -> ModeBlock:
    n = block.dim
    w = block.width
    coeffs = block.coeffs.copy()
    for axis, order in enumerate(alpha):
        if order == 0:
            continue
        taus = np.array([int(block.center[axis]) + r for r in range(-w, w + 1)], dtype=float)
        shape = [1] * n
        shape[axis] = 2 * w + 1
        coeffs = coeffs * ((1j * taus) ** order).reshape(shape)
    return ModeBlock(block.center, coeffs)


def _multi_indices(n: int, max_order: int) -> List[Tuple[int, ...]]:
    return [alpha for alpha in itertools.product(range(max_order + 1), repeat=n)
            if 1 <= sum(alpha) <= max_order]


def _sup_on_grid(block: Optional[ModeBlock], m: int, n: int) -> float:
    if block is None:
        return 0.0
    return float(np.max(np.abs(_synthesize_grid(block.coeffs, m))))


def derivative_closure_check(u: PartialFourierField, sys: SystemSpec,
                             rhs: Sequence[PartialFourierField], max_order: int = 3) -> Dict[str, Any]:
    """
    Check sup|d^alpha u^| <= sup|d^beta f_j^| + |xi| sum_gamma binom(beta, gamma)
    ||d^(beta - gamma) a_j|| sup|d^gamma u^| with alpha = beta + e_j.
    """
    ratios: Dict[int, float] = {}
    for alpha in _multi_indices(sys.n, max_order):
        j = next(i for i, a in enumerate(alpha, start=1) if a > 0)
        beta = tuple(a - (1 if i == j else 0) for i, a in enumerate(alpha, start=1))
        a_j = sys.coefficient(j)
        for xi in u.xis:
            if xi == 0:
                continue
            block = u.modes[xi]
            f_block = rhs[j - 1].modes.get(xi)
            width = block.width + a_j.bandwidth + (f_block.width if f_block is not None else 0)
            m = 2 * width + 1
            measured = _sup_on_grid(_t_derivative_block(block, alpha), m, sys.n)
            bound = _sup_on_grid(_t_derivative_block(f_block, beta) if f_block is not None else None, m, sys.n)
            for gamma in itertools.product(*(range(b + 1) for b in beta)):
                weight = float(np.prod([comb(b, g, exact=True) for b, g in zip(beta, gamma)]))
                diff = tuple(b - g for b, g in zip(beta, gamma))
                coefficient = a_j
                for axis, order in enumerate(diff, start=1):
                    for _ in range(order):
                        coefficient = partial_derivative(coefficient, axis)
                norm = coefficient.l1_norm_float()
                if not any(diff):
                    norm += abs(float(sys.constants[j - 1]))
                bound += abs(xi) * weight * norm * _sup_on_grid(_t_derivative_block(block, gamma), m, sys.n)
            order = sum(alpha)
            ratio = measured / bound if bound > 0 else (0.0 if measured < 1e-12 else math.inf)
            ratios[order] = max(ratios.get(order, 0.0), ratio)
    holds = all(r <= 1 + 1e-9 for r in ratios.values())
    return {'max_ratio_by_order': {str(k): v for k, v in sorted(ratios.items())}, 'holds': holds}


def sobolev_norm(u: PartialFourierField, s: float) -> float:
    """(sum (1 + |(tau, xi)|)**(2s) |c|**2)**(1/2)."""
    total = 0.0
    for xi, block in u.modes.items():
        w = block.width
        axes = [np.arange(-w, w + 1) + int(c) for c in block.center]
        mesh = np.meshgrid(*axes, indexing='ij')
        radius = np.sqrt(sum(m.astype(float) ** 2 for m in mesh) + float(xi) ** 2)
        total += float(np.sum((1.0 + radius) ** (2 * s) * np.abs(block.coeffs) ** 2))
    return math.sqrt(total)


def growth_bound_check(u: PartialFourierField, p: float) -> Dict[str, Any]:
    """
    sup_t |u^(t, xi)| <= D (1 + |xi|)**(2(n + p)) with the constructive constant
    D = ||u||_{-p} * Z**(1/2), Z = max over modes of sum_tau (1 + |tau|)**(2p).
    """
    norm = sobolev_norm(u, -p)
    z = 0.0
    for block in u.modes.values():
        w = block.width
        axes = [np.arange(-w, w + 1) + int(c) for c in block.center]
        mesh = np.meshgrid(*axes, indexing='ij')
        radius = np.sqrt(sum(m.astype(float) ** 2 for m in mesh))
        z = max(z, float(np.sum((1.0 + radius) ** (2 * p))))
    d = norm * math.sqrt(z)
    exponent = 2 * (u.n + p)
    ratio = max(((sup_modulus(u, xi) / (1.0 + abs(xi)) ** exponent) for xi in u.xis), default=0.0)
    return {'D': d, 'exponent': exponent, 'max_ratio': ratio, 'holds': ratio <= d * (1 + 1e-9)}
