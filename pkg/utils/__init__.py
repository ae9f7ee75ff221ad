"""Numerical modules for hypocalc."""

from .errors import HypocalcError, SpecError
from .coeffs import SystemSpec, TrigPoly, finite_type_exists, global_primitive_A
from .diophantine import (
    classify_sa,
    gs_condition_check,
    sa_scan,
    liouville_tuple,
    exp_lower_bound_check
)
from .spectral import PartialFourierField, synthesize, conjugate, apply_system_field
from .solver import solve_system, decay_report, build_counterexample, propagation_check
from .classifier import classify, cross_validate
from .microlocal import (
    FourierField,
    Cone,
    apply_symbol,
    cone_sobolev_norm,
    singular_directions,
    elliptic_in_direction,
    verify_microlocal_inclusion,
    t_elliptic_cone_decay,
    restrict_classical_symbol
)
from .file_parsers import parse_system, parse_field, parse_exact_real

__all__ = [
    'HypocalcError',
    'SpecError',
    'SystemSpec',
    'TrigPoly',
    'finite_type_exists',
    'global_primitive_A',
    'classify_sa',
    'gs_condition_check',
    'sa_scan',
    'liouville_tuple',
    'exp_lower_bound_check',
    'PartialFourierField',
    'synthesize',
    'conjugate',
    'apply_system_field',
    'solve_system',
    'decay_report',
    'build_counterexample',
    'propagation_check',
    'classify',
    'cross_validate',
    'FourierField',
    'Cone',
    'apply_symbol',
    'cone_sobolev_norm',
    'singular_directions',
    'elliptic_in_direction',
    'verify_microlocal_inclusion',
    't_elliptic_cone_decay',
    'restrict_classical_symbol',
    'parse_system',
    'parse_field',
    'parse_exact_real',
]
