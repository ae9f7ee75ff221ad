"""
Partial Fourier fields u^(t, xi) on T^{n+1} and the mode operators acting on them.

Every x-frequency xi holds a ModeBlock: a dense cube of t-Fourier
coefficients of half-width w around a centre tau_c, so that isolated
modes with very large (tau, xi) stay representable.  Coefficient index
``i`` along an axis stands for tau = tau_c + i - w.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from config_manager import config
from .coeffs import SystemSpec, TrigPoly, mean_in_variable, primitive_A_j
from .diophantine import ExactReal, Rational, offset_value
from .errors import SpecError, WindowOverflow, WindowTooSmall

_EXACT_SYMBOL_THRESHOLD = 1 << 20


def get_spectral_settings() -> Dict[str, float]:
    defaults = config.get_spectral_defaults()
    return {
        'phase_guard': int(defaults['phase_guard']),
        'max_t_window': int(defaults['max_t_window']),
        'roundtrip_tolerance': float(defaults['roundtrip_tolerance']),
    }


def _max_t_window() -> int:
    return get_spectral_settings()['max_t_window']


@dataclass(frozen=True, eq=False)
class ModeBlock:
    center: Tuple[int, ...]
    coeffs: np.ndarray

    @property
    def width(self) -> int:
        return (self.coeffs.shape[0] - 1) // 2

    @property
    def dim(self) -> int:
        return self.coeffs.ndim

    def padded(self, width: int) -> 'ModeBlock':
        extra = width - self.width
        if extra < 0:
            raise SpecError(f"cannot pad width {self.width} block down to {width}")
        if extra == 0:
            return self
        return ModeBlock(self.center, np.pad(self.coeffs, extra))

    def energy(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)


@dataclass(frozen=True, eq=False)
class PartialFourierField:
    n: int
    xi_window: int
    t_window: int
    modes: Dict[int, ModeBlock] = field(default_factory=dict)
    real_flag: bool = False
    lossy: bool = False

    @property
    def xis(self) -> List[int]:
        return sorted(self.modes)

    def block(self, xi: int) -> Optional[ModeBlock]:
        return self.modes.get(xi)

    def with_modes(self, modes: Dict[int, ModeBlock], lossy: Optional[bool] = None) -> 'PartialFourierField':
        t_window = max((b.width for b in modes.values()), default=0)
        return replace(self, modes=dict(modes), t_window=max(t_window, 0),
                       lossy=self.lossy if lossy is None else lossy, real_flag=False)

    def l2_norm(self) -> float:
        """Parseval norm over all stored coefficients."""
        return math.sqrt(sum(b.energy() for b in self.modes.values()))

    def is_zero(self) -> bool:
        return all(b.is_zero() for b in self.modes.values())

    def to_dict(self) -> Dict[str, Any]:
        entries = []
        for xi in self.xis:
            block = self.modes[xi]
            w = block.width
            coeffs = []
            for index in zip(*np.nonzero(block.coeffs)):
                value = complex(block.coeffs[index])
                tau = [int(c) + int(i) - w for c, i in zip(block.center, index)]
                coeffs.append({'tau': tau, 're': value.real, 'im': value.imag})
            entries.append({'xi': xi, 'coeffs': coeffs})
        return {'n': self.n, 'xi_window': self.xi_window, 't_window': self.t_window,
                'real': self.real_flag, 'lossy': self.lossy, 'xi': entries}

    @classmethod
    def from_dict(cls, doc: Dict[str, Any]) -> 'PartialFourierField':
        n = int(doc['n'])
        modes = {}
        for entry in doc.get('xi', []):
            xi = int(entry['xi'])
            coeffs = entry.get('coeffs', [])
            if not coeffs:
                continue
            taus = np.array([c['tau'] for c in coeffs], dtype=object).reshape(len(coeffs), n)
            lo = [min(int(t) for t in taus[:, i]) for i in range(n)]
            hi = [max(int(t) for t in taus[:, i]) for i in range(n)]
            center = tuple((a + b) // 2 for a, b in zip(lo, hi))
            w = max(max(b - c, c - a) for a, b, c in zip(lo, hi, center))
            array = np.zeros((2 * w + 1,) * n, dtype=complex)
            for c in coeffs:
                index = tuple(int(t) - cc + w for t, cc in zip(c['tau'], center))
                array[index] += complex(float(c['re']), float(c['im']))
            modes[xi] = ModeBlock(center, array)
        t_window = int(doc.get('t_window', max((b.width for b in modes.values()), default=0)))
        return cls(n, int(doc['xi_window']), t_window, modes,
                   bool(doc.get('real', False)), bool(doc.get('lossy', False)))


# ---------------------------------------------------------------------------
# grid transforms
# ---------------------------------------------------------------------------

def _synthesize_grid(coeffs: np.ndarray, m: int) -> np.ndarray:
    """Values sum_tau c_tau exp(i tau t) at t = 2 pi p / m (relative tau)."""
    w = (coeffs.shape[0] - 1) // 2
    if 2 * w + 1 > m:
        raise SpecError(f"grid of {m} points cannot carry half-width {w}")
    full = np.zeros((m,) * coeffs.ndim, dtype=complex)
    index = np.arange(-w, w + 1) % m
    full[np.ix_(*([index] * coeffs.ndim))] = coeffs
    return np.fft.ifftn(full) * m ** coeffs.ndim


def _analyze_grid(values: np.ndarray, width: int) -> np.ndarray:
    m = values.shape[0]
    if 2 * width + 1 > m:
        raise SpecError(f"grid of {m} points cannot resolve half-width {width}")
    full = np.fft.fftn(values) / m ** values.ndim
    index = np.arange(-width, width + 1) % m
    return full[np.ix_(*([index] * values.ndim))]


def roundtrip_error(u: PartialFourierField) -> float:
    """Largest relative change of a block after grid synthesis and re-analysis."""
    worst = 0.0
    for block in u.modes.values():
        m = 2 * block.width + 1
        back = _analyze_grid(_synthesize_grid(block.coeffs, m), block.width)
        scale = max(float(np.max(np.abs(block.coeffs))), 1e-300)
        worst = max(worst, float(np.max(np.abs(back - block.coeffs))) / scale)
    return worst


def grid_values(u: PartialFourierField, xi: int, points_per_axis: Optional[int] = None) -> np.ndarray:
    """u^(t, xi) on the uniform grid, without the centre phase exp(i tau_c t)."""
    block = u.modes.get(xi)
    if block is None:
        m = points_per_axis or 1
        return np.zeros((m,) * u.n, dtype=complex)
    m = points_per_axis or 2 * block.width + 1
    return _synthesize_grid(block.coeffs, m)


def sup_modulus(u: PartialFourierField, xi: int, points_per_axis: Optional[int] = None) -> float:
    return float(np.max(np.abs(grid_values(u, xi, points_per_axis))))


def modulus_at(u: PartialFourierField, xi: int, point: Sequence[float]) -> float:
    """|u^(s, xi)| at a point s of T^n."""
    block = u.modes.get(xi)
    if block is None:
        return 0.0
    if len(point) != u.n:
        raise SpecError(f"point has {len(point)} coordinates, expected {u.n}")
    w = block.width
    rel = np.arange(-w, w + 1)
    value = block.coeffs
    for s in point:
        # contract the leading axis each time
        value = np.tensordot(np.exp(1j * rel * float(s)), value, axes=(0, 0))
    return float(abs(value))


def evaluate_at(u: PartialFourierField, xi: int, point: Sequence[float]) -> complex:
    """u^(s, xi) including the centre phase."""
    block = u.modes.get(xi)
    if block is None:
        return 0j
    phase = sum((int(c) % (1 << 53)) * float(s) for c, s in zip(block.center, point)) if any(block.center) else 0.0
    w = block.width
    rel = np.arange(-w, w + 1)
    value = block.coeffs
    for s in point:
        value = np.tensordot(np.exp(1j * rel * float(s)), value, axes=(0, 0))
    return complex(value) * complex(math.cos(phase), math.sin(phase))


def grid_frame(u: PartialFourierField, xi: int, points_per_axis: Optional[int] = None) -> pd.DataFrame:
    """Grid dump of one mode for external plotting."""
    values = grid_values(u, xi, points_per_axis)
    m = values.shape[0]
    axis = 2 * np.pi * np.arange(m) / m
    mesh = np.meshgrid(*([axis] * u.n), indexing='ij')
    frame = {f"t_{i + 1}": mesh[i].ravel() for i in range(u.n)}
    frame.update({'re': values.real.ravel(), 'im': values.imag.ravel(), 'modulus': np.abs(values).ravel()})
    return pd.DataFrame(frame)


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def _is_hermitian(modes: Dict[int, ModeBlock]) -> bool:
    for xi, block in modes.items():
        mirror = modes.get(-xi)
        if mirror is None:
            if not block.is_zero():
                return False
            continue
        if tuple(-c for c in block.center) != mirror.center or mirror.width != block.width:
            return False
        flipped = np.conj(block.coeffs[(slice(None, None, -1),) * block.dim])
        if not np.allclose(flipped, mirror.coeffs, rtol=0, atol=1e-15):
            return False
    return True


def synthesize(n: int, terms: Iterable[Tuple[Sequence[int], int, complex]],
               xi_window: int, t_window: int) -> PartialFourierField:
    """Place exponentials c * exp(i(<tau, t> + xi x)) exactly in a window."""
    if xi_window < 1 or t_window < 0:
        raise SpecError("windows must be positive")
    modes: Dict[int, np.ndarray] = {}
    for tau, xi, value in terms:
        tau = tuple(int(t) for t in tau)
        if len(tau) != n:
            raise SpecError(f"tau {tau} does not have dimension {n}")
        if abs(xi) > xi_window:
            raise WindowTooSmall(f"xi={xi} outside window {xi_window}")
        if max((abs(t) for t in tau), default=0) > t_window:
            raise WindowTooSmall(f"tau={tau} outside window {t_window}")
        array = modes.setdefault(int(xi), np.zeros((2 * t_window + 1,) * n, dtype=complex))
        array[tuple(t + t_window for t in tau)] += complex(value)
    blocks = {xi: ModeBlock((0,) * n, array) for xi, array in modes.items()}
    return PartialFourierField(n, xi_window, t_window, blocks, _is_hermitian(blocks))


def modulated_terms(p: TrigPoly, xi: int, scale: complex = 1.0,
                    shift: Optional[Sequence[int]] = None) -> List[Tuple[Tuple[int, ...], int, complex]]:
    """Terms of scale * p(t) * exp(i(<shift, t> + xi x))."""
    shift = tuple(shift) if shift is not None else (0,) * p.dim
    return [(tuple(k + s for k, s in zip(freq, shift)), xi, scale * c)
            for freq, c in sorted(p.complex_terms().items())]


def from_blocks(n: int, blocks: Dict[int, ModeBlock], xi_window: int) -> PartialFourierField:
    t_window = max((b.width for b in blocks.values()), default=0)
    return PartialFourierField(n, xi_window, t_window, dict(blocks), _is_hermitian(blocks))


def add_fields(u: PartialFourierField, v: PartialFourierField, scale: complex = 1.0) -> PartialFourierField:
    """u + scale * v, padding blocks to a common width."""
    if u.n != v.n:
        raise SpecError("fields have different t-dimensions")
    modes: Dict[int, ModeBlock] = {}
    for xi in sorted(set(u.modes) | set(v.modes)):
        a, b = u.modes.get(xi), v.modes.get(xi)
        if a is None:
            modes[xi] = ModeBlock(b.center, scale * b.coeffs)
            continue
        if b is None:
            modes[xi] = a
            continue
        if a.center != b.center:
            raise SpecError(f"blocks at xi={xi} have different centres")
        w = max(a.width, b.width)
        modes[xi] = ModeBlock(a.center, a.padded(w).coeffs + scale * b.padded(w).coeffs)
    return PartialFourierField(u.n, max(u.xi_window, v.xi_window),
                               max((blk.width for blk in modes.values()), default=0),
                               modes, False, u.lossy or v.lossy)


def sup_difference(u: PartialFourierField, v: PartialFourierField) -> float:
    """Grid sup-norm of u - v over every mode."""
    diff = add_fields(u, v, -1.0)
    return max((sup_modulus(diff, xi) for xi in diff.modes), default=0.0)


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------

def diagonal_symbol(alpha: ExactReal, xi: int, taus: Sequence[int]) -> np.ndarray:
    """tau + alpha * xi for each tau, exact-enclosure midpoints for large frequencies."""
    if xi == 0:
        return np.array([float(t) for t in taus])
    large = abs(xi) > _EXACT_SYMBOL_THRESHOLD or any(abs(t) > _EXACT_SYMBOL_THRESHOLD for t in taus)
    if large and alpha.is_certified:
        values = []
        for t in taus:
            lo, hi = offset_value(alpha, xi, int(t))
            values.append(float((lo + hi) / 2))
        return np.array(values)
    return np.array([float(t) for t in taus]) + float(alpha) * xi


def _axis_shape(n: int, axis: int, length: int) -> Tuple[int, ...]:
    shape = [1] * n
    shape[axis] = length
    return tuple(shape)


def vector_field_block(block: ModeBlock, xi: int, a: TrigPoly, j: int,
                       alpha: ExactReal) -> ModeBlock:
    """(d/dt_j + i (a(t) + alpha) xi) on one block; a must have zero mean coefficient."""
    n = block.dim
    w = block.width
    bw = a.bandwidth if xi else 0
    width = w + bw
    if width > _max_t_window():
        raise WindowOverflow(f"t-window {width} exceeds {_max_t_window()} at xi={xi}")
    out = np.zeros((2 * width + 1,) * n, dtype=complex)
    core = tuple(slice(bw, bw + 2 * w + 1) for _ in range(n))
    taus = [int(block.center[j - 1]) + r for r in range(-w, w + 1)]
    symbol = diagonal_symbol(alpha, xi, taus).reshape(_axis_shape(n, j - 1, 2 * w + 1))
    out[core] += 1j * symbol * block.coeffs
    if xi:
        for k, c in sorted(a.complex_terms().items()):
            shifted = tuple(slice(bw + kk, bw + kk + 2 * w + 1) for kk in k)
            out[shifted] += 1j * xi * c * block.coeffs
    return ModeBlock(block.center, out)


def split_coefficient(a: TrigPoly, constant: Optional[ExactReal]) -> Tuple[TrigPoly, ExactReal]:
    """Fold the mean coefficient of a into the exact constant."""
    alpha = (constant if constant is not None else Rational(0)).plus_rational(a.constant_coefficient)
    return a.without_constant(), alpha


def apply_vector_field(u: PartialFourierField, a: TrigPoly, j: int,
                       constant: Optional[ExactReal] = None) -> PartialFourierField:
    """X_j = d/dt_j + (a(t) + constant) d/dx applied mode by mode."""
    if a.dim != u.n:
        raise SpecError(f"coefficient dimension {a.dim} does not match field dimension {u.n}")
    if not 1 <= j <= u.n:
        raise SpecError(f"index {j} outside 1..{u.n}")
    varying, alpha = split_coefficient(a, constant)
    modes = {xi: vector_field_block(block, xi, varying, j, alpha) for xi, block in u.modes.items()}
    return u.with_modes(modes)


def apply_system_field(u: PartialFourierField, sys: SystemSpec, j: int) -> PartialFourierField:
    return apply_vector_field(u, sys.coefficient(j), j, sys.constants[j - 1])


def apply_sum_of_squares(u: PartialFourierField, sys: SystemSpec) -> PartialFourierField:
    """P u = sum_j X_j X_j u."""
    total = None
    for j in range(1, sys.n + 1):
        term = apply_system_field(apply_system_field(u, sys, j), sys, j)
        total = term if total is None else add_fields(total, term)
    return total


def phase_width(A: TrigPoly, xi: int) -> int:
    guard = get_spectral_settings()['phase_guard']
    return A.bandwidth * (math.ceil(2 * abs(xi) * A.l1_norm_float()) + guard)


def conjugate_block(block: ModeBlock, xi: int, A: TrigPoly, sign: int) -> Tuple[ModeBlock, bool]:
    """Multiply one mode by exp(sign * i A(t) xi); returns the block and a lossy flag."""
    if xi == 0 or A.is_zero():
        return block, False
    cap = _max_t_window()
    tolerance = get_spectral_settings()['roundtrip_tolerance']
    width = block.width + phase_width(A, xi)
    capped = width > cap
    width = min(width, cap)
    m = 2 * width + 1
    values = _synthesize_grid(block.coeffs, m)
    phase = np.exp(sign * 1j * xi * A.grid_values(m))
    coeffs = _analyze_grid(values * phase, width)

    lossy = capped
    if width > A.bandwidth:
        inner = width - A.bandwidth
        mask = np.ones(coeffs.shape, dtype=bool)
        mask[tuple(slice(A.bandwidth, A.bandwidth + 2 * inner + 1) for _ in range(coeffs.ndim))] = False
        total = float(np.sum(np.abs(coeffs) ** 2))
        edge = float(np.sum(np.abs(coeffs[mask]) ** 2))
        if total > 0 and edge > tolerance * total:
            lossy = True
    return ModeBlock(block.center, coeffs), lossy


def conjugate(u: PartialFourierField, A: TrigPoly, sign: int) -> PartialFourierField:
    """S^{sign}: u^(t, xi) -> exp(sign * i A(t) xi) u^(t, xi)."""
    if sign not in (1, -1):
        raise SpecError("sign must be +1 or -1")
    if A.dim != u.n:
        raise SpecError(f"phase dimension {A.dim} does not match field dimension {u.n}")
    if A.is_zero():
        return u
    modes = {}
    lossy_modes = []
    for xi, block in u.modes.items():
        modes[xi], lost = conjugate_block(block, xi, A, sign)
        if lost:
            lossy_modes.append(xi)
    if lossy_modes:
        logging.warning(f"conjugation truncated phase bandwidth at xi={sorted(lossy_modes)[:8]}")
    return u.with_modes(modes, lossy=u.lossy or bool(lossy_modes))


def intertwining_residual(u: PartialFourierField, sys: SystemSpec, j: int) -> float:
    """Sup of (d_j + i a_j0 xi) S_j u - S_j X_j u over the grid."""
    a = sys.coefficient(j)
    constant = sys.constants[j - 1]
    A_j = primitive_A_j(a, j)
    left = apply_vector_field(conjugate(u, A_j, 1), mean_in_variable(a, j), j, constant)
    right = conjugate(apply_vector_field(u, a, j, constant), A_j, 1)
    return sup_difference(left, right)


def _inner(a: ModeBlock, b: ModeBlock) -> complex:
    w = max(a.width, b.width)
    return complex(np.sum(a.padded(w).coeffs * np.conj(b.padded(w).coeffs)))


def energy_identity_gaps(u: PartialFourierField, sys: SystemSpec) -> Dict[int, float]:
    """Per mode relative gap between sum_j ||X_j u||^2 and |<P u, u>|."""
    pu = apply_sum_of_squares(u, sys)
    fields = [apply_system_field(u, sys, j) for j in range(1, sys.n + 1)]
    gaps = {}
    for xi, block in u.modes.items():
        lhs = sum(f.modes[xi].energy() for f in fields)
        rhs = abs(_inner(pu.modes[xi], block))
        gaps[xi] = abs(lhs - rhs) / lhs if lhs > 0 else abs(rhs)
    return gaps
