"""
Discrete pseudodifferential calculus on T^N.

Symbols are tabulated on a uniform x-grid times the lattice window
|xi_i| <= window; fields carry their full Fourier coefficients on the same
window.  Decay inside a cone is measured band by band in |xi| and fitted
with the decay profile used everywhere else in hypocalc.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import stats

from config_manager import config
from .calculations import DecayReport, fit_decay_profile, last_complete_band
from .coeffs import SystemSpec
from .errors import (HypothesisFailed, InclusionFailure, InsufficientBands, NoConeFound,
                     OutOfClass, SpecError, WindowOverflow, WindowTooSmall)
from .solver import decay_report
from .spectral import PartialFourierField, apply_sum_of_squares


def get_microlocal_settings() -> Dict[str, float]:
    defaults = config.get_microlocal_defaults()
    return {
        'window': int(defaults['window']),
        'fan_resolution': int(defaults['fan_resolution']),
        'k_max': float(defaults['k_max']),
        'fit_tolerance': float(defaults['fit_tolerance']),
        'x_grid': int(defaults['x_grid']),
    }


# ---------------------------------------------------------------------------
# lattice helpers
# ---------------------------------------------------------------------------

def lattice_mesh(n: int, window: int) -> List[np.ndarray]:
    axis = np.arange(-window, window + 1)
    return np.meshgrid(*([axis] * n), indexing='ij')


def lattice_radius(n: int, window: int) -> np.ndarray:
    mesh = lattice_mesh(n, window)
    return np.sqrt(sum(m.astype(float) ** 2 for m in mesh))


def _band_array(radius: np.ndarray) -> np.ndarray:
    bands = np.full(radius.shape, -1, dtype=int)
    positive = radius >= 1.0
    bands[positive] = np.floor(np.log2(radius[positive]) + 1e-12).astype(int)
    return bands


@dataclass(frozen=True, eq=False)
class FourierField:
    """Full Fourier coefficients u^(xi) for |xi_i| <= window, index xi + window."""

    n: int
    window: int
    coeffs: np.ndarray

    def __post_init__(self):
        expected = (2 * self.window + 1,) * self.n
        if self.coeffs.shape != expected:
            raise SpecError(f"coefficient array {self.coeffs.shape} does not match window {self.window}")

    @classmethod
    def zeros(cls, n: int, window: int) -> 'FourierField':
        return cls(n, window, np.zeros((2 * window + 1,) * n, dtype=complex))

    @classmethod
    def from_function(cls, n: int, window: int,
                      fn: Callable[[List[np.ndarray], np.ndarray], np.ndarray]) -> 'FourierField':
        mesh = lattice_mesh(n, window)
        radius = np.sqrt(sum(m.astype(float) ** 2 for m in mesh))
        return cls(n, window, np.asarray(fn(mesh, radius), dtype=complex))

    def radius(self) -> np.ndarray:
        return lattice_radius(self.n, self.window)

    def coefficient(self, xi: Sequence[int]) -> complex:
        if len(xi) != self.n or any(abs(k) > self.window for k in xi):
            return 0j
        return complex(self.coeffs[tuple(k + self.window for k in xi)])

    def padded(self, window: int) -> 'FourierField':
        extra = window - self.window
        if extra < 0:
            raise SpecError(f"cannot pad window {self.window} down to {window}")
        return FourierField(self.n, window, np.pad(self.coeffs, extra))

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.coeffs) ** 2)))

    def to_dict(self) -> Dict[str, Any]:
        entries = []
        for index in zip(*np.nonzero(self.coeffs)):
            value = complex(self.coeffs[index])
            entries.append({'xi': [int(i) - self.window for i in index], 're': value.real, 'im': value.imag})
        return {'n': self.n, 'window': self.window, 'coeffs': entries}


def embed_partial_field(u: PartialFourierField, window: int) -> FourierField:
    """Full coefficients on T^{n+1}, axes (tau_1, ..., tau_n, xi); modes outside the window are dropped."""
    out = FourierField.zeros(u.n + 1, window)
    dropped = 0
    for xi, block in u.modes.items():
        if abs(xi) > window:
            dropped += 1
            continue
        w = block.width
        for index in zip(*np.nonzero(block.coeffs)):
            tau = [int(c) + int(i) - w for c, i in zip(block.center, index)]
            if any(abs(t) > window for t in tau):
                dropped += 1
                continue
            out.coeffs[tuple(t + window for t in tau) + (xi + window,)] += block.coeffs[index]
    if dropped:
        logging.debug(f"embedding dropped {dropped} coefficients outside window {window}")
    return out


# ---------------------------------------------------------------------------
# cones
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cone:
    """Circular open cone {xi != 0 : angle(xi, axis) < aperture, |xi| >= excluded_radius}."""

    axis: Tuple[float, ...]
    aperture: float
    excluded_radius: float = 0.0

    def __post_init__(self):
        axis = np.asarray(self.axis, dtype=float)
        norm = float(np.linalg.norm(axis))
        if norm == 0:
            raise SpecError("cone axis must be nonzero")
        if not 0 < self.aperture < math.pi:
            raise SpecError(f"aperture {self.aperture} outside (0, pi)")
        object.__setattr__(self, 'axis', tuple(float(a) for a in axis / norm))

    @property
    def dim(self) -> int:
        return len(self.axis)

    def angle_to(self, direction: Sequence[float]) -> float:
        d = np.asarray(direction, dtype=float)
        norm = float(np.linalg.norm(d))
        if norm == 0:
            return math.nan
        cosine = float(np.clip(np.dot(d, self.axis) / norm, -1.0, 1.0))
        return math.acos(cosine)

    def contains(self, xi: Sequence[float]) -> bool:
        if len(xi) != self.dim:
            raise SpecError(f"point has {len(xi)} coordinates, cone has {self.dim}")
        radius = float(np.linalg.norm(np.asarray(xi, dtype=float)))
        if radius == 0 or radius < self.excluded_radius:
            return False
        return self.angle_to(xi) < self.aperture

    def compactly_contains(self, other: 'Cone') -> bool:
        """other is a closed subcone of self minus the origin."""
        if other.dim != self.dim:
            return False
        return self.angle_to(other.axis) + other.aperture < self.aperture

    def mask(self, window: int) -> np.ndarray:
        mesh = lattice_mesh(self.dim, window)
        radius = np.sqrt(sum(m.astype(float) ** 2 for m in mesh))
        dot = sum(m * a for m, a in zip(mesh, self.axis))
        with np.errstate(invalid='ignore', divide='ignore'):
            cosine = np.where(radius > 0, dot / np.where(radius > 0, radius, 1.0), -2.0)
        inside = (radius > 0) & (radius >= self.excluded_radius) & (cosine > math.cos(self.aperture))
        return inside

    def to_dict(self) -> Dict[str, Any]:
        return {'axis': list(self.axis), 'aperture': self.aperture, 'excluded_radius': self.excluded_radius}


def fan_cones(n: int, resolution: Optional[int] = None) -> List[Cone]:
    """Test cones covering R^n minus the origin."""
    resolution = resolution or get_microlocal_settings()['fan_resolution']
    if n == 1:
        return [Cone((1.0,), math.pi / 2), Cone((-1.0,), math.pi / 2)]
    if n == 2:
        step = 2 * math.pi / resolution
        return [Cone((math.cos(r * step), math.sin(r * step)), 0.6 * step) for r in range(resolution)]
    aperture = math.acos(1.0 / math.sqrt(n)) + 0.1
    cones = []
    for i in range(n):
        for sign in (1.0, -1.0):
            axis = [0.0] * n
            axis[i] = sign
            cones.append(Cone(tuple(axis), aperture))
    return cones


# ---------------------------------------------------------------------------
# cone decay and norms
# ---------------------------------------------------------------------------

def _masked_decay(magnitude: np.ndarray, radius: np.ndarray, mask: np.ndarray, window: int,
                  threshold: float) -> DecayReport:
    top = last_complete_band(window)
    bands = _band_array(radius)
    table: Dict[int, float] = {m: -math.inf for m in range(0, top + 1)}
    scales: Dict[int, float] = {}
    for m in range(0, top + 1):
        sel = mask & (bands == m) & (magnitude > 0)
        if not sel.any():
            continue
        values = magnitude[sel]
        k = int(np.argmax(values))
        table[m] = math.log(float(values[k]))
        scales[m] = math.log1p(float(radius[sel][k]))
    return fit_decay_profile(table, threshold=threshold, scales=scales)


def cone_decay_report(u: FourierField, cone: Cone, threshold: Optional[float] = None) -> DecayReport:
    """Band maxima of |u^| inside the cone fitted against log(1 + |xi|)."""
    if cone.dim != u.n:
        raise SpecError(f"cone dimension {cone.dim} does not match field dimension {u.n}")
    threshold = threshold if threshold is not None else get_microlocal_settings()['k_max']
    return _masked_decay(np.abs(u.coeffs), u.radius(), cone.mask(u.window), u.window, threshold)


def cone_sobolev_norm(u: FourierField, s: float, cone: Cone) -> float:
    """(sum over lattice xi in the cone of (1 + |xi|)**(2s) |u^(xi)|**2)**(1/2)."""
    if cone.dim != u.n:
        raise SpecError(f"cone dimension {cone.dim} does not match field dimension {u.n}")
    mask = cone.mask(u.window)
    weights = (1.0 + u.radius()[mask]) ** (2 * s)
    return float(np.sqrt(np.sum(weights * np.abs(u.coeffs[mask]) ** 2)))


@dataclass(frozen=True)
class SingularDirectionReport:
    cones: Tuple[Cone, ...]
    reports: Tuple[DecayReport, ...]
    k_max: float

    @property
    def singular(self) -> List[Tuple[float, ...]]:
        return [c.axis for c, r in zip(self.cones, self.reports) if not r.is_rapid]

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for cone, report in zip(self.cones, self.reports):
            row = {f"axis_{i + 1}": a for i, a in enumerate(cone.axis)}
            row.update({'aperture': cone.aperture, 'exponent': report.fitted_exponent,
                        'verdict': report.verdict.value})
            rows.append(row)
        return pd.DataFrame(rows)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'k_max': self.k_max,
            'directions': [{'cone': c.to_dict(), 'decay': r.to_dict()} for c, r in zip(self.cones, self.reports)],
            'singular': [list(a) for a in self.singular],
        }


def singular_directions(u: FourierField, resolution: Optional[int] = None,
                        k_max: Optional[float] = None) -> SingularDirectionReport:
    """Fan cones in which u^ fails RapidDecay at order k_max."""
    if u.window < 32:
        raise WindowTooSmall(f"window {u.window} below 32")
    k_max = k_max if k_max is not None else get_microlocal_settings()['k_max']
    cones = fan_cones(u.n, resolution)
    reports = tuple(cone_decay_report(u, cone, k_max) for cone in cones)
    result = SingularDirectionReport(tuple(cones), reports, k_max)
    logging.info(f"{len(result.singular)} of {len(cones)} fan directions singular at k={k_max:g}")
    return result


def cone_norm_consistency(u: FourierField, cone: Cone, s_max: float,
                          resolution: Optional[int] = None, k_max: Optional[float] = None,
                          tail_share: float = 0.5) -> Dict[str, Any]:
    """
    Compare finiteness of the cone norm at s_max with the singular fan
    directions inside the cone.  The norm counts as finite when the outer
    dyadic band carries less than ``tail_share`` of its square.
    """
    mask = cone.mask(u.window)
    top = last_complete_band(u.window)
    radius = u.radius()
    inside = mask & (radius < 2 ** (top + 1))
    weights = (1.0 + radius) ** (2 * s_max) * np.abs(u.coeffs) ** 2
    total = float(np.sum(weights[inside]))
    outer = float(np.sum(weights[inside & (radius >= 2 ** top)]))
    finite = total == 0 or outer < tail_share * total
    report = singular_directions(u, resolution, k_max)
    singular_inside = [axis for axis in report.singular if cone.contains(axis)]
    return {'norm_finite': finite, 'outer_share': outer / total if total else 0.0,
            'singular_inside': [list(a) for a in singular_inside],
            'consistent': finite == (not singular_inside)}


# ---------------------------------------------------------------------------
# symbols
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DiscreteSymbol:
    """a(x, xi) on an x-grid of ``x_points`` per axis times the xi window.

    ``values`` has shape (x_points,)*N + (2*window + 1,)*N; x_points = 1
    for symbols independent of x.
    """

    n: int
    order: float
    window: int
    values: np.ndarray
    name: str = 'custom'
    declared_seminorms: Optional[Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], float]] = None

    def __post_init__(self):
        if self.values.ndim != 2 * self.n:
            raise SpecError(f"symbol values need {2 * self.n} axes, got {self.values.ndim}")
        if self.values.shape[self.n:] != (2 * self.window + 1,) * self.n:
            raise SpecError("symbol values do not match the xi window")

    @property
    def x_points(self) -> int:
        return self.values.shape[0]

    def x_fourier(self) -> np.ndarray:
        """a^(k, xi): Fourier coefficients in x, k in numpy FFT order."""
        if self.x_points == 1:
            return self.values.astype(complex)
        axes = tuple(range(self.n))
        return np.fft.fftn(self.values, axes=axes) / self.x_points ** self.n

    def perturbed(self, other: 'DiscreteSymbol') -> 'DiscreteSymbol':
        if other.window != self.window or other.n != self.n:
            raise SpecError("symbols live on different windows")
        values = np.broadcast_arrays(self.values, other.values)
        return DiscreteSymbol(self.n, max(self.order, other.order), self.window,
                              values[0] + values[1], f"{self.name}+{other.name}")

    def to_dict(self) -> Dict[str, Any]:
        return {'name': self.name, 'n': self.n, 'order': self.order, 'window': self.window,
                'x_points': self.x_points}


def tabulate_symbol(n: int, window: int, order: float,
                    fn: Callable[[List[np.ndarray], List[np.ndarray], np.ndarray], np.ndarray],
                    x_points: int = 1, name: str = 'custom') -> DiscreteSymbol:
    """Evaluate fn(x_mesh, xi_mesh, |xi|) on the product grid."""
    x_axis = 2 * np.pi * np.arange(x_points) / x_points
    xi_axis = np.arange(-window, window + 1)
    mesh = np.meshgrid(*([x_axis] * n + [xi_axis] * n), indexing='ij')
    x_mesh, xi_mesh = mesh[:n], mesh[n:]
    radius = np.sqrt(sum(m.astype(float) ** 2 for m in xi_mesh))
    values = np.asarray(fn(x_mesh, xi_mesh, radius), dtype=complex)
    values = np.broadcast_to(values, mesh[0].shape).copy()
    return DiscreteSymbol(n, float(order), window, values, name)


def apply_symbol(a: DiscreteSymbol, u: FourierField) -> FourierField:
    """a(x, D) u, i.e. (a(x,D)u)^(eta) = sum_xi a^(eta - xi, xi) u^(xi)."""
    if a.n != u.n:
        raise SpecError(f"symbol dimension {a.n} does not match field dimension {u.n}")
    if u.window > a.window:
        raise WindowOverflow(f"field window {u.window} exceeds symbol window {a.window}")
    n, w = u.n, u.window
    spread = a.x_points // 2
    out = np.zeros((2 * (w + spread) + 1,) * n, dtype=complex)
    ahat = a.x_fourier()
    inner = tuple(slice(a.window - w, a.window + w + 1) for _ in range(n))
    freqs = np.fft.fftfreq(a.x_points, 1.0 / a.x_points).astype(int)
    for k in itertools.product(range(a.x_points), repeat=n):
        symbol = ahat[k][inner]
        if not np.any(symbol):
            continue
        shift = tuple(int(freqs[i]) for i in k)
        target = tuple(slice(spread + s, spread + s + 2 * w + 1) for s in shift)
        out[target] += symbol * u.coeffs
    return FourierField(n, w + spread, out)


def _forward_difference(values: np.ndarray, axis: int, order: int) -> np.ndarray:
    for _ in range(order):
        values = np.diff(values, axis=axis, append=np.nan)
    return values


def _x_derivative(a: DiscreteSymbol, beta: Sequence[int]) -> Optional[np.ndarray]:
    if not any(beta):
        return a.values
    if a.x_points == 1:
        return None
    ahat = a.x_fourier()
    k = np.fft.fftfreq(a.x_points, 1.0 / a.x_points)
    factor = np.ones((a.x_points,) * a.n, dtype=complex)
    for axis, order in enumerate(beta):
        shape = [1] * a.n
        shape[axis] = a.x_points
        factor = factor * ((1j * k) ** order).reshape(shape)
    factor = factor.reshape(factor.shape + (1,) * a.n)
    return np.fft.ifftn(ahat * factor * a.x_points ** a.n, axes=tuple(range(a.n)))


@dataclass(frozen=True)
class SeminormReport:
    measured: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], float]
    band_growth: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], float]
    violations: Tuple[str, ...]

    @property
    def in_class(self) -> bool:
        return not self.violations

    def to_dict(self) -> Dict[str, Any]:
        return {
            'measured': {f"{list(al)}|{list(be)}": v for (al, be), v in sorted(self.measured.items())},
            'band_growth': {f"{list(al)}|{list(be)}": v for (al, be), v in sorted(self.band_growth.items())},
            'violations': list(self.violations),
        }


def _multi_indices(n: int, max_order: int) -> List[Tuple[int, ...]]:
    return [m for m in itertools.product(range(max_order + 1), repeat=n) if sum(m) <= max_order]


def seminorm_check(a: DiscreteSymbol, max_order: int = 2, growth_limit: float = 8.0) -> SeminormReport:
    """
    Measure C_ab = max |D_xi^a d_x^b a| / (1 + |xi|)**(m - |a|) over the window.

    The ratio maximum on the outer complete band may exceed the maximum
    on the inner bands by at most ``growth_limit``; declared constants,
    when present, must not be exceeded.
    """
    radius = lattice_radius(a.n, a.window)
    top = last_complete_band(a.window)
    bands = _band_array(radius)
    outer = bands == top
    inner = (bands >= 0) & (bands < top)
    measured, growth = {}, {}
    violations = []
    for beta in _multi_indices(a.n, max_order):
        base = _x_derivative(a, beta)
        if base is None:
            continue
        for alpha in _multi_indices(a.n, max_order):
            values = base
            for axis, order in enumerate(alpha):
                values = _forward_difference(values, a.n + axis, order)
            magnitude = np.abs(values)
            if a.x_points > 1:
                magnitude = np.max(magnitude, axis=tuple(range(a.n)))
            else:
                magnitude = magnitude.reshape(magnitude.shape[a.n:])
            ratio = magnitude / (1.0 + radius) ** (a.order - sum(alpha))
            ratio = np.where(np.isfinite(ratio), ratio, np.nan)
            key = (alpha, beta)
            with np.errstate(all='ignore'):
                total = float(np.nanmax(ratio)) if np.any(np.isfinite(ratio)) else 0.0
                top_max = float(np.nanmax(np.where(outer, ratio, np.nan))) if np.any(outer & np.isfinite(ratio)) else 0.0
                low_max = float(np.nanmax(np.where(inner, ratio, np.nan))) if np.any(inner & np.isfinite(ratio)) else 0.0
            measured[key] = total
            growth[key] = top_max / low_max if low_max > 0 else (math.inf if top_max > 0 else 0.0)
            if growth[key] > growth_limit:
                violations.append(f"alpha={list(alpha)} beta={list(beta)}: band growth {growth[key]:.3g}")
            declared = (a.declared_seminorms or {}).get(key)
            if declared is not None and total > declared * (1 + 1e-9):
                violations.append(f"alpha={list(alpha)} beta={list(beta)}: {total:.3g} > declared {declared:.3g}")
    return SeminormReport(measured, growth, tuple(violations))


def measured_order(a: DiscreteSymbol, cone: Cone) -> float:
    """Slope of log max|a| against log(1 + |xi|) over the bands inside the cone."""
    radius = lattice_radius(a.n, a.window)
    mask = cone.mask(a.window)
    bands = _band_array(radius)
    magnitude = np.max(np.abs(a.values), axis=tuple(range(a.n))) if a.x_points > 1 \
        else np.abs(a.values).reshape(radius.shape)
    xs, ys = [], []
    for m in range(0, last_complete_band(a.window) + 1):
        sel = mask & (bands == m) & (magnitude > 0)
        if not sel.any():
            continue
        k = int(np.argmax(magnitude[sel]))
        xs.append(math.log1p(float(radius[sel][k])))
        ys.append(math.log(float(magnitude[sel][k])))
    if len(xs) < 2:
        return -math.inf
    return float(stats.linregress(xs, ys).slope)


def kernel_decay_constants(a: DiscreteSymbol, k_values: Sequence[int] = (0, 1, 2, 4, 8)) -> Dict[int, float]:
    """D_k = max |a^(eta, xi)| (1 + |eta|)**k (1 + |xi|)**-m over the tabulated window."""
    ahat = np.abs(a.x_fourier())
    freqs = np.fft.fftfreq(a.x_points, 1.0 / a.x_points)
    eta_mesh = np.meshgrid(*([freqs] * a.n), indexing='ij')
    eta = np.sqrt(sum(m ** 2 for m in eta_mesh)).reshape(eta_mesh[0].shape + (1,) * a.n)
    radius = lattice_radius(a.n, a.window)
    scaled = ahat / (1.0 + radius) ** a.order
    constants = {int(k): float(np.max(scaled * (1.0 + eta) ** k)) for k in k_values}
    logging.debug(f"kernel decay constants for {a.name}: {constants}")
    return constants


# ---------------------------------------------------------------------------
# catalogue
# ---------------------------------------------------------------------------

def _smooth_step(t: np.ndarray) -> np.ndarray:
    """C-infinity step, 0 for t <= 0 and 1 for t >= 1."""
    t = np.clip(t, 0.0, 1.0)
    with np.errstate(divide='ignore', over='ignore', invalid='ignore'):
        f = np.where(t > 0, np.exp(-1.0 / np.where(t > 0, t, 1.0)), 0.0)
        g = np.where(t < 1, np.exp(-1.0 / np.where(t < 1, 1.0 - t, 1.0)), 0.0)
    return f / (f + g)


CATALOGUE = ('bessel', 'laplacian', 'monomial', 'cone_cutoff', 'modulated_bessel', 'exponential')


def restrict_classical_symbol(name: str, n: int, window: int, order: Optional[float] = None,
                              power: Optional[Sequence[int]] = None, scale: complex = 1.0,
                              axis: Optional[Sequence[float]] = None, aperture: float = math.pi / 3,
                              x_points: Optional[int] = None) -> DiscreteSymbol:
    """
    Tabulate a catalogue symbol on the window and check its seminorms.

    bessel            (1 + |xi|^2)^(m/2), default m = 1
    laplacian         |xi|^2
    monomial          scale * xi^power, default power = 2 e_1
    cone_cutoff       smooth angular cutoff, 1 near ``axis``, 0 beyond ``aperture``
    modulated_bessel  (1 + cos(x_1) / 2) (1 + |xi|^2)^(m/2)
    exponential       exp(|xi|), never in class
    """
    if name not in CATALOGUE:
        raise SpecError(f"unknown symbol '{name}', expected one of {', '.join(CATALOGUE)}")
    if name == 'bessel':
        m = 1.0 if order is None else float(order)
        symbol = tabulate_symbol(n, window, m, lambda x, xi, r: (1.0 + r ** 2) ** (m / 2), name=name)
    elif name == 'laplacian':
        symbol = tabulate_symbol(n, window, 2.0, lambda x, xi, r: r ** 2, name=name)
    elif name == 'monomial':
        exponents = tuple(power) if power is not None else (2,) + (0,) * (n - 1)
        if len(exponents) != n:
            raise SpecError(f"power has {len(exponents)} entries, expected {n}")

        def _monomial(x, xi, r):
            value = np.ones(r.shape, dtype=complex) * scale
            for m, e in zip(xi, exponents):
                value = value * m.astype(float) ** e
            return value
        symbol = tabulate_symbol(n, window, float(sum(exponents)), _monomial, name=name)
    elif name == 'cone_cutoff':
        cone = Cone(tuple(axis) if axis is not None else (1.0,) + (0.0,) * (n - 1), aperture)

        def _cutoff(x, xi, r):
            dot = sum(m * a for m, a in zip(xi, cone.axis))
            with np.errstate(invalid='ignore', divide='ignore'):
                cosine = np.clip(np.where(r > 0, dot / np.where(r > 0, r, 1.0), 1.0), -1.0, 1.0)
            angle = np.arccos(cosine)
            value = _smooth_step((cone.aperture - angle) / (cone.aperture / 2))
            return np.where(r > 0, value, 0.0)
        symbol = tabulate_symbol(n, window, 0.0, _cutoff, name=name)
    elif name == 'modulated_bessel':
        m = 1.0 if order is None else float(order)
        points = x_points or get_microlocal_settings()['x_grid']
        symbol = tabulate_symbol(n, window, m, lambda x, xi, r: (1.0 + 0.5 * np.cos(x[0])) * (1.0 + r ** 2) ** (m / 2),
                                 x_points=points, name=name)
    else:
        m = 0.0 if order is None else float(order)
        symbol = tabulate_symbol(n, window, m, lambda x, xi, r: np.exp(r), name=name)

    report = seminorm_check(symbol)
    if not report.in_class:
        raise OutOfClass(f"{name} is not a symbol of order {symbol.order:g}: {report.violations[0]}")
    return DiscreteSymbol(symbol.n, symbol.order, symbol.window, symbol.values, name,
                          dict(report.measured))


# ---------------------------------------------------------------------------
# ellipticity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EllipticityReport:
    elliptic: bool
    constant: float
    asymptotic_constant: float
    band_constants: Dict[int, float]
    stable: bool
    perturbed_constant: float

    def to_dict(self) -> Dict[str, Any]:
        return {'elliptic': self.elliptic, 'constant': self.constant,
                'asymptotic_constant': self.asymptotic_constant,
                'band_constants': {str(k): v for k, v in sorted(self.band_constants.items())},
                'stable': self.stable, 'perturbed_constant': self.perturbed_constant}


def _ellipticity(a: DiscreteSymbol, cone: Cone, radius_floor: float,
                 floor: float = 1e-9, band_drop: float = 0.75) -> Tuple[bool, float, float, Dict[int, float]]:
    radius = lattice_radius(a.n, a.window)
    top = last_complete_band(a.window)
    mask = cone.mask(a.window) & (radius >= max(radius_floor, 1.0)) & (radius < 2 ** (top + 1))
    magnitude = np.min(np.abs(a.values), axis=tuple(range(a.n))) if a.x_points > 1 \
        else np.abs(a.values).reshape(radius.shape)
    if not mask.any():
        return False, 0.0, 0.0, {}
    ratio = magnitude / (1.0 + radius) ** a.order
    bands = _band_array(radius)
    band_constants = {int(m): float(np.min(ratio[mask & (bands == m)]))
                      for m in np.unique(bands[mask])}
    constant = float(np.min(ratio[mask]))
    outer = mask & (bands == max(band_constants))
    with np.errstate(divide='ignore', invalid='ignore'):
        asymptotic = float(np.min(magnitude[outer] / radius[outer] ** a.order))
    ordered = [band_constants[m] for m in sorted(band_constants)]
    not_decaying = len(ordered) < 2 or ordered[-1] >= band_drop * ordered[-2]
    elliptic = constant > floor and not_decaying
    return elliptic, constant, asymptotic, band_constants


def elliptic_in_direction(a: DiscreteSymbol, xi0: Sequence[float], cone: Cone,
                          radius: float = 1.0) -> EllipticityReport:
    """
    |a(x, xi)| >= C (1 + |xi|)**m on the cone beyond ``radius`` for every grid x.

    The verdict is re-taken after adding the order m-1 symbol
    (1 + |xi|^2)**((m-1)/2); an elliptic symbol must stay elliptic.
    """
    if not cone.contains(xi0):
        raise SpecError(f"direction {list(xi0)} is not inside the cone")
    elliptic, constant, asymptotic, bands = _ellipticity(a, cone, radius)
    lower = tabulate_symbol(a.n, a.window, a.order - 1,
                            lambda x, xi, r: (1.0 + r ** 2) ** ((a.order - 1) / 2), name='lower-order')
    perturbed_radius = max(radius, 2.0 / constant) if elliptic and constant > 0 else radius
    p_elliptic, p_constant, _, _ = _ellipticity(a.perturbed(lower), cone, perturbed_radius)
    stable = p_elliptic == elliptic
    if not stable:
        logging.warning(f"ellipticity of {a.name} changed under a lower-order perturbation")
    return EllipticityReport(elliptic, constant, asymptotic, bands, stable, p_constant)


# ---------------------------------------------------------------------------
# inclusion and regularity checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InclusionReport:
    input_exponent: float
    output_exponent: float
    order: float
    required: float
    vanishing: bool
    input_decay: DecayReport
    output_decay: DecayReport

    def to_dict(self) -> Dict[str, Any]:
        def _num(v):
            return v if math.isfinite(v) else str(v)
        return {'input_exponent': _num(self.input_exponent), 'output_exponent': _num(self.output_exponent),
                'order': _num(self.order), 'required': _num(self.required), 'vanishing': self.vanishing,
                'input_decay': self.input_decay.to_dict(), 'output_decay': self.output_decay.to_dict()}


def _offending_band(worse: DecayReport, better: DecayReport) -> Optional[int]:
    gaps = [(w - b, band) for band, w, b in zip(worse.bands, worse.log_sups, better.log_sups)
            if w > -math.inf]
    return max(gaps)[1] if gaps else None


def _inside_point(cone: Cone) -> Tuple[float, ...]:
    scale = cone.excluded_radius + 1.0
    return tuple(scale * a for a in cone.axis)


def _vanishes_on(a: DiscreteSymbol, cone: Cone, tolerance: float = 1e-14) -> bool:
    mask = cone.mask(a.window)
    magnitude = np.max(np.abs(a.values), axis=tuple(range(a.n))) if a.x_points > 1 \
        else np.abs(a.values).reshape(mask.shape)
    return bool(mask.any()) and float(np.max(magnitude[mask])) <= tolerance


def verify_microlocal_inclusion(a: DiscreteSymbol, u: FourierField, cone: Cone, inner: Cone,
                                tolerance: Optional[float] = None,
                                k_max: Optional[float] = None) -> InclusionReport:
    """
    Rapid decay of u in ``cone`` carries over to a(x,D)u in ``inner`` with an
    exponent loss of at most the symbol's order; a symbol vanishing on the
    cone produces rapid decay in ``inner`` whatever u is.
    """
    settings = get_microlocal_settings()
    tolerance = settings['fit_tolerance'] if tolerance is None else tolerance
    k_max = settings['k_max'] if k_max is None else k_max
    if not cone.compactly_contains(inner):
        raise SpecError("inner cone is not compactly contained in the cone")

    out = apply_symbol(a, u)
    output_decay = cone_decay_report(out, inner, k_max)
    input_decay = cone_decay_report(u, cone, k_max)

    if _vanishes_on(a, cone):
        if not output_decay.is_rapid:
            raise InclusionFailure("symbol vanishes on the cone but a(x,D)u is not rapid",
                                   band=_offending_band(output_decay, input_decay))
        return InclusionReport(input_decay.fitted_exponent, output_decay.fitted_exponent,
                               measured_order(a, cone), -math.inf, True, input_decay, output_decay)

    if not input_decay.is_rapid:
        raise HypothesisFailed('rapid-decay', f"u is {input_decay.verdict.value} in the cone")
    order = measured_order(a, cone)
    required = input_decay.fitted_exponent - max(order, 0.0) - tolerance
    if output_decay.fitted_exponent < required:
        raise InclusionFailure(f"exponent {output_decay.fitted_exponent:.3f} below {required:.3f}",
                               band=_offending_band(output_decay, input_decay))
    logging.debug(f"inclusion for {a.name}: k_in={input_decay.fitted_exponent:.3f}, "
                  f"k_out={output_decay.fitted_exponent:.3f}, order={order:.3f}")
    return InclusionReport(input_decay.fitted_exponent, output_decay.fitted_exponent, order,
                           required, False, input_decay, output_decay)


def verify_elliptic_regularity(a: DiscreteSymbol, u: FourierField, cone: Cone, inner: Cone,
                               tolerance: Optional[float] = None) -> Dict[str, Any]:
    """Exponent of u in ``inner`` is at least that of a(x,D)u in ``cone`` plus the order."""
    tolerance = get_microlocal_settings()['fit_tolerance'] if tolerance is None else tolerance
    if not cone.compactly_contains(inner):
        raise SpecError("inner cone is not compactly contained in the cone")
    ellipticity = elliptic_in_direction(a, _inside_point(cone), cone)
    if not ellipticity.elliptic:
        raise HypothesisFailed('elliptic', f"{a.name} is not elliptic in the cone")
    f = apply_symbol(a, u)
    f_decay = cone_decay_report(f, cone)
    u_decay = cone_decay_report(u, inner)
    order = min(a.order, measured_order(a, cone))
    gain = u_decay.fitted_exponent - f_decay.fitted_exponent
    if gain < order - tolerance:
        raise InclusionFailure(f"regularity gain {gain:.3f} below {order - tolerance:.3f}",
                               band=_offending_band(u_decay, f_decay))
    return {'order': order, 'gain': gain, 'u_exponent': u_decay.fitted_exponent,
            'f_exponent': f_decay.fitted_exponent, 'ellipticity': ellipticity.to_dict()}


def elliptic_regularity_limit(a: DiscreteSymbol, u: FourierField, cone: Cone, inner: Cone,
                              k_max: Optional[float] = None) -> Dict[str, Any]:
    """If a(x,D)u decays rapidly in the cone, so does u in ``inner``."""
    k_max = get_microlocal_settings()['k_max'] if k_max is None else k_max
    f_decay = cone_decay_report(apply_symbol(a, u), cone, k_max)
    if not f_decay.is_rapid:
        raise HypothesisFailed('rapid-decay', "a(x,D)u is not rapid in the cone")
    if not elliptic_in_direction(a, _inside_point(cone), cone).elliptic:
        raise HypothesisFailed('elliptic', f"{a.name} is not elliptic in the cone")
    u_decay = cone_decay_report(u, inner, k_max)
    if not u_decay.is_rapid:
        raise InclusionFailure("u is not rapid where a(x,D)u is", band=_offending_band(u_decay, f_decay))
    return {'f_decay': f_decay.to_dict(), 'u_decay': u_decay.to_dict()}


# ---------------------------------------------------------------------------
# t-elliptic cones of the sum of squares
# ---------------------------------------------------------------------------

def t_elliptic_cone_decay(sys: SystemSpec, u: PartialFourierField, window: Optional[int] = None,
                          k_max: Optional[float] = None) -> Tuple[float, DecayReport]:
    """
    Largest dyadic c <= 1 with u^ rapidly decaying on {|xi| <= c |tau|}.

    P is elliptic at every (t, x, tau, 0), so smooth P u forces decay of u in
    some cone around the tau-directions.
    """
    settings = get_microlocal_settings()
    window = window or settings['window']
    k_max = settings['k_max'] if k_max is None else k_max
    p_report = decay_report(apply_sum_of_squares(u, sys))
    if not p_report.is_rapid:
        logging.warning(f"P u is {p_report.verdict.value}; the cone search may fail")

    full = embed_partial_field(u, window)
    mesh = lattice_mesh(sys.n + 1, window)
    tau_norm = np.sqrt(sum(m.astype(float) ** 2 for m in mesh[:-1]))
    xi_abs = np.abs(mesh[-1]).astype(float)
    radius = full.radius()
    magnitude = np.abs(full.coeffs)

    c = 1.0
    while c >= 1.0 / window:
        mask = (radius > 0) & (xi_abs <= c * tau_norm)
        try:
            report = _masked_decay(magnitude, radius, mask, window, k_max)
        except InsufficientBands:
            report = None
        if report is not None and report.is_rapid:
            logging.info(f"u decays rapidly on |xi| <= {c:g} |tau|")
            return c, report
        c /= 2
    raise NoConeFound(f"no cone |xi| <= c|tau| with c >= 1/{window} carries rapid decay")
