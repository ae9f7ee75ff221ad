"""
Calculation utilities for hypocalc.
Dyadic band tables, log-log decay fits and Peetre's inequality.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import stats

from config_manager import config
from .errors import InsufficientBands


class DecayVerdict(str, Enum):
    RAPID = 'RapidDecay'
    POLYNOMIAL = 'PolynomialGrowth'
    INCONCLUSIVE = 'Inconclusive'


@dataclass(frozen=True)
class DecayReport:
    """Band table and log-log fit of a coefficient profile.

    ``log_sups`` holds natural logarithms of the band maxima so that
    magnitudes below double range survive; -inf marks an empty band.
    """

    bands: Tuple[int, ...]
    log_sups: Tuple[float, ...]
    fitted_exponent: float
    fitted_constant: float
    growth_order: Optional[float]
    verdict: DecayVerdict
    fit_residual: float
    threshold: float
    local_exponents: Tuple[float, ...] = field(default_factory=tuple)

    @property
    def is_rapid(self) -> bool:
        return self.verdict is DecayVerdict.RAPID

    def band_sups(self) -> List[float]:
        return [math.exp(v) if v > -math.inf else 0.0 for v in self.log_sups]

    def to_frame(self) -> pd.DataFrame:
        fitted = [math.log(self.fitted_constant) - self.fitted_exponent * band_log_scale(b)
                  if self.fitted_constant > 0 and math.isfinite(self.fitted_exponent) else math.nan
                  for b in self.bands]
        return pd.DataFrame({
            'band': list(self.bands),
            'log_sup': list(self.log_sups),
            'sup': self.band_sups(),
            'log_fit': fitted,
        })

    def to_dict(self) -> Dict[str, Any]:
        exponent = self.fitted_exponent if math.isfinite(self.fitted_exponent) else 'inf'
        return {
            'verdict': self.verdict.value,
            'fitted_exponent': exponent,
            'fitted_constant': self.fitted_constant,
            'growth_order': self.growth_order,
            'fit_residual': self.fit_residual,
            'threshold': self.threshold,
            'bands': [{'band': b, 'log_sup': v if v > -math.inf else None}
                      for b, v in zip(self.bands, self.log_sups)],
        }


def band_index(xi: int) -> int:
    """Dyadic band m with 2**m <= |xi| < 2**(m+1); xi must be nonzero."""
    return abs(int(xi)).bit_length() - 1


def last_complete_band(xi_window: int) -> int:
    """Largest m whose band [2**m, 2**(m+1)) lies inside |xi| <= xi_window."""
    return (int(xi_window) + 1).bit_length() - 2


def band_log_scale(band: int) -> float:
    """log(1 + 2**band), the abscissa used for a band."""
    if band > 1000:
        return band * math.log(2.0)
    return math.log1p(2.0 ** band)


def band_table(log_values: Iterable[Tuple[int, float]], xi_window: int) -> Dict[int, float]:
    """Band maxima of (xi, log|value|) pairs, keeping complete bands only."""
    top = last_complete_band(xi_window)
    table: Dict[int, float] = {m: -math.inf for m in range(0, top + 1)}
    for xi, log_value in log_values:
        if xi == 0:
            continue
        m = band_index(xi)
        if m > top:
            continue
        table[m] = max(table[m], log_value)
    return table


def fit_decay_profile(table: Dict[int, float], threshold: Optional[float] = None,
                      residual_tolerance: Optional[float] = None,
                      min_bands: int = 3,
                      scales: Optional[Dict[int, float]] = None) -> DecayReport:
    """
    Fit log(sup) = log(C) - k log(1 + 2**m) over the populated bands.

    Parameters:
    -----------
    table : dict
        band index -> natural log of the band maximum (-inf when empty)
    threshold : float
        exponent required for RapidDecay
    residual_tolerance : float
        RMS tolerance of the fit in log scale
    scales : dict, optional
        band index -> abscissa log(1 + |z|) of the point attaining the
        band maximum; defaults to log(1 + 2**m)

    Returns:
    --------
    DecayReport
    """
    defaults = config.get_solver_defaults()
    if threshold is None:
        threshold = float(defaults['rapid_threshold'])
    if residual_tolerance is None:
        residual_tolerance = float(defaults['fit_residual_tolerance'])

    bands = sorted(table)
    if bands and table[bands[-1]] == -math.inf:
        # eventually zero on the window
        return DecayReport(tuple(bands), tuple(table[b] for b in bands), math.inf, 0.0, 0.0,
                           DecayVerdict.RAPID, 0.0, threshold)

    populated = [b for b in bands if table[b] > -math.inf]
    if len(populated) < min_bands:
        raise InsufficientBands(f"{len(populated)} populated bands, need {min_bands}")

    x = np.array([scales[b] if scales and b in scales else band_log_scale(b) for b in populated])
    y = np.array([table[b] for b in populated])
    if np.ptp(y) == 0:
        slope, intercept = 0.0, float(y[0])
    else:
        fit = stats.linregress(x, y)
        slope, intercept = float(fit.slope), float(fit.intercept)
    residual = float(np.sqrt(np.mean((y - (intercept + slope * x)) ** 2)))
    exponent = -slope
    local = tuple(float(-(y[i + 1] - y[i]) / (x[i + 1] - x[i])) for i in range(len(x) - 1))
    accelerating = all(b >= a - 1e-9 for a, b in zip(local, local[1:])) and local[-1] >= threshold

    if exponent >= threshold and (residual <= residual_tolerance or accelerating):
        verdict = DecayVerdict.RAPID
    elif residual <= residual_tolerance:
        verdict = DecayVerdict.POLYNOMIAL
    else:
        verdict = DecayVerdict.INCONCLUSIVE
    growth = max(0.0, -exponent)
    constant = math.exp(intercept) if intercept < 700 else math.inf
    logging.debug(f"decay fit over {len(populated)} bands: k={exponent:.3f}, residual={residual:.3f}, {verdict.value}")
    return DecayReport(tuple(bands), tuple(table[b] for b in bands), exponent, constant, growth,
                       verdict, residual, threshold, local)


def peetre_holds(zeta: Sequence[float], zeta_prime: Sequence[float], sigma: float) -> bool:
    """(1+|z|)**s <= (1+|z'|)**s * (1+|z - z'|)**|s|, compared in log scale."""
    z = np.asarray(zeta, dtype=float)
    zp = np.asarray(zeta_prime, dtype=float)
    lhs = sigma * math.log1p(float(np.linalg.norm(z)))
    rhs = sigma * math.log1p(float(np.linalg.norm(zp))) + abs(sigma) * math.log1p(float(np.linalg.norm(z - zp)))
    return lhs <= rhs + 1e-12
