"""
Exact trigonometric-polynomial coefficients on T^n.

A TrigPoly stores a finite map from integer frequency vectors to complex
coefficients with rational real and imaginary parts.  All algebra here is
exact; floating point appears only in evaluation and grid sampling.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .diophantine import ExactReal, Rational
from .errors import IndexOutOfRange, NotClosed, SpecError

Freq = Tuple[int, ...]
Coefficient = Tuple[Fraction, Fraction]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _as_coefficient(value: Any) -> Coefficient:
    if isinstance(value, tuple):
        re, im = value
        return Fraction(re), Fraction(im)
    if isinstance(value, complex):
        return Fraction(value.real), Fraction(value.imag)
    return Fraction(value), _ZERO


class TrigPoly:
    """Real-valued trigonometric polynomial with exact rational coefficients."""

    __slots__ = ('_dim', '_terms', '_hash')

    def __init__(self, dim: int, terms: Optional[Mapping[Freq, Any]] = None):
        if dim < 1:
            raise SpecError(f"dimension must be positive, got {dim}")
        clean: Dict[Freq, Coefficient] = {}
        for freq, value in (terms or {}).items():
            freq = tuple(int(k) for k in freq)
            if len(freq) != dim:
                raise SpecError(f"frequency {freq} does not have dimension {dim}")
            re, im = _as_coefficient(value)
            if re or im:
                clean[freq] = (re, im)
        for freq, (re, im) in clean.items():
            mirror = tuple(-k for k in freq)
            if clean.get(mirror, (_ZERO, _ZERO)) != (re, -im):
                raise SpecError(f"coefficients at {freq} and {mirror} are not conjugate")
        self._dim = dim
        self._terms = clean
        self._hash = None

    # --- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, dim: int) -> 'TrigPoly':
        return cls(dim)

    @classmethod
    def constant(cls, dim: int, value) -> 'TrigPoly':
        return cls(dim, {(0,) * dim: Fraction(value)})

    @classmethod
    def cos(cls, dim: int, freq: Sequence[int], scale=1) -> 'TrigPoly':
        """scale * cos(<freq, t>)."""
        k = tuple(freq)
        half = Fraction(scale) / 2
        if not any(k):
            return cls.constant(dim, Fraction(scale))
        return cls(dim, {k: half, tuple(-x for x in k): half})

    @classmethod
    def sin(cls, dim: int, freq: Sequence[int], scale=1) -> 'TrigPoly':
        """scale * sin(<freq, t>)."""
        k = tuple(freq)
        half = Fraction(scale) / 2
        if not any(k):
            return cls.zero(dim)
        return cls(dim, {k: (_ZERO, -half), tuple(-x for x in k): (_ZERO, half)})

    # --- basic properties -------------------------------------------------

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def terms(self) -> Dict[Freq, Coefficient]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Freq, Coefficient]]:
        return iter(sorted(self._terms.items()))

    def complex_terms(self) -> Dict[Freq, complex]:
        return {k: complex(float(re), float(im)) for k, (re, im) in self._terms.items()}

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    @property
    def bandwidth(self) -> int:
        """Largest |k|_inf over the support."""
        return max((max(abs(x) for x in k) for k in self._terms), default=0)

    def l1_norm(self) -> Fraction:
        """Upper bound for the sup norm: sum of |c_k| (rounded up through |re| + |im|)."""
        return sum((abs(re) + abs(im) for re, im in self._terms.values()), _ZERO)

    def l1_norm_float(self) -> float:
        return float(sum(abs(complex(float(re), float(im))) for re, im in self._terms.values()))

    @property
    def constant_coefficient(self) -> Fraction:
        return self._terms.get((0,) * self._dim, (_ZERO, _ZERO))[0]

    def without_constant(self) -> 'TrigPoly':
        terms = dict(self._terms)
        terms.pop((0,) * self._dim, None)
        return TrigPoly(self._dim, terms)

    # --- arithmetic -------------------------------------------------------

    def _check_dim(self, other: 'TrigPoly') -> None:
        if other.dim != self._dim:
            raise SpecError(f"dimension mismatch: {self._dim} vs {other.dim}")

    def __add__(self, other: 'TrigPoly') -> 'TrigPoly':
        self._check_dim(other)
        terms = dict(self._terms)
        for k, (re, im) in other._terms.items():
            old_re, old_im = terms.get(k, (_ZERO, _ZERO))
            terms[k] = (old_re + re, old_im + im)
        return TrigPoly(self._dim, terms)

    def __neg__(self) -> 'TrigPoly':
        return TrigPoly(self._dim, {k: (-re, -im) for k, (re, im) in self._terms.items()})

    def __sub__(self, other: 'TrigPoly') -> 'TrigPoly':
        return self + (-other)

    def __mul__(self, other) -> 'TrigPoly':
        if isinstance(other, TrigPoly):
            self._check_dim(other)
            terms: Dict[Freq, Coefficient] = {}
            for (k1, (r1, i1)), (k2, (r2, i2)) in itertools.product(self._terms.items(), other._terms.items()):
                k = tuple(a + b for a, b in zip(k1, k2))
                old_re, old_im = terms.get(k, (_ZERO, _ZERO))
                terms[k] = (old_re + r1 * r2 - i1 * i2, old_im + r1 * i2 + i1 * r2)
            return TrigPoly(self._dim, terms)
        scale = Fraction(other)
        return TrigPoly(self._dim, {k: (re * scale, im * scale) for k, (re, im) in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, TrigPoly) and other.dim == self._dim and other._terms == self._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._dim, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        body = ', '.join(f"{k}: {re}{'+' if im >= 0 else '-'}{abs(im)}i" for k, (re, im) in self.items())
        return f"TrigPoly(dim={self._dim}, {{{body}}})"

    # --- evaluation -------------------------------------------------------

    def eval(self, point: Sequence[float]) -> float:
        """Value at a point of T^n (coordinates in radians)."""
        if len(point) != self._dim:
            raise SpecError(f"point has {len(point)} coordinates, expected {self._dim}")
        t = np.asarray(point, dtype=float)
        total = 0.0
        for k, (re, im) in self.items():
            phase = float(np.dot(k, t))
            total += float(re) * math.cos(phase) - float(im) * math.sin(phase)
        return total

    def grid_values(self, points_per_axis: int) -> np.ndarray:
        """Values on the uniform grid 2*pi*i/M along every axis, indexed 'ij'."""
        axis = 2 * np.pi * np.arange(points_per_axis) / points_per_axis
        mesh = np.meshgrid(*([axis] * self._dim), indexing='ij')
        values = np.zeros((points_per_axis,) * self._dim)
        for k, (re, im) in self.items():
            phase = sum(kk * m for kk, m in zip(k, mesh))
            values += float(re) * np.cos(phase) - float(im) * np.sin(phase)
        return values

    def to_dict(self) -> List[Dict[str, Any]]:
        return [{'freq': list(k), 're': f"{re.numerator}/{re.denominator}",
                 'im': f"{im.numerator}/{im.denominator}"} for k, (re, im) in self.items()]


# ---------------------------------------------------------------------------
# exact operations
# ---------------------------------------------------------------------------

def _check_index(p: TrigPoly, j: int) -> None:
    if not 1 <= j <= p.dim:
        raise IndexOutOfRange(f"index {j} outside 1..{p.dim}")


def partial_derivative(p: TrigPoly, j: int) -> TrigPoly:
    """d/dt_j: coefficient-wise multiplication by i*k_j."""
    _check_index(p, j)
    terms = {}
    for k, (re, im) in p.terms.items():
        kj = k[j - 1]
        if kj:
            terms[k] = (-kj * im, kj * re)
    return TrigPoly(p.dim, terms)


def mean_in_variable(p: TrigPoly, j: int) -> TrigPoly:
    """Average over t_j: keep only the terms with k_j = 0."""
    _check_index(p, j)
    return TrigPoly(p.dim, {k: c for k, c in p.terms.items() if k[j - 1] == 0})


def primitive_A_j(a: TrigPoly, j: int) -> TrigPoly:
    """Periodic t_j-primitive of a - mean_in_variable(a, j) vanishing on {t_j = 0}."""
    _check_index(a, j)
    terms: Dict[Freq, Coefficient] = {}

    def add(k: Freq, re: Fraction, im: Fraction) -> None:
        old_re, old_im = terms.get(k, (_ZERO, _ZERO))
        terms[k] = (old_re + re, old_im + im)

    for k, (re, im) in a.terms.items():
        kj = k[j - 1]
        if not kj:
            continue
        # c / (i k_j)
        q_re, q_im = im / kj, -re / kj
        add(k, q_re, q_im)
        k_hat = k[:j - 1] + (0,) + k[j:]
        add(k_hat, -q_re, -q_im)
    return TrigPoly(a.dim, terms)


def commutator_bracket(a_j: TrigPoly, a_l: TrigPoly, j: int, l: int) -> TrigPoly:
    """Coefficient of d/dx in [X_j, X_l]: d_j a_l - d_l a_j."""
    _check_index(a_j, j)
    _check_index(a_j, l)
    if j == l:
        raise IndexOutOfRange("bracket indices must be distinct")
    return partial_derivative(a_l, j) - partial_derivative(a_j, l)


def restrict_leading(p: TrigPoly, j: int) -> TrigPoly:
    """Set t_1 = ... = t_{j-1} = 0."""
    _check_index(p, j)
    terms: Dict[Freq, Coefficient] = {}
    for k, (re, im) in p.terms.items():
        reduced = (0,) * (j - 1) + k[j - 1:]
        old_re, old_im = terms.get(reduced, (_ZERO, _ZERO))
        terms[reduced] = (old_re + re, old_im + im)
    return TrigPoly(p.dim, terms)


_COS_EIGHTHS = [(1, 0), (0, Fraction(1, 2)), (0, 0), (0, Fraction(-1, 2)),
                (-1, 0), (0, Fraction(-1, 2)), (0, 0), (0, Fraction(1, 2))]
_SIN_EIGHTHS = [(0, 0), (0, Fraction(1, 2)), (1, 0), (0, Fraction(1, 2)),
                (0, 0), (0, Fraction(-1, 2)), (-1, 0), (0, Fraction(-1, 2))]


def exact_value_at(p: TrigPoly, point_in_eighths: Sequence[int]) -> Tuple[Fraction, Fraction]:
    """Exact value a + b*sqrt(2) at t = 2*pi*m/8 for integer vectors m."""
    if len(point_in_eighths) != p.dim:
        raise SpecError(f"point has {len(point_in_eighths)} coordinates, expected {p.dim}")
    a, b = _ZERO, _ZERO
    for k, (re, im) in p.terms.items():
        r = sum(kk * m for kk, m in zip(k, point_in_eighths)) % 8
        cos_a, cos_b = _COS_EIGHTHS[r]
        sin_a, sin_b = _SIN_EIGHTHS[r]
        a += re * cos_a - im * sin_a
        b += re * cos_b - im * sin_b
    return a, b


# e^{i theta} = (3 + 4i)/5; theta/pi is irrational, so these points never alias.
_PYTHAGOREAN = (Fraction(3, 5), Fraction(4, 5))


def _gaussian_power(e: int) -> Tuple[Fraction, Fraction]:
    re, im = _PYTHAGOREAN if e >= 0 else (_PYTHAGOREAN[0], -_PYTHAGOREAN[1])
    out = (_ONE, _ZERO)
    base = (re, im)
    e = abs(e)
    while e:
        if e & 1:
            out = (out[0] * base[0] - out[1] * base[1], out[0] * base[1] + out[1] * base[0])
        base = (base[0] * base[0] - base[1] * base[1], 2 * base[0] * base[1])
        e >>= 1
    return out


def pythagorean_value_at(p: TrigPoly, multiples: Sequence[int]) -> Fraction:
    """Exact value of p at t_j = m_j * theta, where cos(theta) = 3/5 and sin(theta) = 4/5.

    A non-constant p of bandwidth B takes at least two values on the grid
    {0, ..., 2B}**n.
    """
    if len(multiples) != p.dim:
        raise SpecError(f"point has {len(multiples)} coordinates, expected {p.dim}")
    value = _ZERO
    for k, (re, im) in p.terms.items():
        cos_e, sin_e = _gaussian_power(sum(kk * m for kk, m in zip(k, multiples)))
        value += re * cos_e - im * sin_e
    return value


# ---------------------------------------------------------------------------
# systems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SystemSpec:
    """X_j = d/dt_j + (a_j(t) + constants[j]) d/dx, j = 1..n."""

    n: int
    coefficients: Tuple[TrigPoly, ...]
    constants: Tuple[ExactReal, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, 'coefficients', tuple(self.coefficients))
        if self.n < 1:
            raise SpecError("n must be positive")
        if len(self.coefficients) != self.n:
            raise SpecError(f"expected {self.n} coefficients, got {len(self.coefficients)}")
        for j, a in enumerate(self.coefficients, start=1):
            if a.dim != self.n:
                raise SpecError(f"coefficient a_{j} has dimension {a.dim}, expected {self.n}")
        constants = tuple(self.constants) or tuple(Rational(0) for _ in range(self.n))
        if len(constants) != self.n:
            raise SpecError(f"expected {self.n} constants, got {len(constants)}")
        object.__setattr__(self, 'constants', constants)

    @classmethod
    def constant(cls, alphas: Sequence[ExactReal]) -> 'SystemSpec':
        n = len(alphas)
        return cls(n, tuple(TrigPoly.zero(n) for _ in range(n)), tuple(alphas))

    def coefficient(self, j: int) -> TrigPoly:
        if not 1 <= j <= self.n:
            raise IndexOutOfRange(f"index {j} outside 1..{self.n}")
        return self.coefficients[j - 1]

    def mean(self, j: int) -> TrigPoly:
        """a_{j0}: the t_j-average of the polynomial part of a_j."""
        return mean_in_variable(self.coefficient(j), j)

    def constant_term(self, j: int) -> ExactReal:
        """Constant part of a_{j0} as an exact real."""
        return self.constants[j - 1].plus_rational(self.coefficient(j).constant_coefficient)

    def averaged_part(self, j: int) -> TrigPoly:
        """Non-constant part of a_{j0}."""
        return self.mean(j).without_constant()

    def brackets(self) -> Dict[Tuple[int, int], TrigPoly]:
        return {(j, l): commutator_bracket(self.coefficient(j), self.coefficient(l), j, l)
                for j, l in itertools.combinations(range(1, self.n + 1), 2)}

    def is_closed(self) -> bool:
        return all(b.is_zero() for b in self.brackets().values())

    def alphas(self) -> List[ExactReal]:
        """Constant averages; defined when every a_{j0} is constant."""
        for j in range(1, self.n + 1):
            if not self.averaged_part(j).is_zero():
                raise NotClosed(f"a_{j}0 is not constant")
        return [self.constant_term(j) for j in range(1, self.n + 1)]

    def permute_coordinates(self, perm: Sequence[int]) -> 'SystemSpec':
        """Relabel t: new coordinate i is old coordinate perm[i] (0-based)."""
        if sorted(perm) != list(range(self.n)):
            raise SpecError(f"{perm} is not a permutation of 0..{self.n - 1}")
        coefficients = []
        for i in range(self.n):
            old = self.coefficients[perm[i]]
            coefficients.append(TrigPoly(self.n, {tuple(k[perm[m]] for m in range(self.n)): c
                                                  for k, c in old.terms.items()}))
        constants = tuple(self.constants[perm[i]] for i in range(self.n))
        return SystemSpec(self.n, tuple(coefficients), constants)

    def to_dict(self) -> Dict[str, Any]:
        return {'n': self.n,
                'coefficients': [a.to_dict() for a in self.coefficients],
                'constants': [c.to_dict() for c in self.constants]}


def global_primitive_A(sys: SystemSpec) -> TrigPoly:
    """A with d_j A = a_j - alpha_j for every j, by telescoping t_j-primitives."""
    for (j, l), bracket in sys.brackets().items():
        if not bracket.is_zero():
            raise NotClosed(f"bracket ({j}, {l}) is nonzero")
    total = TrigPoly.zero(sys.n)
    for j in range(1, sys.n + 1):
        total = total + primitive_A_j(restrict_leading(sys.coefficient(j), j), j)
    return total


@dataclass(frozen=True)
class FiniteTypeReport:
    exists: bool
    witness_point: Optional[Tuple[Fraction, ...]] = None
    witness_pair: Optional[Tuple[int, int]] = None
    bracket: Optional[TrigPoly] = None
    reciprocal_sup_bound: Optional[float] = None
    peak: Optional[float] = None

    def witness_radians(self) -> Optional[Tuple[float, ...]]:
        if self.witness_point is None:
            return None
        return tuple(2 * math.pi * float(c) for c in self.witness_point)

    def to_dict(self) -> Dict[str, Any]:
        doc: Dict[str, Any] = {'exists': self.exists}
        if self.exists:
            doc.update({
                'witness_point_turns': [f"{c.numerator}/{c.denominator}" for c in self.witness_point],
                'witness_pair': list(self.witness_pair),
                'bracket': self.bracket.to_dict(),
                'reciprocal_sup_bound': self.reciprocal_sup_bound,
                'peak': self.peak,
            })
        return doc


def finite_type_exists(sys: SystemSpec) -> FiniteTypeReport:
    """Locate a point where some bracket d_j a_l - d_l a_j is nonzero."""
    best = None
    for pair, bracket in sorted(sys.brackets().items()):
        if bracket.is_zero():
            continue
        m = 4 * (bracket.bandwidth + 1)
        values = bracket.grid_values(m)
        peak = float(np.max(np.abs(values)))
        if best is None or peak > best[0]:
            best = (peak, pair, bracket, values, m)
    if best is None:
        return FiniteTypeReport(False)

    peak, pair, bracket, values, m = best
    flat = values.ravel()
    at_peak = np.isclose(np.abs(flat), peak, rtol=1e-12, atol=0.0)
    positive = at_peak & (flat > 0)
    index = int(np.argmax(positive)) if positive.any() else int(np.argmax(at_peak))
    grid_index = np.unravel_index(index, values.shape)
    witness = tuple(Fraction(int(i), m) for i in grid_index)

    in_u = np.abs(flat) >= peak / 2
    reciprocal = float(1.0 / np.min(np.abs(flat[in_u])))
    logging.debug(f"finite type: pair {pair}, peak {peak:.6g} on a {m}-point grid")
    return FiniteTypeReport(True, witness, pair, bracket, reciprocal, peak)


def exact_form(dim: int, potential: TrigPoly) -> SystemSpec:
    """System a_j = d_j F for a potential F (always closed)."""
    return SystemSpec(dim, tuple(partial_derivative(potential, j) for j in range(1, dim + 1)))


def poly_from_terms(dim: int, entries: Iterable[Tuple[Sequence[int], Any]]) -> TrigPoly:
    """Build a TrigPoly from (freq, coefficient) pairs, summing repeats."""
    terms: Dict[Freq, Coefficient] = {}
    for freq, value in entries:
        re, im = _as_coefficient(value)
        k = tuple(freq)
        old_re, old_im = terms.get(k, (_ZERO, _ZERO))
        terms[k] = (old_re + re, old_im + im)
    return TrigPoly(dim, terms)
