"""
Simultaneous approximability, the solvability Diophantine condition and
the exponential lower bound used by the mode solver.

Real constants are carried as tagged exact values (``ExactReal``).  Every
comparison involving an irrational tag is certified from rational
enclosures whose precision doubles until the comparison is decided or the
configured cap is reached.
"""

from __future__ import annotations

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, ClassVar, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from mpmath import iv
from scipy import stats

from config_manager import config
from .errors import DepthTooSmall, InconsistentVerdict, SpecError, WitnessInvalid

Enclosure = Tuple[Fraction, Fraction]


def _precision_start() -> int:
    return int(config.get('diophantine.precision_start_bits', 64))


def _precision_cap() -> int:
    return int(config.get('diophantine.precision_cap_bits', 1024))


def _is_perfect_square(d: int) -> bool:
    return d >= 0 and math.isqrt(d) ** 2 == d


def _is_squarefree(d: int) -> bool:
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


class ExactReal:
    """Tagged exact real number.

    Subclasses provide ``enclose(bits)``: a rational interval [lo, hi]
    containing the value whose width is at most 2**-bits.
    """

    tag: ClassVar[str] = ''

    def enclose(self, bits: int) -> Enclosure:
        raise NotImplementedError

    def plus_rational(self, q: Fraction) -> 'ExactReal':
        raise NotImplementedError

    def to_dict(self) -> Dict[str, Any]:
        raise NotImplementedError

    @property
    def is_rational(self) -> bool:
        return False

    @property
    def is_certified(self) -> bool:
        """False only for floating-point approximations."""
        return True

    def __float__(self) -> float:
        lo, hi = self.enclose(64)
        return float((lo + hi) / 2)


@dataclass(frozen=True)
class Rational(ExactReal):
    value: Fraction
    tag: ClassVar[str] = 'rational'

    def __post_init__(self):
        object.__setattr__(self, 'value', Fraction(self.value))

    def enclose(self, bits: int) -> Enclosure:
        return self.value, self.value

    def plus_rational(self, q: Fraction) -> ExactReal:
        return Rational(self.value + Fraction(q))

    def to_dict(self) -> Dict[str, Any]:
        return {'tag': 'rational', 'p': self.value.numerator, 'q': self.value.denominator}

    @property
    def is_rational(self) -> bool:
        return True

    def __float__(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class QuadraticIrrational(ExactReal):
    """a + b*sqrt(d) with rational a, b != 0 and squarefree d > 1."""

    a: Fraction
    b: Fraction
    d: int
    tag: ClassVar[str] = 'quad'

    def __post_init__(self):
        object.__setattr__(self, 'a', Fraction(self.a))
        object.__setattr__(self, 'b', Fraction(self.b))
        if self.b == 0:
            raise SpecError("quadratic irrational needs b != 0")
        if self.d < 2 or _is_perfect_square(self.d) or not _is_squarefree(self.d):
            raise SpecError(f"d={self.d} must be a squarefree integer > 1")

    def enclose(self, bits: int) -> Enclosure:
        # b*sqrt(d) widens the root enclosure by |b|
        bits += abs(self.b).numerator.bit_length()
        scale = 1 << bits
        s = math.isqrt(self.d << (2 * bits))
        root_lo, root_hi = Fraction(s, scale), Fraction(s + 1, scale)
        if self.b > 0:
            return self.a + self.b * root_lo, self.a + self.b * root_hi
        return self.a + self.b * root_hi, self.a + self.b * root_lo

    def plus_rational(self, q: Fraction) -> ExactReal:
        return QuadraticIrrational(self.a + Fraction(q), self.b, self.d)

    def to_dict(self) -> Dict[str, Any]:
        return {'tag': 'quad', 'a': _fraction_text(self.a), 'b': _fraction_text(self.b), 'd': self.d}

    def conjugate_product_constant(self) -> Fraction:
        """C with |tau + alpha*xi| >= C / (1 + |xi|) for all xi != 0.

        Writing a = A/D, b = B/D, the norm (D*tau + A*xi)**2 - d*(B*xi)**2
        is a nonzero integer, so |x| * |x'| >= 1/D**2 where x' is the
        conjugate; |x'| <= K*(1 + |xi|) with K >= max(1, 2|b|sqrt(d)).
        """
        den = math.lcm(self.a.denominator, self.b.denominator)
        root_up = math.isqrt(self.d) + 1
        k = max(1, math.ceil(2 * abs(self.b) * root_up))
        return Fraction(1, den * den * k)


@dataclass(frozen=True)
class FactorialLiouville(ExactReal):
    """L = sum_{k>=1} base**(-k!) shifted by a rational offset.

    ``depth`` is the number of witness entries certified for this value.
    """

    base: int
    depth: int
    offset: Fraction = Fraction(0)
    tag: ClassVar[str] = 'liouville'

    def __post_init__(self):
        object.__setattr__(self, 'offset', Fraction(self.offset))
        if self.base < 2:
            raise SpecError("liouville base must be >= 2")
        if self.depth < 1:
            raise SpecError("liouville depth must be >= 1")

    def partial_sum(self, levels: int) -> Fraction:
        total = Fraction(0)
        for k in range(1, levels + 1):
            total += Fraction(1, self.base ** math.factorial(k))
        return total

    def tail_bound(self, levels: int) -> Fraction:
        """Strict upper bound for L - partial_sum(levels)."""
        return Fraction(2, self.base ** math.factorial(levels + 1))

    def levels_for(self, bits: int) -> int:
        log_base = math.log2(self.base)
        levels = 1
        while math.factorial(levels + 1) * log_base < bits + 1:
            levels += 1
        return levels

    def enclose(self, bits: int) -> Enclosure:
        levels = self.levels_for(bits)
        lo = self.partial_sum(levels) + self.offset
        return lo, lo + self.tail_bound(levels)

    def plus_rational(self, q: Fraction) -> ExactReal:
        return FactorialLiouville(self.base, self.depth, self.offset + Fraction(q))

    def to_dict(self) -> Dict[str, Any]:
        doc = {'tag': 'liouville', 'base': self.base, 'depth': self.depth}
        if self.offset:
            doc['offset'] = _fraction_text(self.offset)
        return doc


@dataclass(frozen=True)
class FloatApprox(ExactReal):
    value: float
    tag: ClassVar[str] = 'float'

    def enclose(self, bits: int) -> Enclosure:
        v = Fraction(self.value)
        return v, v

    def plus_rational(self, q: Fraction) -> ExactReal:
        return FloatApprox(self.value + float(q))

    def to_dict(self) -> Dict[str, Any]:
        return {'tag': 'float', 'v': self.value}

    @property
    def is_certified(self) -> bool:
        return False

    def __float__(self) -> float:
        return self.value


def _fraction_text(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def add_exact(x: ExactReal, y: ExactReal) -> ExactReal:
    """Sum of two tagged values, when the sum stays representable."""
    if isinstance(x, Rational):
        return y.plus_rational(x.value)
    if isinstance(y, Rational):
        return x.plus_rational(y.value)
    if isinstance(x, QuadraticIrrational) and isinstance(y, QuadraticIrrational) and x.d == y.d:
        if x.b + y.b == 0:
            return Rational(x.a + y.a)
        return QuadraticIrrational(x.a + y.a, x.b + y.b, x.d)
    return FloatApprox(float(x) + float(y))


# ---------------------------------------------------------------------------
# certified distances
# ---------------------------------------------------------------------------

def scaled_enclosure(alpha: ExactReal, xi: int, bits: int) -> Enclosure:
    """Enclosure of alpha*xi with width at most 2**-bits."""
    extra = abs(xi).bit_length()
    lo, hi = alpha.enclose(bits + extra)
    lo, hi = lo * xi, hi * xi
    return (lo, hi) if lo <= hi else (hi, lo)


def _distance_from_enclosure(lo: Fraction, hi: Fraction) -> Optional[Enclosure]:
    q_lo, q_hi = round(lo), round(hi)
    if q_lo != q_hi:
        return None
    d_lo, d_hi = abs(lo - q_lo), abs(hi - q_lo)
    if lo <= q_lo <= hi:
        return Fraction(0), max(d_lo, d_hi)
    return (d_lo, d_hi) if d_lo <= d_hi else (d_hi, d_lo)


def dist_to_integer(alpha: ExactReal, xi: int, bits: Optional[int] = None,
                    cap: Optional[int] = None) -> Optional[Enclosure]:
    """Certified enclosure of dist(alpha*xi, Z), or None at the precision cap."""
    bits = bits or _precision_start()
    cap = cap or _precision_cap()
    while True:
        lo, hi = scaled_enclosure(alpha, xi, bits)
        result = _distance_from_enclosure(lo, hi)
        if result is not None:
            return result
        if bits >= cap:
            logging.warning(f"dist(alpha*xi, Z) undecided at {bits} bits for xi={xi}")
            return None
        bits *= 2


def offset_value(alpha: ExactReal, xi: int, tau: int, rel_bits: int = 60,
                 cap_bits: int = 1 << 15) -> Enclosure:
    """Enclosure of tau + alpha*xi with relative width about 2**-rel_bits.

    Used where the value is far below double precision (witness modes),
    so the absolute precision grows until the relative width is reached.
    """
    bits = max(_precision_start(), abs(xi).bit_length() + rel_bits)
    while True:
        lo, hi = scaled_enclosure(alpha, xi, bits)
        lo, hi = lo + tau, hi + tau
        magnitude = max(abs(lo), abs(hi))
        if lo == hi or (lo > 0 or hi < 0) and (hi - lo) * (1 << rel_bits) <= magnitude:
            return lo, hi
        if bits >= cap_bits:
            return lo, hi
        bits *= 2


def log_abs(value: Fraction) -> float:
    """Natural log of |value| for rationals far outside double range."""
    if value == 0:
        return -math.inf
    value = abs(value)
    return math.log(value.numerator) - math.log(value.denominator)


# ---------------------------------------------------------------------------
# witnesses and verdicts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WitnessEntry:
    tau: Tuple[int, ...]
    xi: int
    nu: int

    @property
    def norm_sq(self) -> int:
        return sum(t * t for t in self.tau) + self.xi * self.xi

    def norm_upper(self) -> int:
        """Smallest integer >= |(tau, xi)|."""
        root = math.isqrt(self.norm_sq)
        return root if root * root == self.norm_sq else root + 1

    def to_dict(self) -> Dict[str, Any]:
        return {'nu': self.nu, 'tau': [str(t) for t in self.tau], 'xi': str(self.xi)}


def entry_holds(alphas: Sequence[ExactReal], entry: WitnessEntry, c0: Fraction = Fraction(1)) -> bool:
    """Exact check of max_j |tau_j + alpha_j xi| < c0 (1 + |(tau, xi)|)**-nu."""
    if len(entry.tau) != len(alphas) or entry.xi == 0:
        return False
    if not all(a.is_certified for a in alphas):
        return False
    weight = (1 + entry.norm_upper()) ** entry.nu
    bits = max(_precision_start(), int(entry.nu * math.log2(1 + entry.norm_upper())) + 64)
    for _ in range(3):
        worst = Fraction(0)
        for alpha, tau in zip(alphas, entry.tau):
            lo, hi = scaled_enclosure(alpha, entry.xi, bits)
            worst = max(worst, abs(lo + tau), abs(hi + tau))
        if worst * weight < c0:
            return True
        bits *= 2
    return False


@dataclass(frozen=True)
class WitnessSequence:
    entries: Tuple[WitnessEntry, ...]
    c0: Fraction = Fraction(1)

    def __len__(self):
        return len(self.entries)

    def validate(self, alphas: Sequence[ExactReal]) -> None:
        previous = -1
        for entry in self.entries:
            if entry.norm_sq <= previous:
                raise WitnessInvalid(f"|(tau, xi)| not strictly increasing at nu={entry.nu}")
            previous = entry.norm_sq
            if not entry_holds(alphas, entry, self.c0):
                raise WitnessInvalid(f"approximation inequality fails at nu={entry.nu}")

    def to_dict(self) -> Dict[str, Any]:
        return {'c0': _fraction_text(self.c0), 'entries': [e.to_dict() for e in self.entries]}


class DiophantineStatus(str, Enum):
    SA = 'SA'
    NOT_SA = 'NotSA'
    HOLDS = 'Holds'
    FAILS = 'Fails'
    UNDETERMINED = 'Undetermined'


@dataclass(frozen=True)
class LowerBoundCertificate:
    """max_j |tau_j + alpha_j xi| >= c (1 + |xi|)**-rho off the resonance set."""

    c: Fraction
    rho: Fraction
    proof_tag: str
    coordinate: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        doc = {'c': _fraction_text(self.c), 'rho': _fraction_text(self.rho), 'proof_tag': self.proof_tag}
        if self.coordinate is not None:
            doc['coordinate'] = self.coordinate
        return doc


@dataclass(frozen=True)
class ScanRow:
    xi: int
    m_lo: Fraction
    m_hi: Fraction

    @property
    def exact(self) -> bool:
        return self.m_lo == self.m_hi


@dataclass(frozen=True)
class SAScan:
    rows: Tuple[ScanRow, ...]
    fitted_rho: Optional[float]

    def min_scaled(self, power: float = 1.0) -> Optional[float]:
        """min over scanned xi with m > 0 of |xi|**power * m(xi)."""
        values = [float(r.m_lo) * r.xi ** power for r in self.rows if r.m_lo > 0]
        return min(values) if values else None

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            'xi': [r.xi for r in self.rows],
            'm_xi_num': [r.m_lo.numerator for r in self.rows],
            'm_xi_den': [r.m_lo.denominator for r in self.rows],
            'exact': [r.exact for r in self.rows],
        })

    def summary(self) -> Dict[str, Any]:
        positive = [r for r in self.rows if r.m_lo > 0]
        return {
            'xi_max': self.rows[-1].xi if self.rows else 0,
            'resonant_count': len(self.rows) - len(positive),
            'fitted_rho': self.fitted_rho,
            'min_xi_times_m': self.min_scaled(),
        }


@dataclass(frozen=True)
class DiophantineVerdict:
    status: DiophantineStatus
    scan: SAScan
    witness: Optional[WitnessSequence] = None
    bound: Optional[LowerBoundCertificate] = None
    gamma: Optional[Dict[str, Any]] = None
    notes: Tuple[str, ...] = field(default_factory=tuple)
    strata: Tuple[str, ...] = field(default_factory=tuple)

    def certificate(self) -> Dict[str, Any]:
        doc: Dict[str, Any] = {'status': self.status.value, 'scan': self.scan.summary()}
        if self.witness is not None:
            doc['witness'] = self.witness.to_dict()
        if self.bound is not None:
            doc['bound'] = self.bound.to_dict()
        if self.gamma is not None:
            doc['gamma'] = self.gamma
        if self.notes:
            doc['notes'] = list(self.notes)
        if self.strata:
            doc['strata'] = list(self.strata)
        return doc


# ---------------------------------------------------------------------------
# scans
# ---------------------------------------------------------------------------

def _scan_rows(alphas: Sequence[ExactReal], xis: Sequence[int]) -> List[ScanRow]:
    rows = []
    for xi in xis:
        m_lo, m_hi = Fraction(0), Fraction(0)
        for alpha in alphas:
            dist = dist_to_integer(alpha, xi)
            if dist is None:
                approx = Fraction(abs(float(alpha) * xi - round(float(alpha) * xi)))
                dist = (approx, approx)
            m_lo, m_hi = max(m_lo, dist[0]), max(m_hi, dist[1])
        rows.append(ScanRow(xi, m_lo, m_hi))
    return rows


def sa_scan(alphas: Sequence[ExactReal], xi_max: int, workers: int = 1) -> SAScan:
    """m(xi) = max_j dist(alpha_j xi, Z) for 1 <= xi <= xi_max and the fitted exponent.

    m is even in xi, so only positive xi are tabulated.  Chunks may be
    evaluated on a thread pool; rows are reassembled in xi order.
    """
    if xi_max < 2:
        raise SpecError("xi_max must be >= 2")
    if not alphas:
        raise SpecError("at least one alpha is required")
    xis = list(range(1, xi_max + 1))
    if workers > 1:
        chunks = [xis[i::workers] for i in range(workers)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda chunk: _scan_rows(alphas, chunk), chunks))
        rows = sorted((r for part in parts for r in part), key=lambda r: r.xi)
    else:
        rows = _scan_rows(alphas, xis)

    positive = [r for r in rows if r.m_lo > 0]
    rho = None
    if len(positive) >= 2:
        x = np.log1p(np.array([r.xi for r in positive], dtype=float))
        y = -np.log(np.array([float(r.m_lo) for r in positive]))
        if np.ptp(y) > 0:
            rho = float(stats.linregress(x, y).slope)
        else:
            rho = 0.0
    return SAScan(tuple(rows), rho)


# ---------------------------------------------------------------------------
# witness construction
# ---------------------------------------------------------------------------

def _rational_witness(alphas: Sequence[Rational], depth: int) -> WitnessSequence:
    q = math.lcm(*(a.value.denominator for a in alphas))
    entries = []
    for nu in range(1, depth + 1):
        xi = q * math.factorial(nu + 1) if q == 1 else q * math.factorial(nu)
        tau = tuple(int(-a.value * xi) for a in alphas)
        entries.append(WitnessEntry(tau, xi, nu))
    return WitnessSequence(tuple(entries))


def _factorial_witness(alphas: Sequence[ExactReal], depth: int, level_slack: int = 3) -> Optional[WitnessSequence]:
    """Witness from factorial partial sums, skipping levels that fail with C0 = 1."""
    liouville = [a for a in alphas if isinstance(a, FactorialLiouville)]
    base = liouville[0].base
    q = 1
    for a in alphas:
        den = a.value.denominator if isinstance(a, Rational) else a.offset.denominator
        q = math.lcm(q, den)
    entries: List[WitnessEntry] = []
    level = 1
    while len(entries) < depth and level <= depth + level_slack:
        xi = q * base ** math.factorial(level)
        tau = []
        for a in alphas:
            if isinstance(a, Rational):
                value = a.value * xi
            else:
                value = (a.partial_sum(level) + a.offset) * xi
            tau.append(-int(value))
        candidate = WitnessEntry(tuple(tau), xi, len(entries) + 1)
        if entry_holds(alphas, candidate):
            entries.append(candidate)
        else:
            logging.debug(f"factorial level {level} skipped for witness entry {len(entries) + 1}")
        level += 1
    if len(entries) < 3:
        return None
    return WitnessSequence(tuple(entries))


def liouville_tuple(n: int, base: int, depth: int) -> Tuple[List[FactorialLiouville], WitnessSequence]:
    """n linked factorial-Liouville numbers L + j/base and a certified witness."""
    if n < 1:
        raise SpecError("n must be >= 1")
    if depth < 3:
        raise DepthTooSmall(f"depth={depth}: at least 3 entries are required")
    alphas = [FactorialLiouville(base, depth, Fraction(j, base)) for j in range(n)]
    witness = _factorial_witness(alphas, depth)
    if witness is None:
        raise DepthTooSmall(f"fewer than 3 entries certified for base={base}")
    if len(witness) < depth:
        logging.warning(f"only {len(witness)} of {depth} witness entries certified for base={base}")
    witness.validate(alphas)
    return alphas, witness


def _quad_coordinate(alphas: Sequence[ExactReal]) -> Optional[int]:
    for j, alpha in enumerate(alphas):
        if isinstance(alpha, QuadraticIrrational):
            return j
    return None


def _liouville_compatible(alphas: Sequence[ExactReal]) -> bool:
    bases = {a.base for a in alphas if isinstance(a, FactorialLiouville)}
    return len(bases) == 1 and all(isinstance(a, (Rational, FactorialLiouville)) for a in alphas)


def _check_scan_against_bound(scan: SAScan, alphas: Sequence[ExactReal], j: int, c: Fraction) -> None:
    alpha = alphas[j]
    for row in scan.rows:
        dist = dist_to_integer(alpha, row.xi)
        if dist is not None and dist[0] * (1 + row.xi) < c:
            raise InconsistentVerdict(f"scan at xi={row.xi} violates conjugate-product bound {c}")


def classify_sa(alphas: Sequence[ExactReal], xi_max: int, depth: Optional[int] = None,
                workers: int = 1) -> DiophantineVerdict:
    """Decide simultaneous approximability for tagged constants."""
    if not alphas:
        raise SpecError("at least one alpha is required")
    depth = depth or int(config.get('diophantine.witness_depth', 4))
    scan = sa_scan(alphas, xi_max, workers=workers)

    j = _quad_coordinate(alphas)
    if j is not None:
        c = alphas[j].conjugate_product_constant()
        _check_scan_against_bound(scan, alphas, j, c)
        bound = LowerBoundCertificate(c, Fraction(1), 'conjugate-product', coordinate=j + 1)
        return DiophantineVerdict(DiophantineStatus.NOT_SA, scan, bound=bound)

    if all(isinstance(a, Rational) for a in alphas):
        witness = _rational_witness(alphas, depth)
        witness.validate(alphas)
        return DiophantineVerdict(DiophantineStatus.SA, scan, witness=witness,
                                  notes=('rational-resonance',))

    if _liouville_compatible(alphas):
        linked_depth = max(3, min(a.depth for a in alphas if isinstance(a, FactorialLiouville)))
        witness = _factorial_witness(alphas, linked_depth)
        if witness is not None:
            witness.validate(alphas)
            return DiophantineVerdict(DiophantineStatus.SA, scan, witness=witness,
                                      notes=('factorial-partial-sums',))
        logging.warning("factorial witness could not be certified; verdict undetermined")

    return DiophantineVerdict(DiophantineStatus.UNDETERMINED, scan, notes=('scan-only',))


# ---------------------------------------------------------------------------
# solvability condition
# ---------------------------------------------------------------------------

def gs_condition_check(alphas: Sequence[ExactReal], xi_max: int, include_xi_zero: bool = True,
                       workers: int = 1) -> DiophantineVerdict:
    """Lower bound max_j |tau_j + alpha_j xi| >= C (1 + |xi|)**-rho off Gamma.

    ``include_xi_zero`` adds the xi = 0 stratum (tau != 0) to the quantified
    set.  There max_j |tau_j| >= 1, so the certified constant becomes
    min(C, 1) and the stratum is listed under ``strata``.
    """
    if not alphas:
        raise SpecError("at least one alpha is required")
    scan = sa_scan(alphas, xi_max, workers=workers)
    reading = 'xi-zero-included' if include_xi_zero else 'xi-zero-excluded'
    strata = ('xi=0', 'xi!=0') if include_xi_zero else ('xi!=0',)

    def with_stratum(c: Fraction) -> Fraction:
        if not include_xi_zero:
            return c
        # smallest max-norm of a nonzero tau, checked on the unit cube
        margin = min(max(abs(t) for t in tau) for tau in itertools.product((-1, 0, 1), repeat=len(alphas))
                     if any(tau))
        return min(c, Fraction(margin))

    if all(isinstance(a, Rational) for a in alphas):
        q = math.lcm(*(a.value.denominator for a in alphas))
        c = with_stratum(Fraction(1, q))
        for row in scan.rows:
            off_gamma = row.m_lo if row.m_lo > 0 else Fraction(1)
            if off_gamma < c:
                raise InconsistentVerdict(f"denominator bound violated at xi={row.xi}")
        gamma = {
            'kind': 'lattice',
            'xi_period': q,
            'relations': [f"{a.value.denominator}*tau_{j + 1} + {a.value.numerator}*xi = 0"
                          for j, a in enumerate(alphas)],
        }
        bound = LowerBoundCertificate(c, Fraction(0), 'bounded-denominators')
        return DiophantineVerdict(DiophantineStatus.HOLDS, scan, bound=bound, gamma=gamma, notes=(reading,),
                                  strata=strata)

    j = _quad_coordinate(alphas)
    if j is not None:
        c = with_stratum(alphas[j].conjugate_product_constant())
        _check_scan_against_bound(scan, alphas, j, c)
        bound = LowerBoundCertificate(c, Fraction(1), 'conjugate-product', coordinate=j + 1)
        return DiophantineVerdict(DiophantineStatus.HOLDS, scan, bound=bound,
                                  gamma={'kind': 'origin'}, notes=(reading,), strata=strata)

    if _liouville_compatible(alphas):
        sa = classify_sa(alphas, xi_max, workers=workers)
        if sa.status is DiophantineStatus.SA:
            return DiophantineVerdict(DiophantineStatus.FAILS, scan, witness=sa.witness,
                                      gamma={'kind': 'origin'}, notes=(reading, 'witness-off-gamma'), strata=strata)

    return DiophantineVerdict(DiophantineStatus.UNDETERMINED, scan, notes=(reading, 'scan-only'), strata=strata)


# ---------------------------------------------------------------------------
# exponential lower bound
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExpBoundCheck:
    hypothesis_holds: bool
    conclusion_holds: bool
    distance: float
    modulus: float


_SPECIAL_MODULI = {
    Fraction(0): 0, Fraction(1, 2): 4, Fraction(1, 6): 1, Fraction(5, 6): 1,
    Fraction(1, 3): 3, Fraction(2, 3): 3, Fraction(1, 4): 2, Fraction(3, 4): 2,
}


def _interval_from(lo: Fraction, hi: Fraction):
    a = iv.mpf(lo.numerator) / lo.denominator
    b = iv.mpf(hi.numerator) / hi.denominator
    return iv.mpf([a, b])


def _modulus_at_least(alpha: ExactReal, xi: int, bound: Fraction) -> Tuple[bool, float]:
    """Decide |exp(2 pi i alpha xi) - 1| >= bound; also return a float value."""
    if isinstance(alpha, Rational):
        r = (alpha.value * xi) % 1
        if r in _SPECIAL_MODULI:
            square = _SPECIAL_MODULI[r]
            return square >= bound * bound, math.sqrt(square)
    bits = _precision_start()
    cap = _precision_cap()
    while True:
        lo, hi = scaled_enclosure(alpha, xi, bits)
        lo, hi = lo - math.floor(lo), hi - math.floor(lo)
        previous = iv.prec
        try:
            iv.prec = bits
            value = 2 * abs(iv.sin(iv.pi * _interval_from(lo, hi)))
            bound_iv = iv.mpf(bound.numerator) / bound.denominator
            decided = value >= bound_iv
            estimate = float(value.mid)
        finally:
            iv.prec = previous
        if decided is not None:
            return bool(decided), estimate
        if bits >= cap:
            logging.warning(f"exponential bound undecided at {bits} bits for xi={xi}")
            return estimate >= float(bound), estimate
        bits *= 2


def exp_lower_bound_check(alpha: ExactReal, xi: int, ell: int) -> ExpBoundCheck:
    """Hypothesis dist(alpha xi, Z) >= (1+|xi|)**-ell and the modulus conclusion."""
    if xi == 0:
        raise SpecError("xi must be nonzero")
    if ell < 0:
        raise SpecError("ell must be >= 0")
    bound = Fraction(1, (1 + abs(xi)) ** ell)

    dist = dist_to_integer(alpha, xi)
    if dist is None:
        approx = abs(float(alpha) * xi - round(float(alpha) * xi))
        hypothesis, distance = approx >= float(bound), approx
    else:
        hypothesis, distance = dist[0] >= bound, float(dist[0])
    conclusion, modulus = _modulus_at_least(alpha, xi, bound)
    if hypothesis and not conclusion:
        raise InconsistentVerdict(f"exponential bound fails for xi={xi}, ell={ell}")
    return ExpBoundCheck(hypothesis, conclusion, distance, modulus)
