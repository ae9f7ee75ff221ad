"""Generate synthetic systems and fields for hypocalc tests and examples.

Fields come in two flavours: partial Fourier fields on T^n x T (used by the
solver and the classifier) and full Fourier fields on T^N (used by the
microlocal checks).  Every generator is deterministic for a given seed.
"""

from __future__ import annotations

import argparse
import json
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from .coeffs import SystemSpec, TrigPoly, exact_form
from .diophantine import FactorialLiouville, QuadraticIrrational, Rational
from .microlocal import FourierField
from .spectral import ModeBlock, PartialFourierField, from_blocks

DEFAULT_SEED = 20261018
DEFAULT_OUTPUT_DIR = Path("fixtures/synthetic")


def _unit_phases(rng: np.random.Generator, shape) -> np.ndarray:
    return np.exp(2j * np.pi * rng.random(shape))


def _tau_mesh(n: int, t_window: int) -> List[np.ndarray]:
    axis = np.arange(-t_window, t_window + 1)
    return np.meshgrid(*([axis] * n), indexing='ij')


# ---------------------------------------------------------------------------
# partial Fourier fields
# ---------------------------------------------------------------------------

def gaussian_taper_field(n: int, xi_window: int, t_window: int, sigma: float = 4.0,
                         seed: Optional[int] = None, include_zero: bool = True) -> PartialFourierField:
    """u^(tau, xi) = exp(-(|tau|^2 + xi^2) / (2 sigma^2)) with random phases."""
    rng = np.random.default_rng(DEFAULT_SEED if seed is None else seed)
    mesh = _tau_mesh(n, t_window)
    tau_sq = sum(m.astype(float) ** 2 for m in mesh)
    blocks: Dict[int, ModeBlock] = {}
    for xi in range(-xi_window, xi_window + 1):
        if xi == 0 and not include_zero:
            continue
        envelope = np.exp(-(tau_sq + xi * xi) / (2 * sigma * sigma))
        blocks[xi] = ModeBlock((0,) * n, envelope * _unit_phases(rng, envelope.shape))
    return from_blocks(n, blocks, xi_window)


def power_law_field(n: int, xi_window: int, t_window: int, k: float,
                    seed: Optional[int] = None) -> PartialFourierField:
    """|u^(tau, xi)| = a (1 + |(tau, xi)|)^-k with amplitude jitter a in [0.9, 1.1]."""
    rng = np.random.default_rng(DEFAULT_SEED if seed is None else seed)
    mesh = _tau_mesh(n, t_window)
    tau_sq = sum(m.astype(float) ** 2 for m in mesh)
    blocks = {}
    for xi in range(-xi_window, xi_window + 1):
        envelope = (1.0 + np.sqrt(tau_sq + xi * xi)) ** (-k)
        jitter = rng.uniform(0.9, 1.1, envelope.shape)
        blocks[xi] = ModeBlock((0,) * n, envelope * jitter * _unit_phases(rng, envelope.shape))
    return from_blocks(n, blocks, xi_window)


def axis_line_field(n: int, xi_window: int, seed: Optional[int] = None) -> PartialFourierField:
    """x-only field with |u^(xi)| = 1 for every xi != 0 (not smooth)."""
    rng = np.random.default_rng(DEFAULT_SEED if seed is None else seed)
    blocks = {}
    for xi in range(-xi_window, xi_window + 1):
        if xi == 0:
            continue
        blocks[xi] = ModeBlock((0,) * n, _unit_phases(rng, (1,) * n))
    return from_blocks(n, blocks, xi_window)


def tau_axis_field(n: int, t_window: int, xi_window: int = 1) -> PartialFourierField:
    """Unit mass on the tau_1-axis at xi = 0."""
    coeffs = np.zeros((2 * t_window + 1,) * n, dtype=complex)
    index = [t_window] * n
    for tau in range(-t_window, t_window + 1):
        index[0] = tau + t_window
        coeffs[tuple(index)] = 1.0
    return from_blocks(n, {0: ModeBlock((0,) * n, coeffs)}, xi_window)


def flat_field(n: int, xi_window: int, t_window: int) -> PartialFourierField:
    """Every coefficient equal to one."""
    blocks = {xi: ModeBlock((0,) * n, np.ones((2 * t_window + 1,) * n, dtype=complex))
              for xi in range(-xi_window, xi_window + 1)}
    return from_blocks(n, blocks, xi_window)


# ---------------------------------------------------------------------------
# full Fourier fields
# ---------------------------------------------------------------------------

def power_law_fourier_field(n: int, window: int, k: float, seed: Optional[int] = None) -> FourierField:
    """|u^(xi)| = a (1 + |xi|)^-k, a in [0.9, 1.1], random phases."""
    rng = np.random.default_rng(DEFAULT_SEED if seed is None else seed)
    shape = (2 * window + 1,) * n
    jitter = rng.uniform(0.9, 1.1, shape)
    phases = _unit_phases(rng, shape)
    return FourierField.from_function(n, window, lambda mesh, r: jitter * phases * (1.0 + r) ** (-k))


def gaussian_fourier_field(n: int, window: int, sigma: float = 4.0) -> FourierField:
    return FourierField.from_function(n, window, lambda mesh, r: np.exp(-r ** 2 / (2 * sigma * sigma)))


def line_fourier_field(n: int, window: int, axis: int = 0) -> FourierField:
    """u^ = 1 on the xi_{axis+1}-axis minus the origin, 0 elsewhere."""
    def _line(mesh, r):
        others = [m for i, m in enumerate(mesh) if i != axis]
        on_axis = np.ones(r.shape, dtype=bool)
        for m in others:
            on_axis &= m == 0
        return np.where(on_axis & (r > 0), 1.0, 0.0)
    return FourierField.from_function(n, window, _line)


def rough_fourier_field(n: int, window: int, seed: Optional[int] = None) -> FourierField:
    """Unit moduli with random phases everywhere."""
    rng = np.random.default_rng(DEFAULT_SEED if seed is None else seed)
    phases = _unit_phases(rng, (2 * window + 1,) * n)
    return FourierField.from_function(n, window, lambda mesh, r: phases)


# ---------------------------------------------------------------------------
# example systems
# ---------------------------------------------------------------------------

def example_systems() -> Dict[str, SystemSpec]:
    """Named systems covering each branch of the classifier."""
    sqrt2 = QuadraticIrrational(Fraction(0), Fraction(1), 2)
    return {
        'finite_type': SystemSpec(2, (TrigPoly.zero(2), TrigPoly.cos(2, (1, 0)))),
        'zero': SystemSpec(1, (TrigPoly.zero(1),)),
        'sqrt2': SystemSpec.constant([sqrt2]),
        'liouville': SystemSpec.constant([FactorialLiouville(2, 4)]),
        'rational': SystemSpec.constant([Rational(Fraction(1, 2)), Rational(Fraction(1, 3))]),
        'exact_form': SystemSpec(2, exact_form(2, TrigPoly.cos(2, (1, 1))).coefficients,
                                 (sqrt2, Rational(0))),
        'varying_mean': SystemSpec(2, (TrigPoly.cos(2, (0, 1)), TrigPoly.zero(2))),
    }


def generate_synthetic_files(output_dir: Path, seed: int = DEFAULT_SEED) -> List[Path]:
    """Write example systems and fields as JSON documents."""
    output_dir.mkdir(parents=True, exist_ok=True)
    written: List[Path] = []
    for name, system in sorted(example_systems().items()):
        path = output_dir / f"system_{name}.json"
        path.write_text(json.dumps(system.to_dict(), sort_keys=True, indent=2) + "\n", encoding='utf-8')
        written.append(path)
    fields = {
        'gaussian': gaussian_taper_field(1, 16, 4, seed=seed),
        'power_law': power_law_field(1, 16, 4, k=6, seed=seed),
        'axis_line': axis_line_field(1, 16, seed=seed),
    }
    for name, u in sorted(fields.items()):
        path = output_dir / f"field_{name}.json"
        path.write_text(json.dumps(u.to_dict(), sort_keys=True, indent=2) + "\n", encoding='utf-8')
        written.append(path)
    return written


def main() -> None:
    parser = argparse.ArgumentParser(description="Generate synthetic systems and fields for hypocalc.")
    parser.add_argument(
        "--output-dir",
        type=Path,
        default=DEFAULT_OUTPUT_DIR,
        help=f"Output directory (default: {DEFAULT_OUTPUT_DIR.as_posix()})",
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=DEFAULT_SEED,
        help=f"Deterministic random seed (default: {DEFAULT_SEED})",
    )
    args = parser.parse_args()

    written = generate_synthetic_files(args.output_dir, seed=args.seed)
    print(f"Wrote {len(written)} files to {args.output_dir}")
    for path in written:
        print(f" - {path.name}")


if __name__ == "__main__":
    main()
