"""Cross-validation suite: closed forms against the quadrature oracle.

Each check returns a CheckResult; the CLI `verify` command prints one line
per check and fails if any check fails.  The suite is deliberately able to
run on corrupted filters (nothing here assumes the near-PR normalization
holds; it is one of the things being checked).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .closedform import _oqam_to_ofdm_grid, _ofdm_to_oqam_grid
from .filterbank import PrototypeFilter, frequency_response, sample_taps
from .oracle import oracle_parseval_constant, quadrature_I, quadrature_window_energy

__all__ = ["CheckResult", "run_all_checks", "ORACLE_L_GRID"]

ORACLE_L_GRID = (0.0, 0.5, 1.0, 2.0, 3.0, 5.0, 8.0)
PARSEVAL_L_MAX = 1 << 20


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def check_filter_normalization(filt: PrototypeFilter, tol: float = 1e-5) -> CheckResult:
    s = filt.normalization_sum()
    dev = abs(s - filt.overlap_K) / filt.overlap_K
    return CheckResult("filter-normalization",
                       dev <= tol,
                       f"sum G^2 = {s:.8f} vs K = {filt.overlap_K} (rel dev {dev:.2e})")


def check_filter_unit_energy(filt: PrototypeFilter, tol: float = 1e-6) -> CheckResult:
    # pulse energy over its full support, in units of the symbol period
    hw = filt.support_halfwidth
    energy = quadrature_window_energy(filt, hw, 2 * hw)
    dev = abs(energy - 1.0)
    return CheckResult("filter-unit-energy",
                       dev <= tol,
                       f"integral g^2 = {energy:.9f} vs 1 (dev {dev:.2e})")


def check_frequency_response_vs_dft(filt: PrototypeFilter, tol: float = 1e-3,
                                    samples_per_symbol: int = 512) -> CheckResult:
    taps = sample_taps(filt, samples_per_symbol)
    t = (np.arange(len(taps)) - filt.overlap_K * samples_per_symbol / 2) / samples_per_symbol
    worst = 0.0
    for f in (0.0, 0.25, 0.5, 1.0, 2.0):
        dft = np.sum(taps * np.exp(-2j * np.pi * f * t)) / samples_per_symbol
        worst = max(worst, abs(frequency_response(filt, f) - dft))
    return CheckResult("frequency-response-vs-dft",
                       worst <= tol,
                       f"max |analytic - sampled transform| = {worst:.2e}")


def check_oracle_equivalence(filt: PrototypeFilter, cp_ratios=(Fraction(0), Fraction(1, 8)),
                             tol: float = 1e-9) -> CheckResult:
    worst = 0.0
    where = ""
    grid = np.asarray(ORACLE_L_GRID)
    closed_s2i = _oqam_to_ofdm_grid(grid, filt, 1.0)
    for i, l in enumerate(ORACLE_L_GRID):
        dev = _rel(closed_s2i[i], quadrature_I("s2i", l, filt))
        if dev > worst:
            worst, where = dev, f"s2i l={l}"
    for cp in cp_ratios:
        closed_i2s = _ofdm_to_oqam_grid(grid, filt, cp, 1.0)
        for i, l in enumerate(ORACLE_L_GRID):
            dev = _rel(closed_i2s[i], quadrature_I("i2s", l, filt, cp))
            if dev > worst:
                worst, where = dev, f"i2s cp={cp} l={l}"
    return CheckResult("oracle-equivalence",
                       worst <= tol,
                       f"max rel dev {worst:.2e} ({where})")


def check_symmetry(filt: PrototypeFilter, cp_ratio=Fraction(1, 8), n_points: int = 200,
                   tol: float = 1e-12, seed: int = 7) -> CheckResult:
    rng = np.random.default_rng(seed)
    ls = rng.uniform(0.01, 30.0, n_points)
    worst = 0.0
    for grid_fn, kw in ((_oqam_to_ofdm_grid, {"var_pam": 1.0}),
                        (_ofdm_to_oqam_grid, {"cp_ratio": cp_ratio, "var_qam": 1.0})):
        pos = grid_fn(ls, filt, **kw)
        neg = grid_fn(-ls, filt, **kw)
        worst = max(worst, float(np.max(np.abs(pos - neg) / np.maximum(pos, 1e-300))))
    return CheckResult("l-symmetry", worst <= tol, f"max rel asymmetry {worst:.2e}")


def check_reciprocity(filt: PrototypeFilter, n_points: int = 200, tol: float = 1e-12,
                      seed: int = 11) -> CheckResult:
    rng = np.random.default_rng(seed)
    ls = np.concatenate([np.arange(0, 21, dtype=float), rng.uniform(-30, 30, n_points - 21)])
    s2i = _oqam_to_ofdm_grid(ls, filt, 1.0)
    i2s = _ofdm_to_oqam_grid(ls, filt, Fraction(0), 2.0)
    worst = float(np.max(np.abs(s2i - i2s) / np.maximum(s2i, 1e-300)))
    return CheckResult("cp0-reciprocity", worst <= tol,
                       f"max rel deviation {worst:.2e} (var_qam = 2 var_pam, cp = 0)")


def check_parseval(filt: PrototypeFilter, tol: float = 1e-6,
                   l_max: int = PARSEVAL_L_MAX) -> CheckResult:
    total = 0.0
    chunk = 1 << 17
    for lo in range(-l_max, l_max, chunk):
        grid = np.arange(lo, min(lo + chunk, l_max), dtype=float)
        total += float(np.sum(_oqam_to_ofdm_grid(grid, filt, 1.0)))
    const = oracle_parseval_constant(filt)
    dev = _rel(total, const)
    # two pulse streams per period at unit energy: the captured total must be 2
    dev_energy = _rel(const, 2.0)
    passed = dev <= tol and dev_energy <= tol
    return CheckResult("parseval-power-conservation", passed,
                       f"sum_l I(l) = {total:.9f} vs captured energy {const:.9f} "
                       f"(rel {dev:.2e}; energy vs 2: {dev_energy:.2e})")


def check_decay_envelope(filt: PrototypeFilter, cp_ratio=Fraction(1, 8),
                         ripple_db: float = 1.0) -> CheckResult:
    ls = np.arange(1, 21, dtype=float)
    worst = -np.inf
    for vals in (_oqam_to_ofdm_grid(ls, filt, 1.0),
                 _ofdm_to_oqam_grid(ls, filt, cp_ratio, 1.0)):
        db = 10 * np.log10(vals)
        worst = max(worst, float(np.max(np.diff(db))))
    return CheckResult("decay-envelope", worst <= ripple_db,
                       f"max dB step between successive integer l in 1..20: {worst:+.3f}")


def run_all_checks(filt: PrototypeFilter, cp_ratio=Fraction(1, 8)) -> list[CheckResult]:
    """The full verification battery used by the CLI `verify` command."""
    cps = (Fraction(0), Fraction(cp_ratio)) if Fraction(cp_ratio) != 0 else (Fraction(0),)
    return [
        check_filter_normalization(filt),
        check_filter_unit_energy(filt),
        check_frequency_response_vs_dft(filt),
        check_oracle_equivalence(filt, cps),
        check_symmetry(filt, cp_ratio if Fraction(cp_ratio) != 0 else Fraction(1, 8)),
        check_reciprocity(filt),
        check_parseval(filt),
        check_decay_envelope(filt, cp_ratio if Fraction(cp_ratio) != 0 else Fraction(1, 8)),
    ]
