"""Monte-Carlo estimation of post-demodulation cross-interference powers.

Estimators synthesize random bursts with full guard context (every measured
victim window or slot has its complete filter/window support inside the
synthesized signal), demodulate every victim subcarrier, and average the
squared interference samples.  Reported spectral distances follow the
victim's frequency reference:

    oqam -> ofdm (s2i):  l = m_s + delta_f - m_i
    ofdm -> oqam (i2s):  l = m_i - delta_f - m_s
    ofdm -> ofdm (o2o):  l = m_s + delta_f - m_i

The i2s estimator reports interference per victim complex symbol period
(twice the per-slot mean over the two staggered real slots), matching the
closed-form convention.

Determinism: a master seed spawns one independent substream per burst via
numpy SeedSequence spawn keys, so results are bit-identical however bursts
are scheduled.  Trial counts are the number of victim windows (slots)
measured; windows sharing interferer symbols are weakly correlated, so the
reported standard errors are mildly optimistic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor

import numpy as np

from .closedform import InterferenceTable, make_table
from .filterbank import PrototypeFilter, phydyas_k4, sample_taps
from .txrx import (
    CoexConfig,
    apply_frequency_shift,
    ofdm_modulate,
    oqam_modulate,
    shift_samples,
    _ofdm_demod_window,
    _oqam_demod_slots,
)

__all__ = [
    "McEstimate",
    "estimate_oqam_to_ofdm",
    "estimate_ofdm_to_oqam",
    "estimate_ofdm_to_ofdm",
    "self_reconstruction_floor",
    "table_from_estimate",
]

# substream tags keep the per-direction random streams disjoint
_TAG_S2I, _TAG_I2S, _TAG_O2O, _TAG_FLOOR = 0, 1, 2, 3

DEFAULT_BURST = 256


@dataclass(frozen=True)
class McEstimate:
    """Per-subcarrier mean interference power with trial bookkeeping."""

    per_l: tuple[tuple[float, float, float], ...]  # (l, power_mean, std_error)
    trials: int
    config_snapshot: CoexConfig
    seed: int
    direction: str

    @property
    def l_values(self) -> np.ndarray:
        return np.array([e[0] for e in self.per_l])

    @property
    def powers(self) -> np.ndarray:
        return np.array([e[1] for e in self.per_l])

    @property
    def std_errors(self) -> np.ndarray:
        return np.array([e[2] for e in self.per_l])


def _single_member(s, what: str) -> int:
    if len(s) != 1:
        raise ValueError(f"estimator needs exactly one {what} subcarrier, got {sorted(s)}")
    return next(iter(s))


def _rng(seed: int, tag: int, burst: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(tag, burst)))


def _draw_pam(rng: np.random.Generator, n: int, variance: float) -> np.ndarray:
    """i.i.d. 2-PAM at the requested variance."""
    return rng.choice([1.0, -1.0], size=n) * np.sqrt(variance)


def _draw_qpsk(rng: np.random.Generator, n: int, variance: float) -> np.ndarray:
    """i.i.d. QPSK at the requested variance (proper: E d^2 = 0)."""
    return (rng.choice([1.0, -1.0], size=n) + 1j * rng.choice([1.0, -1.0], size=n)) \
        * np.sqrt(variance / 2)


def _burst_sizes(n_total: int, burst: int) -> list[int]:
    n_bursts = ceil(n_total / burst)
    sizes = [burst] * n_bursts
    sizes[-1] = n_total - burst * (n_bursts - 1)
    return sizes


class _Welford:
    """Streaming per-subcarrier mean/variance accumulator."""

    def __init__(self, width: int):
        self.count = 0
        self.total = np.zeros(width)
        self.total_sq = np.zeros(width)

    def add(self, rows: np.ndarray):
        self.count += rows.shape[0]
        self.total += rows.sum(axis=0)
        self.total_sq += (rows ** 2).sum(axis=0)

    def mean(self) -> np.ndarray:
        return self.total / self.count

    def std_error(self) -> np.ndarray:
        if self.count < 2:
            return np.zeros_like(self.total)
        var = (self.total_sq - self.total ** 2 / self.count) / (self.count - 1)
        return np.sqrt(np.maximum(var, 0.0) / self.count)


def _finish(acc: _Welford, l_of_bin, victims, config, direction, scale=1.0) -> McEstimate:
    rows = sorted((float(l_of_bin(m)), m) for m in victims)
    mean, err = acc.mean(), acc.std_error()
    per_l = tuple((l, scale * float(mean[m % config.M]), scale * float(err[m % config.M]))
                  for l, m in rows)
    return McEstimate(per_l=per_l, trials=acc.count, config_snapshot=config,
                      seed=config.seed, direction=direction)


def _oqam_slot_span(n_windows: int, cp: Fraction, K: int) -> tuple[int, int]:
    """Half-symbol slots whose pulse support can reach victim windows [0, n_windows)."""
    hi = float(n_windows * (1 + cp))
    return floor(2 * (0 - K / 2)), ceil(2 * (hi + K / 2)) + 1


def estimate_oqam_to_ofdm(config: CoexConfig, n_symbols: int, *,
                          burst_symbols: int = DEFAULT_BURST,
                          window_classes=None,
                          filt: PrototypeFilter | None = None,
                          phase_convention: str = "standard") -> McEstimate:
    """Mean |interference|^2 seen by every incumbent subcarrier from the OQAM interferer.

    n_symbols victim CP-OFDM windows are measured (bursts synthesized with
    guard context so every window is interior).  window_classes optionally
    restricts measurement to windows with n_i mod 4 in the given set.
    """
    if n_symbols < 1:
        raise ValueError("n_symbols must be >= 1")
    m_s = _single_member(config.secondary_set, "secondary (interferer)")
    victims = sorted(config.incumbent_set)
    filt = filt or phydyas_k4()
    acc = _Welford(config.M)
    for b, size in enumerate(_burst_sizes(n_symbols, burst_symbols)):
        rng = _rng(config.seed, _TAG_S2I, b)
        n_lo, n_hi = _oqam_slot_span(size, config.cp_ratio, filt.overlap_K)
        data = {m_s: _draw_pam(rng, n_hi - n_lo, config.var_pam)}
        sig = oqam_modulate(config, data, (n_lo, n_hi), filt=filt,
                            phase_convention=phase_convention)
        if config.delta_f:
            sig = apply_frequency_shift(sig, config.delta_f)
        windows = np.arange(size)
        if window_classes is not None:
            # classes are physical window phases within the burst timeline
            windows = windows[np.isin(windows % 4, list(window_classes))]
        if len(windows):
            rows = np.empty((len(windows), config.M))
            for i, n in enumerate(windows):
                rows[i] = np.abs(_ofdm_demod_window(config, sig, int(n))) ** 2
            acc.add(rows)
    if acc.count == 0:
        raise ValueError("no victim windows measured (window_classes excluded everything)")
    return _finish(acc, lambda m: m_s + config.delta_f - m, victims, config, "oqam_to_ofdm")


def estimate_ofdm_to_oqam(config: CoexConfig, n_symbols: int, *,
                          burst_symbols: int = DEFAULT_BURST,
                          filt: PrototypeFilter | None = None,
                          phase_convention: str = "standard") -> McEstimate:
    """Mean interference per complex symbol seen by every secondary subcarrier.

    n_symbols victim half-symbol slots are measured; the reported power is
    twice the per-slot mean (the sum over a staggered slot pair).
    """
    if n_symbols < 1:
        raise ValueError("n_symbols must be >= 1")
    m_i = _single_member(config.incumbent_set, "incumbent (interferer)")
    victims = sorted(config.secondary_set)
    filt = filt or phydyas_k4()
    taps = sample_taps(filt, config.M)
    K = filt.overlap_K
    cp = config.cp_ratio
    acc = _Welford(config.M)
    for b, size in enumerate(_burst_sizes(n_symbols, burst_symbols)):
        rng = _rng(config.seed, _TAG_I2S, b)
        # interferer symbols covering every victim slot's filter span
        lo_t, hi_t = -K / 2, (size - 1) / 2 + K / 2
        n_lo = floor((lo_t - 1) / float(1 + cp)) - 1
        n_hi = ceil((hi_t + float(cp)) / float(1 + cp)) + 2
        data = {m_i: _draw_qpsk(rng, n_hi - n_lo, config.var_qam)}
        sig = ofdm_modulate(config, data, (n_lo, n_hi))
        if config.delta_f:
            sig = apply_frequency_shift(sig, -config.delta_f)
        vals = _oqam_demod_slots(config, sig, np.arange(size), taps, phase_convention)
        acc.add(vals ** 2)
    return _finish(acc, lambda m: m_i - config.delta_f - m, victims, config,
                   "ofdm_to_oqam", scale=2.0)


def estimate_ofdm_to_ofdm(config: CoexConfig, n_symbols: int,
                          timing_offset_policy="uniform_random", *,
                          burst_symbols: int = 32) -> McEstimate:
    """CP-OFDM-vs-CP-OFDM baseline: asynchronous secondary, same waveform.

    timing_offset_policy is "uniform_random" (a fresh integer offset in
    [0, symbol_samples) per burst) or ("fixed", samples).  The secondary
    transmits QAM at var_qam (equal energy per symbol with the incumbent).
    Bursts default to 32 windows: offset diversity, not window count,
    dominates the estimator variance under the uniform policy.
    """
    if n_symbols < 1:
        raise ValueError("n_symbols must be >= 1")
    if timing_offset_policy == "uniform_random":
        fixed = None
    elif (isinstance(timing_offset_policy, tuple) and len(timing_offset_policy) == 2
          and timing_offset_policy[0] == "fixed"):
        fixed = int(timing_offset_policy[1])
    else:
        raise ValueError(f"unknown timing_offset_policy {timing_offset_policy!r}")
    m_s = _single_member(config.secondary_set, "secondary (interferer)")
    victims = sorted(config.incumbent_set)
    S = config.symbol_samples
    acc = _Welford(config.M)
    for b, size in enumerate(_burst_sizes(n_symbols, burst_symbols)):
        rng = _rng(config.seed, _TAG_O2O, b)
        off = int(rng.integers(0, S)) if fixed is None else fixed % S
        data = {m_s: _draw_qpsk(rng, size + 4, config.var_qam)}
        sig = ofdm_modulate(config.with_(incumbent_set=frozenset({m_s})), data, (-2, size + 2))
        sig = shift_samples(sig, off)
        if config.delta_f:
            sig = apply_frequency_shift(sig, config.delta_f)
        rows = np.empty((size, config.M))
        for n in range(size):
            rows[n] = np.abs(_ofdm_demod_window(config, sig, n)) ** 2
        acc.add(rows)
    return _finish(acc, lambda m: m_s + config.delta_f - m, victims, config,
                   "ofdm_to_ofdm_mc")


def self_reconstruction_floor(config: CoexConfig, n_symbols: int, *,
                              filt: PrototypeFilter | None = None,
                              phase_convention: str = "standard") -> float:
    """Own-signal reconstruction error of an isolated OQAM link.

    Synthesizes a random burst on the secondary subcarriers, recovers the
    n_symbols interior slots, and returns mean((recovered - sent)^2) divided
    by the symbol variance (linear ratio; 10*log10 gives the floor in dB).
    """
    if n_symbols < 1:
        raise ValueError("n_symbols must be >= 1")
    filt = filt or phydyas_k4()
    taps = sample_taps(filt, config.M)
    active = sorted(config.secondary_set)
    K = filt.overlap_K
    rng = _rng(config.seed, _TAG_FLOOR, 0)
    n_lo, n_hi = -2 * K, n_symbols + 2 * K
    data = {m: _draw_pam(rng, n_hi - n_lo, config.var_pam) for m in active}
    sig = oqam_modulate(config, data, (n_lo, n_hi), filt=filt,
                        phase_convention=phase_convention)
    vals = _oqam_demod_slots(config, sig, np.arange(n_symbols), taps, phase_convention)
    err = 0.0
    for m in active:
        sent = data[m][-n_lo:-n_lo + n_symbols]
        err += np.sum((vals[:, m % config.M] - sent) ** 2)
    return float(err / (n_symbols * len(active)) / config.var_pam)


def table_from_estimate(est: McEstimate) -> InterferenceTable:
    """Interference table view of a Monte-Carlo estimate (drops standard errors)."""
    cfg = est.config_snapshot
    variance = cfg.var_pam if est.direction == "oqam_to_ofdm" else cfg.var_qam
    return make_table(est.l_values, est.powers, est.direction, cfg.cp_ratio, variance)
