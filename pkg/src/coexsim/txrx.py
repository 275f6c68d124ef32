"""Discrete-time synthesis and matched-filter demodulation of both waveforms.

Sampling convention: the useful symbol period T spans M samples (critical
sampling); absolute sample index p corresponds to time t = p/M in units of
T.  Every modulator scales amplitudes by 1/sqrt(M) so that demodulating a
clean own-signal returns the transmitted symbol with unit gain.

CP-OFDM symbol n occupies samples [n(M+L) - L, n(M+L) + M) with L cyclic
prefix samples; the useful window is the last M of those.  OQAM half-symbol
slot n centers its pulse at sample n M/2 and spans K M + 1 samples.

OQAM phase conventions: the default "standard" convention uses
theta_m[n] = j^(m+n), which keeps the intrinsic own-signal interference
purely imaginary (near-perfect reconstruction).  The alternative "floor"
convention theta_m[n] = exp(j pi/2 floor((n+m)/2)) is provided as a toggle;
cross-system interference powers are invariant to the choice, own-signal
reconstruction is not.  Both apply the (-1)^(m n) sign at the modulator and
demodulator.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .filterbank import PrototypeFilter, phydyas_k4, sample_taps

__all__ = [
    "CoexConfig",
    "DiscreteSignal",
    "ofdm_modulate",
    "ofdm_demodulate",
    "oqam_modulate",
    "oqam_demodulate",
    "apply_frequency_shift",
    "shift_samples",
    "add_awgn",
    "oqam_theta",
    "oqam_phase",
    "signed_subcarrier",
]

PHASE_CONVENTIONS = ("standard", "floor")


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x).limit_denominator(1 << 30) if isinstance(x, float) else Fraction(x)


@dataclass(frozen=True)
class CoexConfig:
    """Full coexistence scenario description.

    Subcarrier indices live in [-M/2, M/2 - 1]; the two active sets may
    overlap (co-channel scenarios are allowed).  delta_f is the frequency
    misalignment of the secondary relative to the incumbent, in subcarrier
    spacings.  Defaults follow the reference scenario: M = 512, one-eighth
    prefix, unit-energy symbols (var_qam = 2 var_pam = 1), interferer on
    subcarrier 0.
    """

    M: int = 512
    cp_ratio: Fraction = Fraction(1, 8)
    incumbent_set: frozenset = field(default_factory=lambda: frozenset(range(-25, 26)))
    secondary_set: frozenset = field(default_factory=lambda: frozenset({0}))
    var_qam: float = 1.0
    var_pam: float = 0.5
    delta_f: float = 0.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "cp_ratio", _as_fraction(self.cp_ratio))
        object.__setattr__(self, "incumbent_set", frozenset(int(m) for m in self.incumbent_set))
        object.__setattr__(self, "secondary_set", frozenset(int(m) for m in self.secondary_set))
        if self.M < 8:
            raise ValueError("M must be >= 8")
        if self.cp_ratio < 0:
            raise ValueError("cp_ratio must be non-negative")
        if (self.M * self.cp_ratio).denominator != 1:
            raise ValueError("M * cp_ratio must be an integer number of samples")
        lo, hi = -self.M // 2, self.M // 2 - 1
        for name, s in (("incumbent_set", self.incumbent_set), ("secondary_set", self.secondary_set)):
            if any(m < lo or m > hi for m in s):
                raise ValueError(f"{name} entries must lie in [{lo}, {hi}]")
        if self.var_qam <= 0 or self.var_pam <= 0:
            raise ValueError("symbol variances must be positive")
        if not (-0.5 < self.delta_f <= 0.5):
            raise ValueError("delta_f must lie in (-0.5, 0.5]")

    @property
    def cp_samples(self) -> int:
        return int(self.M * self.cp_ratio)

    @property
    def symbol_samples(self) -> int:
        """Samples per CP-OFDM symbol including the prefix."""
        return self.M + self.cp_samples

    def with_(self, **kw) -> "CoexConfig":
        return replace(self, **kw)


@dataclass
class DiscreteSignal:
    """Complex baseband sample stream on the absolute sample grid.

    samples[i] is the sample at absolute index p = i - origin_index
    (t = p/M).  Treated as immutable once synthesized.
    """

    samples: np.ndarray
    samples_per_symbol: int
    origin_index: int

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=complex)

    @property
    def start(self) -> int:
        """Absolute index of the first sample."""
        return -self.origin_index

    @property
    def stop(self) -> int:
        """Absolute index one past the last sample."""
        return len(self.samples) - self.origin_index

    def window(self, p0: int, length: int) -> np.ndarray:
        """Samples at absolute indices [p0, p0 + length); raises if out of bounds."""
        i0 = p0 + self.origin_index
        if i0 < 0 or i0 + length > len(self.samples):
            raise ValueError(
                f"window [{p0}, {p0 + length}) out of signal bounds [{self.start}, {self.stop})")
        return self.samples[i0:i0 + length]


def _zero_signal(M: int, start: int, stop: int) -> DiscreteSignal:
    return DiscreteSignal(np.zeros(stop - start, dtype=complex), M, origin_index=-start)


# ---------------------------------------------------------------------------
# CP-OFDM
# ---------------------------------------------------------------------------

def ofdm_modulate(config: CoexConfig, data: dict, n_range: tuple[int, int]) -> DiscreteSignal:
    """Synthesize the CP-OFDM signal for QAM symbols on the incumbent subcarriers.

    data maps subcarrier index -> complex vector covering symbols
    n_range[0] .. n_range[1]-1.  Each symbol occupies (1+cp_ratio) M samples
    (prefix first); sample values carry the 1/sqrt(M) amplitude convention.
    """
    n0, n1 = n_range
    if n1 <= n0:
        raise ValueError("n_range must be non-empty")
    bad = set(data) - config.incumbent_set
    if bad:
        raise ValueError(f"data on subcarriers outside the incumbent set: {sorted(bad)}")
    M, L, S = config.M, config.cp_samples, config.symbol_samples
    cp = float(config.cp_ratio)
    nsym = n1 - n0
    start = n0 * S - L
    sig = _zero_signal(M, start, (n1 - 1) * S + M)
    p = np.arange(start, (n1 - 1) * S + M)
    for m, vec in sorted(data.items()):
        vec = np.asarray(vec, dtype=complex)
        if vec.shape != (nsym,):
            raise ValueError(f"data vector for subcarrier {m} must cover n_range ({nsym} symbols)")
        # symbol blocks tile the burst exactly: block n is [nS - L, nS + M)
        per_symbol = vec / np.sqrt(M) * np.exp(-2j * np.pi * m * cp * np.arange(n0, n1))
        sig.samples += np.repeat(per_symbol, S) * np.exp(2j * np.pi * m * p / M)
    return sig


def _ofdm_demod_window(config: CoexConfig, signal: DiscreteSignal, n_i: int) -> np.ndarray:
    """Demodulated values of window n_i for all M subcarrier bins at once.

    Correlates the useful window (prefix discarded) against the receive
    exponential with 1/sqrt(M) scaling.  The absolute-time and prefix
    reference phases cancel exactly for integer subcarriers, so the FFT of
    the window is the complete answer.
    """
    S = config.symbol_samples
    seg = signal.window(n_i * S, config.M)
    return np.fft.fft(seg) / np.sqrt(config.M)


def ofdm_demodulate(config: CoexConfig, signal: DiscreteSignal, n_i: int, m_i: int) -> complex:
    """Recover the QAM symbol of window n_i on subcarrier m_i.

    On a clean own-signal this returns the transmitted symbol exactly
    (discrete orthogonality); on an interfering signal it returns one
    realization of the post-demodulation interference sample.
    """
    return complex(_ofdm_demod_window(config, signal, n_i)[m_i % config.M])


# ---------------------------------------------------------------------------
# OFDM/OQAM
# ---------------------------------------------------------------------------

def signed_subcarrier(bin_index: int, M: int) -> int:
    """Canonical signed subcarrier index in [-M/2, M/2-1] for an FFT bin."""
    return bin_index - M if bin_index >= M // 2 else bin_index


def oqam_theta(m: int, n: int, convention: str = "standard") -> complex:
    """Per-symbol unit phase theta_m[n] (without the (-1)^(m n) sign)."""
    if convention == "standard":
        return 1j ** ((m + n) % 4)
    if convention == "floor":
        return 1j ** (((n + m) // 2) % 4)
    raise ValueError(f"unknown phase convention {convention!r}")


def oqam_phase(m: int, n: int, convention: str = "standard") -> complex:
    """Full modulation phase (-1)^(m n) * theta_m[n]."""
    sign = -1.0 if (m * n) % 2 else 1.0
    return sign * oqam_theta(m, n, convention)


def _phase_matrix(M: int, slots: np.ndarray, convention: str) -> np.ndarray:
    """conj(phase) for every (slot, FFT bin) pair, using signed subcarrier indices."""
    bins = np.arange(M)
    m_signed = np.where(bins >= M // 2, bins - M, bins)
    out = np.empty((len(slots), M), dtype=complex)
    for i, n in enumerate(slots):
        if convention == "standard":
            th = 1j ** ((m_signed + int(n)) % 4)
        else:
            th = 1j ** (((m_signed + int(n)) // 2) % 4)
        sign = np.where((m_signed * int(n)) % 2 == 0, 1.0, -1.0)
        out[i] = np.conj(sign * th)
    return out


def oqam_modulate(config: CoexConfig, data: dict, n_range: tuple[int, int],
                  *, filt: PrototypeFilter | None = None,
                  phase_convention: str = "standard") -> DiscreteSignal:
    """Synthesize the OQAM signal for real PAM symbols on the secondary subcarriers.

    data maps subcarrier index -> real vector covering half-symbol slots
    n_range[0] .. n_range[1]-1; successive slots are offset by M/2 samples.
    """
    if phase_convention not in PHASE_CONVENTIONS:
        raise ValueError(f"unknown phase convention {phase_convention!r}")
    n0, n1 = n_range
    if n1 <= n0:
        raise ValueError("n_range must be non-empty")
    bad = set(data) - config.secondary_set
    if bad:
        raise ValueError(f"data on subcarriers outside the secondary set: {sorted(bad)}")
    M = config.M
    if M % 2:
        raise ValueError("OQAM requires even M (half-period slots must be whole samples)")
    filt = filt or phydyas_k4()
    taps = sample_taps(filt, M)
    half = filt.overlap_K * M // 2
    nsym = n1 - n0
    start = n0 * M // 2 - half
    stop = (n1 - 1) * M // 2 + half + 1
    sig = _zero_signal(M, start, stop)
    rel = np.arange(len(taps))
    for m, vec in sorted(data.items()):
        vec = np.asarray(vec)
        if np.iscomplexobj(vec):
            raise ValueError(f"OQAM data must be real (subcarrier {m})")
        if vec.shape != (nsym,):
            raise ValueError(f"data vector for subcarrier {m} must cover n_range ({nsym} slots)")
        for j, n in enumerate(range(n0, n1)):
            center = n * M // 2
            p = center - half + rel
            amp = oqam_phase(m, n, phase_convention) * vec[j] / np.sqrt(M)
            sig.samples[p - start] += amp * taps * np.exp(2j * np.pi * m * p / M)
    return sig


def _oqam_demod_slots(config: CoexConfig, signal: DiscreteSignal, slots,
                      taps: np.ndarray, phase_convention: str = "standard") -> np.ndarray:
    """Real demodulated values for the given slots at all M bins: (len(slots), M).

    Correlates against the pulse times the receive exponential, normalizes
    by the measured tap energy, rotates by the conjugate modulation phase
    and takes the real part.
    """
    M = config.M
    slots = np.asarray(list(slots), dtype=int)
    half = (len(taps) - 1) // 2
    energy = float(np.dot(taps, taps))
    segs = np.empty((len(slots), len(taps)), dtype=complex)
    for i, n in enumerate(slots):
        segs[i] = signal.window(int(n) * M // 2 - half, len(taps))
    w = segs * taps[None, :]
    # fold the tap-length correlation onto M bins, then one FFT per slot
    n_whole = (len(taps) // M) * M
    folded = w[:, :n_whole].reshape(len(slots), -1, M).sum(axis=1)
    folded[:, :len(taps) - n_whole] += w[:, n_whole:]
    spec = np.fft.fft(folded, axis=1)
    starts = (slots * (M // 2) - half) % M
    bins = np.arange(M)
    spec *= np.exp(-2j * np.pi * bins[None, :] * starts[:, None] / M)
    return np.sqrt(M) / energy * np.real(spec * _phase_matrix(M, slots, phase_convention))


def oqam_demodulate(config: CoexConfig, signal: DiscreteSignal, n_s: int, m_s: int,
                    *, filt: PrototypeFilter | None = None,
                    phase_convention: str = "standard") -> float:
    """Recover the PAM symbol of half-symbol slot n_s on subcarrier m_s.

    On a clean own-signal this returns the symbol up to the prototype
    filter's near-perfect-reconstruction floor; on an interfering signal it
    returns one realization of the post-demodulation interference sample.
    """
    filt = filt or phydyas_k4()
    taps = sample_taps(filt, config.M)
    vals = _oqam_demod_slots(config, signal, [n_s], taps, phase_convention)
    return float(vals[0, m_s % config.M])


# ---------------------------------------------------------------------------
# Channel helpers
# ---------------------------------------------------------------------------

def apply_frequency_shift(signal: DiscreteSignal, delta_f: float) -> DiscreteSignal:
    """Shift the signal by delta_f subcarrier spacings (phase ramp in absolute time)."""
    p = np.arange(len(signal.samples)) - signal.origin_index
    shifted = signal.samples * np.exp(2j * np.pi * delta_f * p / signal.samples_per_symbol)
    return DiscreteSignal(shifted, signal.samples_per_symbol, signal.origin_index)


def shift_samples(signal: DiscreteSignal, offset: int) -> DiscreteSignal:
    """Delay the signal by a whole number of samples (relabels the time origin)."""
    return DiscreteSignal(signal.samples, signal.samples_per_symbol,
                          signal.origin_index - offset)


def add_awgn(signal: DiscreteSignal, noise_power: float, rng: np.random.Generator) -> DiscreteSignal:
    """Add complex white Gaussian noise of the given per-sample power (demo helper).

    Interference measurements run noiseless (noise is additive, independent
    and zero-mean; it would only inflate estimator variance).
    """
    n = len(signal.samples)
    noise = rng.normal(scale=np.sqrt(noise_power / 2), size=(2, n))
    return DiscreteSignal(signal.samples + noise[0] + 1j * noise[1],
                          signal.samples_per_symbol, signal.origin_index)
