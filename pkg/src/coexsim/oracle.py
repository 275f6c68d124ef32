"""Brute-force quadrature of the defining interference integrals.

Ground truth for the closed forms: every value here is obtained by direct
numerical integration of the pulse against the victim receive window, with
the contributing symbol shifts enumerated geometrically from the pulse
support and window placement (never from any fixed a-priori range).

Built and validated independently of the closedform module; closedform
imports the lattice helpers from here, not the other way around.
"""

from __future__ import annotations

from fractions import Fraction
from math import ceil, floor

import numpy as np

from .filterbank import PrototypeFilter, evaluate_g, phydyas_k4

__all__ = [
    "QuadratureError",
    "quadrature_term_stoi",
    "quadrature_I",
    "contributing_shifts",
    "victim_slot_offsets",
    "window_overlap",
    "oracle_parseval_constant",
]

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


class QuadratureError(RuntimeError):
    """Raised when panel refinement fails to converge; results are never truncated silently."""


def _panel_sum(f, a: float, b: float, n_panels: int) -> complex:
    edges = np.linspace(a, b, n_panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    x = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    vals = f(x.ravel()).reshape(x.shape)
    return complex(np.sum(vals * _GL_WEIGHTS[None, :] * half[:, None]))


def _integrate(f, a: float, b: float, *, rtol: float = 1e-13, atol: float = 1e-16,
               panels: int | None = None, max_panels: int = 8192) -> complex:
    """Composite Gauss-Legendre with panel doubling until two refinements agree.

    `panels` forces a fixed subdivision (used by the convergence checks);
    adaptive mode raises QuadratureError instead of returning an unconverged
    value.
    """
    if b <= a:
        return 0.0 + 0.0j
    if panels is not None:
        return _panel_sum(f, a, b, panels)
    n = 2
    prev = _panel_sum(f, a, b, n)
    while n <= max_panels:
        n *= 2
        cur = _panel_sum(f, a, b, n)
        if abs(cur - prev) <= max(rtol * abs(cur), atol):
            return cur
        prev = cur
    raise QuadratureError(f"quadrature did not converge on [{a}, {b}] within {max_panels} panels")


def window_overlap(tau: float, width: float, halfwidth: float) -> tuple[float, float]:
    """Intersection of the pulse support [tau-hw, tau+hw] with the window [0, width]."""
    return max(0.0, tau - halfwidth), min(width, tau + halfwidth)


def _window_integral(filt: PrototypeFilter, l: float, tau: float, width: float,
                     panels: int | None = None) -> complex:
    """integral over [0, width] of g(u - tau) exp(j 2 pi l u) du, by quadrature.

    The integrand vanishes outside the pulse support, so integration runs
    over the support overlap only (the support edge is the one point where
    the integrand is not smooth).
    """
    a, b = window_overlap(tau, width, filt.support_halfwidth)
    if b <= a:
        return 0.0 + 0.0j
    f = lambda u: evaluate_g(filt, u - tau) * np.exp(2j * np.pi * l * u)
    return _integrate(f, a, b, panels=panels)


def quadrature_term_stoi(l: float, tau_norm: float, filt: PrototypeFilter | None = None,
                         *, panels: int | None = None) -> float:
    """Squared magnitude of one shift's integral over the unit receive window.

    |integral_0^1 g(u - tau) exp(j 2 pi l u) du|^2 with time in symbol
    periods; 0 when the pulse support misses the window.
    """
    filt = filt or phydyas_k4()
    return abs(_window_integral(filt, float(l), float(tau_norm), 1.0, panels=panels)) ** 2


def victim_slot_offsets(cp_ratio: Fraction) -> list[Fraction]:
    """Offsets of the interferer symbol lattice relative to successive victim slots.

    For victim half-symbol slot n the interferer lattice (spacing 1+cp) sits
    at offset (cp + n/2) mod (1+cp).  For rational cp the offsets cycle;
    the full cycle is returned (length 2 at cp=0, p+q at cp=p/q).
    """
    cp = Fraction(cp_ratio)
    if cp < 0:
        raise ValueError("cp_ratio must be non-negative")
    period = 1 + cp
    seen: set[Fraction] = set()
    out: list[Fraction] = []
    n = 0
    while True:
        x = (cp + Fraction(n, 2)) % period
        if x in seen:
            return out
        seen.add(x)
        out.append(x)
        n += 1


def _int_interval(lo: Fraction, hi: Fraction) -> list[int]:
    """Integers strictly inside the open interval (lo, hi)."""
    return list(range(floor(lo) + 1, ceil(hi)))


def contributing_shifts(direction: str, n_victim: int, cp_ratio, filt: PrototypeFilter,
                        support: tuple[Fraction, Fraction] | None = None) -> set[int]:
    """Interferer symbol indices whose pulse/window support meets the victim window.

    direction "s2i": victim is the CP-OFDM useful window of symbol n_victim,
    interferer indices count OQAM half-symbol slots.  direction "i2s": victim
    is the OQAM receive-filter span of slot n_victim, interferer indices
    count CP-OFDM symbols (whole extent including the prefix).  Overlap must
    have nonzero measure.  `support` overrides the pulse support (as a
    (lo, hi) pair around the pulse center), for degenerate cases.
    """
    cp = Fraction(cp_ratio)
    if support is None:
        hw = Fraction(filt.overlap_K, 2)
        s_lo, s_hi = -hw, hw
    else:
        s_lo, s_hi = Fraction(support[0]), Fraction(support[1])
    if s_hi <= s_lo:
        return set()
    if direction == "s2i":
        w0 = n_victim * (1 + cp)
        w1 = w0 + 1
        # slot n: pulse on (n/2 + s_lo, n/2 + s_hi)
        return set(_int_interval(2 * (w0 - s_hi), 2 * (w1 - s_lo)))
    if direction == "i2s":
        v0 = Fraction(n_victim, 2) + s_lo
        v1 = Fraction(n_victim, 2) + s_hi
        # symbol n: occupies (n(1+cp) - cp, n(1+cp) + 1)
        lo = (v0 - 1) / (1 + cp)
        hi = (v1 + cp) / (1 + cp)
        return set(_int_interval(lo, hi))
    raise ValueError(f"unknown direction {direction!r}")


def quadrature_I(direction: str, l: float, filt: PrototypeFilter | None = None,
                 cp_ratio=Fraction(0), *, n_victim: int | None = None,
                 panels: int | None = None) -> float:
    """Mean interference power at spectral distance l, by direct quadrature.

    Unit interferer symbol variance.  direction "s2i": per victim CP-OFDM
    symbol (canonical window n_i = 0 unless n_victim overrides).  direction
    "i2s": per victim complex symbol period, i.e. twice the mean over the
    victim half-symbol slots of the per-slot power including the real-part
    factor 1/2; with n_victim given, the value a full cycle of slots at that
    slot's lattice offset would produce.
    """
    filt = filt or phydyas_k4()
    cp = Fraction(cp_ratio)
    l = float(l)
    if direction == "s2i":
        nv = 0 if n_victim is None else n_victim
        total = 0.0
        for n_s in sorted(contributing_shifts("s2i", nv, cp, filt)):
            tau = float(Fraction(n_s, 2) - nv * (1 + cp))
            total += abs(_window_integral(filt, l, tau, 1.0, panels=panels)) ** 2
        return total
    if direction == "i2s":
        width = float(1 + cp)
        if n_victim is None:
            offsets = victim_slot_offsets(cp)
        else:
            offsets = [(cp + Fraction(n_victim, 2)) % (1 + cp)]
        hw = filt.support_halfwidth
        acc = 0.0
        for off in offsets:
            # lattice positions tau = off + n*(1+cp) with support overlap
            n_lo = floor((-hw - float(off)) / width) - 1
            n_hi = ceil((width + hw - float(off)) / width) + 1
            for n in range(n_lo, n_hi + 1):
                tau = float(off + n * (1 + cp))
                a, b = window_overlap(tau, width, hw)
                if b <= a:
                    continue
                acc += abs(_window_integral(filt, l, tau, width, panels=panels)) ** 2
        # per-slot power carries the real-part factor 1/2; the per-complex-symbol
        # convention doubles the slot mean, so the two factors cancel
        return acc / len(offsets)
    raise ValueError(f"unknown direction {direction!r}")


def quadrature_window_energy(filt: PrototypeFilter, tau: float, width: float,
                             *, panels: int | None = None) -> float:
    """integral over [0, width] of g^2(u - tau) du, by quadrature."""
    a, b = window_overlap(tau, width, filt.support_halfwidth)
    if b <= a:
        return 0.0
    return float(np.real(_integrate(lambda u: evaluate_g(filt, u - tau) ** 2 + 0j, a, b, panels=panels)))


def oracle_parseval_constant(filt: PrototypeFilter | None = None) -> float:
    """sum over half-period shifts of integral_0^1 g^2(t - tau) dt.

    The total captured pulse energy per unit receive window; the l-sum of
    the unit-variance interference table must equal it exactly.
    """
    filt = filt or phydyas_k4()
    hw = filt.support_halfwidth
    total = 0.0
    n_lo = floor(2 * (0 - hw)) - 1
    n_hi = ceil(2 * (1 + hw)) + 1
    for n in range(n_lo, n_hi + 1):
        total += quadrature_window_energy(filt, n / 2, 1.0)
    return total
