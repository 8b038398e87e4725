"""Closed-form spectra of ideal pulse trains and comb-filter responses.

An infinitely repeating train of unit-area delta pulses clocked at f_clk and
gated by an N-bit pattern has a line spectrum supported on the grid
k * f_clk / N.  The complex weight of line k equals the DFT of the bit
sequence, scaled by 1/(N*T); one period k = 0..N-1 describes the whole
spectrum because it repeats with period f_clk.  Comb stages multiply each
line by their frequency response.

Units: frequencies in GHz, delays in ns (so f*tau is dimensionless).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .patterns import Pattern

FEEDFORWARD = "feedforward"
FEEDBACK = "feedback"


class UnstableStageError(ValueError):
    """Feedback stage whose delayed copy is not attenuated (|alpha| >= 1)."""


@dataclass(frozen=True)
class CombStage:
    """One comb-filter stage: adds a copy of the signal delayed by tau.

    alpha scales the delayed copy; 1 is the native single-flux-quantum case,
    values above 1 model an amplifying transmission line.  Feedback stages
    must have |alpha| < 1 to be stable.
    """

    delay: float  # ns
    alpha: float = 1.0
    kind: str = FEEDFORWARD

    def __post_init__(self):
        if self.kind not in (FEEDFORWARD, FEEDBACK):
            raise ValueError(f"unknown comb kind {self.kind!r}")
        if self.delay < 0:
            raise ValueError("delay must be >= 0")
        if self.kind == FEEDBACK and abs(self.alpha) >= 1:
            raise UnstableStageError("unstable feedback stage")


@dataclass(frozen=True)
class ToneSpectrum:
    """Complex tone amplitudes c_k on the grid k * f_clk / n_bits, one period."""

    f_clk: float  # GHz
    n_bits: int
    amplitudes: np.ndarray = field(repr=False)  # complex, length n_bits
    scale: float = 0.0  # overall prefactor 1/(N*T) = f_clk/N, in GHz

    @property
    def frequencies(self) -> np.ndarray:
        """Tone frequencies in GHz for one period, spaced f_clk / n_bits."""
        return np.arange(self.n_bits) * (self.f_clk / self.n_bits)

    @property
    def powers(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def power_at(self, f: float, rel_tol: float = 1e-9) -> float:
        """Power of the grid tone at frequency f (GHz); f must be on the grid."""
        return float(self.powers[self.tone_index(f, rel_tol)])

    def tone_index(self, f: float, rel_tol: float = 1e-9) -> int:
        step = self.f_clk / self.n_bits
        k = round(f / step)
        if not 0 <= k < self.n_bits or abs(f - k * step) > rel_tol * max(f, step):
            raise ValueError(f"{f} GHz is not on the tone grid of {step} GHz")
        return k


def modulation(p: Pattern, f: float, t: float) -> complex:
    """Pattern weight c(f) = sum_k S_k exp(-2*pi*j*f*k*T) at frequency f.

    f in GHz and T in ns.  On the tone grid this reduces to the DFT of the
    bits; off the grid it interpolates the same trigonometric sum.
    """
    if t <= 0:
        raise ValueError("clock period must be positive")
    ks = np.nonzero(np.asarray(p.bits))[0]
    return complex(np.sum(np.exp(-2j * math.pi * f * t * ks)))


def tone_spectrum(p: Pattern, f_clk: float) -> ToneSpectrum:
    """Line spectrum of the ideal delta train for pattern p at f_clk (GHz)."""
    if f_clk <= 0:
        raise ValueError("f_clk must be positive")
    amps = np.fft.fft(np.asarray(p.bits, dtype=float))
    return ToneSpectrum(
        f_clk=f_clk, n_bits=p.n_bits, amplitudes=amps, scale=f_clk / p.n_bits
    )


def comb_response(stage: CombStage, f) -> complex | np.ndarray:
    """Frequency response of one comb stage at f (GHz; scalar or array)."""
    phase = np.exp(-2j * math.pi * np.asarray(f, dtype=float) * stage.delay)
    if stage.kind == FEEDFORWARD:
        resp = 1.0 + stage.alpha * phase
    else:
        resp = 1.0 / (1.0 - stage.alpha * phase)
    if np.ndim(f) == 0:
        return complex(resp)
    return resp


def apply_comb(spec: ToneSpectrum, stages) -> ToneSpectrum:
    """Spectrum after the comb stages; stacking composes multiplicatively."""
    amps = spec.amplitudes.copy()
    freqs = spec.frequencies
    for stage in stages:
        amps = amps * comb_response(stage, freqs)
    return ToneSpectrum(
        f_clk=spec.f_clk, n_bits=spec.n_bits, amplitudes=amps, scale=spec.scale
    )
