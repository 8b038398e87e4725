"""Spectral estimation for (possibly unevenly sampled) waveforms.

The classical least-squares periodogram with the per-frequency time offset
handles the uneven timebases produced by dynamic-time-step simulators, and
reduces to the ordinary periodogram on an even grid.  Power spectra convert
to spectral densities by dividing by (frequency resolution * sample count),
which makes the area under a tone independent of the record length.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .synth import Waveform

POWER_SPECTRUM = "power-spectrum"
PSD = "psd"

# Frequency-grid oversampling relative to 1/duration; resolves tone widths
# well enough for half-maximum interpolation without excessive cost.
DEFAULT_OVERSAMPLE = 8


@dataclass(frozen=True)
class Periodogram:
    """Estimated spectrum on an explicit frequency grid (GHz)."""

    frequencies: np.ndarray = field(repr=False)
    power: np.ndarray = field(repr=False)  # mV^2, or mV^2/GHz once a density
    kind: str = POWER_SPECTRUM
    n_samples: int = 0
    f_res: float = 0.0  # 1 / record length, GHz


@dataclass(frozen=True)
class ToneMetrics:
    center: float  # GHz
    peak_power: float
    fwhm: float  # GHz


def frequency_grid(
    duration: float, f_min: float, f_max: float, oversample: int = DEFAULT_OVERSAMPLE
) -> np.ndarray:
    """Grid with spacing 1/(oversample * duration) covering [f_min, f_max]."""
    if duration <= 0 or f_max <= f_min:
        raise ValueError("need duration > 0 and f_max > f_min")
    step = 1.0 / (oversample * duration)
    return np.arange(max(f_min, step), f_max + step / 2, step)


def lomb_scargle(w: Waveform, grid: np.ndarray) -> Periodogram:
    """Least-squares periodogram of the waveform on the given grid (GHz).

    The grid should stay below the (mean) Nyquist rate 1/(2*dt_mean); uneven
    sampling blurs that limit but does not remove it.  The mean is subtracted
    before fitting, so a constant trace is degenerate.
    """
    t = np.asarray(w.times, dtype=float)
    y = np.asarray(w.voltages, dtype=float)
    grid = np.asarray(grid, dtype=float)
    if len(t) < 2:
        raise ValueError("degenerate input: need at least two samples")
    y = y - y.mean()
    if not np.any(y):
        raise ValueError("degenerate input: constant waveform")
    if np.any(grid <= 0):
        raise ValueError("grid frequencies must be positive")

    power = np.empty(len(grid))
    # Blocked over frequencies to bound the (n_freq x n_samples) workspace.
    block = max(1, int(4e6 / max(len(t), 1)))
    for start in range(0, len(grid), block):
        omega = 2.0 * np.pi * grid[start : start + block, None]  # (b, 1)
        wt = omega * t[None, :]  # (b, n)
        tau = np.arctan2(np.sin(2 * wt).sum(axis=1), np.cos(2 * wt).sum(axis=1)) / 2.0
        arg = wt - tau[:, None]
        c = np.cos(arg)
        s = np.sin(arg)
        power[start : start + block] = 0.5 * (
            (c @ y) ** 2 / np.einsum("ij,ij->i", c, c)
            + (s @ y) ** 2 / np.einsum("ij,ij->i", s, s)
        )
    span = t[-1] - t[0]
    return Periodogram(
        frequencies=grid,
        power=power,
        kind=POWER_SPECTRUM,
        n_samples=len(t),
        f_res=1.0 / span,
    )


def to_psd(pg: Periodogram) -> Periodogram:
    """Power spectral density: power spectrum over (f_res * n_samples)."""
    if pg.kind != POWER_SPECTRUM:
        raise ValueError("already a density")
    return replace(pg, power=pg.power / (pg.f_res * pg.n_samples), kind=PSD)


def tone_metrics(pg: Periodogram, f0: float, window: float) -> ToneMetrics:
    """Peak and full width at half maximum of the tone near f0.

    Searches [f0 - window/2, f0 + window/2], which must contain exactly one
    tone; the half-maximum crossings are located by linear interpolation
    between grid points, walking outward from the peak (past the window edge
    if the tone skirt extends beyond it).
    """
    f = pg.frequencies
    p = pg.power
    sel = np.nonzero((f >= f0 - window / 2) & (f <= f0 + window / 2))[0]
    if len(sel) < 3:
        raise ValueError("window too narrow for the frequency grid")
    ipk = int(sel[np.argmax(p[sel])])
    interior = 0 < ipk < len(f) - 1
    if not (interior and p[ipk] >= p[ipk - 1] and p[ipk] >= p[ipk + 1]):
        raise ValueError("no local maximum in window")
    half = p[ipk] / 2.0

    def cross(direction: int) -> float:
        i = ipk
        while 0 < i + direction < len(f) - 1 and p[i + direction] > half:
            i += direction
        j = i + direction
        if not 0 <= j < len(f) or p[j] > half:
            raise ValueError("half-maximum crossing outside the grid")
        if p[i] == p[j]:
            return float(f[j])
        # Linear interpolation between the straddling grid points.
        frac = (p[i] - half) / (p[i] - p[j])
        return float(f[i] + frac * (f[j] - f[i]))

    left = cross(-1)
    right = cross(+1)
    return ToneMetrics(center=float(f[ipk]), peak_power=float(p[ipk]), fwhm=right - left)
