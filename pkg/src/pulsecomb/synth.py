"""Finite pulse trains: event times, pulse shapes, rendering, event-domain combs.

This is the time-domain counterpart of the analytic line spectra: a pattern
circulating at f_clk emits one pulse per set bit per revolution.  Pulses
carry a fixed area (one flux quantum) regardless of their width, so raising
the junction characteristic voltage makes them narrower and taller but never
changes the average output.

Units: times in ns, frequencies in GHz, pulse widths in ps, voltages in mV.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .patterns import Pattern
from .spectrum import FEEDFORWARD, CombStage

# Single flux quantum h/2e expressed as a voltage-time area.
PHI0_MV_PS = 2.067833848
# One dimensionless unit of characteristic voltage.
VC_UNIT_MV = 0.287

_FWHM_PER_SIGMA = 2.0 * math.sqrt(2.0 * math.log(2.0))


@dataclass(frozen=True)
class PulseShape:
    """Gaussian pulse of fixed area PHI0, parameterized by v_c.

    The width tracks 1/v_c (a taller pulse must be narrower to keep its
    area) and the nominal height scale is 2 * v_c * 0.287 mV.
    """

    v_c: float  # dimensionless units of VC_UNIT_MV
    amplitude: float  # peak voltage, mV
    width: float  # full width at half maximum, ps
    area: float  # mV*ps, always PHI0_MV_PS

    @property
    def sigma(self) -> float:
        """Gaussian standard deviation in ps."""
        return self.width / _FWHM_PER_SIGMA

    @property
    def power_width(self) -> float:
        """Equivalent rectangular width of the squared pulse, ps.

        Integral of V(t)^2 divided by the peak power; this is the width that
        makes peak_power * width equal the true per-pulse energy.
        """
        return self.sigma * math.sqrt(math.pi)


def pulse_shape(v_c: float) -> PulseShape:
    """Pulse shape for a characteristic voltage of v_c units."""
    if v_c <= 0:
        raise ValueError("v_c must be positive")
    width_ps = PHI0_MV_PS / (2.0 * v_c * VC_UNIT_MV)
    sigma_ps = width_ps / _FWHM_PER_SIGMA
    amplitude_mv = PHI0_MV_PS / (sigma_ps * math.sqrt(2.0 * math.pi))
    return PulseShape(v_c=v_c, amplitude=amplitude_mv, width=width_ps, area=PHI0_MV_PS)


@dataclass(frozen=True)
class JitterModel:
    """Independent Gaussian timing error per pulse edge, seeded."""

    sigma: float  # RMS jitter, ps
    seed: int = 0

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")

    def draws(self, n: int) -> np.ndarray:
        """n jitter offsets in ns."""
        if self.sigma == 0.0:
            return np.zeros(n)
        rng = np.random.default_rng(self.seed)
        return rng.normal(0.0, self.sigma * 1e-3, n)


@dataclass(frozen=True)
class EventSequence:
    """Strictly increasing pulse timestamps within [0, duration]."""

    timestamps: np.ndarray = field(repr=False)  # ns
    duration: float  # ns
    f_clk: float  # GHz
    meta: str = ""

    def __len__(self) -> int:
        return len(self.timestamps)


@dataclass(frozen=True)
class Waveform:
    """Sampled voltage trace, not necessarily on a uniform timebase."""

    times: np.ndarray = field(repr=False)  # ns
    voltages: np.ndarray = field(repr=False)  # mV
    evenly_sampled: bool = True

    def __len__(self) -> int:
        return len(self.times)


def event_times(
    p: Pattern, f_clk: float, duration: float, jitter: JitterModel | None = None
) -> EventSequence:
    """Pulse times of pattern p circulating at f_clk for the given duration.

    One event at (k + m*N) / f_clk for every set bit k and revolution m with
    ideal time inside [0, duration).  Jittered times are re-sorted and clipped
    to the duration window.
    """
    if duration <= 0:
        raise ValueError("duration must be positive")
    if f_clk <= 0:
        raise ValueError("f_clk must be positive")
    n = p.n_bits
    set_ks = [k for k, b in enumerate(p.bits) if b]
    times = []
    m = 0
    while set_ks:
        base = m * n
        if base / f_clk >= duration:
            break
        for k in set_ks:
            t = (k + base) / f_clk
            if t < duration:
                times.append(t)
        m += 1
    ts = np.asarray(times)
    if jitter is not None and len(ts):
        ts = ts + jitter.draws(len(ts))
        ts = np.sort(ts)
        ts = ts[(ts >= 0.0) & (ts < duration)]
    return EventSequence(
        timestamps=ts, duration=duration, f_clk=f_clk, meta=f"pattern {p}"
    )


def _sample_times(duration: float, sample_rate: float, timebase, seed: int) -> tuple[np.ndarray, bool]:
    dt = 1.0 / sample_rate
    t = np.arange(0.0, duration, dt)
    if timebase == "even":
        return t, True
    if timebase == "uneven":
        # Perturbations below dt/2 keep the timebase strictly increasing.
        rng = np.random.default_rng(seed)
        t = t + rng.uniform(-0.45 * dt, 0.45 * dt, len(t))
        t[0] = abs(t[0])
        return t, False
    raise ValueError(f"unknown timebase {timebase!r}")


def render(
    events: EventSequence,
    shape: PulseShape,
    sample_rate: float,
    timebase: str = "even",
    seed: int = 0,
) -> Waveform:
    """Superpose one pulse per event on the chosen timebase.

    sample_rate is in GHz; it should comfortably exceed twice the highest
    frequency of interest (1000 GHz resolves the default ps-scale pulses up
    to beyond 100 GHz).  The "uneven" timebase perturbs each sample instant
    to emulate a dynamic-time-step trace.
    """
    if sample_rate <= 0:
        raise ValueError("sample_rate must be positive")
    t, even = _sample_times(events.duration, sample_rate, timebase, seed)
    v = np.zeros_like(t)
    sigma_ns = shape.sigma * 1e-3
    cutoff = 8.0 * sigma_ns  # Gaussian tail past 8 sigma is below 1e-14
    for te in np.asarray(events.timestamps):
        lo = np.searchsorted(t, te - cutoff)
        hi = np.searchsorted(t, te + cutoff)
        if lo < hi:
            dt = t[lo:hi] - te
            v[lo:hi] += shape.amplitude * np.exp(-0.5 * (dt / sigma_ns) ** 2)
    return Waveform(times=t, voltages=v, evenly_sampled=even)


def comb_apply_events(
    events: EventSequence, stage: CombStage, dead_time: float
) -> EventSequence:
    """Event-domain feedforward comb: merge the train with a delayed copy.

    Pulses cannot stack, so any event closer than dead_time to the previous
    kept event is absorbed by it (earliest wins).  Exactly coincident copies
    merge for any dead_time > 0; choosing the pulse width as dead_time models
    the physical merger cell.  Feedback combs have no event-domain form.
    """
    if stage.kind != FEEDFORWARD:
        raise ValueError("not representable in event domain")
    if dead_time < 0:
        raise ValueError("dead_time must be >= 0")
    ts = np.asarray(events.timestamps)
    merged = np.sort(np.concatenate([ts, ts + stage.delay]))
    kept = []
    for t in merged:
        if not kept or t - kept[-1] >= dead_time:
            if t < events.duration:
                kept.append(t)
    return EventSequence(
        timestamps=np.asarray(kept),
        duration=events.duration,
        f_clk=events.f_clk,
        meta=events.meta + f" + comb(tau={stage.delay} ns)",
    )


def avg_power(
    p: Pattern, shape: PulseShape, f_clk: float, p_peak: float | None = None
) -> float:
    """Time-averaged power: peak power times duty cycle.

    The duty cycle is (pulse width / clock period) * (set bits / N).  The
    pulse width used is the power-equivalent width of the shape, so with the
    default p_peak (the squared peak voltage) the result equals the true time
    average of V(t)^2 for non-overlapping pulses.
    """
    if f_clk <= 0:
        raise ValueError("f_clk must be positive")
    if p_peak is None:
        p_peak = shape.amplitude**2
    t_clk_ps = 1e3 / f_clk
    return p_peak * (shape.power_width / t_clk_ps) * (p.set_bits / p.n_bits)
