"""Comb-filter delay tuning: sweeps and objective-driven optimization.

Sweeping the delay of a unity-scale feedforward stage traces each grid tone
through periodic nulls and peaks (period 1/f per tone).  Objectives pick a
delay that suppresses a tone, amplifies it, or drives two tones maximally
apart or together.  Tone separation is measured on spectral magnitudes,
under which the best separation of a tone pair lands exactly on a null of
the weaker tone; raw power differences would peak slightly off the null.

Delays where the delayed copy lands back on the clock grid (multiples of the
clock period) are flagged: there the physical filter merges coincident
pulses instead of adding them, so the analytic response does not apply.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .patterns import Pattern
from .spectrum import tone_spectrum

DEGENERATE_REL_TOL = 1e-9
_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

SUPPRESS = "suppress"
AMPLIFY = "amplify"
MAX_SEPARATION = "max_separation"
MIN_SEPARATION = "min_separation"
_KINDS = (SUPPRESS, AMPLIFY, MAX_SEPARATION, MIN_SEPARATION)


@dataclass(frozen=True)
class Objective:
    """What to optimize; target frequencies must lie on the tone grid."""

    kind: str
    f1: float  # GHz
    f2: float | None = None  # GHz, separation objectives only

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown objective {self.kind!r}")
        needs_pair = self.kind in (MAX_SEPARATION, MIN_SEPARATION)
        if needs_pair and self.f2 is None:
            raise ValueError(f"{self.kind} needs two target frequencies")
        if not needs_pair and self.f2 is not None:
            raise ValueError(f"{self.kind} takes a single target frequency")

    @property
    def targets(self) -> tuple[float, ...]:
        return (self.f1,) if self.f2 is None else (self.f1, self.f2)


@dataclass(frozen=True)
class SweepResult:
    """Tone response versus delay for one pattern and comb stage scale."""

    delays: np.ndarray = field(repr=False)  # ns
    tone_powers: dict[float, np.ndarray] = field(repr=False)  # target -> power
    separation: np.ndarray | None = field(repr=False, default=None)
    degenerate: np.ndarray = field(repr=False, default=None)  # bool per delay
    f_clk: float = 0.0
    alpha: float = 1.0


@dataclass(frozen=True)
class OptimumDelay:
    tau: float  # ns
    value: float
    degenerate: bool  # tau is a multiple of the clock period


def _base_powers(p: Pattern, f_clk: float, targets) -> dict[float, float]:
    spec = tone_spectrum(p, f_clk)
    return {f: spec.power_at(f) for f in targets}


def _degenerate_mask(delays: np.ndarray, f_clk: float) -> np.ndarray:
    t_clk = 1.0 / f_clk
    frac = np.abs(delays / t_clk - np.round(delays / t_clk))
    return frac * t_clk <= DEGENERATE_REL_TOL * max(t_clk, 1.0)


def sweep_delay(
    p: Pattern,
    f_clk: float,
    tau_max: float | None = None,
    steps: int = 1000,
    targets=(),
    alpha: float = 1.0,
) -> SweepResult:
    """Tone powers after a feedforward stage at each delay in [0, tau_max].

    tau_max defaults to one full pattern revolution N/f_clk.  With exactly
    two targets the magnitude-separation curve is included.
    """
    if steps < 2:
        raise ValueError("steps must be >= 2")
    if tau_max is None:
        tau_max = p.n_bits / f_clk
    if tau_max <= 0:
        raise ValueError("tau_max must be positive")
    targets = tuple(targets)
    if not targets:
        raise ValueError("need at least one target frequency")
    base = _base_powers(p, f_clk, targets)  # raises off-grid

    delays = np.linspace(0.0, tau_max, steps)
    stagegain = {
        f: np.abs(1.0 + alpha * np.exp(-2j * math.pi * f * delays)) ** 2 for f in targets
    }
    powers = {f: base[f] * stagegain[f] for f in targets}
    separation = None
    if len(targets) == 2:
        a1 = np.sqrt(powers[targets[0]])
        a2 = np.sqrt(powers[targets[1]])
        separation = np.abs(a1 - a2)
    return SweepResult(
        delays=delays,
        tone_powers=powers,
        separation=separation,
        degenerate=_degenerate_mask(delays, f_clk),
        f_clk=f_clk,
        alpha=alpha,
    )


def _objective_fn(p: Pattern, f_clk: float, obj: Objective, alpha: float):
    """(callable tau -> value, sign) with sign +1 to maximize, -1 to minimize."""
    base = _base_powers(p, f_clk, obj.targets)
    if all(v == 0.0 for v in base.values()):
        raise ValueError("objective undefined: target tones carry no power")

    def power(f, tau):
        return base[f] * abs(1.0 + alpha * np.exp(-2j * math.pi * f * tau)) ** 2

    if obj.kind == SUPPRESS:
        return (lambda tau: power(obj.f1, tau)), -1
    if obj.kind == AMPLIFY:
        return (lambda tau: power(obj.f1, tau)), +1

    def sep(tau):
        return abs(math.sqrt(power(obj.f1, tau)) - math.sqrt(power(obj.f2, tau)))

    return sep, +1 if obj.kind == MAX_SEPARATION else -1


def _golden_section(fn, lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Minimum of fn on [lo, hi]; robust to a kink at the optimum."""
    a, b = lo, hi
    x1 = b - _INV_GOLDEN * (b - a)
    x2 = a + _INV_GOLDEN * (b - a)
    f1, f2 = fn(x1), fn(x2)
    while b - a > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_GOLDEN * (b - a)
            f1 = fn(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_GOLDEN * (b - a)
            f2 = fn(x2)
    xm = 0.5 * (a + b)
    return xm, fn(xm)


def optimize_delay(
    p: Pattern,
    f_clk: float,
    obj: Objective,
    tau_max: float | None = None,
    steps: int = 1000,
    alpha: float = 1.0,
) -> OptimumDelay:
    """Best delay in [0, tau_max] for the objective.

    Grid sweep followed by golden-section refinement of every local optimum;
    ties within 1e-9 relative resolve to the smallest delay.  The result is
    flagged degenerate when it falls on a multiple of the clock period, where
    the analytic response is not physical.
    """
    if tau_max is None:
        tau_max = p.n_bits / f_clk
    if tau_max <= 0:
        raise ValueError("tau_max must be positive")
    fn, sign = _objective_fn(p, f_clk, obj, alpha)

    def loss(tau):
        return -sign * fn(tau)

    taus = np.linspace(0.0, tau_max, steps)
    values = np.array([loss(t) for t in taus])

    # Candidate brackets: every interior local minimum of the loss plus both ends.
    candidates = []
    for i in range(len(taus)):
        left = values[i - 1] if i > 0 else np.inf
        right = values[i + 1] if i < len(taus) - 1 else np.inf
        if values[i] <= left and values[i] <= right:
            lo = taus[max(i - 1, 0)]
            hi = taus[min(i + 1, len(taus) - 1)]
            candidates.append(_golden_section(loss, lo, hi, tol=1e-13 * max(tau_max, 1.0)))

    best_loss = min(v for _, v in candidates)
    # Ties are judged against the objective's overall scale, not the best
    # value itself, so that equally deep nulls (values ~ 0) resolve to the
    # smallest delay instead of to floating-point noise.
    scale = max(float(np.max(np.abs(values))), 1e-30)
    tied = [t for t, v in candidates if v - best_loss <= 1e-9 * scale]
    tau_star = min(tied)
    value = fn(tau_star)
    degenerate = bool(_degenerate_mask(np.array([tau_star]), f_clk)[0])
    return OptimumDelay(tau=float(tau_star), value=float(value), degenerate=degenerate)
