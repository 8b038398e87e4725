"""Programmable multi-tone pulse trains from a circulating bit pattern.

Core pieces: pattern combinatorics (patterns), analytic line spectra and
comb filters (spectrum), finite-train synthesis (synth), least-squares
spectral estimation (estimator), comb-delay tuning (tuner) and clock-network
timing simulation (timing).  The service subpackage and cli wrap them for
HTTP and file-based use.
"""

from .patterns import (
    EquivalenceClass,
    Pattern,
    canonicalize,
    count_bounds,
    distance_set,
    dual,
    enumerate_unique,
    mirror,
    rotate,
    spectrally_equivalent,
)
from .spectrum import (
    CombStage,
    ToneSpectrum,
    UnstableStageError,
    apply_comb,
    comb_response,
    modulation,
    tone_spectrum,
)
from .synth import (
    PHI0_MV_PS,
    VC_UNIT_MV,
    EventSequence,
    JitterModel,
    PulseShape,
    Waveform,
    avg_power,
    comb_apply_events,
    event_times,
    pulse_shape,
    render,
)
from .estimator import (
    Periodogram,
    ToneMetrics,
    frequency_grid,
    lomb_scargle,
    to_psd,
    tone_metrics,
)
from .tuner import Objective, OptimumDelay, SweepResult, optimize_delay, sweep_delay
from .timing import (
    CellTiming,
    TimingNetConfig,
    TimingReport,
    TimingViolationError,
    build_network,
    check_timing,
    program_and_run,
    simulate_csr,
    splitter_count,
)

__version__ = "0.1.0"
