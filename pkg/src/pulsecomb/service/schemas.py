"""Pydantic request/response models for the toolkit's operations.

These are the wire format of the HTTP service and the single source of truth
the CLI converts to files.  Frequencies are GHz, times ns, pulse widths ps,
voltages mV throughout.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


# ---------------------------------------------------------------- patterns


class PatternClassModel(StrictModel):
    canonical: str
    set_bits: int
    distance_set: list[int]
    signature: list[float]


class CountBoundsModel(StrictModel):
    lower: int
    upper: int


class PatternCatalogRequest(StrictModel):
    n_bits: int = Field(ge=1)
    include_bounds: bool = False


class PatternCatalogResponse(StrictModel):
    n_bits: int
    classes: list[PatternClassModel]
    bounds: Optional[CountBoundsModel] = None


# ---------------------------------------------------------------- spectrum


class CombStageModel(StrictModel):
    delay_ns: float = Field(ge=0)
    alpha: float = 1.0
    kind: Literal["feedforward", "feedback"] = "feedforward"


class SpectrumRequest(StrictModel):
    pattern: str
    f_clk_ghz: float = Field(gt=0)
    comb: list[CombStageModel] = Field(default_factory=list)


class ToneModel(StrictModel):
    frequency_ghz: float
    re: float
    im: float
    power: float


class SpectrumResponse(StrictModel):
    pattern: str
    f_clk_ghz: float
    n_bits: int
    tones: list[ToneModel]


# ---------------------------------------------------------------- synthesis


class SynthRequest(StrictModel):
    pattern: str
    f_clk_ghz: float = Field(gt=0)
    duration_ns: float = Field(gt=0)
    v_c: float = Field(default=1.0, gt=0)
    jitter_ps: float = Field(default=0.0, ge=0)
    seed: int = 0
    sample_rate_ghz: float = Field(default=1000.0, gt=0)
    timebase: Literal["even", "uneven"] = "even"
    estimate: bool = False


class ToneMetricsModel(StrictModel):
    center_ghz: float
    peak_power: float
    fwhm_ghz: float


class PeriodogramModel(StrictModel):
    frequencies_ghz: list[float]
    power: list[float]
    kind: str
    n_samples: int
    f_res_ghz: float


class WaveformModel(StrictModel):
    times_ns: list[float]
    voltages_mv: list[float]
    evenly_sampled: bool


class SynthResponse(StrictModel):
    events_ns: list[float]
    waveform: WaveformModel
    pulse_fwhm_ps: float
    pulse_amplitude_mv: float
    periodogram: Optional[PeriodogramModel] = None
    psd: Optional[PeriodogramModel] = None
    tone_metrics: dict[str, ToneMetricsModel] = Field(default_factory=dict)


# ---------------------------------------------------------------- tuning


class ObjectiveModel(StrictModel):
    kind: Literal["suppress", "amplify", "max_separation", "min_separation"]
    f1_ghz: float
    f2_ghz: Optional[float] = None


class TuneRequest(StrictModel):
    pattern: str
    f_clk_ghz: float = Field(gt=0)
    objective: ObjectiveModel
    tau_max_ns: Optional[float] = Field(default=None, gt=0)
    steps: int = Field(default=1000, ge=2)
    alpha: float = 1.0


class SweepModel(StrictModel):
    delays_ns: list[float]
    tone_powers: dict[str, list[float]]
    separation: Optional[list[float]] = None
    degenerate: list[bool]


class OptimumModel(StrictModel):
    tau_ns: float
    value: float
    degenerate: bool


class TuneResponse(StrictModel):
    sweep: SweepModel
    optimum: OptimumModel


# ---------------------------------------------------------------- timing


class CellTimingModel(StrictModel):
    setup_ps: float = Field(default=2.0, ge=0)
    hold_ps: float = Field(default=2.0, ge=0)
    clk_to_q_ps: float = Field(default=5.0, ge=0)
    data_delay_ps: float = Field(default=8.0, ge=0)


class TimingConfigModel(StrictModel):
    n_bits: int = Field(ge=1)
    style: Literal["binary-tree", "symmetric"]
    f_clk_GHz: float = Field(gt=0)
    cell: CellTimingModel = Field(default_factory=CellTimingModel)
    clock_arrivals_ps: Optional[list[float]] = None


class ViolationModel(StrictModel):
    cell: int
    slack_ps: float


class TimingReportModel(StrictModel):
    per_cell_skew_ps: list[float]
    total_skew_ps: float
    race_violations: list[ViolationModel]
    setup_violations: list[ViolationModel]
    ok: bool
    splitters: int


class TimingCheckRequest(StrictModel):
    config: TimingConfigModel


class TimingSimulateRequest(StrictModel):
    config: TimingConfigModel
    pattern: str
    duration_ns: float = Field(gt=0)
    jitter_ps: float = Field(default=0.0, ge=0)
    seed: int = 0


class TimingSimulateResponse(StrictModel):
    report: TimingReportModel
    events_ns: list[float]
    latency_offset_ns: float
