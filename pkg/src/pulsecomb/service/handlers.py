"""Handlers mapping request models to core computations.

The HTTP app and the CLI both call these; the CLI only reshapes the
responses into files.  Domain errors surface as ValueError (bad inputs) or
TimingViolationError (failing network) for the callers to translate.
"""

from __future__ import annotations

import numpy as np

from .. import estimator, patterns, spectrum, synth, timing, tuner
from . import schemas as s

# Tones weaker than this fraction of the strongest are treated as absent.
TONE_FLOOR_REL = 1e-9


def catalog(req: s.PatternCatalogRequest) -> s.PatternCatalogResponse:
    classes = patterns.enumerate_unique(req.n_bits)
    bounds = None
    if req.include_bounds:
        lower, upper = patterns.count_bounds(req.n_bits)
        bounds = s.CountBoundsModel(lower=lower, upper=upper)
    return s.PatternCatalogResponse(
        n_bits=req.n_bits,
        classes=[s.PatternClassModel(**c.to_record()) for c in classes],
        bounds=bounds,
    )


def _stages(models: list[s.CombStageModel]) -> list[spectrum.CombStage]:
    return [
        spectrum.CombStage(delay=m.delay_ns, alpha=m.alpha, kind=m.kind) for m in models
    ]


def tone_table(req: s.SpectrumRequest) -> s.SpectrumResponse:
    p = patterns.Pattern.parse(req.pattern)
    spec = spectrum.apply_comb(
        spectrum.tone_spectrum(p, req.f_clk_ghz), _stages(req.comb)
    )
    tones = [
        s.ToneModel(frequency_ghz=float(f), re=c.real, im=c.imag, power=abs(c) ** 2)
        for f, c in zip(spec.frequencies, spec.amplitudes)
    ]
    return s.SpectrumResponse(
        pattern=str(p), f_clk_ghz=req.f_clk_ghz, n_bits=p.n_bits, tones=tones
    )


def _estimation_grid(duration: float, f_clk: float, n_bits: int) -> np.ndarray:
    # One full spectral period plus half a tone spacing of headroom.
    return estimator.frequency_grid(duration, 0.0, f_clk * (1.0 + 0.5 / n_bits))


def _emitting_tones(p: patterns.Pattern, f_clk: float) -> list[float]:
    # Nonzero grid tones in (0, f_clk]; k = n_bits is the clock line itself.
    powers = patterns.power_signature(p)
    floor = powers.max() * TONE_FLOOR_REL
    tones = []
    for k in range(1, p.n_bits + 1):
        if powers[k % p.n_bits] > floor:
            tones.append(k * f_clk / p.n_bits)
    return tones


def synthesize(req: s.SynthRequest) -> s.SynthResponse:
    p = patterns.Pattern.parse(req.pattern)
    jitter = synth.JitterModel(sigma=req.jitter_ps, seed=req.seed)
    events = synth.event_times(p, req.f_clk_ghz, req.duration_ns, jitter)
    shape = synth.pulse_shape(req.v_c)
    wave = synth.render(
        events, shape, req.sample_rate_ghz, timebase=req.timebase, seed=req.seed
    )
    resp = s.SynthResponse(
        events_ns=[float(t) for t in events.timestamps],
        waveform=s.WaveformModel(
            times_ns=[float(t) for t in wave.times],
            voltages_mv=[float(v) for v in wave.voltages],
            evenly_sampled=wave.evenly_sampled,
        ),
        pulse_fwhm_ps=shape.width,
        pulse_amplitude_mv=shape.amplitude,
    )
    if not req.estimate:
        return resp

    grid = _estimation_grid(req.duration_ns, req.f_clk_ghz, p.n_bits)
    pg = estimator.lomb_scargle(wave, grid)
    psd = estimator.to_psd(pg)
    metrics = {}
    window = 0.9 * req.f_clk_ghz / p.n_bits
    for f0 in _emitting_tones(p, req.f_clk_ghz):
        try:
            m = estimator.tone_metrics(pg, f0, window)
        except ValueError:
            continue  # tone skirt unresolved on this grid
        metrics[f"{f0}"] = s.ToneMetricsModel(
            center_ghz=m.center, peak_power=m.peak_power, fwhm_ghz=m.fwhm
        )
    resp = resp.model_copy(
        update={
            "periodogram": _pg_model(pg),
            "psd": _pg_model(psd),
            "tone_metrics": metrics,
        }
    )
    return resp


def _pg_model(pg: estimator.Periodogram) -> s.PeriodogramModel:
    return s.PeriodogramModel(
        frequencies_ghz=[float(f) for f in pg.frequencies],
        power=[float(v) for v in pg.power],
        kind=pg.kind,
        n_samples=pg.n_samples,
        f_res_ghz=pg.f_res,
    )


def tune(req: s.TuneRequest) -> s.TuneResponse:
    p = patterns.Pattern.parse(req.pattern)
    obj = tuner.Objective(
        kind=req.objective.kind, f1=req.objective.f1_ghz, f2=req.objective.f2_ghz
    )
    sweep = tuner.sweep_delay(
        p,
        req.f_clk_ghz,
        tau_max=req.tau_max_ns,
        steps=req.steps,
        targets=obj.targets,
        alpha=req.alpha,
    )
    opt = tuner.optimize_delay(
        p, req.f_clk_ghz, obj, tau_max=req.tau_max_ns, steps=req.steps, alpha=req.alpha
    )
    return s.TuneResponse(
        sweep=s.SweepModel(
            delays_ns=[float(d) for d in sweep.delays],
            tone_powers={
                f"{f}": [float(v) for v in vals]
                for f, vals in sweep.tone_powers.items()
            },
            separation=(
                None
                if sweep.separation is None
                else [float(v) for v in sweep.separation]
            ),
            degenerate=[bool(d) for d in sweep.degenerate],
        ),
        optimum=s.OptimumModel(
            tau_ns=opt.tau, value=opt.value, degenerate=opt.degenerate
        ),
    )


def _config(model: s.TimingConfigModel) -> timing.TimingNetConfig:
    data = {
        "n_bits": model.n_bits,
        "style": model.style,
        "f_clk_GHz": model.f_clk_GHz,
        "cell": model.cell.model_dump(),
    }
    if model.clock_arrivals_ps is not None:
        data["clock_arrivals_ps"] = model.clock_arrivals_ps
    return timing.config_from_dict(data)


def _report_model(cfg: timing.TimingNetConfig, report: timing.TimingReport) -> s.TimingReportModel:
    splitters = (
        timing.splitter_count(cfg.style, cfg.n_bits) if cfg.n_bits >= 2 else 0
    )
    return s.TimingReportModel(
        per_cell_skew_ps=list(report.per_cell_skew),
        total_skew_ps=report.total_skew,
        race_violations=[
            s.ViolationModel(cell=i, slack_ps=sl) for i, sl in report.race_violations
        ],
        setup_violations=[
            s.ViolationModel(cell=i, slack_ps=sl) for i, sl in report.setup_violations
        ],
        ok=report.ok,
        splitters=splitters,
    )


def timing_check(req: s.TimingCheckRequest) -> s.TimingReportModel:
    cfg = _config(req.config)
    return _report_model(cfg, timing.check_timing(cfg))


def timing_simulate(req: s.TimingSimulateRequest) -> s.TimingSimulateResponse:
    cfg = _config(req.config)
    p = patterns.Pattern.parse(req.pattern)
    jitter = synth.JitterModel(sigma=req.jitter_ps, seed=req.seed)
    events = timing.program_and_run(cfg, p, req.duration_ns, jitter)
    return s.TimingSimulateResponse(
        report=_report_model(cfg, timing.check_timing(cfg)),
        events_ns=[float(t) for t in events.timestamps],
        latency_offset_ns=timing.run_offset(cfg, p.n_bits),
    )
