"""HTTP front end: one endpoint per toolkit capability.

Bad domain inputs map to 400, timing violations to 409; schema violations
are FastAPI's usual 422.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from ..timing import TimingViolationError
from . import handlers
from . import schemas as s

app = FastAPI(
    title="pulsecomb",
    description=(
        "Programmable multi-tone pulse trains: pattern catalogs, analytic "
        "tone spectra, comb filtering, waveform synthesis, spectral "
        "estimation and clock-network timing checks."
    ),
)


def _domain(call, *args):
    try:
        return call(*args)
    except TimingViolationError as exc:
        raise HTTPException(status_code=409, detail=str(exc)) from exc
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/patterns/catalog", response_model=s.PatternCatalogResponse)
def patterns_catalog(req: s.PatternCatalogRequest):
    return _domain(handlers.catalog, req)


@app.post("/spectrum/tones", response_model=s.SpectrumResponse)
def spectrum_tones(req: s.SpectrumRequest):
    return _domain(handlers.tone_table, req)


@app.post("/synth/run", response_model=s.SynthResponse)
def synth_run(req: s.SynthRequest):
    return _domain(handlers.synthesize, req)


@app.post("/tune/delay", response_model=s.TuneResponse)
def tune_delay(req: s.TuneRequest):
    return _domain(handlers.tune, req)


@app.post("/timing/check", response_model=s.TimingReportModel)
def timing_check(req: s.TimingCheckRequest):
    return _domain(handlers.timing_check, req)


@app.post("/timing/simulate", response_model=s.TimingSimulateResponse)
def timing_simulate(req: s.TimingSimulateRequest):
    return _domain(handlers.timing_simulate, req)
