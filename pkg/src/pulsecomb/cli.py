"""Command-line front end: a thin client over the service handlers.

Every command reads plain arguments or a JSON config, calls the same
handlers the HTTP service uses, and writes CSV/JSON files into --out.
Given the same --seed, two runs produce byte-identical outputs.

Exit codes: 0 success, 2 usage or parse failure, 3 domain failure (timing
violation, unstable filter stage).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .spectrum import UnstableStageError
from .timing import TimingViolationError
from . import fileio
from .service import handlers
from .service import schemas as s

USAGE_ERROR = 2
DOMAIN_ERROR = 3


def _parse_comb(text: str) -> s.CombStageModel:
    """--comb accepts 'TAU' or 'TAU,ALPHA' (ns, unitless)."""
    parts = text.split(",")
    if len(parts) not in (1, 2):
        raise ValueError(f"bad comb argument {text!r}, expected TAU[,ALPHA]")
    delay = float(parts[0])
    alpha = float(parts[1]) if len(parts) == 2 else 1.0
    return s.CombStageModel(delay_ns=delay, alpha=alpha, kind="feedforward")


def _write_table(out: Path, stem: str, fmt: str, header: list[str], rows) -> Path:
    rows = [list(r) for r in rows]
    if fmt == "csv":
        path = out / f"{stem}.csv"
        fileio.write_rows(path, header, rows)
    else:
        path = out / f"{stem}.json"
        fileio.write_json(
            path, [dict(zip(header, [float(x) for x in row])) for row in rows]
        )
    return path


def cmd_patterns(args, out: Path, fmt: str, seed: int) -> int:
    req = s.PatternCatalogRequest(n_bits=args.n_bits, include_bounds=args.bounds)
    resp = handlers.catalog(req)
    path = out / f"patterns_n{args.n_bits}.json"
    fileio.write_json(path, [c.model_dump() for c in resp.classes])
    line = f"{len(resp.classes)} unique classes -> {path}"
    if resp.bounds is not None:
        line += f" (bounds: lower={resp.bounds.lower} upper={resp.bounds.upper})"
        fileio.write_json(
            out / f"patterns_n{args.n_bits}_bounds.json", resp.bounds.model_dump()
        )
    print(line)
    return 0


def cmd_spectrum(args, out: Path, fmt: str, seed: int) -> int:
    req = s.SpectrumRequest(
        pattern=args.pattern,
        f_clk_ghz=args.f_clk,
        comb=[_parse_comb(c) for c in args.comb],
    )
    resp = handlers.tone_table(req)
    header = ["frequency_GHz", "re", "im", "power"]
    rows = [[t.frequency_ghz, t.re, t.im, t.power] for t in resp.tones]
    path = _write_table(out, "spectrum", fmt, header, rows)
    print(f"{len(rows)} tones -> {path}")
    return 0


def cmd_synth(args, out: Path, fmt: str, seed: int) -> int:
    req = s.SynthRequest(
        pattern=args.pattern,
        f_clk_ghz=args.f_clk,
        duration_ns=args.duration,
        v_c=args.vc,
        jitter_ps=args.jitter,
        seed=seed,
        sample_rate_ghz=args.sample_rate,
        timebase=args.timebase,
        estimate=args.estimate,
    )
    resp = handlers.synthesize(req)
    paths = [
        _write_table(out, "events", fmt, ["time_ns"], [[t] for t in resp.events_ns]),
        _write_table(
            out,
            "waveform",
            fmt,
            ["time_ns", "voltage_mV"],
            zip(resp.waveform.times_ns, resp.waveform.voltages_mv),
        ),
    ]
    if resp.periodogram is not None:
        for stem, pg in (("periodogram", resp.periodogram), ("psd", resp.psd)):
            paths.append(
                _write_table(
                    out,
                    stem,
                    fmt,
                    ["frequency_GHz", "power"],
                    zip(pg.frequencies_ghz, pg.power),
                )
            )
            fileio.write_json(
                out / f"{stem}.meta.json",
                {
                    "kind": pg.kind,
                    "n_samples": pg.n_samples,
                    "f_res_GHz": pg.f_res_ghz,
                },
            )
        fileio.write_json(
            out / "tone_metrics.json",
            {f: m.model_dump() for f, m in resp.tone_metrics.items()},
        )
        paths.append(out / "tone_metrics.json")
    print(f"{len(resp.events_ns)} events -> " + ", ".join(str(p) for p in paths))
    return 0


_OBJECTIVES = {
    "suppress": "suppress",
    "amplify": "amplify",
    "max-separation": "max_separation",
    "min-separation": "min_separation",
}


def cmd_tune(args, out: Path, fmt: str, seed: int) -> int:
    kind = _OBJECTIVES[args.objective]
    needs_pair = kind.endswith("separation")
    if needs_pair and args.f2 is None:
        raise ValueError(f"objective {args.objective} needs two frequencies")
    if not needs_pair and args.f2 is not None:
        raise ValueError(f"objective {args.objective} takes one frequency")
    req = s.TuneRequest(
        pattern=args.pattern,
        f_clk_ghz=args.f_clk,
        objective=s.ObjectiveModel(kind=kind, f1_ghz=args.f1, f2_ghz=args.f2),
        tau_max_ns=args.tau_max,
        steps=args.steps,
    )
    resp = handlers.tune(req)
    sweep = resp.sweep
    header = ["delay_ns"] + [f"power_{f}GHz" for f in sweep.tone_powers]
    columns = [sweep.delays_ns] + list(sweep.tone_powers.values())
    if sweep.separation is not None:
        header.append("separation")
        columns.append(sweep.separation)
    header.append("degenerate")
    columns.append([int(d) for d in sweep.degenerate])
    rows = list(zip(*columns))
    if fmt == "csv":
        sweep_path = out / "sweep.csv"
        fileio.write_rows(sweep_path, header, rows)
    else:
        sweep_path = out / "sweep.json"
        fileio.write_json(
            sweep_path, [dict(zip(header, [float(x) for x in r])) for r in rows]
        )
    opt_path = out / "optimum.json"
    fileio.write_json(opt_path, resp.optimum.model_dump())
    print(
        f"tau*={resp.optimum.tau_ns} ns value={resp.optimum.value}"
        f"{' (degenerate)' if resp.optimum.degenerate else ''}"
        f" -> {sweep_path}, {opt_path}"
    )
    return 0


def cmd_timing(args, out: Path, fmt: str, seed: int) -> int:
    try:
        config_data = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot read config: {exc}") from exc
    config = s.TimingConfigModel(**config_data)
    report = handlers.timing_check(s.TimingCheckRequest(config=config))
    report_path = out / "timing_report.json"
    fileio.write_json(report_path, report.model_dump())
    print(
        f"ok={report.ok} total_skew={report.total_skew_ps} ps "
        f"splitters={report.splitters} -> {report_path}"
    )
    if args.simulate:
        pattern, duration = args.simulate
        sim = handlers.timing_simulate(
            s.TimingSimulateRequest(
                config=config,
                pattern=pattern,
                duration_ns=float(duration),
                jitter_ps=args.jitter,
                seed=seed,
            )
        )
        events_path = _write_table(
            out, "timing_events", fmt, ["time_ns"], [[t] for t in sim.events_ns]
        )
        print(f"{len(sim.events_ns)} events -> {events_path}")
    return 0


def cmd_serve(args, out: Path, fmt: str, seed: int) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pulsecomb",
        description="Multi-tone pulse train simulator and analysis toolkit",
    )
    parser.add_argument("--out", default=".", help="output directory (default: .)")
    parser.add_argument(
        "--format", choices=["csv", "json"], default="csv", help="table file format"
    )
    parser.add_argument("--seed", type=int, default=0, help="seed for all randomness")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("patterns", help="enumerate unique register patterns")
    p.add_argument("n_bits", type=int)
    p.add_argument("--bounds", action="store_true", help="also compute count bounds")
    p.set_defaults(fn=cmd_patterns)

    p = sub.add_parser("spectrum", help="analytic tone spectrum of a pattern")
    p.add_argument("pattern")
    p.add_argument("f_clk", type=float, help="clock frequency, GHz")
    p.add_argument(
        "--comb",
        action="append",
        default=[],
        metavar="TAU[,ALPHA]",
        help="feedforward comb stage, repeatable; delay in ns",
    )
    p.set_defaults(fn=cmd_spectrum)

    p = sub.add_parser("synth", help="render a finite pulse train")
    p.add_argument("pattern")
    p.add_argument("f_clk", type=float, help="clock frequency, GHz")
    p.add_argument("duration", type=float, help="train length, ns")
    p.add_argument("--vc", type=float, default=1.0, help="characteristic voltage, units")
    p.add_argument("--jitter", type=float, default=0.0, help="RMS edge jitter, ps")
    p.add_argument("--sample-rate", type=float, default=1000.0, help="GHz")
    p.add_argument("--timebase", choices=["even", "uneven"], default="even")
    p.add_argument(
        "--estimate",
        action="store_true",
        help="also compute periodogram, PSD and tone metrics",
    )
    p.set_defaults(fn=cmd_synth)

    p = sub.add_parser("tune", help="sweep and optimize comb delay")
    p.add_argument("pattern")
    p.add_argument("f_clk", type=float, help="clock frequency, GHz")
    p.add_argument("objective", choices=sorted(_OBJECTIVES))
    p.add_argument("f1", type=float, help="target frequency, GHz")
    p.add_argument("f2", type=float, nargs="?", default=None, help="second target, GHz")
    p.add_argument("--tau-max", type=float, default=None, help="sweep range, ns")
    p.add_argument("--steps", type=int, default=1000)
    p.set_defaults(fn=cmd_tune)

    p = sub.add_parser("timing", help="check a clock network config (JSON)")
    p.add_argument("config", help="path to network config JSON")
    p.add_argument(
        "--simulate",
        nargs=2,
        metavar=("PATTERN", "DURATION"),
        help="load the pattern and run for DURATION ns",
    )
    p.add_argument("--jitter", type=float, default=0.0, help="RMS edge jitter, ps")
    p.set_defaults(fn=cmd_timing)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create output directory: {exc}", file=sys.stderr)
        return USAGE_ERROR
    try:
        return args.fn(args, out, args.format, args.seed)
    except (TimingViolationError, UnstableStageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DOMAIN_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
