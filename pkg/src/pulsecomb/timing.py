"""Timing-level model of the register's clock distribution and circulation.

Cells are delay elements with setup/hold bookkeeping, not junction models.
A circular register needs its total clock skew to telescope to zero; the two
supported clocking styles achieve that differently.  Binary-tree clocking
delivers the clock to every cell simultaneously (zero skew everywhere) at
the price of N-1 splitters; symmetric clocking runs half the loop with the
data flow and half against it (negative then positive per-cell skews) and
needs only N/2 splitters.

Times are in ps here, except event timestamps and durations in ns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .patterns import Pattern
from .synth import EventSequence, JitterModel

BINARY_TREE = "binary-tree"
SYMMETRIC = "symmetric"

OPEN = "open"
CLOSED = "closed"


@dataclass(frozen=True)
class CellTiming:
    """Per-cell timing parameters in ps."""

    setup: float = 2.0
    hold: float = 2.0
    clk_to_q: float = 5.0
    data_delay: float = 8.0

    def __post_init__(self):
        if min(self.setup, self.hold, self.clk_to_q, self.data_delay) < 0:
            raise ValueError("cell timing parameters must be >= 0")


DEFAULT_CELL = CellTiming()


@dataclass(frozen=True)
class TimingNetConfig:
    n_bits: int
    style: str
    clock_arrivals: tuple[float, ...]  # ps, one per cell
    f_clk: float  # GHz
    cell: CellTiming = DEFAULT_CELL

    def __post_init__(self):
        if len(self.clock_arrivals) != self.n_bits:
            raise ValueError("need one clock arrival per cell")
        if self.style not in (BINARY_TREE, SYMMETRIC):
            raise ValueError(f"unknown clocking style {self.style!r}")
        if self.f_clk <= 0:
            raise ValueError("f_clk must be positive")


@dataclass(frozen=True)
class TimingReport:
    per_cell_skew: tuple[float, ...]  # t_i - t_{i+1}, cyclic, ps
    total_skew: float  # ps, exact sum of per-cell skews
    race_violations: tuple[tuple[int, float], ...]  # (cell, slack ps)
    setup_violations: tuple[tuple[int, float], ...]  # (cell, slack ps)
    ok: bool


class TimingViolationError(RuntimeError):
    """Raised when a simulation is attempted on a failing network."""

    def __init__(self, report: TimingReport):
        self.report = report
        races = [i for i, _ in report.race_violations]
        setups = [i for i, _ in report.setup_violations]
        super().__init__(
            f"timing violations: race at cells {races}, setup at cells {setups}"
        )


def build_network(
    n: int,
    style: str,
    f_clk: float,
    cell: CellTiming = DEFAULT_CELL,
    stage_delay: float | None = None,
) -> TimingNetConfig:
    """Clock-arrival schedule for an n-cell circular register.

    Binary tree: all arrivals equal.  Symmetric: the clock walks forward with
    the data through the first n/2 cells and backward through the rest, one
    stage_delay (default: the inter-cell data delay) per hop, so per-cell
    skews are -d then +d and the loop total telescopes to zero.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if style == BINARY_TREE:
        arrivals = (0.0,) * n
    elif style == SYMMETRIC:
        if n % 2:
            raise ValueError("symmetric clocking needs an even cell count")
        d = cell.data_delay if stage_delay is None else stage_delay
        half = n // 2
        arrivals = tuple(i * d for i in range(half)) + tuple(
            (n - 1 - i) * d for i in range(half, n)
        )
    else:
        raise ValueError(f"unknown clocking style {style!r}")
    return TimingNetConfig(
        n_bits=n, style=style, clock_arrivals=arrivals, f_clk=f_clk, cell=cell
    )


def splitter_count(style: str, n: int) -> int:
    """Clock splitters needed: N-1 for a binary tree, N/2 for symmetric."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if style == BINARY_TREE:
        return n - 1
    if style == SYMMETRIC:
        if n % 2:
            raise ValueError("symmetric clocking needs an even cell count")
        return n // 2
    raise ValueError(f"unknown clocking style {style!r}")


def check_timing(cfg: TimingNetConfig) -> TimingReport:
    """Skew, race and setup report; failures are carried, never raised.

    Per-cell skew is t_i - t_{i+1} around the loop.  A cell races when its
    skew plus the inter-cell data delay does not exceed the hold time (a zero
    hold window cannot race).  A cell misses setup when launch delay, data
    delay and setup do not fit in the clock period plus skew.
    """
    t = cfg.clock_arrivals
    n = cfg.n_bits
    cell = cfg.cell
    t_clk_ps = 1e3 / cfg.f_clk
    skews = tuple(t[i] - t[(i + 1) % n] for i in range(n))
    races = []
    setups = []
    for i, skew in enumerate(skews):
        hold_slack = skew + cell.data_delay - cell.hold
        if cell.hold > 0 and hold_slack <= 0:
            races.append((i, hold_slack))
        setup_slack = t_clk_ps - skew - (cell.clk_to_q + cell.data_delay + cell.setup)
        if setup_slack < 0:
            setups.append((i, setup_slack))
    total = math.fsum(skews)
    ok = total == 0.0 and not races and not setups
    return TimingReport(
        per_cell_skew=skews,
        total_skew=total,
        race_violations=tuple(races),
        setup_violations=tuple(setups),
        ok=ok,
    )


def run_offset(cfg: TimingNetConfig, preload_ticks: int) -> float:
    """Constant latency (ns) between ideal grid times and simulated output.

    Covers the clock ticks consumed before the run plus clock arrival and
    launch delay at the output cell.  Simulated event times are exactly
    tick/f_clk + run_offset(...), same floating-point operations included.
    """
    latency_ns = (cfg.clock_arrivals[-1] + cfg.cell.clk_to_q) * 1e-3
    return preload_ticks / cfg.f_clk + latency_ns


def load_ops(p: Pattern) -> list[tuple]:
    """Write operations that serially load p, first bit first."""
    return [("write", b) for b in p.bits]


def simulate_csr(
    cfg: TimingNetConfig,
    p: Pattern,
    ops,
    jitter: JitterModel | None = None,
) -> EventSequence:
    """Discrete-event run of the register through an operation sequence.

    Operations: ("write", bit) shifts a bit in through the data input (loop
    must be open), ("set_loop", "open"|"closed") drives the loop switch, and
    ("run", duration_ns) clocks the register for a duration.  The output cell
    emits an event whenever a set bit leaves it, including during writes if
    stale data drains out.  Running an open loop drains the contents in one
    pass.  The network is checked before any run; a failing report raises
    TimingViolationError.
    """
    cells = [0] * cfg.n_bits
    loop_closed = False
    tick = 0  # global tick counter across all ops
    raw: list[float] = []  # event times, ns
    end_ns = 0.0

    def emit(time_ns: float):
        raw.append(time_ns)

    for op in ops:
        name = op[0]
        if name == "write":
            if loop_closed:
                raise ValueError("write in read mode")
            bit = int(op[1])
            if bit not in (0, 1):
                raise ValueError("written bit must be 0 or 1")
            out = cells[-1]
            if out:
                emit(tick / cfg.f_clk + (cfg.clock_arrivals[-1] + cfg.cell.clk_to_q) * 1e-3)
            cells = [bit] + cells[:-1]
            tick += 1
        elif name == "set_loop":
            state = op[1]
            if state not in (OPEN, CLOSED):
                raise ValueError(f"loop state must be '{OPEN}' or '{CLOSED}'")
            loop_closed = state == CLOSED
        elif name == "run":
            duration = float(op[1])
            if duration <= 0:
                raise ValueError("run duration must be positive")
            report = check_timing(cfg)
            if not report.ok:
                raise TimingViolationError(report)
            offset = run_offset(cfg, tick)
            g = 0
            while g / cfg.f_clk < duration:
                out = cells[-1]
                if out:
                    emit(g / cfg.f_clk + offset)
                feedback = cells[-1] if loop_closed else 0
                cells = [feedback] + cells[:-1]
                g += 1
            tick += g
        else:
            raise ValueError(f"unknown op {name!r}")
        end_ns = tick / cfg.f_clk + (cfg.clock_arrivals[-1] + cfg.cell.clk_to_q) * 1e-3

    ts = np.asarray(raw)
    if jitter is not None and len(ts):
        ts = ts + jitter.draws(len(ts))
        ts = np.sort(ts)
        ts = ts[(ts >= 0.0) & (ts <= end_ns)]
    return EventSequence(
        timestamps=ts,
        duration=end_ns,
        f_clk=cfg.f_clk,
        meta=f"csr {cfg.style} pattern {p}",
    )


def program_and_run(
    cfg: TimingNetConfig,
    p: Pattern,
    duration: float,
    jitter: JitterModel | None = None,
) -> EventSequence:
    """Load p into a fresh register, close the loop and run for a duration."""
    if p.n_bits != cfg.n_bits:
        raise ValueError("pattern length must match the register size")
    ops = load_ops(p) + [("set_loop", CLOSED), ("run", duration)]
    return simulate_csr(cfg, p, ops, jitter)


def config_to_dict(cfg: TimingNetConfig) -> dict:
    """JSON-ready form of a network configuration."""
    return {
        "n_bits": cfg.n_bits,
        "style": cfg.style,
        "f_clk_GHz": cfg.f_clk,
        "cell": {
            "setup_ps": cfg.cell.setup,
            "hold_ps": cfg.cell.hold,
            "clk_to_q_ps": cfg.cell.clk_to_q,
            "data_delay_ps": cfg.cell.data_delay,
        },
        "clock_arrivals_ps": list(cfg.clock_arrivals),
    }


def config_from_dict(data: dict) -> TimingNetConfig:
    """Parse the JSON configuration schema; arrivals default to the style."""
    known = {"n_bits", "style", "f_clk_GHz", "cell", "clock_arrivals_ps"}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config fields: {sorted(unknown)}")
    cell_data = data.get("cell", {})
    known_cell = {"setup_ps", "hold_ps", "clk_to_q_ps", "data_delay_ps"}
    unknown_cell = set(cell_data) - known_cell
    if unknown_cell:
        raise ValueError(f"unknown cell fields: {sorted(unknown_cell)}")
    cell = CellTiming(
        setup=cell_data.get("setup_ps", DEFAULT_CELL.setup),
        hold=cell_data.get("hold_ps", DEFAULT_CELL.hold),
        clk_to_q=cell_data.get("clk_to_q_ps", DEFAULT_CELL.clk_to_q),
        data_delay=cell_data.get("data_delay_ps", DEFAULT_CELL.data_delay),
    )
    n = int(data["n_bits"])
    style = data["style"]
    f_clk = float(data["f_clk_GHz"])
    if "clock_arrivals_ps" in data:
        arrivals = tuple(float(x) for x in data["clock_arrivals_ps"])
        return TimingNetConfig(
            n_bits=n, style=style, clock_arrivals=arrivals, f_clk=f_clk, cell=cell
        )
    return build_network(n, style, f_clk, cell)


def report_to_dict(report: TimingReport) -> dict:
    """JSON-ready form of a timing report."""
    return {
        "per_cell_skew_ps": list(report.per_cell_skew),
        "total_skew_ps": report.total_skew,
        "race_violations": [
            {"cell": i, "slack_ps": s} for i, s in report.race_violations
        ],
        "setup_violations": [
            {"cell": i, "slack_ps": s} for i, s in report.setup_violations
        ],
        "ok": report.ok,
    }
