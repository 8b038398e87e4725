"""Acceptance suite: the toolkit's exit criteria, one test per criterion.

Each test prints a single PASS/FAIL line (visible under pytest -s) and
enforces its runtime budget.  Criterion 6 is split: the bandwidth-scaling
ratio and the 50 ns absolute value pass; the 5 ns absolute value is an
expected failure because a 5 ns record window-limits any full width at half
maximum to about 177 MHz, which no measurement convention within 50% of the
84 MHz figure can produce (that figure matches a half-width reading).
"""

import csv
import json
import math
import time

import numpy as np
import pytest

from pulsecomb.cli import main as cli_main
from pulsecomb.estimator import frequency_grid, lomb_scargle, tone_metrics
from pulsecomb.patterns import (
    Pattern,
    canonicalize,
    count_bounds,
    dual,
    enumerate_unique,
    mirror,
    power_signature,
    rotate,
)
from pulsecomb.spectrum import CombStage, apply_comb, tone_spectrum
from pulsecomb.synth import (
    PHI0_MV_PS,
    EventSequence,
    avg_power,
    event_times,
    pulse_shape,
    render,
)
from pulsecomb.timing import (
    BINARY_TREE,
    SYMMETRIC,
    CellTiming,
    build_network,
    check_timing,
    program_and_run,
    run_offset,
    splitter_count,
)
from pulsecomb.tuner import Objective, optimize_delay, sweep_delay

P1001 = Pattern.parse("10011001")


class Budget:
    def __init__(self, label, seconds):
        self.label = label
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        self.elapsed = time.perf_counter() - self.start
        if exc_type is None:
            print(f"ACCEPTANCE {self.label}: PASS ({self.elapsed:.2f} s)")
        else:
            print(f"ACCEPTANCE {self.label}: FAIL ({self.elapsed:.2f} s)")
        if exc_type is None:
            assert self.elapsed < self.seconds, (
                f"{self.label} exceeded its {self.seconds} s budget"
            )
        return False


def test_criterion_1_tone_placement(tmp_path):
    with Budget("1 tone placement", 1.0):
        assert cli_main(["--out", str(tmp_path), "spectrum", "10011001", "10"]) == 0
        with open(tmp_path / "spectrum.csv", newline="") as fh:
            rows = list(csv.reader(fh))[1:]
        powers = {float(r[0]): float(r[3]) for r in rows}
        peak = max(powers.values())
        nonzero = {f for f, p in powers.items() if p >= 1e-9 * peak}
        assert nonzero == {0.0, 2.5, 7.5}


def test_criterion_2_comb_suppression():
    with Budget("2 comb suppression", 1.0):
        plain = tone_spectrum(P1001, 10.0)
        combed = apply_comb(plain, [CombStage(delay=1.0 / 3.0, alpha=1.0)])
        assert combed.power_at(7.5) < 1e-6 * combed.powers.max()
        gain = combed.power_at(2.5) / plain.power_at(2.5)
        assert abs(gain - 3.0) <= 1e-6


def test_criterion_3_sweep_optima():
    with Budget("3 sweep optima", 5.0):
        opt = optimize_delay(
            P1001, 10.0, Objective(kind="max_separation", f1=2.5, f2=7.5)
        )
        product = 7.5 * opt.tau
        nearest_half_odd = round(product - 0.5) + 0.5
        assert abs(product - nearest_half_odd) <= 1e-6 * product

        sweep = sweep_delay(P1001, 10.0, steps=1000, targets=(2.5, 7.5))
        p75 = sweep.tone_powers[7.5]
        minima = [
            sweep.delays[i]
            for i in range(1, len(p75) - 1)
            if p75[i] <= p75[i - 1] and p75[i] <= p75[i + 1]
        ]
        for expected in (0.066, 0.333):
            assert min(abs(t - expected) for t in minima) < 2e-3


def _direct_signature_groups(n):
    """Group all 2^n - 1 patterns by tone powers from an explicit DFT matrix."""
    xs = np.arange(1, 2**n, dtype=np.int64)
    bits = ((xs[:, None] >> np.arange(n)) & 1).astype(float)
    w = np.exp(-2j * np.pi * np.outer(np.arange(n), np.arange(n)) / n)
    powers = np.abs(bits @ w.T) ** 2
    groups = {}
    for x, row in zip(xs, np.round(powers, 9)):
        key = tuple(row)
        pattern = Pattern(tuple(int(b) for b in ((x >> np.arange(n)) & 1)))
        groups.setdefault(key, set()).add(pattern)
    return groups


def test_criterion_4_oracle_equivalence():
    with Budget("4 oracle equivalence", 60.0):
        assert count_bounds(8)[0] == 6
        for n in range(1, 13):
            groups = _direct_signature_groups(n)
            classes = enumerate_unique(n)
            assert len(classes) == len(groups), f"class count mismatch at n={n}"
            for cls in classes:
                key = tuple(np.round(power_signature(cls.canonical), 9))
                assert key in groups, f"missing group at n={n}"
                assert cls.members == groups.pop(key), f"member mismatch at n={n}"
            assert not groups
            lower, upper = count_bounds(n)
            assert lower <= len(classes) <= upper


def test_criterion_5_estimator_agreement():
    with Budget("5 estimator agreement", 30.0):
        events = event_times(P1001, 10.0, 5.0)
        wave = render(events, pulse_shape(1.0), 1000.0)
        peaks = {}
        for f0 in (2.5, 7.5, 10.0):
            pg = lomb_scargle(wave, frequency_grid(5.0, f0 - 0.3, f0 + 0.3))
            peaks[f0] = pg.power.max()
        # Analytic powers: 8, 8, 16.
        assert peaks[2.5] / peaks[10.0] == pytest.approx(0.5, rel=0.10)
        assert peaks[7.5] / peaks[10.0] == pytest.approx(0.5, rel=0.10)
        assert peaks[2.5] / peaks[7.5] == pytest.approx(1.0, rel=0.10)


def _tone_fwhm_ghz(duration):
    events = event_times(P1001, 10.0, duration)
    wave = render(events, pulse_shape(1.0), 1000.0)
    pg = lomb_scargle(wave, frequency_grid(duration, 2.1, 2.9))
    return tone_metrics(pg, 2.5, 0.6).fwhm


def test_criterion_6_bandwidth_scaling():
    with Budget("6 bandwidth scaling + 50 ns absolute", 60.0):
        fwhm_5 = _tone_fwhm_ghz(5.0)
        fwhm_50 = _tone_fwhm_ghz(50.0)
        assert 4.0 <= fwhm_5 / fwhm_50 <= 12.0
        # 15 MHz within 50%.
        assert 0.0075 <= fwhm_50 <= 0.0225


@pytest.mark.xfail(
    strict=True,
    reason=(
        "window-limited full width at half maximum for a 5 ns record is "
        "0.886/5 ns = 177 MHz; 84 MHz +/- 50% is unreachable for any "
        "full-width measurement (84 MHz matches the half-width)"
    ),
)
def test_criterion_6_bandwidth_5ns_absolute():
    fwhm_5 = _tone_fwhm_ghz(5.0)
    print(
        f"ACCEPTANCE 6 5 ns absolute: FAIL expected "
        f"(measured {fwhm_5 * 1e3:.1f} MHz, required 42..126 MHz)"
    )
    assert 0.042 <= fwhm_5 <= 0.126


def test_criterion_7_invariance_suite():
    with Budget("7 invariance suite", 60.0):
        rng = np.random.default_rng(2024)
        checked = 0
        while checked < 1000:
            n = int(rng.integers(4, 17))
            bits = tuple(int(b) for b in rng.integers(0, 2, n))
            if not any(bits):
                continue
            p = Pattern(bits)
            mags = np.abs(np.fft.fft(np.asarray(bits, float)))
            scale = mags.max()

            r = int(rng.integers(0, n))
            rotated = np.abs(np.fft.fft(np.asarray(rotate(p, r).bits, float)))
            assert np.all(np.abs(rotated - mags) <= 1e-12 * scale)

            mirrored = np.abs(np.fft.fft(np.asarray(mirror(p).bits, float)))
            assert np.all(np.abs(mirrored - mags) <= 1e-12 * scale)

            dualled = np.fft.fft(np.asarray(dual(p).bits, float))
            assert np.all(np.abs(np.abs(dualled[1:]) - mags[1:]) <= 1e-12 * n)
            assert abs(dualled[0] - (n - mags[0])) <= 1e-12 * n

            total = float((mags**2).sum())
            assert abs(total - n * p.set_bits) <= 1e-12 * n * p.set_bits

            checked += 1


def test_criterion_8_timing():
    with Budget("8 timing", 60.0):
        for n in range(2, 65, 2):
            for style in (BINARY_TREE, SYMMETRIC):
                cfg = build_network(n, style, 10.0)
                assert check_timing(cfg).total_skew == 0.0
            assert splitter_count(BINARY_TREE, n) == n - 1
            assert splitter_count(SYMMETRIC, n) == n // 2

        cfg = build_network(8, BINARY_TREE, 10.0)
        sim = program_and_run(cfg, P1001, 5.0)
        ideal = event_times(P1001, 10.0, 5.0)
        offset = run_offset(cfg, P1001.n_bits)
        assert np.array_equal(sim.timestamps, ideal.timestamps + offset)

        quiet = CellTiming(setup=0.0, hold=0.0, clk_to_q=0.0, data_delay=0.0)
        cfg0 = build_network(8, BINARY_TREE, 10.0, cell=quiet)
        sim0 = program_and_run(cfg0, P1001, 5.0)
        assert np.array_equal(
            sim0.timestamps, ideal.timestamps + run_offset(cfg0, 8)
        )


def test_criterion_9_power_identity():
    with Budget("9 power identity", 60.0):
        for vc in (0.5, 1.0, 2.0, 4.0):
            shape = pulse_shape(vc)
            rate = 2.5 / (shape.sigma * 1e-3)

            single = EventSequence(
                timestamps=np.array([0.1]), duration=0.2, f_clk=10.0
            )
            pulse = render(single, shape, rate)
            area = np.trapezoid(pulse.voltages, pulse.times) * 1e3
            assert area == pytest.approx(PHI0_MV_PS, rel=1e-6)

            duration = 8 * 0.8
            events = event_times(P1001, 10.0, duration)
            wave = render(events, shape, max(rate, 1000.0))
            mean_sq = np.trapezoid(wave.voltages**2, wave.times) / duration
            assert mean_sq == pytest.approx(avg_power(P1001, shape, 10.0), rel=0.02)
