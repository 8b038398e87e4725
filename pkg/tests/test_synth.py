"""Pulse synthesis: event grids, shapes, rendering, event-domain combs."""

import math

import numpy as np
import pytest

from pulsecomb.patterns import Pattern, canonicalize
from pulsecomb.spectrum import CombStage
from pulsecomb.synth import (
    PHI0_MV_PS,
    VC_UNIT_MV,
    EventSequence,
    JitterModel,
    avg_power,
    comb_apply_events,
    event_times,
    pulse_shape,
    render,
)

P1001 = Pattern.parse("10011001")


def adequate_rate(shape):
    """Sampling rate (GHz) that resolves the pulse: dt <= sigma/2.5."""
    return 2.5 / (shape.sigma * 1e-3)


class TestPulseShape:
    def test_area_is_flux_quantum(self):
        for vc in (0.3, 0.5, 1.0, 2.0, 4.0, 8.0):
            shape = pulse_shape(vc)
            assert shape.area == PHI0_MV_PS

    def test_width_formula(self):
        shape = pulse_shape(1.0)
        assert shape.width == pytest.approx(PHI0_MV_PS / (2 * VC_UNIT_MV))

    def test_doubling_vc(self):
        a = pulse_shape(1.0)
        b = pulse_shape(2.0)
        assert b.width == pytest.approx(a.width / 2)
        assert b.amplitude == pytest.approx(2 * a.amplitude)
        assert b.area == a.area

    def test_amplitude_tracks_unit_scale(self):
        # Peak in mV is a fixed multiple of v_c * 0.287 mV for a Gaussian.
        shape = pulse_shape(3.0)
        ratio = shape.amplitude / (3.0 * VC_UNIT_MV)
        expected = 2.0 * 2.0 * math.sqrt(2.0 * math.log(2.0)) / math.sqrt(2.0 * math.pi)
        assert ratio == pytest.approx(expected, rel=1e-12)

    def test_rendered_area_conserved(self):
        for vc in (0.5, 1.0, 2.0, 4.0):
            shape = pulse_shape(vc)
            ev = EventSequence(timestamps=np.array([0.1]), duration=0.2, f_clk=5.0)
            wave = render(ev, shape, adequate_rate(shape))
            area_mv_ps = np.trapezoid(wave.voltages, wave.times) * 1e3
            assert area_mv_ps == pytest.approx(PHI0_MV_PS, rel=1e-6)

    def test_rejects_nonpositive_vc(self):
        with pytest.raises(ValueError):
            pulse_shape(0.0)


class TestEventTimes:
    def test_uniform_comb(self):
        ev = event_times(Pattern.parse("11111111"), 10.0, 1.0)
        assert len(ev) == 10
        assert np.array_equal(ev.timestamps, np.array([k / 10.0 for k in range(10)]))

    def test_counting(self):
        ev = event_times(P1001, 10.0, 5.0)
        assert len(ev) == 25  # 4 per 0.8 ns revolution over 50 ticks

    def test_every_nth_tick(self):
        ev = event_times(Pattern.parse("10000000"), 10.0, 2.4)
        assert np.array_equal(ev.timestamps, np.array([0.0, 8 / 10.0, 16 / 10.0]))

    def test_all_zero_pattern_is_silent(self):
        ev = event_times(Pattern.parse("00000000"), 10.0, 5.0)
        assert len(ev) == 0

    def test_rejects_bad_duration(self):
        with pytest.raises(ValueError):
            event_times(P1001, 10.0, 0.0)

    @pytest.mark.parametrize("pattern,f_clk,ticks_plus_half", [
        ("10011001", 10.0, 50),
        ("10100100", 8.0, 37),
        ("11111111", 12.0, 7),
        ("10000000", 10.0, 129),
    ])
    def test_exact_count_formula(self, pattern, f_clk, ticks_plus_half):
        # Duration of (ticks + 0.5) clock periods dodges boundary ties.
        p = Pattern.parse(pattern)
        duration = (ticks_plus_half + 0.5) / f_clk
        ev = event_times(p, f_clk, duration)
        expected = sum(
            1
            for k, b in enumerate(p.bits)
            if b
            for m in range(0, ticks_plus_half // p.n_bits + 2)
            if k + m * p.n_bits <= ticks_plus_half
        )
        assert len(ev) == expected

    def test_doubling_duration(self):
        short = event_times(P1001, 10.0, 4.0)
        long = event_times(P1001, 10.0, 8.0)
        assert abs(len(long) - 2 * len(short)) <= 1

    def test_zero_jitter_reproduces_grid(self):
        ideal = event_times(P1001, 10.0, 5.0)
        jittered = event_times(P1001, 10.0, 5.0, JitterModel(sigma=0.0, seed=7))
        assert np.array_equal(ideal.timestamps, jittered.timestamps)

    def test_jitter_rms(self):
        p = Pattern.parse("11111111")
        duration = 1000.0  # 10^4 events at 10 GHz
        ideal = event_times(p, 10.0, duration)
        jittered = event_times(p, 10.0, duration, JitterModel(sigma=2.0, seed=3))
        # 2 ps of jitter against a 100 ps pitch never reorders events.
        n = min(len(ideal), len(jittered))
        delta_ps = (jittered.timestamps[:n] - ideal.timestamps[:n]) * 1e3
        rms = float(np.sqrt(np.mean(delta_ps**2)))
        assert rms == pytest.approx(2.0, rel=0.10)

    def test_jitter_deterministic(self):
        a = event_times(P1001, 10.0, 5.0, JitterModel(sigma=1.0, seed=11))
        b = event_times(P1001, 10.0, 5.0, JitterModel(sigma=1.0, seed=11))
        assert np.array_equal(a.timestamps, b.timestamps)


class TestRender:
    def test_single_pulse_peak_location(self):
        shape = pulse_shape(1.0)
        ev = EventSequence(timestamps=np.array([0.20037]), duration=0.4, f_clk=10.0)
        wave = render(ev, shape, 1000.0)
        peak_t = wave.times[np.argmax(wave.voltages)]
        assert abs(peak_t - ev.timestamps[0]) <= 1.0 / 1000.0

    def test_mean_voltage_identity(self):
        # Area-times-rate: mean V = PHI0 * f_clk for a full comb.
        shape = pulse_shape(1.0)
        ev = event_times(Pattern.parse("11111111"), 10.0, 20.0)
        wave = render(ev, shape, 1000.0)
        mean_mv = np.trapezoid(wave.voltages, wave.times) / 20.0
        expected = PHI0_MV_PS * 1e-3 * 10.0  # mV*ns * GHz
        assert mean_mv == pytest.approx(expected, rel=0.01)

    def test_empty_events_zero_waveform(self):
        ev = event_times(Pattern.parse("0000"), 10.0, 1.0)
        wave = render(ev, pulse_shape(1.0), 500.0)
        assert len(wave) > 0
        assert not np.any(wave.voltages)

    def test_uneven_timebase_monotonic_and_flagged(self):
        ev = event_times(P1001, 10.0, 2.0)
        wave = render(ev, pulse_shape(1.0), 800.0, timebase="uneven", seed=5)
        assert not wave.evenly_sampled
        assert np.all(np.diff(wave.times) > 0)

    def test_uneven_deterministic_under_seed(self):
        ev = event_times(P1001, 10.0, 2.0)
        a = render(ev, pulse_shape(1.0), 800.0, timebase="uneven", seed=5)
        b = render(ev, pulse_shape(1.0), 800.0, timebase="uneven", seed=5)
        assert np.array_equal(a.times, b.times)
        assert np.array_equal(a.voltages, b.voltages)

    def test_unknown_timebase(self):
        ev = event_times(P1001, 10.0, 2.0)
        with pytest.raises(ValueError):
            render(ev, pulse_shape(1.0), 800.0, timebase="log")


class TestEventComb:
    def test_delay_of_one_clock_period_is_identity(self):
        # Every delayed pulse lands on an existing slot and merges away.
        ev = event_times(Pattern.parse("11111111"), 10.0, 3.0)
        out = comb_apply_events(ev, CombStage(delay=0.1), dead_time=0.004)
        assert np.allclose(out.timestamps, ev.timestamps, atol=1e-12)
        assert len(out) == len(ev)

    def test_collision_free_doubles_events(self):
        ev = event_times(Pattern.parse("10000000"), 10.0, 2.4)
        out = comb_apply_events(ev, CombStage(delay=0.35), dead_time=0.004)
        assert len(out) == 2 * len(ev)

    def test_fills_empty_slots(self):
        # Delaying 10011001 by one tick populates slots {1,4,5,0(next)}:
        # the circulating union behaves like the 11011101 class.
        ev = event_times(P1001, 10.0, 8.0)
        out = comb_apply_events(ev, CombStage(delay=0.1), dead_time=0.004)
        slots = {int(round(t * 10.0)) % 8 for t in out.timestamps}
        assert slots == {0, 1, 3, 4, 5, 7}
        effective = Pattern(tuple(1 if k in slots else 0 for k in range(8)))
        assert canonicalize(effective) == canonicalize(Pattern.parse("11011101"))

    def test_zero_delay_idempotent(self):
        ev = event_times(P1001, 10.0, 4.0)
        out = comb_apply_events(ev, CombStage(delay=0.0), dead_time=0.001)
        assert np.array_equal(out.timestamps, ev.timestamps)

    def test_feedback_rejected(self):
        ev = event_times(P1001, 10.0, 4.0)
        with pytest.raises(ValueError, match="event domain"):
            comb_apply_events(ev, CombStage(delay=0.1, alpha=0.5, kind="feedback"), 0.01)


class TestAvgPower:
    def test_duty_cycle_arithmetic(self):
        # Shape whose power-equivalent width is exactly 1 ps, clock 100 ps,
        # half the bits set: 1 * (1/100) * (1/2).
        sigma_ps = 1.0 / math.sqrt(math.pi)
        fwhm_ps = sigma_ps * 2.0 * math.sqrt(2.0 * math.log(2.0))
        vc = PHI0_MV_PS / (2.0 * VC_UNIT_MV * fwhm_ps)
        shape = pulse_shape(vc)
        assert shape.power_width == pytest.approx(1.0, rel=1e-12)
        assert avg_power(P1001, shape, 10.0, p_peak=1.0) == pytest.approx(0.005)

    def test_all_ones_doubles_duty(self):
        sigma_ps = 1.0 / math.sqrt(math.pi)
        fwhm_ps = sigma_ps * 2.0 * math.sqrt(2.0 * math.log(2.0))
        vc = PHI0_MV_PS / (2.0 * VC_UNIT_MV * fwhm_ps)
        shape = pulse_shape(vc)
        p = Pattern.parse("11111111")
        assert avg_power(p, shape, 10.0, p_peak=1.0) == pytest.approx(0.01)

    @pytest.mark.parametrize("vc", [0.5, 1.0, 2.0, 4.0])
    def test_matches_integrated_waveform_power(self, vc):
        shape = pulse_shape(vc)
        duration = 8 * 0.8  # whole revolutions keep the boundary error small
        ev = event_times(P1001, 10.0, duration)
        wave = render(ev, shape, adequate_rate(shape))
        mean_sq = np.trapezoid(wave.voltages**2, wave.times) / duration
        assert mean_sq == pytest.approx(avg_power(P1001, shape, 10.0), rel=0.02)
