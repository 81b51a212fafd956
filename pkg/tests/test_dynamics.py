import math
from fractions import Fraction

import numpy as np
import pytest

from phaselock.dynamics import (
    AdlerParams,
    ArnoldParams,
    DivergenceError,
    TimeSeries,
    VdpParams,
    adler_integrate,
    allan_deviation,
    arnold_orbit,
    arnold_winding,
    beat_frequency,
    dominant_frequency,
    loglog_slope,
    noise_magnification,
    periodogram,
    plateau_edges,
    plateau_width,
    staircase_scan,
    synth_one_over_f,
    vanderpol_integrate,
    wrap_phase,
)


# -- Van der Pol ------------------------------------------------------------------


def test_vdp_free_limit_cycle():
    g, bp = 0.1, 0.1
    ts = vanderpol_integrate(VdpParams(g, bp, 1.0), 2000, 0.05)
    tail = ts.samples[len(ts) // 2 :]
    # averaging over one cycle: g/2 - 3 b' A^2 / 8 = 0
    assert tail.max() == pytest.approx(2 * math.sqrt(g / (3 * bp)), rel=1e-2)
    assert dominant_frequency(ts) == pytest.approx(1.0, rel=1e-2)


def test_vdp_damped_decays():
    ts = vanderpol_integrate(VdpParams(-0.1, 0.1, 1.0), 300, 0.05, v0=1.0)
    assert np.abs(ts.samples[-200:]).max() < 1e-5


def test_vdp_injection_locks_to_drive():
    locked = vanderpol_integrate(VdpParams(0.1, 0.1, 1.0, omega0=1.02, V0=0.1), 2000, 0.05)
    assert dominant_frequency(locked) == pytest.approx(1.02, rel=1e-3)
    weak = vanderpol_integrate(VdpParams(0.1, 0.1, 1.0, omega0=1.2, V0=0.001), 2000, 0.05)
    assert dominant_frequency(weak) == pytest.approx(1.0, rel=1e-2)


def test_vdp_step_validation_and_divergence():
    with pytest.raises(ValueError):
        vanderpol_integrate(VdpParams(0.1, 0.1, 10.0), 10, 0.05)
    with pytest.raises(DivergenceError):
        # no saturation and large gain: exponential growth past the limit
        vanderpol_integrate(VdpParams(5.0, 0.0, 1.0), 200, 0.05)


# -- Adler ------------------------------------------------------------------------


@pytest.mark.parametrize("ratio", [0.0, 0.25, 0.5, 0.9, 0.95])
def test_adler_locked_steady_state(ratio):
    K = 1.0
    ts, rate = adler_integrate(AdlerParams(ratio * K, K), 80, 0.01)
    assert abs(wrap_phase(ts.samples[-1]) - math.asin(ratio)) < 1e-6
    assert abs(rate) < 1e-6


@pytest.mark.parametrize("ratio", [1.1, 1.5, 2.0, 5.0])
def test_adler_drift_matches_beat(ratio):
    ts, rate = adler_integrate(AdlerParams(ratio, 1.0), 400, 0.01)
    assert rate == pytest.approx(beat_frequency(ratio, 1.0).rate, rel=1e-2)


def test_adler_two_k_drift():
    _, rate = adler_integrate(AdlerParams(2.0, 1.0), 400, 0.01)
    assert rate == pytest.approx(math.sqrt(3), rel=1e-2)


def test_beat_frequency():
    assert beat_frequency(5, 3) == (4.0, False)
    assert beat_frequency(3, 3) == (0.0, False)
    assert beat_frequency(2, 1).rate == pytest.approx(math.sqrt(3))
    assert beat_frequency(0.5, 1) == (0.0, True)


def test_noise_magnification():
    assert noise_magnification(1, 0, 7.0) == 1
    assert noise_magnification(1, 2.0, 2.0) == pytest.approx(math.sqrt(2))
    K = 3.0
    beat = K / 100
    assert noise_magnification(1.0, K, beat) == pytest.approx(K / beat, rel=1e-4)
    with pytest.raises(ValueError):
        noise_magnification(1, 1, 0)


# -- circle map ----------------------------------------------------------------------


def test_winding_rigid_rotation():
    for om in (0.0, 0.123, 0.5, 0.987):
        assert arnold_winding(ArnoldParams(om, 0.0)) == om


def test_winding_plateau_at_half():
    for om in (0.498, 0.5, 0.502):
        w = arnold_winding(ArnoldParams(om, 0.9), 1000, 10**5)
        assert abs(w - 0.5) < 1e-4


def test_winding_golden_weak_coupling():
    golden = (math.sqrt(5) - 1) / 2
    assert abs(arnold_winding(ArnoldParams(golden, 0.1), 1000, 10**5) - golden) < 1e-3


def test_winding_matches_orbit():
    orbit = arnold_orbit(ArnoldParams(0.3, 0.5), 3000)
    w = arnold_winding(ArnoldParams(0.3, 0.5), 1000, 2000)
    assert w == pytest.approx((orbit[3000] - orbit[1000]) / (2 * math.pi * 2000))


def test_winding_warns_above_one():
    with pytest.warns(RuntimeWarning):
        arnold_winding(ArnoldParams(0.3, 1.5), 10, 1000)


@pytest.mark.parametrize("c", [0.3, 0.7, 1.0])
def test_staircase_monotone(c):
    grid = np.linspace(0, 1, 201)
    scan = staircase_scan(c, grid, n_iter=3000)
    assert np.all(np.diff(scan.winding) >= -2.0 / 3000)


def test_staircase_identity_at_zero_coupling():
    grid = np.linspace(0, 1, 11)
    assert np.array_equal(staircase_scan(0.0, grid).winding, grid)


def test_plateau_widths_grow_with_coupling():
    widths = [plateau_width(c, Fraction(1, 2)) for c in (0.3, 0.6, 0.9)]
    assert 0 < widths[0] < widths[1] < widths[2]


def test_plateaus_at_third_and_two_fifths():
    for r in (Fraction(1, 3), Fraction(2, 5)):
        lo, hi = plateau_edges(0.9, r)
        assert hi - lo > 0
        assert abs(arnold_winding(ArnoldParams(0.5 * (lo + hi), 0.9), 2000, 20000) - float(r)) < 1e-4


# -- noise ----------------------------------------------------------------------------


def test_allan_constant_series():
    ts = TimeSeries(1.0, np.full(1000, 3.5))
    curve = allan_deviation(ts, [1, 2, 10])
    assert np.all(curve.sigmas == 0)


def test_allan_hand_example():
    # block means for tau=2: 1, 3, 5 -> diffs 2, 2 -> sigma^2 = 2
    ts = TimeSeries(0.5, np.array([0, 2, 2, 4, 4, 6.0]))
    curve = allan_deviation(ts, [1.0], min_pairs=2)
    assert curve.sigmas[0] == pytest.approx(math.sqrt(2))


def test_allan_validation():
    ts = TimeSeries(1.0, np.zeros(50))
    with pytest.raises(ValueError):
        allan_deviation(ts, [1.5])
    with pytest.raises(ValueError):
        allan_deviation(ts, [10])  # only 4 pairs
    with pytest.raises(ValueError):
        allan_deviation(ts, [2, 1])


def test_overlapping_allan_agrees_on_white_noise():
    ts = synth_one_over_f(2**16, 3, 0.0)
    a = allan_deviation(ts, [1, 4, 16]).sigmas
    b = allan_deviation(ts, [1, 4, 16], overlapping=True).sigmas
    assert np.allclose(a, b, rtol=0.1)


def test_white_noise_allan_slope():
    ts = synth_one_over_f(2**17, 11, 0.0)
    taus = np.unique(np.round(np.logspace(0, 3, 13)))
    curve = allan_deviation(ts, taus)
    assert loglog_slope(curve.taus, curve.sigmas) == pytest.approx(-0.5, abs=0.1)


def test_flicker_allan_flat_and_standard_level():
    h = 2.5
    ts = synth_one_over_f(2**17, 5, 1.0, h=h)
    taus = np.unique(np.round(np.logspace(0, 2, 12)))
    s = allan_deviation(ts, taus).sigmas
    assert np.all(np.abs(s / s.mean() - 1) < 0.2)
    # sigma^2 = 2 ln2 h for PSD h/f
    assert np.mean(s**2) == pytest.approx(2 * math.log(2) * h, rel=0.2)


@pytest.mark.parametrize("exponent,slope", [(0.0, 0.0), (1.0, -1.0), (2.0, -2.0)])
def test_periodogram_slope(exponent, slope):
    ts = synth_one_over_f(2**16, 1, exponent)
    f, p = periodogram(ts)
    band = (f > 1e-3) & (f < 1e-1)
    assert loglog_slope(f[band], p[band]) == pytest.approx(slope, abs=0.15)


def test_synth_deterministic():
    a = synth_one_over_f(2**12, 42, 1.0).samples
    b = synth_one_over_f(2**12, 42, 1.0).samples
    c = synth_one_over_f(2**12, 43, 1.0).samples
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    with pytest.raises(ValueError):
        synth_one_over_f(1000, 0)
