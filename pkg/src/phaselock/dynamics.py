"""Oscillator locking models and frequency-stability statistics."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np


class DivergenceError(RuntimeError):
    """Raised when a fixed-step integration blows up."""


@dataclass(frozen=True)
class VdpParams:
    """Driven Van der Pol oscillator.

    Attributes:
        g: linear net gain, 1/s
        beta_prime: saturation coefficient
        omega: free-running resonance, rad/s
        omega0: drive frequency, rad/s
        V0: drive amplitude
    """

    g: float
    beta_prime: float
    omega: float
    omega0: float = 0.0
    V0: float = 0.0

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError("omega must be positive")
        if self.beta_prime < 0:
            raise ValueError("beta_prime must be nonnegative")


@dataclass(frozen=True)
class AdlerParams:
    omega_LF: float
    K: float
    phi0: float = 0.0

    def __post_init__(self):
        if self.K < 0:
            raise ValueError("K must be nonnegative")


@dataclass(frozen=True)
class ArnoldParams:
    Omega: float
    c: float
    phi0: float = 0.0

    def __post_init__(self):
        if self.c < 0:
            raise ValueError("coupling c must be nonnegative")


@dataclass
class TimeSeries:
    dt: float
    samples: np.ndarray

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.samples.ndim != 1 or len(self.samples) < 2:
            raise ValueError("a time series needs at least two samples")

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(len(self.samples))

    def __len__(self):
        return len(self.samples)


@dataclass
class AllanCurve:
    taus: np.ndarray
    sigmas: np.ndarray
    n_pairs: np.ndarray = field(default=None)


class BeatNote(NamedTuple):
    rate: float
    locked: bool


def _check_state(t: float, state: tuple, limit: float = 1e12):
    if not all(math.isfinite(s) and abs(s) <= limit for s in state):
        raise DivergenceError(f"integration diverged at t={t:.6g}; state={state}")


def vanderpol_integrate(p: VdpParams, t_end: float, dt: float, v0: float = 1e-3, dv0: float = 0.0) -> TimeSeries:
    """Integrate v'' - d/dt(g v - b' v^3) + w^2 v = w0^2 V0 sin(w0 t) with fixed-step RK4.

    The saturating term expands to (g - 3 b' v^2) v', so the free limit cycle
    for small g has amplitude 2 sqrt(g / (3 b')).
    """
    if dt <= 0 or t_end <= 0:
        raise ValueError("dt and t_end must be positive")
    w_max = max(p.omega, p.omega0)
    if dt * w_max >= 0.1:
        raise ValueError(f"step too large: dt*omega = {dt * w_max:.3g} (need < 0.1)")
    drive = p.omega0**2 * p.V0
    w2 = p.omega**2
    g, b3, w0 = p.g, 3.0 * p.beta_prime, p.omega0
    sin = math.sin

    def acc(t, v, u):
        return (g - b3 * v * v) * u - w2 * v + drive * sin(w0 * t)

    n_steps = int(round(t_end / dt))
    out = np.empty(n_steps + 1)
    v, u = float(v0), float(dv0)
    out[0] = v
    h2 = 0.5 * dt
    for i in range(n_steps):
        t = i * dt
        a1 = acc(t, v, u)
        v2, u2 = v + h2 * u, u + h2 * a1
        a2 = acc(t + h2, v2, u2)
        v3, u3 = v + h2 * u2, u + h2 * a2
        a3 = acc(t + h2, v3, u3)
        v4, u4 = v + dt * u3, u + dt * a3
        a4 = acc(t + dt, v4, u4)
        v += dt / 6.0 * (u + 2.0 * u2 + 2.0 * u3 + u4)
        u += dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        out[i + 1] = v
        if i % 1024 == 0:
            _check_state(t + dt, (v, u))
    _check_state(t_end, (v, u))
    return TimeSeries(dt, out)


def dominant_frequency(ts: TimeSeries, discard: float = 0.5, pad: int = 8) -> float:
    """Angular frequency of the largest spectral line, skipping the leading ``discard`` fraction.

    Hann-windowed, zero-padded FFT with parabolic interpolation of the peak.
    """
    x = ts.samples[int(len(ts) * discard) :]
    x = (x - x.mean()) * np.hanning(len(x))
    n = pad * len(x)
    mag = np.abs(np.fft.rfft(x, n))
    k = int(np.argmax(mag[1:-1])) + 1
    a, b, c = np.log(mag[k - 1 : k + 2] + 1e-300)
    shift = 0.5 * (a - c) / (a - 2 * b + c)
    return 2 * np.pi * (k + shift) / (n * ts.dt)


def _mean_rate(t: np.ndarray, phi: np.ndarray) -> float:
    # whole-cycle estimate: first and last 2*pi crossings inside the window
    turns = np.floor((phi - phi[0]) / (2 * np.pi))
    jumps = np.flatnonzero(np.diff(turns) != 0) + 1
    if len(jumps) >= 2:
        i, j = jumps[0], jumps[-1]
        return 2 * np.pi * (turns[j] - turns[i]) / (t[j] - t[i])
    return float((phi[-1] - phi[0]) / (t[-1] - t[0]))


def adler_integrate(p: AdlerParams, t_end: float, dt: float) -> tuple[TimeSeries, float]:
    """Integrate dPhi/dt = omega_LF - K sin(Phi) and estimate the mean drift rate.

    The drift is measured over the second half of the run. Phase is unwrapped.
    """
    if dt <= 0 or t_end <= 0:
        raise ValueError("dt and t_end must be positive")
    n_steps = int(round(t_end / dt))
    w, K = p.omega_LF, p.K
    sin = math.sin
    traj = np.empty(n_steps + 1)
    phi = float(p.phi0)
    traj[0] = phi
    h2 = 0.5 * dt
    for i in range(n_steps):
        k1 = w - K * sin(phi)
        k2 = w - K * sin(phi + h2 * k1)
        k3 = w - K * sin(phi + h2 * k2)
        k4 = w - K * sin(phi + dt * k3)
        phi += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        traj[i + 1] = phi
    _check_state(t_end, (phi,))
    ts = TimeSeries(dt, traj)
    half = n_steps // 2
    rate = _mean_rate(ts.times[half:], traj[half:])
    return ts, rate


def wrap_phase(phi: float) -> float:
    """Map an angle into (-pi, pi]."""
    r = math.remainder(phi, 2 * math.pi)
    return math.pi if r == -math.pi else r


def beat_frequency(omega_LF: float, K: float) -> BeatNote:
    """Mean beat rate sqrt(omega_LF^2 - K^2); zero with ``locked=True`` inside |omega_LF| < K."""
    if abs(omega_LF) < K:
        return BeatNote(0.0, True)
    return BeatNote(math.sqrt(omega_LF * omega_LF - K * K), False)


def noise_magnification(delta_omega: float, K: float, beat: float) -> float:
    """Beat-note fluctuation induced by a detuning fluctuation ``delta_omega``."""
    if beat <= 0:
        raise ValueError("beat frequency must be positive (outside the locked zone)")
    return delta_omega * math.sqrt(1.0 + (K / beat) ** 2)


def arnold_orbit(p: ArnoldParams, n: int) -> np.ndarray:
    """Lifted orbit Phi_{k+1} = Phi_k + 2 pi Omega - c sin(Phi_k), k = 0..n."""
    out = np.empty(n + 1)
    phi = p.phi0
    step = 2 * math.pi * p.Omega
    c = p.c
    sin = math.sin
    out[0] = phi
    for k in range(1, n + 1):
        phi = phi + step - c * sin(phi)
        out[k] = phi
    return out


def _winding_many(omegas: np.ndarray, c: float, phi0: float, n_transient: int, n_iter: int) -> np.ndarray:
    phi = np.full(omegas.shape, float(phi0))
    step = 2 * np.pi * omegas
    for _ in range(n_transient):
        phi = phi + step - c * np.sin(phi)
    start = phi.copy()
    for _ in range(n_iter):
        phi = phi + step - c * np.sin(phi)
    return (phi - start) / (2 * np.pi * n_iter)


def _warn_overlap(c: float):
    if c > 1:
        warnings.warn(
            f"c = {c} > 1: locking zones may overlap; the winding number can depend on the orbit",
            RuntimeWarning,
            stacklevel=3,
        )


def arnold_winding(p: ArnoldParams, n_transient: int = 1000, n_iter: int = 10**5) -> float:
    """Winding number (Phi_{n0+n} - Phi_{n0}) / (2 pi n) of the lifted circle map."""
    if n_iter < 1000:
        raise ValueError("n_iter must be >= 1000")
    _warn_overlap(p.c)
    if p.c == 0:
        return p.Omega
    step = 2 * math.pi * p.Omega
    c = p.c
    sin = math.sin
    phi = p.phi0
    for _ in range(n_transient):
        phi = phi + step - c * sin(phi)
    start = phi
    for _ in range(n_iter):
        phi = phi + step - c * sin(phi)
    return (phi - start) / (2 * math.pi * n_iter)


def is_locked_at(Omega: float, c: float, ratio: Fraction, n_transient: int = 2000, n_iter: int = 20000) -> bool:
    """True when the orbit at ``Omega`` winds at exactly ``ratio`` (to within 2/n_iter)."""
    w = arnold_winding(ArnoldParams(Omega, c), n_transient, n_iter)
    return abs(w - float(ratio)) < 2.0 / n_iter


def plateau_edges(
    c: float,
    ratio: Fraction,
    search: float = 0.05,
    tol: float = 1e-5,
    n_transient: int = 2000,
    n_iter: int = 20000,
    n_grid: int = 2001,
) -> tuple[float, float] | None:
    """Edges of the mode-locking plateau at ``ratio``, located by bisection to ``tol`` in Omega.

    A locked seed point is taken at Omega = ratio when possible, otherwise from
    a grid over ``ratio +- search`` (tongues of the sine map bend away from
    p/q for q > 2). Returns None when no grid point locks.
    """
    ratio = Fraction(ratio)
    center = float(ratio)
    if c == 0:
        return (center, center)
    locked = lambda om: is_locked_at(om, c, ratio, n_transient, n_iter)  # noqa: E731
    seed = center if locked(center) else None
    if seed is None:
        grid = np.linspace(center - search, center + search, n_grid)
        w = _winding_many(grid, c, 0.0, n_transient, n_iter)
        hits = grid[np.abs(w - center) < 2.0 / n_iter]
        if len(hits) == 0:
            return None
        seed = float(hits[np.argmin(np.abs(hits - center))])

    def bisect(inside: float, outside: float) -> float:
        if locked(outside):
            raise RuntimeError(f"plateau at {ratio} extends beyond the search window")
        while abs(outside - inside) > tol:
            mid = 0.5 * (inside + outside)
            if locked(mid):
                inside = mid
            else:
                outside = mid
        return inside

    return bisect(seed, seed - search), bisect(seed, seed + search)


def plateau_width(c: float, ratio, **kw) -> float:
    edges = plateau_edges(c, Fraction(ratio), **kw)
    return 0.0 if edges is None else edges[1] - edges[0]


@dataclass
class StaircaseScan:
    c: float
    omegas: np.ndarray
    winding: np.ndarray
    plateaus: dict = field(default_factory=dict)

    def rows(self):
        return zip(self.omegas.tolist(), self.winding.tolist())


def staircase_scan(
    c: float,
    Omega_grid: Sequence[float],
    plateaus: Sequence = (),
    n_transient: int = 1000,
    n_iter: int = 10000,
) -> StaircaseScan:
    """Winding number over a sorted grid of bare ratios, plus plateau extents for ``plateaus``."""
    grid = np.asarray(Omega_grid, dtype=np.float64)
    if np.any(np.diff(grid) < 0):
        raise ValueError("Omega grid must be sorted")
    _warn_overlap(c)
    if c == 0:
        winding = grid.copy()
    else:
        winding = _winding_many(grid, c, 0.0, n_transient, n_iter)
    found = {Fraction(r): plateau_edges(c, Fraction(r)) for r in plateaus}
    return StaircaseScan(c, grid, winding, found)


def allan_deviation(ts: TimeSeries, taus: Sequence[float], overlapping: bool = False, min_pairs: int = 10) -> AllanCurve:
    """Two-sample Allan deviation of fractional-frequency samples.

    For each tau = m dt the series is averaged over blocks of m samples and
    sigma^2 = <(y_{k+1} - y_k)^2> / 2 over adjacent block means. The default
    uses non-overlapping blocks; ``overlapping=True`` slides the block by one
    sample.
    """
    y = ts.samples
    taus = np.asarray(taus, dtype=np.float64)
    if np.any(np.diff(taus) <= 0):
        raise ValueError("taus must be strictly increasing")
    sigmas, pairs = [], []
    csum = np.concatenate(([0.0], np.cumsum(y)))
    for tau in taus:
        m = int(round(tau / ts.dt))
        if m < 1 or not math.isclose(m * ts.dt, tau, rel_tol=1e-9):
            raise ValueError(f"tau={tau} is not a multiple of dt={ts.dt}")
        if overlapping:
            means = (csum[m:] - csum[:-m]) / m
            diffs = means[m:] - means[:-m]
        else:
            n_blocks = len(y) // m
            means = y[: n_blocks * m].reshape(n_blocks, m).mean(axis=1)
            diffs = np.diff(means)
        if len(diffs) < min_pairs:
            raise ValueError(f"series too short for tau={tau}: {len(diffs)} pairs < {min_pairs}")
        sigmas.append(math.sqrt(0.5 * np.mean(diffs**2)))
        pairs.append(len(diffs))
    return AllanCurve(taus, np.array(sigmas), np.array(pairs))


def synth_one_over_f(n: int, seed: int, exponent: float = 1.0, dt: float = 1.0, h: float = 1.0) -> TimeSeries:
    """Gaussian noise with one-sided PSD h / f**exponent, shaped in the frequency domain.

    ``n`` must be a power of two >= 1024. The DC bin is zeroed. Identical
    seeds give identical series.
    """
    if n < 1024 or n & (n - 1):
        raise ValueError("n must be a power of two >= 1024")
    rng = np.random.default_rng(seed)
    f = np.fft.rfftfreq(n, dt)
    psd = np.zeros_like(f)
    psd[1:] = h * f[1:] ** (-exponent)
    # E|Y_k|^2 = S(f_k) n / (2 dt) reproduces the one-sided PSD
    scale = np.sqrt(psd * n / (4.0 * dt))
    spec = scale * (rng.standard_normal(len(f)) + 1j * rng.standard_normal(len(f)))
    spec[-1] = spec[-1].real * math.sqrt(2.0)
    samples = np.fft.irfft(spec, n)
    return TimeSeries(dt, samples)


def periodogram(ts: TimeSeries) -> tuple[np.ndarray, np.ndarray]:
    """One-sided periodogram (frequencies > 0 only)."""
    n = len(ts)
    spec = np.fft.rfft(ts.samples)
    f = np.fft.rfftfreq(n, ts.dt)
    p = 2.0 * ts.dt / n * np.abs(spec) ** 2
    return f[1:], p[1:]


def loglog_slope(x: np.ndarray, y: np.ndarray) -> float:
    """Least-squares slope of log y against log x."""
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])
