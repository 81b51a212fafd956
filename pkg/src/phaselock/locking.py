"""
Continued fractions and mode-locking basins of a mixer + low-pass receiver.

A harmonic interaction p*f0 - q*f survives the low-pass filter when the
frequency ratio f/f0 lies in a basin around p/q. The basin around a convergent
is bounded by the two continued-fraction expansions of p/q extended by the
partial quotient ``floor(f0 / (fc * q))``.

Everything here is exact (``fractions.Fraction``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

ContinuedFraction = tuple[int, ...]

BASIN_COLUMNS = ("p", "q", "nu1_num", "nu1_den", "nu2_num", "nu2_den", "width_hz", "overlap")


@dataclass(frozen=True)
class FilterConfig:
    """Reference frequency ``f0`` and low-pass cutoff ``fc``, both in Hz."""

    f0: float
    fc: float

    def __post_init__(self):
        if self.f0 <= 0 or self.fc <= 0:
            raise ValueError("f0 and fc must be positive")
        if self.fc > self.f0:
            raise ValueError("cutoff fc must not exceed f0")


@dataclass(frozen=True)
class LockingBasin:
    center: Fraction
    nu1: Fraction
    nu2: Fraction
    width_hz: float
    overlap: bool = False

    @property
    def lower(self) -> Fraction:
        return min(self.nu1, self.nu2)

    @property
    def upper(self) -> Fraction:
        return max(self.nu1, self.nu2)

    def csv_row(self) -> tuple:
        return (
            self.center.numerator,
            self.center.denominator,
            self.nu1.numerator,
            self.nu1.denominator,
            self.nu2.numerator,
            self.nu2.denominator,
            self.width_hz,
            int(self.overlap),
        )


def cf_expand(x) -> ContinuedFraction:
    """Canonical continued fraction of a nonnegative rational.

    >>> cf_expand(Fraction(3, 5))
    (0, 1, 1, 2)
    """
    x = Fraction(x)
    if x < 0:
        raise ValueError("only nonnegative rationals are supported")
    num, den = x.numerator, x.denominator
    quotients = []
    while den:
        a, r = divmod(num, den)
        quotients.append(a)
        num, den = den, r
    # Euclid always ends on a quotient >= 2 unless the expansion has length 1
    return tuple(quotients)


def cf_value(cf: Sequence[int]) -> Fraction:
    if not cf:
        raise ValueError("empty continued fraction")
    value = Fraction(cf[-1])
    for a in reversed(cf[:-1]):
        value = a + 1 / value
    return value


def cf_convergents(cf: Sequence[int]) -> list[Fraction]:
    """Convergents p_i/q_i from the three-term recurrence."""
    p_prev, p = 1, cf[0]
    q_prev, q = 0, 1
    out = [Fraction(p, q)]
    for a in cf[1:]:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        out.append(Fraction(p, q))
    return out


def alternate_expansion(cf: Sequence[int]) -> ContinuedFraction:
    """The other expansion of the same rational: last quotient a -> (a - 1), 1."""
    cf = tuple(cf)
    if cf[-1] < 1:
        raise ValueError("zero has no alternate expansion")
    return cf[:-1] + (cf[-1] - 1, 1)


def truncation_index(cfg: FilterConfig, q: int) -> int:
    """Largest partial quotient a_{i+1} = floor(f0 / (fc q)) that the filter passes."""
    if q < 1:
        raise ValueError("q must be >= 1")
    a = math.floor(Fraction(cfg.f0) / (Fraction(cfg.fc) * q))
    if a == 0:
        raise ValueError(f"basin with denominator {q} is not resolvable (f0/(fc q) < 1)")
    return a


def basin_edges(center, a_next: int) -> tuple[Fraction, Fraction]:
    """Edges (nu1, nu2) of the locking basin around ``center``.

    nu1 appends ``a_next`` to the canonical expansion, nu2 appends it to the
    alternate expansion. For center 0 the basin is one-sided and nu2 = 0.
    """
    if a_next < 1:
        raise ValueError("a_next must be >= 1")
    cf = cf_expand(center)
    nu1 = cf_value(cf + (a_next,))
    if cf == (0,):
        return nu1, Fraction(0)
    nu2 = cf_value(alternate_expansion(cf) + (a_next,))
    return nu1, nu2


def make_basin(cfg: FilterConfig, center) -> LockingBasin:
    center = Fraction(center)
    nu1, nu2 = basin_edges(center, truncation_index(cfg, center.denominator))
    return LockingBasin(center, nu1, nu2, float(abs(nu2 - nu1) * Fraction(cfg.f0)))


def farey_fractions(q_max: int, lo, hi) -> list[Fraction]:
    """Reduced fractions p/q with q <= q_max strictly inside (lo, hi), sorted."""
    lo, hi = Fraction(lo), Fraction(hi)
    out = set()
    for q in range(1, q_max + 1):
        for p in range(math.floor(lo * q), math.ceil(hi * q) + 1):
            if p >= 0 and math.gcd(p, q) == 1 and lo < Fraction(p, q) < hi:
                out.add(Fraction(p, q))
    return sorted(out)


def _flag_overlaps(basins: list[LockingBasin]) -> list[LockingBasin]:
    order = sorted(range(len(basins)), key=lambda i: basins[i].lower)
    flags = [False] * len(basins)
    reach, reach_idx = None, None
    for i in order:
        b = basins[i]
        if reach is not None and b.lower < reach:
            flags[i] = flags[reach_idx] = True
        if reach is None or b.upper > reach:
            reach, reach_idx = b.upper, i
    return [
        LockingBasin(b.center, b.nu1, b.nu2, b.width_hz, flag) for b, flag in zip(basins, flags)
    ]


def spectrum_scan(cfg: FilterConfig, q_max: int, interval: Iterable = (0, 1)) -> list[LockingBasin]:
    """All resolvable basins with centers in the open interval, sorted by center.

    Overlapping basins are kept; each carries an ``overlap`` flag.
    """
    if q_max < 1:
        raise ValueError("q_max must be >= 1")
    lo, hi = interval
    basins = []
    for x in farey_fractions(q_max, lo, hi):
        try:
            basins.append(make_basin(cfg, x))
        except ValueError:
            continue
    return _flag_overlaps(basins)
