"""
Galois fields of odd characteristic, their characters, and Galois phase states.

Elements of F_q (q = p^m) are integers 0..q-1. Element ``x`` stands for the
polynomial sum_i d_i t^i where d_i are the base-p digits of ``x`` (d_0 least
significant). Integer order is therefore the lexicographic order of the
coefficient vector read from the leading coefficient down; state indices use
this enumeration.

The prime-field section covers the phase statistics of the Galois phase states
against the truncated phase state |beta>: probabilities S(b), their expansion
in incomplete Gauss sums T(k), expectation, variance and the partial sums
U, V.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import arith
from .qphase import StateVector, beta_state

MAX_ORDER = 10**4
WEIL_CONSTANT = 3.0


# ---------------------------------------------------------------------------
# polynomials over Z_p, coefficient tuples lowest degree first


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: tuple[int, ...], p: int) -> list[int]:
    """Remainder of a modulo a monic polynomial m."""
    a = _poly_trim(list(a))
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        coef = a[-1]
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - coef * mi) % p
        _poly_trim(a)
    return a


def _poly_mul(a, b, p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return out


def _monic_polys(p: int, degree: int):
    """Monic polynomials of the given degree in increasing integer code."""
    for code in range(p**degree):
        coeffs = [(code // p**i) % p for i in range(degree)]
        yield tuple(coeffs) + (1,)


def is_irreducible(poly: tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for f in _monic_polys(p, d):
            if not _poly_mod(list(poly), f, p):
                return False
    return True


def smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    for poly in _monic_polys(p, m):
        if is_irreducible(poly, p):
            return poly
    raise AssertionError("an irreducible polynomial exists for every degree")


# ---------------------------------------------------------------------------
# fields


class GaloisField:
    """The finite field F_{p^m}, p odd, built from the smallest irreducible modulus.

    Construction is deterministic: the modulus is the lexicographically
    smallest monic irreducible of degree m and the generator is the smallest
    element of multiplicative order p^m - 1. Instances are immutable.
    """

    def __init__(self, p: int, m: int = 1):
        if p < 3 or not arith.is_prime(p):
            raise ValueError(f"characteristic must be an odd prime, got {p}")
        if m < 1:
            raise ValueError("extension degree must be >= 1")
        if p**m > MAX_ORDER:
            raise ValueError(f"field order {p}^{m} exceeds {MAX_ORDER}")
        self.p, self.m, self.q = p, m, p**m
        self.modulus = smallest_irreducible(p, m)
        self._powers = p ** np.arange(m)
        idx = np.arange(self.q)
        self.digits = (idx[:, None] // self._powers[None, :]) % p
        self.digits.setflags(write=False)
        self.generator = self._find_generator()
        self._build_log_tables()
        self.trace_table = self._build_trace()

    # -- construction helpers -------------------------------------------------

    def _poly(self, x: int) -> list[int]:
        return _poly_trim([int(d) for d in self.digits[x]])

    def _index(self, poly) -> int:
        return int(sum(c * self._powers[i] for i, c in enumerate(poly)))

    def _poly_mulmod(self, x: int, y: int) -> int:
        prod = _poly_mul(self._poly(x), self._poly(y), self.p)
        return self._index(_poly_mod(prod, self.modulus, self.p))

    def _slow_pow(self, x: int, e: int) -> int:
        result, base = 1, x
        while e:
            if e & 1:
                result = self._poly_mulmod(result, base)
            base = self._poly_mulmod(base, base)
            e >>= 1
        return result

    def _find_generator(self) -> int:
        order = self.q - 1
        cofactors = [order // r for r in arith.factorize(order)] if order > 1 else []
        for x in range(1, self.q):
            if all(self._slow_pow(x, e) != 1 for e in cofactors):
                return x
        raise AssertionError("the multiplicative group of a finite field is cyclic")

    def _build_log_tables(self):
        n = self.q - 1
        exp = np.empty(n, dtype=np.int64)
        log = np.full(self.q, -1, dtype=np.int64)
        cur = 1
        for s in range(n):
            exp[s] = cur
            log[cur] = s
            cur = self._poly_mulmod(cur, self.generator)
        if cur != 1 or np.any(log[1:] < 0):
            raise AssertionError("generator does not have full order")
        exp.setflags(write=False)
        log.setflags(write=False)
        self.exp_table, self.log_table = exp, log

    def _build_trace(self) -> np.ndarray:
        x = np.arange(self.q)
        acc = np.zeros(self.q, dtype=np.int64)
        power = x
        for _ in range(self.m):
            acc = self.add(acc, power)
            power = self.pow(power, self.p)
        if np.any(acc >= self.p):
            raise AssertionError("trace left the prime field")
        acc.setflags(write=False)
        return acc

    # -- arithmetic (scalars or integer arrays) ------------------------------

    def element(self, coeffs) -> int:
        """Index of the element with the given coefficients (lowest degree first)."""
        coeffs = list(coeffs)
        if len(coeffs) > self.m or any(not 0 <= c < self.p for c in coeffs):
            raise ValueError(f"invalid coefficients {coeffs} for F_{self.q}")
        return self._index(coeffs)

    def coeffs(self, x: int) -> tuple[int, ...]:
        return tuple(int(d) for d in self.digits[x])

    def add(self, x, y):
        return ((self.digits[x] + self.digits[y]) % self.p) @ self._powers

    def neg(self, x):
        return ((-self.digits[x]) % self.p) @ self._powers

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        x, y = np.asarray(x), np.asarray(y)
        s = (self.log_table[x] + self.log_table[y]) % (self.q - 1)
        out = np.where((x == 0) | (y == 0), 0, self.exp_table[s])
        return out if out.ndim else int(out)

    def pow(self, x, e: int):
        x = np.asarray(x)
        s = (self.log_table[x] * e) % (self.q - 1)
        out = np.where(x == 0, 0 if e else 1, self.exp_table[s])
        return out if out.ndim else int(out)

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("zero has no inverse")
        return int(self.exp_table[(-self.log_table[x]) % (self.q - 1)])

    def scalar(self, c: int) -> int:
        """Embed c in Z_p as a field element."""
        return int(c) % self.p

    def trace(self, x):
        """Field trace x + x^p + ... + x^{p^{m-1}}, as a residue mod p."""
        out = self.trace_table[x]
        return out if np.ndim(out) else int(out)

    def elements(self) -> np.ndarray:
        return np.arange(self.q)

    def metadata(self) -> dict:
        return {
            "p": self.p,
            "m": self.m,
            "modulus_coeffs": list(self.modulus),
            "generator_coeffs": list(self.coeffs(self.generator)),
        }

    def __repr__(self):
        return f"GaloisField(p={self.p}, m={self.m})"


@lru_cache(maxsize=64)
def field_create(p: int, m: int = 1) -> GaloisField:
    return GaloisField(p, m)


def field_trace(F: GaloisField, x: int) -> int:
    return F.trace(x)


# ---------------------------------------------------------------------------
# characters


@dataclass(frozen=True)
class CharacterSpec:
    """An additive character x -> w_p^{tr(index * x)} or a multiplicative one g^s -> w_{q-1}^{index s}."""

    kind: str = "multiplicative"
    index: int = 0

    def __post_init__(self):
        if self.kind not in ("additive", "multiplicative"):
            raise ValueError(f"unknown character kind {self.kind!r}")

    @property
    def trivial(self) -> bool:
        return self.index == 0

    def conjugate(self, F: GaloisField) -> "CharacterSpec":
        if self.kind == "additive":
            return CharacterSpec("additive", F.neg(self.index))
        return CharacterSpec("multiplicative", (-self.index) % (F.q - 1))


TRIVIAL = CharacterSpec("multiplicative", 0)


def character_values(F: GaloisField, spec: CharacterSpec) -> np.ndarray:
    """Character values over all field elements in canonical order.

    The trivial multiplicative character is 1 everywhere, including at 0;
    nontrivial multiplicative characters vanish at 0.
    """
    x = F.elements()
    if spec.kind == "additive":
        tr = F.trace(F.mul(np.full(F.q, spec.index), x))
        return np.exp(2j * np.pi * tr / F.p)
    k = spec.index % (F.q - 1)
    if k == 0:
        return np.ones(F.q, dtype=np.complex128)
    s = F.log_table[x]
    vals = np.exp(2j * np.pi * ((k * s) % (F.q - 1)) / (F.q - 1))
    vals[0] = 0.0
    return vals


def char_eval(F: GaloisField, spec: CharacterSpec, x: int) -> complex:
    return complex(character_values(F, spec)[x])


# ---------------------------------------------------------------------------
# mutually unbiased bases


def _mub_amplitudes(F: GaloisField, a: int, b, psi_vals: np.ndarray) -> np.ndarray:
    """Rows: b values; columns: n. Unnormalized psi(n) w_p^{tr(a n^2 + b n)}."""
    n = F.elements()
    quad = F.mul(a, F.mul(n, n))
    b = np.atleast_1d(b)
    lin = F.mul(b[:, None], n[None, :])
    tr = F.trace(F.add(np.broadcast_to(quad, lin.shape), lin))
    return psi_vals[None, :] * np.exp(2j * np.pi * tr / F.p)


def mub_state(
    F: GaloisField, a: int, b: int, psi: CharacterSpec = TRIVIAL, renormalize: bool = False
) -> StateVector:
    """Galois phase state q^{-1/2} sum_n psi(n) w_p^{tr(a n^2 + b n)} |n>.

    With a nontrivial psi the amplitude at n = 0 vanishes and the vector has
    norm sqrt((q-1)/q); it is returned flagged unnormalized unless
    ``renormalize`` is set.
    """
    if psi.kind != "multiplicative":
        raise ValueError("psi must be a multiplicative character")
    amps = _mub_amplitudes(F, a, b, character_values(F, psi))[0] / math.sqrt(F.q)
    state = StateVector(amps, normalized=psi.trivial)
    return state.renormalized() if renormalize and not psi.trivial else state


def mub_basis(F: GaloisField, a: int) -> np.ndarray:
    """Matrix whose column b is |theta_b^a> (trivial psi)."""
    ones = np.ones(F.q, dtype=np.complex128)
    return _mub_amplitudes(F, a, F.elements(), ones).T / math.sqrt(F.q)


@dataclass
class MubReport:
    q: int
    n_bases: int
    max_orthonormality_dev: float
    max_unbiasedness_dev: float

    @property
    def max_deviation(self) -> float:
        return max(self.max_orthonormality_dev, self.max_unbiasedness_dev)

    def as_dict(self) -> dict:
        return {
            "q": self.q,
            "n_bases": self.n_bases,
            "max_orthonormality_dev": self.max_orthonormality_dev,
            "max_unbiasedness_dev": self.max_unbiasedness_dev,
            "max_deviation": self.max_deviation,
        }


def mub_verify(F: GaloisField) -> MubReport:
    """Check the q Galois bases plus the computational basis for orthonormality and unbiasedness."""
    q = F.q
    bases = [np.eye(q, dtype=np.complex128)] + [mub_basis(F, a) for a in range(q)]
    allvec = np.hstack(bases)
    overlap = np.abs(allvec.conj().T @ allvec) ** 2
    label = np.repeat(np.arange(len(bases)), q)
    same = label[:, None] == label[None, :]
    expected = np.where(same, np.eye(len(label)), 1.0 / q)
    dev = np.abs(overlap - expected)
    return MubReport(q, len(bases), float(dev[same].max()), float(dev[~same].max()))


# ---------------------------------------------------------------------------
# prime-field phase statistics


@dataclass
class GaussSumReport:
    k: int
    value: complex
    bound: float

    @property
    def within_bound(self) -> bool:
        return abs(self.value) <= self.bound


def _psi_prime(p: int, psi: CharacterSpec) -> np.ndarray:
    return character_values(field_create(p, 1), psi)


def _n_range(p: int, k: int, include_zero: bool) -> range:
    lo = 0 if include_zero else 1
    return range(max(lo, lo - k), min(p - 1, p - 1 - k) + 1)


def weil_bound(p: int, constant: float = WEIL_CONSTANT) -> float:
    return constant * math.sqrt(p) * math.log(p)


def gauss_T(p: int, a: int, psi: CharacterSpec, k: int, include_zero: bool = False) -> GaussSumReport:
    """Incomplete Gauss sum T(k) = sum_n psi(n) conj(psi(n+k)) exp(2 pi i a k (2n + k) / p).

    n runs over max(1, 1-k) .. min(p-1, p-1-k), i.e. n and n + k both units;
    ``include_zero`` extends the range to all of 0..p-1. The bound is
    1/|sin(2 pi a k / p)| for trivial psi and k != 0, WEIL_CONSTANT sqrt(p) ln p
    for nontrivial psi, and the number of terms for k = 0.
    """
    if not -p < k < p:
        raise ValueError(f"k must lie in (-{p}, {p})")
    vals = _psi_prime(p, psi)
    n = np.array(_n_range(p, k, include_zero), dtype=np.int64)
    phase = np.exp(2j * np.pi * ((a * k * (2 * n + k)) % p) / p)
    value = complex(np.sum(vals[n] * np.conj(vals[n + k]) * phase))
    if k == 0:
        bound = float(len(n))
    elif psi.trivial:
        s = abs(math.sin(2 * math.pi * a * k / p))
        bound = 1.0 / s if s > 1e-15 else float(len(n))
    else:
        bound = weil_bound(p)
    return GaussSumReport(k, value, bound)


def gauss_T_table(p: int, psi: CharacterSpec, include_zero: bool = False) -> np.ndarray:
    """T(k) for every a in 0..p-1 (rows) and k in -(p-1)..p-1 (columns).

    For k != 0 the map n -> k(2n + k) mod p is injective, so each column is a
    discrete Fourier transform over a of the summand weights.
    """
    vals = _psi_prime(p, psi)
    ks = np.arange(-(p - 1), p)
    out = np.empty((p, len(ks)), dtype=np.complex128)
    for j, k in enumerate(ks):
        n = np.array(_n_range(p, int(k), include_zero), dtype=np.int64)
        w = vals[n] * np.conj(vals[n + k])
        h = np.zeros(p, dtype=np.complex128)
        np.add.at(h, (k * (2 * n + k)) % p, w)
        out[:, j] = p * np.fft.ifft(h)
    return out


def _support_size(p: int, psi: CharacterSpec) -> int:
    return p if psi.trivial else p - 1


def phase_prob(p: int, a: int, psi: CharacterSpec, beta: float, normalize: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """S(b) = |<theta_b^a|beta>|^2 for b = 0..p-1, computed two ways.

    Returns ``(direct, decomposed)``. ``direct`` overlaps the phase states
    with |beta>; ``decomposed`` evaluates
    (c^2 / p) sum_k exp(2 pi i gamma k) T(k), gamma = -beta/(2 pi) + b/p,
    where c^2 is the squared state prefactor and T is taken with the
    conjugate character, which is the ordering that makes the two agree with
    the state written as psi(n) w^{a n^2 + b n}. With ``normalize`` the state is
    rescaled to unit norm (matters only for nontrivial psi).
    """
    F = field_create(p, 1)
    vals = character_values(F, psi)
    c2 = 1.0 / (_support_size(p, psi) if normalize else p)
    states = _mub_amplitudes(F, a % p, F.elements(), vals) * math.sqrt(c2)
    direct = np.abs(states.conj() @ beta_state(p, beta).amplitudes) ** 2

    conj = psi.conjugate(F)
    ks = np.arange(-(p - 1), p)
    T = np.array([gauss_T(p, a, conj, int(k), include_zero=psi.trivial).value for k in ks])
    gamma = -beta / (2 * np.pi) + np.arange(p) / p
    decomposed = (c2 / p) * (np.exp(2j * np.pi * np.outer(gamma, ks)) @ T)
    return direct, decomposed.real


def phase_expectation_gal(p: int, a: int, psi: CharacterSpec, beta: float, normalize: bool = True) -> float:
    """sum_b theta_b S(b) with theta_b = 2 pi b / p."""
    S, _ = phase_prob(p, a, psi, beta, normalize)
    return float(np.sum(2 * np.pi * np.arange(p) / p * S))


@dataclass
class PhaseVariance:
    direct: float
    second_moment: float  # sum theta_b^2 S
    mean_sq_weighted: float  # <Theta>^2 sum S
    cross: float  # -2 <Theta>^2

    @property
    def expanded(self) -> float:
        return self.second_moment + self.mean_sq_weighted + self.cross


def phase_variance_gal(p: int, a: int, psi: CharacterSpec, beta: float, normalize: bool = True) -> PhaseVariance:
    S, _ = phase_prob(p, a, psi, beta, normalize)
    theta = 2 * np.pi * np.arange(p) / p
    mean = float(np.sum(theta * S))
    direct = float(np.sum((theta - mean) ** 2 * S))
    return PhaseVariance(direct, float(np.sum(theta**2 * S)), mean**2 * float(S.sum()), -2.0 * mean**2)


@dataclass
class PartialSums:
    p: int
    k: int
    U: complex
    V: complex
    U_closed: complex | None  # eps p / (eps - 1)
    V_closed: complex | None  # eps p (p (eps - 1) - 2) / (eps - 1)^2
    abs_U_printed: float | None  # p / (2 |sin(2 k pi / p)|)
    abs_U_derived: float | None  # p / (2 |sin(k pi / p)|)
    V_printed: float | None  # p^3 / (4 sin^2(pi k / p))


def partial_sums_UV(p: int, k: int) -> PartialSums:
    """U = sum_{b=1}^p b eps^b and V = sum_{b=1}^p b^2 eps^b, eps = exp(2 pi i k / p).

    Direct sums are authoritative. For k != 0 (mod p) closed forms are
    attached: U = eps p / (eps - 1) and V = eps p (p (eps - 1) - 2) / (eps - 1)^2
    (both use eps^p = 1), together with the printed magnitudes for comparison.
    """
    b = np.arange(1, p + 1)
    if k % p == 0:
        return PartialSums(p, k, complex(p * (p + 1) // 2), complex(int(np.sum(b * b))), None, None, None, None, None)
    eps = cmath.exp(2j * math.pi * k / p)
    powers = np.exp(2j * np.pi * ((k * b) % p) / p)
    U = complex(np.sum(b * powers))
    V = complex(np.sum(b * b * powers))
    U_closed = eps * p / (eps - 1)
    V_closed = eps * p * (p * (eps - 1) - 2) / (eps - 1) ** 2
    return PartialSums(
        p,
        k,
        U,
        V,
        U_closed,
        V_closed,
        p / (2 * abs(math.sin(2 * k * math.pi / p))),
        p / (2 * abs(math.sin(k * math.pi / p))),
        p**3 / (4 * math.sin(math.pi * k / p) ** 2),
    )
