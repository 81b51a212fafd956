"""
Exact arithmetic functions: totient, Moebius, Mangoldt, Ramanujan sums.

Scalar functions factor their argument with a shared smallest-prime-factor
table (built lazily, grown on demand up to ``SIEVE_LIMIT``; larger inputs fall
back to trial division). Bulk functions (Mertens, Chebyshev-type averages,
Dirichlet partial sums) work on numpy sieve arrays.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

SIEVE_LIMIT = 10**7
MAX_ARG = 2**63 - 1

_spf = np.zeros(2, dtype=np.int32)
_spf_lock = threading.Lock()


@dataclass(frozen=True)
class ResidueClass:
    """Congruence class ``n = residue (mod modulus)``.

    ``ResidueClass(1, 0)`` is the unconstrained class.
    """

    modulus: int
    residue: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"modulus must be >= 1, got {self.modulus}")
        if not 0 <= self.residue < self.modulus:
            raise ValueError(f"residue must lie in [0, {self.modulus}), got {self.residue}")

    def contains(self, n: int) -> bool:
        return n % self.modulus == self.residue


def _check_arg(n: int) -> int:
    n = int(n)
    if n < 1:
        raise ValueError(f"argument must be a positive integer, got {n}")
    if n > MAX_ARG:
        raise OverflowError(f"argument {n} outside the supported 64-bit range")
    return n


def _build_spf(limit: int) -> np.ndarray:
    spf = np.zeros(limit + 1, dtype=np.int32)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    rest = np.flatnonzero(spf == 0)
    spf[rest] = rest
    spf[0] = 0
    spf[1] = 1
    spf.setflags(write=False)
    return spf


def smallest_prime_factor_table(limit: int) -> np.ndarray:
    """Return a read-only table ``spf`` with ``spf[n]`` the least prime dividing n.

    The table is shared between callers and only ever replaced by a larger one.
    """
    global _spf
    if limit > SIEVE_LIMIT:
        raise ValueError(f"sieve limit {limit} exceeds {SIEVE_LIMIT}")
    table = _spf
    if len(table) > limit:
        return table
    with _spf_lock:
        if len(_spf) <= limit:
            size = min(SIEVE_LIMIT, max(limit, 2 * (len(_spf) - 1), 1 << 16))
            _spf = _build_spf(size)
        return _spf


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of n as ``{prime: exponent}`` (empty for n = 1)."""
    n = _check_arg(n)
    factors: dict[int, int] = {}
    if n <= SIEVE_LIMIT:
        spf = smallest_prime_factor_table(n)
        while n > 1:
            p = int(spf[n])
            n //= p
            factors[p] = factors.get(p, 0) + 1
        return factors
    d = 2
    while d * d <= n:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == {n: 1}


def euler_phi(n: int) -> int:
    """Euler's totient: count of k in [1, n] with gcd(k, n) = 1."""
    result = _check_arg(n)
    for p in factorize(n):
        result -= result // p
    return result


def moebius(n: int) -> int:
    factors = factorize(n)
    if any(e > 1 for e in factors.values()):
        return 0
    return -1 if len(factors) % 2 else 1


def prime_power_base(n: int) -> int | None:
    """Return b if n = b**k for a prime b and k >= 1, else None."""
    factors = factorize(n)
    if len(factors) == 1:
        return next(iter(factors))
    return None


def mangoldt(n: int) -> float:
    """von Mangoldt function: ln b if n is a power of the prime b, else 0."""
    b = prime_power_base(n)
    return math.log(b) if b is not None else 0.0


def mangoldt_general(n: int, cls: ResidueClass) -> float:
    """Mangoldt function restricted to a residue class.

    Equals ln b when n = b**k (b prime) and n lies in ``cls``; zero otherwise.
    The class ``ResidueClass(1, 0)`` imposes no constraint, so the classical
    function is recovered.
    """
    n = _check_arg(n)
    if not cls.contains(n):
        return 0.0
    return mangoldt(n)


def ramanujan_sum(q: int, n: int) -> int:
    """Ramanujan sum c_q(n) via the closed form mu(q1) phi(q) / phi(q1), q1 = q/gcd(q, n)."""
    q = _check_arg(q)
    q1 = q // math.gcd(q, int(n))
    # phi(q1) divides phi(q) since q1 | q
    return moebius(q1) * (euler_phi(q) // euler_phi(q1))


def ramanujan_sum_direct(q: int, n: int) -> complex:
    """Sum of e^{2 pi i k n / q} over 0 <= k < q coprime to q, evaluated numerically."""
    k = np.array([k for k in range(q) if math.gcd(k, q) == 1], dtype=np.int64)
    return complex(np.exp(2j * np.pi * ((k * n) % q) / q).sum())


def mangoldt_dual_b(n: int) -> float:
    """b(n) = phi(n)/n * Lambda(n)."""
    lam = mangoldt(n)
    if lam == 0.0:
        return 0.0
    return euler_phi(n) / n * lam


def ramanujan_expansion_b(n: int, q_max: int) -> float:
    """Partial sum over q <= q_max of mu(q)/phi(q) * c_q(n).

    Converges (conditionally) to ``mangoldt_dual_b(n)`` for n >= 2. For n = 1
    the terms are mu(q)**2/phi(q) > 0 and the partial sums grow like log q_max.
    """
    total = 0.0
    for q in range(1, q_max + 1):
        mu = moebius(q)
        if mu:
            total += mu * ramanujan_sum(q, n) / euler_phi(q)
    return total


# ---------------------------------------------------------------------------
# sieve arrays


@lru_cache(maxsize=4)
def mobius_array(limit: int) -> np.ndarray:
    """``mu[n]`` for 0 <= n <= limit (``mu[0] = 0``)."""
    spf = smallest_prime_factor_table(max(limit, 2))
    mu = np.ones(limit + 1, dtype=np.int8)
    mu[0] = 0
    primes = np.flatnonzero(spf[: limit + 1] == np.arange(limit + 1))
    for p in primes[primes >= 2]:
        p = int(p)
        mu[p::p] *= -1
        mu[p * p :: p * p] = 0
    mu.setflags(write=False)
    return mu


@lru_cache(maxsize=4)
def mangoldt_array(limit: int) -> np.ndarray:
    """``lam[n] = Lambda(n)`` for 0 <= n <= limit (``lam[0] = lam[1] = 0``)."""
    spf = smallest_prime_factor_table(max(limit, 2))
    idx = np.arange(limit + 1)
    primes = idx[(spf[: limit + 1] == idx) & (idx >= 2)]
    lam = np.zeros(limit + 1, dtype=np.float64)
    lam[primes] = np.log(primes)
    for p in primes[primes <= math.isqrt(limit)]:
        p = int(p)
        logp = math.log(p)
        pk = p * p
        while pk <= limit:
            lam[pk] = logp
            pk *= p
    lam.setflags(write=False)
    return lam


def mertens_table(t: int) -> np.ndarray:
    """Running Mertens function: ``M[n] = sum_{k<=n} mu(k)`` for 0 <= n <= t."""
    t = _check_arg(t)
    return np.cumsum(mobius_array(t), dtype=np.int64)


def mertens(t: int) -> int:
    return int(mertens_table(t)[-1])


def coupling_average(t: int, cls: ResidueClass) -> tuple[float, float]:
    """Mean of the restricted Mangoldt function over 1..t and its offset from 1/phi(q).

    Returns ``(average, epsilon)`` with ``epsilon = average - 1/phi(modulus)``.
    """
    t = _check_arg(t)
    q, p = cls.modulus, cls.residue
    if q > 1 and math.gcd(p, q) != 1:
        raise ValueError(f"residue {p} is not coprime to modulus {q}")
    lam = mangoldt_array(t)
    start = p if p >= 1 else q
    average = float(lam[start::q].sum()) / t
    return average, average - 1.0 / euler_phi(q)


def dirichlet_partial(kind: str, s: float, n_terms: int) -> float:
    """Partial Dirichlet series sum_{n<=N} f(n)/n**s for f = Moebius or Mangoldt.

    With s > 1 these approach 1/zeta(s) and -zeta'(s)/zeta(s) respectively.
    """
    if s <= 1:
        raise ValueError("s must exceed 1")
    n_terms = _check_arg(n_terms)
    if kind == "moebius":
        f = mobius_array(n_terms).astype(np.float64)
    elif kind == "mangoldt":
        f = mangoldt_array(n_terms)
    else:
        raise ValueError(f"unknown kind {kind!r}; expected 'moebius' or 'mangoldt'")
    n = np.arange(1, n_terms + 1, dtype=np.float64)
    return float(np.sum(f[1:] / n**s))
