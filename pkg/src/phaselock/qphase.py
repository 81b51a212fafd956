"""
Finite-dimensional phase states and phase-locking operators.

Phase states |theta_k> are the columns of the unitary DFT in dimension q. The
locking operator keeps only the primitive phases 2 pi k / q with gcd(k, q) = 1,
and its matrix elements in the number basis are Ramanujan sums. The Bost-Connes
KMS phase values and their two limits live here as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import arith


@dataclass
class StateVector:
    """Complex amplitudes in a q-dimensional space.

    ``normalized`` is False for vectors that are deliberately left with
    norm != 1 (e.g. Galois phase states with a nontrivial multiplicative
    character).
    """

    amplitudes: np.ndarray
    theta0: float = 0.0
    normalized: bool = True

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.normalized and abs(self.norm() - 1.0) > 1e-12:
            raise ValueError(f"state flagged normalized has norm {self.norm()!r}")

    @property
    def dim(self) -> int:
        return len(self.amplitudes)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def inner(self, other: "StateVector") -> complex:
        """<self|other>."""
        return complex(np.vdot(self.amplitudes, np.asarray(other)))

    def renormalized(self) -> "StateVector":
        return StateVector(self.amplitudes / self.norm(), self.theta0, True)

    def __array__(self, dtype=None, copy=None):
        return self.amplitudes if dtype is None else self.amplitudes.astype(dtype)


def _locked_size(q: int, size: int | None) -> int:
    return arith.euler_phi(q) if size is None else int(size)


def phase_state(q: int, k: int, theta0: float = 0.0) -> StateVector:
    """|theta_k> = q^{-1/2} sum_n exp(2 pi i k n / q) |n>."""
    if not 0 <= k < q:
        raise ValueError(f"k must lie in [0, {q})")
    n = np.arange(q)
    return StateVector(np.exp(2j * np.pi * ((k * n) % q) / q) / math.sqrt(q), theta0)


def phase_basis(q: int) -> np.ndarray:
    """Matrix whose column k is |theta_k>."""
    n = np.arange(q)
    return np.exp(2j * np.pi * (np.outer(n, n) % q) / q) / math.sqrt(q)


def pegg_operator(q: int, theta0: float = 0.0) -> np.ndarray:
    """Hermitian phase operator sum_k theta_k |theta_k><theta_k|, theta_k = theta0 + 2 pi k / q."""
    if q < 1:
        raise ValueError("q must be >= 1")
    basis = phase_basis(q)
    thetas = theta0 + 2 * np.pi * np.arange(q) / q
    return (basis * thetas) @ basis.conj().T


def coprime_indices(q: int) -> np.ndarray:
    return np.array([k for k in range(q) if math.gcd(k, q) == 1], dtype=np.int64)


def lock_operator(q: int) -> np.ndarray:
    """Phase-locking operator: the phase operator restricted to k coprime with q."""
    if q < 1:
        raise ValueError("q must be >= 1")
    basis = phase_basis(q)[:, coprime_indices(q)]
    thetas = 2 * np.pi * coprime_indices(q) / q
    return (basis * thetas) @ basis.conj().T


def ramanujan_kernel_matrix(q: int, size: int | None = None) -> np.ndarray:
    """Matrix with entries c_q(n - l) / q for n, l in 0..size-1 (default size = phi(q))."""
    if q < 1:
        raise ValueError("q must be >= 1")
    size = _locked_size(q, size)
    table = np.array([arith.ramanujan_sum(q, d) for d in range(q)], dtype=np.float64)
    idx = np.arange(size)
    return table[(idx[:, None] - idx[None, :]) % q] / q


def beta_state(q: int, beta: float) -> StateVector:
    """Truncated Susskind-Glogower state q^{-1/2} sum_n exp(i n beta) |n>."""
    if q < 1:
        raise ValueError("q must be >= 1")
    return StateVector(np.exp(1j * beta * np.arange(q)) / math.sqrt(q))


def lock_expectation_direct(q: int, beta: float) -> float:
    """sum over coprime k of theta_k |<theta_k|beta>|^2, from the states themselves."""
    ks = coprime_indices(q)
    overlaps = phase_basis(q)[:, ks].conj().T @ beta_state(q, beta).amplitudes
    return float(np.sum(2 * np.pi * ks / q * np.abs(overlaps) ** 2))


def lock_expectation_closed(q: int, beta: float, size: int | None = None, return_imag: bool = False):
    """(pi / q^2) sum_{n,l} c_q(l - n) exp(i beta (n - l)) over n, l in 0..size-1.

    ``size`` defaults to phi(q). With ``return_imag`` the (vanishing)
    imaginary part is returned as well.
    """
    size = _locked_size(q, size)
    kernel = ramanujan_kernel_matrix(q, size) * q  # c_q(n - l), symmetric
    n = np.arange(size)
    phase = np.exp(1j * beta * (n[:, None] - n[None, :]))
    value = np.pi / q**2 * np.sum(kernel.T * phase)
    if return_imag:
        return float(value.real), float(value.imag)
    return float(value.real)


def mangoldt_norm(q: int) -> float:
    """pi Lambda(q) / ln q: pi / r on q = p^r, 0 off prime powers (q = 1 gives 0)."""
    lam = arith.mangoldt(q)
    return math.pi * lam / math.log(q) if lam else 0.0


def kms_value(q: int, beta0: float) -> float:
    """KMS expectation of the phase operator e_q at inverse temperature beta0 > 1."""
    if q < 1:
        raise ValueError("q must be >= 1")
    if beta0 <= 1:
        raise ValueError("beta0 must exceed 1")
    value = q ** (-beta0)
    for p in arith.factorize(q):
        value *= (1.0 - p ** (beta0 - 1.0)) / (1.0 - 1.0 / p)
    return value


def kms_limits(q: int) -> tuple[float, float]:
    """(mu(q)/phi(q), -Lambda(q)/q): the low-temperature value and the slope in eps at beta0 = 1 + eps."""
    return arith.moebius(q) / arith.euler_phi(q), -arith.mangoldt(q) / q


def bost_connes_ops(q: int, a: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Shift |n> -> |a n mod q> and diagonal phase exp(2 pi i k n / q)."""
    if not (0 <= a < q and 0 <= k < q):
        raise ValueError(f"a and k must lie in [0, {q})")
    n = np.arange(q)
    shift = np.zeros((q, q))
    shift[(a * n) % q, n] = 1.0
    phase = np.diag(np.exp(2j * np.pi * ((k * n) % q) / q))
    return shift, phase
