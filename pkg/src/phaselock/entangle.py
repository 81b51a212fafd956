"""
Maximally entangled two-qudit bases: Fourier (Bell) and Galois-Fourier families.

Pair index (n, n') is flattened as ``n * q + n'`` with both labels in the
canonical field-element enumeration of :mod:`phaselock.galois`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .galois import GaloisField

ENTANGLE_COLUMNS = ("family", "q", "u", "a_or_k", "b", "max_gram_dev", "max_ptrace_dev", "purity")


@dataclass
class BipartiteState:
    q: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (self.q * self.q,):
            raise ValueError(f"expected {self.q * self.q} amplitudes")
        if abs(np.linalg.norm(self.amplitudes) - 1.0) > 1e-12:
            raise ValueError("bipartite state must have unit norm")

    def matrix(self) -> np.ndarray:
        """Amplitudes as a q x q matrix M[n, n']."""
        return self.amplitudes.reshape(self.q, self.q)


def bell_fourier(q: int, u: int, k: int) -> BipartiteState:
    """|B_{u,k}> = q^{-1/2} sum_n w_q^{k n} |n, n + u mod q>."""
    if not (0 <= u < q and 0 <= k < q):
        raise ValueError(f"u and k must lie in [0, {q})")
    n = np.arange(q)
    amps = np.zeros(q * q, dtype=np.complex128)
    amps[n * q + (n + u) % q] = np.exp(2j * np.pi * ((k * n) % q) / q) / math.sqrt(q)
    return BipartiteState(q, amps)


def bell_galois(F: GaloisField, u: int, a: int, b: int) -> BipartiteState:
    """|B^a_{u,b}> = q^{-1/2} sum_n w_p^{tr((a n + b) n)} |n, n + u> with field arithmetic."""
    q = F.q
    n = F.elements()
    tr = F.trace(F.mul(F.add(F.mul(a, n), np.full(q, b)), n))
    amps = np.zeros(q * q, dtype=np.complex128)
    amps[n * q + F.add(n, np.full(q, u))] = np.exp(2j * np.pi * tr / F.p) / math.sqrt(q)
    return BipartiteState(q, amps)


def partial_trace_2(state: BipartiteState) -> np.ndarray:
    """Reduced density matrix of the first subsystem."""
    M = state.matrix()
    return M @ M.conj().T


def is_density_matrix(rho: np.ndarray, tol: float = 1e-10) -> bool:
    herm = np.allclose(rho, rho.conj().T, atol=tol)
    unit = abs(np.trace(rho) - 1.0) < tol
    return herm and unit and np.linalg.eigvalsh((rho + rho.conj().T) / 2).min() >= -tol


def purity(rho: np.ndarray) -> float:
    return float(np.real(np.trace(rho @ rho)))


@dataclass
class EntangledBasesReport:
    family: str
    q: int
    n_bases: int
    n_states: int
    max_gram_dev: float
    max_unbiased_dev: float | None
    max_ptrace_dev: float
    max_purity_dev: float
    rows: list = field(default_factory=list, repr=False)

    def summary(self) -> dict:
        return {
            "family": self.family,
            "q": self.q,
            "n_bases": self.n_bases,
            "n_states": self.n_states,
            "max_gram_dev": self.max_gram_dev,
            "max_unbiased_dev": self.max_unbiased_dev,
            "max_ptrace_dev": self.max_ptrace_dev,
            "max_purity_dev": self.max_purity_dev,
        }


def _family_states(family: str, field_or_q):
    """Yield (u, label, b, basis_key, state)."""
    if family == "fourier":
        q = int(field_or_q)
        for u in range(q):
            for k in range(q):
                yield u, k, None, (u,), bell_fourier(q, u, k)
    elif family == "galois":
        F = field_or_q
        for u in range(F.q):
            for a in range(F.q):
                for b in range(F.q):
                    yield u, a, b, (u, a), bell_galois(F, u, a, b)
    else:
        raise ValueError(f"unknown family {family!r}")


def verify_entangled_bases(field_or_q, family: str = "fourier") -> EntangledBasesReport:
    """Check every state of a family for orthonormality, unbiasedness and maximal entanglement.

    Fourier bases are labelled by u (states by k). Galois bases are labelled
    by (u, a) with b the intra-basis label; bases sharing u are checked for
    mutual unbiasedness.
    """
    if family == "galois" and not isinstance(field_or_q, GaloisField):
        raise TypeError("the galois family needs a GaloisField")
    q = field_or_q.q if family == "galois" else int(field_or_q)
    entries = list(_family_states(family, field_or_q))
    vecs = np.array([e[4].amplitudes for e in entries])
    keys = [e[3] for e in entries]
    gram = vecs.conj() @ vecs.T
    key_ids = {k: i for i, k in enumerate(dict.fromkeys(keys))}
    label = np.array([key_ids[k] for k in keys])
    same = label[:, None] == label[None, :]
    gram_dev = np.where(same, np.abs(gram - np.eye(len(entries))), 0.0)

    unbiased_dev = None
    if family == "galois":
        u = np.array([e[0] for e in entries])
        cross = (u[:, None] == u[None, :]) & ~same
        unbiased_dev = float(np.abs(np.abs(gram[cross]) ** 2 - 1.0 / q).max()) if cross.any() else 0.0

    target = np.eye(q) / q
    rows, pt_devs, pur_devs = [], [], []
    for i, (u_i, lab, b, _, state) in enumerate(entries):
        rho = partial_trace_2(state)
        pt = float(np.abs(rho - target).max())
        pur = purity(rho)
        pt_devs.append(pt)
        pur_devs.append(abs(pur - 1.0 / q))
        rows.append((family, q, u_i, lab, "" if b is None else b, float(gram_dev[i].max()), pt, pur))
    return EntangledBasesReport(
        family,
        q,
        len(key_ids),
        len(entries),
        float(gram_dev.max()),
        unbiased_dev,
        max(pt_devs),
        max(pur_devs),
        rows,
    )
