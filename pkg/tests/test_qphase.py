import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from phaselock import arith
from phaselock.qphase import (
    StateVector,
    beta_state,
    bost_connes_ops,
    kms_limits,
    kms_value,
    lock_expectation_closed,
    lock_expectation_direct,
    lock_operator,
    mangoldt_norm,
    pegg_operator,
    phase_basis,
    phase_state,
    ramanujan_kernel_matrix,
)


def test_phase_state_examples():
    assert np.allclose(phase_state(2, 1).amplitudes, np.array([1, -1]) / math.sqrt(2), atol=1e-15)
    assert np.allclose(phase_state(7, 0).amplitudes, np.full(7, 1 / math.sqrt(7)))
    assert phase_state(3, 1, theta0=0.25).theta0 == 0.25
    with pytest.raises(ValueError):
        phase_state(3, 3)


def test_phase_states_orthonormal_and_complete():
    for q in range(1, 65):
        B = phase_basis(q)
        assert np.abs(B.conj().T @ B - np.eye(q)).max() < 1e-12
        assert np.abs(B @ B.conj().T - np.eye(q)).max() < 1e-12


def test_phase_basis_columns_match_states():
    for q in (1, 5, 12):
        B = phase_basis(q)
        for k in range(q):
            assert np.allclose(B[:, k], phase_state(q, k).amplitudes, atol=1e-14)


def test_state_vector_normalization_guard():
    with pytest.raises(ValueError):
        StateVector(np.array([1.0, 1.0]))
    v = StateVector(np.array([3.0, 4.0]), normalized=False)
    assert v.norm() == 5.0
    assert v.renormalized().norm() == pytest.approx(1.0)


def test_pegg_spectrum_and_trace():
    ev = np.linalg.eigvalsh(pegg_operator(4))
    assert np.allclose(np.sort(ev), [0, np.pi / 2, np.pi, 3 * np.pi / 2], atol=1e-12)
    for q, th0 in [(5, 0.0), (9, 0.3), (16, -1.0)]:
        assert np.trace(pegg_operator(q, th0)).real == pytest.approx(q * th0 + np.pi * (q - 1))


def test_pegg_hermitian():
    for q in range(1, 65):
        P = pegg_operator(q)
        assert np.abs(P - P.conj().T).max() < 1e-12


def test_lock_operator_examples():
    assert np.trace(lock_operator(4)).real == pytest.approx(2 * np.pi)
    assert np.abs(lock_operator(1)).max() == 0


def test_lock_operator_rank_and_hermitian():
    for q in range(1, 51):
        L = lock_operator(q)
        assert np.abs(L - L.conj().T).max() < 1e-12
        ev = np.linalg.eigvalsh(L)
        expected = arith.euler_phi(q) - (1 if q == 1 else 0)  # theta_0 = 0 contributes nothing
        assert int(np.sum(np.abs(ev) > 1e-9)) == expected
        ks = [k for k in range(q) if math.gcd(k, q) == 1 and k > 0]
        assert np.allclose(np.sort(ev[np.abs(ev) > 1e-9]), sorted(2 * np.pi * k / q for k in ks))


def test_kernel_examples():
    assert np.array_equal(ramanujan_kernel_matrix(2), np.array([[0.5]]))
    assert np.allclose(ramanujan_kernel_matrix(4, 4)[0], np.array([2, 0, -2, 0]) / 4)


def test_kernel_real_symmetric_toeplitz():
    for q in range(1, 51):
        K = ramanujan_kernel_matrix(q, q)
        assert np.isrealobj(K)
        assert np.array_equal(K, K.T)
        assert np.array_equal(K[1:, 1:], K[:-1, :-1])


def test_beta_state():
    assert np.allclose(beta_state(6, 0.0).amplitudes, np.full(6, 1 / math.sqrt(6)))
    for q in range(1, 129):
        assert beta_state(q, 0.7).norm() == pytest.approx(1.0, abs=1e-12)


@given(st.integers(1, 40), st.floats(-10, 10))
def test_beta_overlap_geometric_series(q, beta):
    psi = beta_state(q, beta)
    for k in range(q):
        x = math.remainder(beta - 2 * math.pi * k / q, 2 * math.pi)
        # (1/q) sum_n e^{inx} = e^{i(q-1)x/2} sin(qx/2) / (q sin(x/2))
        ratio = 1.0 if x == 0 else math.sin(q * x / 2) / (q * math.sin(x / 2))
        closed = cmath.exp(0.5j * (q - 1) * x) * ratio
        assert abs(phase_state(q, k).inner(psi) - closed) < 1e-9


def test_lock_expectation_direct_examples():
    assert lock_expectation_direct(1, 0.3) == 0
    assert lock_expectation_direct(2, 0.0) == pytest.approx(0.0, abs=1e-15)
    for q in range(1, 51):
        for beta in np.linspace(-3, 3, 7):
            v = lock_expectation_direct(q, beta)
            assert 0 <= v < 2 * np.pi


def test_lock_expectation_closed_examples():
    assert lock_expectation_closed(2, 0.0) == pytest.approx(math.pi / 4)
    for q in range(1, 51):
        for beta in (0.0, 0.4, 1.0, 2.5):
            _, imag = lock_expectation_closed(q, beta, return_imag=True)
            assert abs(imag) < 1e-10


def test_closed_form_prime_power_peaks():
    qs = range(2, 51)
    vals = {q: lock_expectation_closed(q, 1.0) for q in qs}
    pp = [vals[q] for q in qs if arith.mangoldt(q) != 0]
    comp = [vals[q] for q in qs if arith.mangoldt(q) == 0]
    assert np.mean(pp) > np.mean(comp)
    zero = np.mean([lock_expectation_closed(q, 0.0) for q in qs])
    assert zero <= np.mean(list(vals.values()))


def test_mangoldt_norm():
    assert mangoldt_norm(1) == 0
    assert mangoldt_norm(7) == pytest.approx(math.pi)
    assert mangoldt_norm(8) == pytest.approx(math.pi / 3)
    assert mangoldt_norm(6) == 0


def test_kms_examples():
    assert kms_value(1, 2.0) == 1
    assert kms_value(2, 3.0) == pytest.approx(-0.75)
    assert abs(kms_value(4, 20.0)) < 1e-4
    with pytest.raises(ValueError):
        kms_value(3, 1.0)


def kms_oracle(q, beta0):
    # own trial division, no shared factorization code
    value = q**-beta0
    n = q
    p = 2
    while n > 1:
        if n % p == 0:
            while n % p == 0:
                n //= p
            value *= (1 - p ** (beta0 - 1)) / (1 - 1 / p)
        p += 1
    return value


@given(st.integers(1, 500), st.floats(1.01, 30))
def test_kms_matches_oracle(q, beta0):
    assert kms_value(q, beta0) == pytest.approx(kms_oracle(q, beta0), rel=1e-12, abs=1e-300)


def test_kms_low_temperature_limit():
    for q in range(1, 31):
        low, _ = kms_limits(q)
        assert abs(kms_value(q, 20.0) - low) < 1e-3


def test_kms_limits_examples():
    assert kms_limits(2)[0] == -1
    low, crit = kms_limits(6)
    assert low == 0.5 and crit == 0
    assert kms_limits(9)[1] == pytest.approx(-math.log(3) / 9)


def test_bost_connes_examples():
    shift, _ = bost_connes_ops(7, 1, 0)
    assert np.array_equal(shift, np.eye(7))
    for q in range(2, 20):
        for a in range(1, q):
            S, _ = bost_connes_ops(q, a, 0)
            if math.gcd(a, q) == 1:
                assert np.array_equal(S @ S.T, np.eye(q))
    S, P = bost_connes_ops(5, 2, 1)
    ket = np.zeros(5)
    ket[1] = 1
    out = P @ S @ ket
    expected = np.zeros(5, complex)
    expected[2] = cmath.exp(4j * math.pi / 5)
    assert np.allclose(out, expected)
    with pytest.raises(ValueError):
        bost_connes_ops(5, 5, 0)
