"""mat-core primitives against independent small-case oracles."""

import numpy as np
import pytest

from entmoment import linalg
from entmoment.states import rng_stream

SY = np.array([[0, -1j], [1j, 0]])


def random_complex(dim, rng):
    return rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))


def random_hermitian(dim, rng):
    m = random_complex(dim, rng)
    return (m + m.conj().T) / 2


def bell_projector():
    psi = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    return np.outer(psi, psi.conj())


# ----------------------------------------------------------------- tensor

def test_tensor_identity():
    np.testing.assert_array_equal(linalg.tensor(np.eye(2), np.eye(2)), np.eye(4))


def test_tensor_sigma_yy_antidiagonal():
    # direct Kronecker expansion by hand: anti-diagonal (-1, 1, 1, -1)
    expected = np.zeros((4, 4), dtype=complex)
    expected[0, 3] = -1
    expected[1, 2] = 1
    expected[2, 1] = 1
    expected[3, 0] = -1
    np.testing.assert_allclose(linalg.tensor(SY, SY), expected, atol=1e-15)


def test_tensor_mixed_product_identity():
    rng = rng_stream(1, 0)
    a, b, c, d = (random_complex(2, rng) for _ in range(4))
    lhs = linalg.tensor(a, b) @ linalg.tensor(c, d)
    rhs = linalg.tensor(a @ c, b @ d)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_tensor_rejects_nonfinite():
    with pytest.raises(ValueError):
        linalg.tensor(np.array([[np.nan, 0], [0, 1]]))


# ------------------------------------------------------- partial transpose

def test_partial_transpose_fixes_maximally_mixed():
    m = np.eye(4) / 4
    np.testing.assert_array_equal(linalg.partial_transpose(m, (2, 2)), m)


def test_partial_transpose_bell_gives_half_swap():
    # index-by-index evaluation: PT of |Phi+><Phi+| is the two-qubit swap / 2
    swap = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            swap[j * 2 + i, i * 2 + j] = 1
    np.testing.assert_allclose(
        linalg.partial_transpose(bell_projector(), (2, 2)), swap / 2, atol=1e-15
    )


def test_partial_transpose_involution_bit_exact():
    # dyadic rational entries: the index permutation must round-trip exactly
    rng = rng_stream(2, 0)
    re = rng.integers(-8, 8, size=(6, 6)) / 16.0
    im = rng.integers(-8, 8, size=(6, 6)) / 16.0
    m = re + 1j * im
    m = m + m.conj().T
    for sub in ("A", "B"):
        pt = linalg.partial_transpose(m, (2, 3), sub)
        assert np.array_equal(linalg.partial_transpose(pt, (2, 3), sub), m)
        assert np.trace(pt) == np.trace(m)
        assert linalg.hermiticity_defect(pt) == 0.0


def test_partial_transpose_shape_mismatch():
    with pytest.raises(ValueError):
        linalg.partial_transpose(np.eye(4), (2, 3))


# ---------------------------------------------------------------- eigen ops

def test_herm_eigen_diagonal_sorted_ascending():
    w, _ = linalg.herm_eigen(np.diag([3.0, 1.0, 2.0]))
    np.testing.assert_allclose(w, [1.0, 2.0, 3.0], atol=1e-14)


def test_herm_eigen_pauli_y():
    w, _ = linalg.herm_eigen(SY)
    np.testing.assert_allclose(w, [-1.0, 1.0], atol=1e-14)


def test_herm_eigen_trace_and_reconstruction():
    rng = rng_stream(3, 0)
    m = random_hermitian(8, rng)
    w, v = linalg.herm_eigen(m)
    assert abs(np.sum(w) - np.trace(m).real) < 1e-10
    resid = np.max(np.abs(m - (v * w) @ v.conj().T))
    assert resid <= 1e-9 * np.max(np.abs(m))


def test_herm_eigen_rejects_non_hermitian():
    with pytest.raises(ValueError):
        linalg.herm_eigen(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_herm_eigen_unitary_invariance():
    from entmoment.states import random_unitary

    rng = rng_stream(4, 0)
    for _ in range(10):
        m = random_hermitian(5, rng)
        u = random_unitary(5, rng)
        w1 = linalg.herm_eigenvalues(m)
        w2 = linalg.herm_eigenvalues(u @ m @ u.conj().T)
        np.testing.assert_allclose(w1, w2, atol=1e-9)


def test_general_eigenvalues_triangular():
    m = np.array([[1.0, 5.0, 2.0], [0.0, 2.0, 7.0], [0.0, 0.0, 3.0]])
    np.testing.assert_allclose(sorted(linalg.general_eigenvalues(m).real), [1, 2, 3], atol=1e-12)


def test_general_eigenvalues_bell_rho_rho_tilde():
    rho = bell_projector()
    sig = linalg.tensor(SY, SY)
    rho_tilde = sig @ rho.conj() @ sig
    w = np.sort(linalg.general_eigenvalues(rho @ rho_tilde).real)[::-1]
    np.testing.assert_allclose(w, [1, 0, 0, 0], atol=1e-12)


def test_general_eigenvalues_match_characteristic_polynomial():
    # oracle: Faddeev-LeVerrier coefficients from power traces, rooted via
    # the companion matrix; independent of the QR eigensolver
    rng = rng_stream(5, 0)
    for _ in range(10):
        m = random_complex(4, rng)
        coeffs = [1.0 + 0j]
        mk = np.zeros((4, 4), dtype=complex)
        for k in range(1, 5):
            mk = m @ mk + coeffs[-1] * m
            coeffs.append(-np.trace(mk) / k)
        oracle = np.roots(coeffs)
        got = linalg.general_eigenvalues(m)
        det = np.prod(got)
        assert abs(det - np.linalg.det(m)) <= 1e-8 * max(1.0, abs(det))
        for z in got:
            assert np.min(np.abs(oracle - z)) < 1e-7


# ----------------------------------------------------------- sqrt and norm

def test_matrix_sqrt_psd_identity_and_diag():
    np.testing.assert_allclose(linalg.matrix_sqrt_psd(np.eye(3)), np.eye(3), atol=1e-14)
    np.testing.assert_allclose(
        linalg.matrix_sqrt_psd(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), atol=1e-14
    )


def test_matrix_sqrt_psd_squares_back():
    rng = rng_stream(6, 0)
    g = random_complex(5, rng)
    m = g @ g.conj().T
    s = linalg.matrix_sqrt_psd(m)
    np.testing.assert_allclose(s @ s, m, atol=1e-8 * np.max(np.abs(m)))
    assert linalg.hermiticity_defect(s) < 1e-10


def test_matrix_sqrt_psd_rejects_negative():
    with pytest.raises(ValueError):
        linalg.matrix_sqrt_psd(np.diag([1.0, -0.5]))


def test_trace_norm_values():
    rho = np.eye(4) / 4
    assert abs(linalg.trace_norm(rho) - 1.0) < 1e-12
    pt = linalg.partial_transpose(bell_projector(), (2, 2))
    assert abs(linalg.trace_norm(pt) - 2.0) < 1e-12
    assert abs(linalg.trace_norm(np.diag([0.5, -0.25, 0.75])) - 1.5) < 1e-14


def test_trace_norm_rejects_non_hermitian():
    with pytest.raises(ValueError):
        linalg.trace_norm(np.array([[0.0, 1.0], [0.0, 0.0]]))


# -------------------------------------------------------- shift operators

def test_shift_n2_is_swap():
    swap = np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
    )
    np.testing.assert_array_equal(linalg.cyclic_shift_matrix(2, 2), swap)


def test_shift_trace_is_local_dim():
    for n in (1, 2, 3, 4):
        for d in (2, 3, 4):
            if d**n > 300:
                continue
            v = linalg.cyclic_shift_matrix(n, d)
            assert np.trace(v).real == d


def test_shift_unitary():
    v = linalg.cyclic_shift_matrix(3, 3)
    np.testing.assert_allclose(v @ v.conj().T, np.eye(27), atol=1e-15)


def test_shift_defining_property_n3():
    rng = rng_stream(7, 0)
    a, b, c = (random_complex(2, rng) for _ in range(3))
    v = linalg.cyclic_shift_matrix(3, 2)
    explicit = np.trace(v @ linalg.tensor(a, b, c))
    assert abs(explicit - np.trace(a @ b @ c)) < 1e-12


def test_shift_cap():
    with pytest.raises(ValueError):
        linalg.cyclic_shift_matrix(7, 4)  # 4**7 = 16384 > 4096


# ------------------------------------------------------------ cyclic trace

def test_cyclic_trace_pair_vs_explicit_swap():
    rng = rng_stream(8, 0)
    a, b = random_complex(2, rng), random_complex(2, rng)
    v = linalg.cyclic_shift_matrix(2, 2)
    explicit = np.trace(v @ linalg.tensor(a, b))
    assert abs(linalg.cyclic_trace([a, b]) - np.trace(a @ b)) < 1e-13
    assert abs(linalg.cyclic_trace([a, b]) - explicit) < 1e-12


def test_cyclic_trace_identity_factors():
    assert abs(linalg.cyclic_trace([np.eye(4)] * 3) - 4.0) < 1e-14


def test_cyclic_trace_alternating_factors_vs_materialized():
    # Tr((rho rho~)^2) against the explicit 256-dim shift contraction
    rng = rng_stream(9, 0)
    g = random_complex(4, rng)
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    sig = linalg.tensor(SY, SY)
    rho_tilde = sig @ rho.conj() @ sig
    fast = linalg.cyclic_trace([rho, rho_tilde, rho, rho_tilde])
    v = linalg.cyclic_shift_matrix(4, 4)
    explicit = np.trace(v @ linalg.tensor(rho, rho_tilde, rho, rho_tilde))
    assert abs(fast - np.trace(np.linalg.matrix_power(rho @ rho_tilde, 2))) < 1e-12
    assert abs(fast - explicit) < 1e-10


def test_cyclic_trace_dimension_mismatch():
    with pytest.raises(ValueError):
        linalg.cyclic_trace([np.eye(2), np.eye(3)])


def test_shift_equivalence_sweep():
    # 200 random tuples, n <= 4 and local dim <= 4 within the explicit cap
    rng = rng_stream(10, 0)
    count = 0
    while count < 200:
        n = int(rng.integers(2, 5))
        d = int(rng.integers(2, 5))
        if d**n > 256:
            continue
        count += 1
        mats = [random_complex(d, rng) for _ in range(n)]
        v = linalg.cyclic_shift_matrix(n, d)
        explicit = np.trace(v @ linalg.tensor(*mats))
        fast = linalg.cyclic_trace(mats)
        assert abs(explicit - fast) <= 1e-10 * max(1.0, abs(explicit))


# ------------------------------------------------------ exact power traces

def test_exact_power_traces_match_float_for_well_conditioned():
    rng = rng_stream(11, 0)
    m = random_hermitian(4, rng)
    exact = linalg.exact_power_traces(m, 4)
    power = np.eye(4, dtype=complex)
    for n in range(1, 5):
        power = power @ m
        assert abs(float(exact[n - 1]) - np.trace(power).real) < 1e-10
