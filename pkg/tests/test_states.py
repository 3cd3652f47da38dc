"""State construction, validation, serialization, determinism."""

import json

import numpy as np
import pytest

from entmoment import states


def test_bell_is_pure_maximally_entangled():
    b = states.bell_state()
    assert abs(np.trace(b.matrix @ b.matrix).real - 1.0) < 1e-12
    psi = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    np.testing.assert_allclose(b.matrix, np.outer(psi, psi.conj()), atol=1e-15)


def test_werner_zero_is_maximally_mixed():
    np.testing.assert_allclose(states.werner_state(0.0).matrix, np.eye(4) / 4, atol=1e-15)


def test_werner_closed_form_spectrum():
    for p in np.linspace(0, 1, 11):
        w = np.sort(np.linalg.eigvalsh(states.werner_state(float(p)).matrix))
        expected = np.sort([(1 + 3 * p) / 4, (1 - p) / 4, (1 - p) / 4, (1 - p) / 4])
        np.testing.assert_allclose(w, expected, atol=1e-12)


def test_werner_out_of_range():
    with pytest.raises(ValueError):
        states.werner_state(1.2)


def test_isotropic_matches_werner_for_two_qubits():
    np.testing.assert_allclose(
        states.isotropic_state(2, 0.7).matrix, states.werner_state(0.7).matrix, atol=1e-15
    )


def test_random_families_pass_invariants():
    rng = states.rng_stream(100, 0)
    for family in ("product-pure", "random-pure", "random-mixed"):
        for dims in ((2, 2), (2, 3), (3, 3)):
            st = states.make_state(family, dims=dims, rng=rng)
            assert st.diagnostics().ok
            assert st.dims == dims


def test_random_pure_purity_one():
    rng = states.rng_stream(101, 0)
    for _ in range(100):
        st = states.random_pure_state((2, 2), rng)
        assert abs(np.trace(st.matrix @ st.matrix).real - 1.0) < 1e-12


def test_random_mixed_purity_below_one():
    rng = states.rng_stream(102, 0)
    for _ in range(100):
        st = states.random_mixed_state((2, 2), rng)
        assert np.trace(st.matrix @ st.matrix).real < 1.0 - 1e-12


def test_determinism_same_seed_same_matrix():
    a = states.random_mixed_state((2, 2), states.rng_stream(7, 3))
    b = states.random_mixed_state((2, 2), states.rng_stream(7, 3))
    assert np.array_equal(a.matrix, b.matrix)
    c = states.random_mixed_state((2, 2), states.rng_stream(7, 4))
    assert not np.array_equal(a.matrix, c.matrix)


def test_validate_clean_state():
    d = states.validate_state(np.eye(4) / 4)
    assert d.hermiticity_defect == 0.0
    assert d.trace_defect == 0.0
    assert d.min_eigenvalue >= 0.0
    assert d.ok


def test_validate_trace_defect():
    m = np.eye(4) / 4
    m[0, 0] += 0.01
    d = states.validate_state(m)
    assert abs(d.trace_defect - 0.01) < 1e-12
    assert d.violations == ("trace",)


def test_validate_negative_eigenvalue():
    d = states.validate_state(np.diag([1.1, -0.1, 0.0, 0.0]))
    assert "positivity" in d.violations
    assert abs(d.min_eigenvalue + 0.1) < 1e-12


def test_density_matrix_rejects_invalid():
    with pytest.raises(ValueError):
        states.DensityMatrix(np.diag([1.1, -0.1, 0.0, 0.0]), (2, 2))
    with pytest.raises(ValueError):
        states.DensityMatrix(np.eye(4) / 4, (2, 3))


def test_density_matrix_is_read_only():
    st = states.bell_state()
    with pytest.raises(ValueError):
        st.matrix[0, 0] = 5.0


# ----------------------------------------------------------- serialization

def test_round_trip_bell_bit_exact():
    b = states.bell_state()
    rt = states.state_from_json(states.state_to_json(b))
    assert np.array_equal(rt.matrix, b.matrix)
    assert rt.dims == b.dims


def test_round_trip_random_preserves_spectrum():
    st = states.random_mixed_state((2, 2), states.rng_stream(55, 0))
    rt = states.state_from_json(states.state_to_json(st))
    assert np.array_equal(rt.matrix, st.matrix)
    np.testing.assert_allclose(
        np.linalg.eigvalsh(rt.matrix), np.linalg.eigvalsh(st.matrix), atol=0
    )


def test_round_trip_werner_eigenvalues():
    st = states.werner_state(0.5)
    rt = states.state_from_json(states.state_to_json(st))
    np.testing.assert_allclose(
        np.linalg.eigvalsh(rt.matrix), np.linalg.eigvalsh(st.matrix), atol=1e-15
    )


def test_reject_wrong_grid_shape():
    record = {"dims": [2, 2], "re": [[0.25] * 5 for _ in range(5)], "im": [[0.0] * 5 for _ in range(5)]}
    with pytest.raises(ValueError, match="grid"):
        states.state_from_json(json.dumps(record))


def test_reject_ragged_grid():
    good = json.loads(states.state_to_json(states.bell_state()))
    good["re"][2] = good["re"][2][:3]
    with pytest.raises(ValueError, match="rectangular"):
        states.state_from_json(json.dumps(good))


def test_reject_missing_keys_and_bad_json():
    with pytest.raises(ValueError):
        states.state_from_json("{not json")
    with pytest.raises(ValueError, match="missing"):
        states.state_from_json(json.dumps({"dims": [2, 2], "re": []}))


def test_reject_invariant_violation_with_residuals():
    record = {
        "dims": [2, 2],
        "re": [[0.5, 0, 0, 0], [0, 0.6, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]],
        "im": [[0.0] * 4 for _ in range(4)],
    }
    with pytest.raises(ValueError, match="trace"):
        states.state_from_json(json.dumps(record))


def test_make_state_dispatch_errors():
    with pytest.raises(ValueError, match="unknown state family"):
        states.make_state("ghz")
    with pytest.raises(ValueError, match="mixing weight"):
        states.make_state("werner")
    with pytest.raises(ValueError, match="rng"):
        states.make_state("random-mixed")
