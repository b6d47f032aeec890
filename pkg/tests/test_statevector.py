"""Statevector construction, gate kernels, and observable expectations."""
import numpy as np
import pytest

from qntksim import (
    Observable,
    Statevector,
    apply_cnot,
    apply_rx,
    apply_rz,
    basis_state,
    expectation,
    inner_product,
)


def random_state(n, rng):
    v = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
    return Statevector(n, v / np.linalg.norm(v))


# --- basis_state ---

def test_basis_state_single_qubit():
    assert np.array_equal(basis_state(1, 0).amplitudes, [1, 0])


def test_basis_state_two_qubits_index_three():
    assert np.array_equal(basis_state(2, 3).amplitudes, [0, 0, 0, 1])


def test_basis_state_index_out_of_range():
    with pytest.raises(ValueError):
        basis_state(3, 8)
    with pytest.raises(ValueError):
        basis_state(2, -1)


def test_statevector_rejects_wrong_length():
    with pytest.raises(ValueError):
        Statevector(2, np.zeros(3, dtype=complex))


# --- rotations ---

def test_rx_zero_angle_is_identity():
    rng = np.random.default_rng(0)
    s = random_state(3, rng)
    out = apply_rx(s, 1, 0.0)
    np.testing.assert_allclose(out.amplitudes, s.amplitudes, atol=1e-15)


def test_rx_pi_on_zero_gives_minus_i_one():
    out = apply_rx(basis_state(1, 0), 0, np.pi)
    np.testing.assert_allclose(out.amplitudes, [0, -1j], atol=1e-15)


def test_rx_half_pi_on_zero():
    out = apply_rx(basis_state(1, 0), 0, np.pi / 2)
    expected = np.array([1, -1j]) / np.sqrt(2)
    np.testing.assert_allclose(out.amplitudes, expected, atol=1e-15)


def test_rz_zero_angle_is_identity():
    rng = np.random.default_rng(1)
    s = random_state(2, rng)
    np.testing.assert_allclose(apply_rz(s, 0, 0.0).amplitudes, s.amplitudes, atol=1e-15)


def test_rz_pi_on_one_gives_i_phase():
    out = apply_rz(basis_state(1, 1), 0, np.pi)
    np.testing.assert_allclose(out.amplitudes, [0, 1j], atol=1e-15)


@pytest.mark.parametrize("angle", [0.0, 0.3, np.pi, 4.5])
def test_rz_preserves_zero_projector_expectation(angle):
    out = apply_rz(basis_state(1, 0), 0, angle)
    assert expectation(out, Observable.zero_projector()) == pytest.approx(1.0, abs=1e-14)


def test_rotation_qubit_out_of_range():
    s = basis_state(2, 0)
    with pytest.raises(ValueError):
        apply_rx(s, 2, 0.1)
    with pytest.raises(ValueError):
        apply_rz(s, -1, 0.1)


@pytest.mark.parametrize("apply", [apply_rx, apply_rz])
def test_rotation_inverse(apply):
    rng = np.random.default_rng(2)
    s = random_state(4, rng)
    theta = rng.uniform(0, 2 * np.pi)
    out = apply(apply(s, 2, theta), 2, -theta)
    np.testing.assert_allclose(out.amplitudes, s.amplitudes, atol=1e-12)


# --- CNOT ---

def test_cnot_truth_table():
    # qubit 0 set (= index 1), control 0 -> target 1 flips to index 3
    out = apply_cnot(basis_state(2, 1), 0, 1)
    np.testing.assert_array_equal(out.amplitudes, basis_state(2, 3).amplitudes)


def test_cnot_fixes_all_zeros():
    out = apply_cnot(basis_state(2, 0), 0, 1)
    np.testing.assert_array_equal(out.amplitudes, basis_state(2, 0).amplitudes)


def test_cnot_builds_bell_pair():
    plus = Statevector(2, np.array([1, 1, 0, 0]) / np.sqrt(2))
    out = apply_cnot(plus, 0, 1)
    expected = np.array([1, 0, 0, 1]) / np.sqrt(2)
    np.testing.assert_allclose(out.amplitudes, expected, atol=1e-15)


def test_cnot_squared_is_identity_exactly():
    rng = np.random.default_rng(3)
    s = random_state(3, rng)
    out = apply_cnot(apply_cnot(s, 0, 2), 0, 2)
    np.testing.assert_array_equal(out.amplitudes, s.amplitudes)


def test_cnot_rejects_equal_control_target():
    with pytest.raises(ValueError):
        apply_cnot(basis_state(2, 0), 1, 1)


# --- expectation ---

def test_projector_on_all_zeros():
    assert expectation(basis_state(3, 0), Observable.zero_projector()) == 1.0


def test_pauli_y_on_zero_state():
    assert expectation(basis_state(1, 0), Observable.pauli("y")) == pytest.approx(0.0)


def test_pauli_y_eigenstate():
    s = Statevector(1, np.array([1, 1j]) / np.sqrt(2))
    assert expectation(s, Observable.pauli("y")) == pytest.approx(1.0)


def test_pauli_z_and_x_small_cases():
    assert expectation(basis_state(1, 0), Observable.pauli("z")) == pytest.approx(1.0)
    assert expectation(basis_state(1, 1), Observable.pauli("z")) == pytest.approx(-1.0)
    plus = Statevector(1, np.array([1, 1]) / np.sqrt(2))
    assert expectation(plus, Observable.pauli("x")) == pytest.approx(1.0)


def test_projector_expectation_equals_first_amplitude_squared():
    rng = np.random.default_rng(4)
    for _ in range(5):
        s = random_state(4, rng)
        want = abs(s.amplitudes[0]) ** 2
        assert expectation(s, Observable.zero_projector()) == pytest.approx(want, abs=1e-14)


def test_expectation_ranges():
    rng = np.random.default_rng(5)
    for _ in range(10):
        s = random_state(3, rng)
        p = expectation(s, Observable.zero_projector())
        y = expectation(s, Observable.pauli("y", 1))
        assert 0.0 <= p <= 1.0
        assert -1.0 <= y <= 1.0


def test_observable_site_out_of_range():
    with pytest.raises(ValueError):
        expectation(basis_state(2, 0), Observable.pauli("y", 5))


def test_observable_trace_squared():
    assert Observable.zero_projector().tr_o_squared(6) == 1.0
    assert Observable.pauli("y").tr_o_squared(6) == 64.0


def test_observable_validation():
    with pytest.raises(ValueError):
        Observable("banana")
    with pytest.raises(ValueError):
        Observable.pauli("w")


# --- inner product ---

def test_inner_product_examples():
    z0, z1 = basis_state(1, 0), basis_state(1, 1)
    plus = Statevector(1, np.array([1, 1]) / np.sqrt(2))
    assert inner_product(z0, z0) == pytest.approx(1.0)
    assert inner_product(z0, z1) == pytest.approx(0.0)
    assert inner_product(plus, z0) == pytest.approx(1 / np.sqrt(2))


def test_inner_product_conjugate_linear_in_first():
    a = Statevector(1, np.array([1j, 0]))
    b = basis_state(1, 0)
    assert inner_product(a, b) == pytest.approx(-1j)


def test_inner_product_dimension_mismatch():
    with pytest.raises(ValueError):
        inner_product(basis_state(1, 0), basis_state(2, 0))


# --- invariants ---

def test_norm_preserved_over_long_gate_sequence():
    rng = np.random.default_rng(6)
    s = random_state(4, rng)
    for _ in range(10_000):
        kind = rng.integers(3)
        if kind == 0:
            s = apply_rx(s, int(rng.integers(4)), float(rng.uniform(0, 2 * np.pi)))
        elif kind == 1:
            s = apply_rz(s, int(rng.integers(4)), float(rng.uniform(0, 2 * np.pi)))
        else:
            c = int(rng.integers(4))
            t = (c + 1 + int(rng.integers(3))) % 4
            s = apply_cnot(s, c, t)
    assert abs(s.norm - 1.0) <= 1e-10


def test_gates_preserve_inner_products():
    rng = np.random.default_rng(7)
    a, b = random_state(3, rng), random_state(3, rng)
    before = inner_product(a, b)
    theta = 1.234
    checks = [
        (apply_rx(a, 1, theta), apply_rx(b, 1, theta)),
        (apply_rz(a, 2, theta), apply_rz(b, 2, theta)),
        (apply_cnot(a, 0, 2), apply_cnot(b, 0, 2)),
    ]
    for ga, gb in checks:
        assert inner_product(ga, gb) == pytest.approx(before, abs=1e-12)
