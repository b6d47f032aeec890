"""Residual errors, circuit gradients, tangent-kernel values, and dynamics.

The residual of an encoded sample is eps = <x|U^dag O U|x> - y and the
tangent kernel of two samples is the dot product of their residual gradient
vectors.  Gradients come from a reverse-mode adjoint sweep: one forward pass
and one backward pass, O(L) gate applications total.  A two-point shift rule
(exact because every rotation generator has eigenvalues +-1/2) and central
finite differences serve as independent oracles.
"""
from __future__ import annotations

from dataclasses import dataclass
import warnings

import numpy as np

from .ansatz import ParamCircuit, ParamVector, run
from .statevector import (
    Observable,
    Statevector,
    _cnot_inplace,
    _observable_apply,
    _pauli_apply,
    _rx_inplace,
    _rz_inplace,
    expectation,
)

__all__ = [
    "LabeledState",
    "KernelMatrix",
    "residual",
    "gradient",
    "gradient_param_shift",
    "gradient_finite_diff",
    "qntk_value",
    "gram_matrix",
    "lazy_dynamics",
    "gd_train",
]


@dataclass(frozen=True)
class LabeledState:
    state: Statevector
    label: float = 0.0


@dataclass(frozen=True)
class KernelMatrix:
    """Symmetric PSD Gram matrix of tangent-kernel values."""

    entries: np.ndarray

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def min_max_eigenvalues(self) -> tuple[float, float]:
        eig = np.linalg.eigvalsh(self.entries)
        return float(eig[0]), float(eig[-1])


def _expectation_of(circuit: ParamCircuit, values: np.ndarray,
                    state: Statevector, obs: Observable) -> float:
    return expectation(run(circuit, ParamVector(values), state), obs)


def residual(x: LabeledState, circuit: ParamCircuit, params: ParamVector,
             obs: Observable) -> float:
    """Model expectation on the encoded input minus its label."""
    obs.validate_for(circuit.num_qubits)
    return _expectation_of(circuit, np.asarray(params.values), x.state, obs) - x.label


def gradient(x: LabeledState, circuit: ParamCircuit, params: ParamVector,
             obs: Observable) -> np.ndarray:
    """Exact gradient of the residual w.r.t. every angle (adjoint sweep).

    With psi_k the state after gate k and phi_k = (U_{k+1}..U_L)^dag O psi_L,
    the derivative for a rotation exp(-i theta P/2) at position k is
    Im <phi_k| P |psi_k>.  The label is constant, so this equals the gradient
    of the raw expectation.
    """
    obs.validate_for(circuit.num_qubits)
    values = np.asarray(params.values, dtype=np.float64)
    if values.shape != (circuit.param_count,):
        raise ValueError(
            f"parameter vector has length {values.shape}, expected {circuit.param_count}"
        )
    n = circuit.num_qubits
    psi = run(circuit, ParamVector(values), x.state).amplitudes
    phi = _observable_apply(psi, obs)
    grad = np.zeros(circuit.param_count)
    for gate in reversed(circuit.gates):
        if gate.kind == "cnot":
            _cnot_inplace(psi, n, gate.qubit, gate.target)
            _cnot_inplace(phi, n, gate.qubit, gate.target)
            continue
        axis = "x" if gate.kind == "rx" else "z"
        grad[gate.param_slot] = np.vdot(phi, _pauli_apply(psi, gate.qubit, axis)).imag
        angle = values[gate.param_slot]
        apply = _rx_inplace if gate.kind == "rx" else _rz_inplace
        apply(psi, gate.qubit, -angle)
        apply(phi, gate.qubit, -angle)
    return grad


def gradient_param_shift(x: LabeledState, circuit: ParamCircuit, params: ParamVector,
                         obs: Observable) -> np.ndarray:
    """Two-point shift-rule gradient: (eps(+pi/2) - eps(-pi/2)) / 2 per angle.

    Costs two circuit evaluations per parameter; used as an exact oracle for
    the adjoint sweep.
    """
    obs.validate_for(circuit.num_qubits)
    values = np.asarray(params.values, dtype=np.float64)
    grad = np.zeros(circuit.param_count)
    for k in range(circuit.param_count):
        shifted = values.copy()
        shifted[k] += np.pi / 2
        plus = _expectation_of(circuit, shifted, x.state, obs)
        shifted[k] -= np.pi
        minus = _expectation_of(circuit, shifted, x.state, obs)
        grad[k] = (plus - minus) / 2.0
    return grad


def gradient_finite_diff(x: LabeledState, circuit: ParamCircuit, params: ParamVector,
                         obs: Observable, step: float = 1e-5) -> np.ndarray:
    """Central-difference gradient, the tertiary oracle."""
    obs.validate_for(circuit.num_qubits)
    values = np.asarray(params.values, dtype=np.float64)
    grad = np.zeros(circuit.param_count)
    for k in range(circuit.param_count):
        shifted = values.copy()
        shifted[k] += step
        plus = _expectation_of(circuit, shifted, x.state, obs)
        shifted[k] -= 2 * step
        minus = _expectation_of(circuit, shifted, x.state, obs)
        grad[k] = (plus - minus) / (2.0 * step)
    return grad


def qntk_value(a: LabeledState, b: LabeledState, circuit: ParamCircuit,
               params: ParamVector, obs: Observable) -> float:
    """Tangent-kernel value K(a, b): dot product of the two gradients."""
    if a.state.num_qubits != b.state.num_qubits:
        raise ValueError("inputs must have the same number of qubits")
    ga = gradient(a, circuit, params, obs)
    gb = gradient(b, circuit, params, obs)
    return float(ga @ gb)


def gram_matrix(dataset: list[LabeledState], circuit: ParamCircuit,
                params: ParamVector, obs: Observable) -> KernelMatrix:
    """Kernel matrix over a dataset, assembled as J J^T from one gradient per point."""
    if not dataset:
        raise ValueError("dataset must be nonempty")
    jac = np.stack([gradient(x, circuit, params, obs) for x in dataset])
    return KernelMatrix(jac @ jac.T)


def lazy_dynamics(kernel: KernelMatrix, eps0: np.ndarray, eta: float,
                  steps: int) -> np.ndarray:
    """Frozen-kernel residual trajectory eps(t) = (I - eta K)^t eps(0).

    Returns an array of shape (steps + 1, m) including the initial residuals.
    """
    if eta < 0:
        raise ValueError(f"learning rate must be nonnegative, got {eta}")
    eps = np.asarray(eps0, dtype=np.float64).ravel()
    k = kernel.entries
    if k.shape[0] != eps.shape[0]:
        raise ValueError(
            f"kernel size {k.shape[0]} does not match residual vector length {eps.shape[0]}"
        )
    top = np.linalg.eigvalsh(k)[-1]
    if eta * top >= 2.0:
        warnings.warn(
            f"eta * max-eigenvalue = {eta * top:.3g} >= 2; "
            "linearized dynamics will not contract",
            RuntimeWarning,
        )
    out = np.empty((steps + 1, eps.size))
    out[0] = eps
    for t in range(1, steps + 1):
        eps = eps - eta * (k @ eps)
        out[t] = eps
    return out


def gd_train(dataset: list[LabeledState], circuit: ParamCircuit,
             params: ParamVector, obs: Observable, eta: float,
             steps: int) -> tuple[np.ndarray, np.ndarray]:
    """Full gradient descent on the half-sum-of-squares residual loss.

    Each step updates theta <- theta - eta * J^T eps with J the residual
    Jacobian at the current parameters.  Returns (residual trajectory of
    shape (steps+1, m), parameter history of shape (steps+1, L)).
    """
    if not dataset:
        raise ValueError("dataset must be nonempty")
    theta = np.asarray(params.values, dtype=np.float64).copy()
    m = len(dataset)
    eps_hist = np.empty((steps + 1, m))
    theta_hist = np.empty((steps + 1, theta.size))
    for t in range(steps + 1):
        pv = ParamVector(theta)
        eps = np.array([residual(x, circuit, pv, obs) for x in dataset])
        eps_hist[t] = eps
        theta_hist[t] = theta
        if t == steps:
            break
        jac = np.stack([gradient(x, circuit, pv, obs) for x in dataset])
        theta = theta - eta * (jac.T @ eps)
    return eps_hist, theta_hist
