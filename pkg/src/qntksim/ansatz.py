"""Hardware-efficient variational circuit and input-state encodings.

The circuit repeats a block of per-qubit R_x, R_z rotations (one fresh
parameter each) followed by a CNOT chain, so a depth-d circuit on n qubits
carries 2*n*d trainable angles.  Maximally expressive encodings are modeled
by sampling the encoded states directly: normalized complex Gaussian vectors
are exactly Haar-distributed pure states, and per-qubit Gaussians give the
product-of-single-qubit-Haar ensemble.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .statevector import (
    Statevector,
    _cnot_inplace,
    _rx_inplace,
    _rz_inplace,
)

__all__ = [
    "Gate",
    "ParamCircuit",
    "ParamVector",
    "build_circuit",
    "run",
    "amplitude_encode",
    "sample_haar_state",
    "sample_local_haar_state",
    "init_params",
]


@dataclass(frozen=True)
class Gate:
    """One gate: kind in {"rx", "rz", "cnot"}.

    Rotations carry (qubit, param_slot); CNOT carries (control, target).
    """

    kind: str
    qubit: int
    param_slot: int = -1
    target: int = -1


@dataclass(frozen=True)
class ParamCircuit:
    num_qubits: int
    num_blocks: int
    gates: tuple[Gate, ...]
    param_count: int
    entangler: str = "chain"


@dataclass(frozen=True)
class ParamVector:
    values: np.ndarray

    def __len__(self) -> int:
        return len(self.values)


def build_circuit(num_qubits: int, num_blocks: int, entangler: str = "chain") -> ParamCircuit:
    """Depth-``num_blocks`` circuit: per block Rx,Rz on every qubit then a CNOT chain.

    ``entangler`` is "chain" (CNOT q->q+1 for q=0..n-2) or "ring" (chain plus
    CNOT n-1 -> 0).  Parameter slots are assigned in gate order, so the count
    is 2 * num_qubits * num_blocks either way.
    """
    if num_qubits < 1:
        raise ValueError(f"num_qubits must be >= 1, got {num_qubits}")
    if num_blocks < 1:
        raise ValueError(f"num_blocks must be >= 1, got {num_blocks}")
    if entangler not in ("chain", "ring"):
        raise ValueError(f"entangler must be 'chain' or 'ring', got {entangler!r}")
    gates: list[Gate] = []
    slot = 0
    for _ in range(num_blocks):
        for q in range(num_qubits):
            gates.append(Gate("rx", q, param_slot=slot))
            slot += 1
            gates.append(Gate("rz", q, param_slot=slot))
            slot += 1
        for q in range(num_qubits - 1):
            gates.append(Gate("cnot", q, target=q + 1))
        if entangler == "ring" and num_qubits > 1:
            gates.append(Gate("cnot", num_qubits - 1, target=0))
    return ParamCircuit(num_qubits, num_blocks, tuple(gates), slot, entangler)


def _apply_gates_inplace(amps: np.ndarray, num_qubits: int,
                         gates: Iterable[Gate], values: np.ndarray) -> None:
    for g in gates:
        if g.kind == "rx":
            _rx_inplace(amps, g.qubit, values[g.param_slot])
        elif g.kind == "rz":
            _rz_inplace(amps, g.qubit, values[g.param_slot])
        else:
            _cnot_inplace(amps, num_qubits, g.qubit, g.target)


def run(circuit: ParamCircuit, params: ParamVector, state: Statevector) -> Statevector:
    """Apply the circuit's gates in order to a copy of ``state``."""
    if state.num_qubits != circuit.num_qubits:
        raise ValueError(
            f"state has {state.num_qubits} qubits, circuit expects {circuit.num_qubits}"
        )
    values = np.asarray(params.values, dtype=np.float64)
    if values.shape != (circuit.param_count,):
        raise ValueError(
            f"parameter vector has length {values.shape}, expected {circuit.param_count}"
        )
    out = state.copy()
    _apply_gates_inplace(out.amplitudes, circuit.num_qubits, circuit.gates, values)
    return out


def amplitude_encode(data: Sequence[complex], num_qubits: int | None = None) -> Statevector:
    """Normalize ``data`` into amplitudes, zero-padded up to 2^num_qubits.

    When ``num_qubits`` is omitted the smallest register that fits is used.
    """
    vec = np.asarray(data, dtype=np.complex128).ravel()
    if vec.size == 0:
        raise ValueError("cannot encode an empty vector")
    norm = np.linalg.norm(vec)
    if norm == 0.0:
        raise ValueError("cannot amplitude-encode the zero vector")
    if num_qubits is None:
        num_qubits = max(1, int(np.ceil(np.log2(vec.size))))
    dim = 1 << num_qubits
    if vec.size > dim:
        raise ValueError(f"data length {vec.size} exceeds 2**{num_qubits}")
    amps = np.zeros(dim, dtype=np.complex128)
    amps[: vec.size] = vec / norm
    return Statevector(num_qubits, amps)


def sample_haar_state(num_qubits: int, rng: np.random.Generator) -> Statevector:
    """Haar-random pure state: normalized vector of iid complex Gaussians."""
    dim = 1 << num_qubits
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    vec /= np.linalg.norm(vec)
    return Statevector(num_qubits, vec)


def sample_local_haar_state(num_qubits: int, rng: np.random.Generator) -> Statevector:
    """Product of independent single-qubit Haar states."""
    factors = []
    for _ in range(num_qubits):
        v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        v /= np.linalg.norm(v)
        factors.append(v)
    # qubit 0 is the least-significant index bit, so it goes last in the kron
    amps = reduce(np.kron, reversed(factors))
    return Statevector(num_qubits, amps)


def init_params(circuit: ParamCircuit, rng: np.random.Generator) -> ParamVector:
    """Uniform angles in [0, 2*pi), one per parameter slot."""
    return ParamVector(rng.uniform(0.0, 2.0 * np.pi, circuit.param_count))
