"""Moment operators of encoding ensembles and their trace-norm deviation.

For an ensemble of encoded pure states, the order-t moment operator is the
average of (|x><x|)^(x)t.  Its trace-norm distance from the corresponding
fully-expressive reference (Haar on the whole register, or a product of
single-qubit Haar factors) measures how far the ensemble is from maximal
expressibility; zero means the moments match exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .ansatz import sample_haar_state, sample_local_haar_state
from .haar import local_moment2_reference, replica_swap
from .statevector import Statevector, basis_state

__all__ = [
    "ExpressibilityReport",
    "GLOBAL_HAAR",
    "LOCAL_HAAR",
    "ensemble_sampler",
    "moment_operator",
    "reference_operator",
    "measure",
    "trace_norm",
]

GLOBAL_HAAR = "global_haar"
LOCAL_HAAR = "local_haar"

MAX_QUBITS_T1 = 12
MAX_QUBITS_T2 = 5

_CHUNK_T1 = 2048
_CHUNK_T2 = 256

Sampler = Callable[[np.random.Generator], Statevector]


@dataclass(frozen=True)
class ExpressibilityReport:
    num_qubits: int
    t: int
    reference: str
    measure: float
    num_samples: int
    matrix_dim: int

    def to_dict(self) -> dict:
        return {
            "num_qubits": self.num_qubits,
            "t": self.t,
            "reference": self.reference,
            "measure": self.measure,
            "num_samples": self.num_samples,
            "matrix_dim": self.matrix_dim,
        }


def ensemble_sampler(name: str, num_qubits: int) -> Sampler:
    """Named state ensembles: haar, local_haar, or the fixed |0...0> singleton."""
    if name in ("haar", GLOBAL_HAAR):
        return lambda rng: sample_haar_state(num_qubits, rng)
    if name in ("local-haar", LOCAL_HAAR):
        return lambda rng: sample_local_haar_state(num_qubits, rng)
    if name == "singleton":
        fixed = basis_state(num_qubits, 0)
        return lambda rng: fixed
    raise ValueError(f"unknown ensemble {name!r}")


def _check_guards(t: int, num_qubits: int) -> int:
    if t not in (1, 2):
        raise ValueError(f"moment order must be 1 or 2, got {t}")
    cap = MAX_QUBITS_T1 if t == 1 else MAX_QUBITS_T2
    if not 1 <= num_qubits <= cap:
        raise ValueError(
            f"t={t} moment operators support 1..{cap} qubits, got {num_qubits}"
        )
    return 1 << (t * num_qubits)


def moment_operator(ensemble: Sampler, t: int, num_qubits: int,
                    num_samples: int, rng: np.random.Generator) -> np.ndarray:
    """Sample mean of |x><x| (t=1) or (|x><x|)^(x)2 (t=2) over the ensemble."""
    dim = _check_guards(t, num_qubits)
    if num_samples < 1:
        raise ValueError("num_samples must be >= 1")
    chunk = _CHUNK_T1 if t == 1 else _CHUNK_T2
    acc = np.zeros((dim, dim), dtype=np.complex128)
    done = 0
    while done < num_samples:
        m = min(chunk, num_samples - done)
        block = np.empty((m, dim), dtype=np.complex128)
        for i in range(m):
            amps = ensemble(rng).amplitudes
            block[i] = amps if t == 1 else np.kron(amps, amps)
        acc += block.T @ np.conj(block)
        done += m
    return acc / num_samples


def reference_operator(reference: str, t: int, num_qubits: int) -> np.ndarray:
    """Exact fully-expressive moment operator.

    t=1 is I/2^n for both references.  t=2 is (I + SWAP)/(N(N+1)) for the
    global ensemble (the normalized symmetric projector) and the product of
    per-site (I_4 + SWAP_{i,i})/6 factors for the local one.
    """
    dim = _check_guards(t, num_qubits)
    if reference not in (GLOBAL_HAAR, LOCAL_HAAR):
        raise ValueError(f"unknown reference {reference!r}")
    if t == 1:
        return np.eye(dim, dtype=np.complex128) / dim
    if reference == GLOBAL_HAAR:
        n_dim = 1 << num_qubits
        return (np.eye(dim) + replica_swap(n_dim)).astype(np.complex128) / (
            n_dim * (n_dim + 1)
        )
    return local_moment2_reference(num_qubits).astype(np.complex128)


def trace_norm(matrix: np.ndarray) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    return float(np.sum(np.abs(np.linalg.eigvalsh(matrix))))


def measure(ensemble: Sampler, reference: str, t: int, num_qubits: int,
            num_samples: int, rng: np.random.Generator) -> ExpressibilityReport:
    """Trace-norm deviation of the ensemble's moment from the reference."""
    ref = reference_operator(reference, t, num_qubits)
    emp = moment_operator(ensemble, t, num_qubits, num_samples, rng)
    value = trace_norm(ref - emp)
    return ExpressibilityReport(
        num_qubits=num_qubits,
        t=t,
        reference=reference,
        measure=value,
        num_samples=num_samples,
        matrix_dim=ref.shape[0],
    )
