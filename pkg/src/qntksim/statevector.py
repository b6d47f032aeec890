"""Dense complex statevector simulation for small qubit registers.

Conventions used throughout the package:

* qubit 0 is the least-significant bit of the amplitude index, so the
  amplitude of ``|b_{n-1} ... b_1 b_0>`` sits at index ``sum_q b_q 2^q``;
* rotations follow R(theta) = exp(-i theta P / 2) for P in {X, Z}.

Gate kernels update amplitude pairs through strided views instead of
building 2^n x 2^n matrices, which keeps n = 11-12 registers cheap.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Statevector",
    "Observable",
    "basis_state",
    "apply_rx",
    "apply_rz",
    "apply_cnot",
    "expectation",
    "inner_product",
]

_NORM_TOL = 1e-10


@dataclass
class Statevector:
    """Complex amplitude vector over ``num_qubits`` qubits."""

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        if self.num_qubits < 1:
            raise ValueError(f"num_qubits must be >= 1, got {self.num_qubits}")
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (1 << self.num_qubits,):
            raise ValueError(
                f"amplitude vector has length {amps.shape}, "
                f"expected 2**{self.num_qubits}"
            )
        self.amplitudes = amps

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "Statevector":
        return Statevector(self.num_qubits, self.amplitudes.copy())


@dataclass(frozen=True)
class Observable:
    """Measurement operator: all-zeros projector or a single-site Pauli.

    ``tr_o_squared`` exposes tr[O^2]: 1 for the projector and 2^n for any
    single-site Pauli.  Both operators have unit spectral norm.
    """

    kind: str  # "zero_projector" | "pauli"
    axis: str = field(default="y")
    site: int = field(default=0)

    _PAULI_AXES = ("x", "y", "z")

    def __post_init__(self) -> None:
        if self.kind not in ("zero_projector", "pauli"):
            raise ValueError(f"unknown observable kind {self.kind!r}")
        if self.kind == "pauli":
            if self.axis not in self._PAULI_AXES:
                raise ValueError(f"Pauli axis must be one of x/y/z, got {self.axis!r}")
            if self.site < 0:
                raise ValueError(f"Pauli site must be >= 0, got {self.site}")

    @staticmethod
    def zero_projector() -> "Observable":
        """(|0><0|)^(x)n, the global projector onto the all-zeros state."""
        return Observable("zero_projector")

    @staticmethod
    def pauli(axis: str, site: int = 0) -> "Observable":
        """Single-site Pauli operator on ``site`` (default: qubit 0)."""
        return Observable("pauli", axis=axis, site=site)

    def tr_o_squared(self, num_qubits: int) -> float:
        if self.kind == "zero_projector":
            return 1.0
        return float(1 << num_qubits)

    def validate_for(self, num_qubits: int) -> None:
        if self.kind == "pauli" and self.site >= num_qubits:
            raise ValueError(
                f"observable site {self.site} out of range for {num_qubits} qubits"
            )


def basis_state(num_qubits: int, index: int = 0) -> Statevector:
    """Computational basis state |index> on ``num_qubits`` qubits."""
    if num_qubits < 1:
        raise ValueError(f"num_qubits must be >= 1, got {num_qubits}")
    dim = 1 << num_qubits
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} out of range for {num_qubits} qubits")
    amps = np.zeros(dim, dtype=np.complex128)
    amps[index] = 1.0
    return Statevector(num_qubits, amps)


def _check_qubit(num_qubits: int, qubit: int) -> None:
    if not 0 <= qubit < num_qubits:
        raise ValueError(f"qubit {qubit} out of range for {num_qubits} qubits")


# In-place kernels on raw amplitude arrays.  The reshape (-1, 2, 2^q) view
# puts bit q on axis 1, so each [:, 0, :] / [:, 1, :] pair is one gate pair.

def _rx_inplace(amps: np.ndarray, qubit: int, angle: float) -> None:
    c = np.cos(angle / 2)
    s = np.sin(angle / 2)
    v = amps.reshape(-1, 2, 1 << qubit)
    a = v[:, 0, :].copy()
    b = v[:, 1, :].copy()
    v[:, 0, :] = c * a - 1j * s * b
    v[:, 1, :] = -1j * s * a + c * b


def _rz_inplace(amps: np.ndarray, qubit: int, angle: float) -> None:
    v = amps.reshape(-1, 2, 1 << qubit)
    v[:, 0, :] *= np.exp(-0.5j * angle)
    v[:, 1, :] *= np.exp(0.5j * angle)


def _cnot_inplace(amps: np.ndarray, num_qubits: int, control: int, target: int) -> None:
    v = amps.reshape((2,) * num_qubits)
    ac = num_qubits - 1 - control
    at = num_qubits - 1 - target
    i0 = [slice(None)] * num_qubits
    i1 = [slice(None)] * num_qubits
    i0[ac] = 1
    i0[at] = 0
    i1[ac] = 1
    i1[at] = 1
    tmp = v[tuple(i0)].copy()
    v[tuple(i0)] = v[tuple(i1)]
    v[tuple(i1)] = tmp


def _pauli_apply(amps: np.ndarray, qubit: int, axis: str) -> np.ndarray:
    """Return P_axis(qubit) |amps> as a new array."""
    out = amps.copy()
    v = out.reshape(-1, 2, 1 << qubit)
    if axis == "x":
        a = v[:, 0, :].copy()
        v[:, 0, :] = v[:, 1, :]
        v[:, 1, :] = a
    elif axis == "y":
        a = v[:, 0, :].copy()
        v[:, 0, :] = -1j * v[:, 1, :]
        v[:, 1, :] = 1j * a
    else:  # z
        v[:, 1, :] *= -1
    return out


def _observable_apply(amps: np.ndarray, obs: Observable) -> np.ndarray:
    """Return O |amps> as a new array, without materializing O."""
    if obs.kind == "zero_projector":
        out = np.zeros_like(amps)
        out[0] = amps[0]
        return out
    return _pauli_apply(amps, obs.site, obs.axis)


def apply_rx(state: Statevector, qubit: int, angle: float) -> Statevector:
    """Apply R_x(angle) = exp(-i angle X/2) to ``qubit``; returns a copy."""
    _check_qubit(state.num_qubits, qubit)
    out = state.copy()
    _rx_inplace(out.amplitudes, qubit, angle)
    return out


def apply_rz(state: Statevector, qubit: int, angle: float) -> Statevector:
    """Apply R_z(angle) = exp(-i angle Z/2) to ``qubit``; returns a copy."""
    _check_qubit(state.num_qubits, qubit)
    out = state.copy()
    _rz_inplace(out.amplitudes, qubit, angle)
    return out


def apply_cnot(state: Statevector, control: int, target: int) -> Statevector:
    """Apply CNOT with the given control and target; returns a copy."""
    _check_qubit(state.num_qubits, control)
    _check_qubit(state.num_qubits, target)
    if control == target:
        raise ValueError("CNOT control and target must differ")
    out = state.copy()
    _cnot_inplace(out.amplitudes, state.num_qubits, control, target)
    return out


def expectation(state: Statevector, obs: Observable) -> float:
    """<state| O |state> without building a dense operator.

    The zero projector reduces to |amplitude[0]|^2; single-site Paulis use a
    pairwise traversal over the site bit.
    """
    obs.validate_for(state.num_qubits)
    amps = state.amplitudes
    if obs.kind == "zero_projector":
        return float(np.abs(amps[0]) ** 2)
    v = amps.reshape(-1, 2, 1 << obs.site)
    lo = v[:, 0, :]
    hi = v[:, 1, :]
    if obs.axis == "x":
        return float(2.0 * np.sum(np.conj(lo) * hi).real)
    if obs.axis == "y":
        return float(2.0 * np.sum(np.conj(lo) * hi).imag)
    return float(np.sum(np.abs(lo) ** 2) - np.sum(np.abs(hi) ** 2))


def inner_product(a: Statevector, b: Statevector) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    if a.num_qubits != b.num_qubits:
        raise ValueError(
            f"dimension mismatch: {a.num_qubits} vs {b.num_qubits} qubits"
        )
    return complex(np.vdot(a.amplitudes, b.amplitudes))
