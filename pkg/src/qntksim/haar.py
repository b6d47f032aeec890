"""Haar-random unitaries and exact low-order moment references.

The closed-form 1- and 2-moment tensors of the unitary group serve as the
ground truth against which every sampler in the package is validated:

    E[U_{l0,r0} conj(U)_{l0',r0'}] = delta(l0,l0') delta(r0,r0') / N

    E[U_{l0,r0} U_{l1,r1} conj(U)_{l0',r0'} conj(U)_{l1',r1'}]
        = (d1 + d2)/(N^2-1) - (d3 + d4)/(N(N^2-1))

with the four delta patterns d1 = (l0 l0')(l1 l1')(r0 r0')(r1 r1'),
d2 = (l0 l1')(l1 l0')(r0 r1')(r1 r0'), d3 = (l0 l0')(l1 l1')(r0 r1')(r1 r0'),
d4 = (l0 l1')(l1 l0')(r0 r0')(r1 r1').

Tensor index order is [l0, r0, l0', r0'] for the 1-moment and
[l0, r0, l1, r1, l0', r0', l1', r1'] for the 2-moment.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "MomentTensor1",
    "MomentTensor2",
    "haar_unitary",
    "haar_unitaries",
    "weingarten_moment1",
    "weingarten_moment2",
    "empirical_moment",
    "local_moment2_reference",
    "replica_swap",
]

# Entry budget for empirical tensors (N^8 complex entries at t=2, so N <= 4).
DEFAULT_ENTRY_BUDGET = 4**8
_CHUNK = 4096


@dataclass(frozen=True)
class MomentTensor1:
    dim: int
    entries: np.ndarray  # shape (N, N, N, N)


@dataclass(frozen=True)
class MomentTensor2:
    dim: int
    entries: np.ndarray  # shape (N,) * 8


def haar_unitaries(dim: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Stack of ``count`` Haar-random dim x dim unitaries.

    QR of a complex Ginibre matrix with the column-phase correction that
    makes the triangular factor's diagonal positive; this pins the otherwise
    convention-dependent phases and yields exactly the Haar distribution.
    (LAPACK returns a real R diagonal, so conjugating the phase is a no-op.)
    """
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    z = (rng.standard_normal((count, dim, dim))
         + 1j * rng.standard_normal((count, dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.einsum("sii->si", r)
    return q * (np.conj(d) / np.abs(d))[:, None, :]


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """One Haar-random dim x dim unitary."""
    return haar_unitaries(dim, 1, rng)[0]


def weingarten_moment1(dim: int) -> MomentTensor1:
    """Exact 1-moment tensor delta(l0,l0') delta(r0,r0') / N."""
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    eye = np.eye(dim)
    entries = np.einsum("ac,bd->abcd", eye, eye).astype(np.complex128) / dim
    return MomentTensor1(dim, entries)


def weingarten_moment2(dim: int) -> MomentTensor2:
    """Exact 2-moment tensor from the four-delta-pattern formula."""
    if dim < 2:
        raise ValueError(f"2-moment formula requires dim >= 2, got {dim}")
    eye = np.eye(dim)
    # index letters: l0=a r0=b l1=c r1=d l0'=e r0'=f l1'=g r1'=h
    d1 = np.einsum("ae,cg,bf,dh->abcdefgh", eye, eye, eye, eye)
    d2 = np.einsum("ag,ce,bh,df->abcdefgh", eye, eye, eye, eye)
    d3 = np.einsum("ae,cg,bh,df->abcdefgh", eye, eye, eye, eye)
    d4 = np.einsum("ag,ce,bf,dh->abcdefgh", eye, eye, eye, eye)
    n2 = dim * dim
    entries = ((d1 + d2) / (n2 - 1) - (d3 + d4) / (dim * (n2 - 1)))
    return MomentTensor2(dim, entries.astype(np.complex128))


def empirical_moment(t: int, dim: int, num_samples: int, rng: np.random.Generator,
                     entry_budget: int = DEFAULT_ENTRY_BUDGET,
                     pre_multiply: np.ndarray | None = None):
    """Monte-Carlo estimate of the t-moment tensor from Haar samples.

    ``pre_multiply`` left-multiplies every sample by a fixed unitary
    (used to probe invariance of the sampler).  Accumulation runs in fixed
    chunk order, so a fixed generator reproduces results bit-exactly.
    """
    if t not in (1, 2):
        raise ValueError(f"moment order must be 1 or 2, got {t}")
    if num_samples < 1:
        raise ValueError("num_samples must be >= 1")
    entries = dim ** (4 * t)
    if entries > entry_budget:
        raise ValueError(
            f"t={t}, dim={dim} needs {entries} tensor entries, "
            f"budget is {entry_budget}"
        )
    width = dim ** (2 * t)
    acc = np.zeros((width, width), dtype=np.complex128)
    done = 0
    while done < num_samples:
        m = min(_CHUNK, num_samples - done)
        u = haar_unitaries(dim, m, rng)
        if pre_multiply is not None:
            u = pre_multiply[None, :, :] @ u
        if t == 1:
            x = u.reshape(m, width)
        else:
            x = np.einsum("sab,scd->sabcd", u, u).reshape(m, width)
        acc += x.T @ np.conj(x)
        done += m
    acc /= num_samples
    if t == 1:
        return MomentTensor1(dim, acc.reshape((dim,) * 4))
    return MomentTensor2(dim, acc.reshape((dim,) * 8))


def replica_swap(dim: int) -> np.ndarray:
    """Operator on C^dim (x) C^dim exchanging the two tensor factors."""
    s = np.zeros((dim * dim, dim * dim))
    for i in range(dim):
        for j in range(dim):
            s[i * dim + j, j * dim + i] = 1.0
    return s


def _qubit_swap(num_qubits_total: int, a: int, b: int) -> np.ndarray:
    """Permutation matrix swapping qubits a and b of a 2^m-dim register.

    Qubit k here is bit k of the basis index (most significant = m-1).
    """
    dim = 1 << num_qubits_total
    idx = np.arange(dim)
    bit_a = (idx >> a) & 1
    bit_b = (idx >> b) & 1
    swapped = idx ^ (((bit_a ^ bit_b) << a) | ((bit_a ^ bit_b) << b))
    mat = np.zeros((dim, dim))
    mat[swapped, idx] = 1.0
    return mat


def local_moment2_reference(num_qubits: int, max_qubits: int = 5) -> np.ndarray:
    """E[(W|0><0|W^dag)^(x)2] over products of single-qubit Haar unitaries.

    Equals the tensor product over sites i of (I_4 + SWAP_{i,i}) / 6, where
    SWAP_{i,i} exchanges qubit i of the two replicas.  Returned dense on the
    4^n-dimensional two-replica space, replica A on the high bits.
    """
    if num_qubits < 1:
        raise ValueError(f"num_qubits must be >= 1, got {num_qubits}")
    if num_qubits > max_qubits:
        raise ValueError(
            f"dense two-replica operator capped at {max_qubits} qubits, got {num_qubits}"
        )
    n = num_qubits
    dim2 = 1 << (2 * n)
    op = np.eye(dim2)
    # replica A occupies bits n..2n-1, replica B bits 0..n-1
    for site in range(n):
        factor = (np.eye(dim2) + _qubit_swap(2 * n, n + site, site)) / 6.0
        op = op @ factor
    return op
