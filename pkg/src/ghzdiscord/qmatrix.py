"""Dense complex matrices on up to eight qubits.

Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of a
computational-basis index.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ArgumentError, ContractError, SizeError

MAX_QUBITS = 8
MAX_DIM = 2**MAX_QUBITS

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
POSITIVITY_TOL = -1e-10

ComplexMatrix = np.ndarray


def as_matrix(m) -> ComplexMatrix:
    """Return ``m`` as a square complex128 array, checking its shape."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ArgumentError(f"expected a non-empty square matrix, got shape {a.shape}")
    if a.shape[0] > MAX_DIM:
        raise SizeError(f"dimension {a.shape[0]} exceeds the maximum {MAX_DIM}")
    return a


def n_qubits_of(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if n < 0 or 2**n != dim:
        raise ArgumentError(f"dimension {dim} is not a power of two")
    return n


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated density operator on ``n_qubits`` qubits.

    The wrapped array is made read-only so instances can be shared freely.
    """

    n_qubits: int
    matrix: ComplexMatrix

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if m.shape[0] != 2**self.n_qubits:
            raise ArgumentError(
                f"matrix of dimension {m.shape[0]} does not describe {self.n_qubits} qubits"
            )
        if m is self.matrix:
            m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_matrix(cls, m, check: bool = True) -> "DensityMatrix":
        a = as_matrix(m)
        rho = cls(n_qubits_of(a.shape[0]), a)
        if check:
            rho.validate()
        return rho

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def validate(self) -> None:
        """Raise ContractError unless the state is Hermitian, unit-trace and PSD."""
        m = self.matrix
        asym = np.max(np.abs(m - m.conj().T))
        if asym > HERMITIAN_TOL:
            raise ContractError(f"not Hermitian (max asymmetry {asym:.3e})")
        tr = np.trace(m)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ContractError(f"trace {tr.real:.12g} differs from 1")
        lo = hermitian_eigenvalues(m)[-1]
        if lo < POSITIVITY_TOL:
            raise ContractError(f"negative eigenvalue {lo:.3e}")

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


def tensor(a, b) -> ComplexMatrix:
    """Kronecker product ``a ⊗ b``."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[0] * b.shape[0] > MAX_DIM:
        raise SizeError(
            f"tensor product of dimension {a.shape[0] * b.shape[0]} exceeds {MAX_DIM}"
        )
    return np.kron(a, b)


def tensor_all(factors: Sequence) -> ComplexMatrix:
    out = as_matrix(factors[0])
    for f in factors[1:]:
        out = tensor(out, f)
    return out


def tensor_states(*states: DensityMatrix) -> DensityMatrix:
    m = tensor_all([s.matrix for s in states])
    return DensityMatrix(sum(s.n_qubits for s in states), m)


def check_qubits(indices: Sequence[int], n: int) -> list[int]:
    idx = [int(i) for i in indices]
    if not idx:
        raise ArgumentError("qubit index set is empty")
    if len(set(idx)) != len(idx):
        raise ArgumentError(f"duplicate qubit indices in {idx}")
    bad = [i for i in idx if not 0 <= i < n]
    if bad:
        raise ArgumentError(f"qubit indices {bad} out of range for {n} qubits")
    return idx


def partial_trace(rho: DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    """Reduce ``rho`` to the qubits in ``keep``, in the order given."""
    n = rho.n_qubits
    keep = check_qubits(keep, n)
    traced = [q for q in range(n) if q not in keep]
    t = rho.matrix.reshape((2,) * (2 * n))
    # row labels 0..n-1, column labels n..2n-1; traced qubits share a label
    col = [n + q for q in range(n)]
    for q in traced:
        col[q] = q
    out_labels = keep + [n + q for q in keep]
    k = len(keep)
    reduced = np.einsum(t, list(range(n)) + col, out_labels).reshape(2**k, 2**k)
    return DensityMatrix(k, reduced)


def hermitian_eigenvalues(m) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix in descending order."""
    m = as_matrix(m)
    asym = np.max(np.abs(m - m.conj().T))
    if asym > 1e-10:
        raise ContractError(f"matrix is not Hermitian (max asymmetry {asym:.3e})")
    return np.linalg.eigvalsh(m)[::-1]


def hs_norm_sq(m) -> float:
    """Squared Hilbert-Schmidt norm ``Tr(m† m)``."""
    m = np.asarray(m, dtype=np.complex128)
    return float(np.sum(m.real**2 + m.imag**2))
