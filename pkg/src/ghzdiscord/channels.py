"""Single-qubit Kraus channels and their action on N-qubit states.

Two equivalent routes are provided: :func:`apply` builds every tensor product
of single-qubit Kraus operators (the lifted form), :func:`apply_sequential`
acts on one qubit at a time without forming any 2^n-dimensional operator.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ArgumentError, ResourceError
from .qmatrix import MAX_QUBITS, DensityMatrix, check_qubits, tensor_all

# budget on the number of lifted operators materialized by lift()
MAX_LIFTED_OPERATORS = 4096

I2 = np.eye(2, dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


class ChannelKind(str, enum.Enum):
    AMPLITUDE_DAMPING = "amplitude-damping"
    PHASE_DAMPING = "phase-damping"
    DEPOLARIZING = "depolarizing"
    BIT_FLIP = "bit-flip"
    PHASE_FLIP = "phase-flip"
    BIT_PHASE_FLIP = "bit-phase-flip"

    @classmethod
    def parse(cls, name: str) -> "ChannelKind":
        key = name.strip().lower().replace("_", "-").replace(" ", "-")
        aliases = {
            "ad": "amplitude-damping",
            "pd": "phase-damping",
            "dep": "depolarizing",
            "depolarising": "depolarizing",
            "bf": "bit-flip",
            "pf": "phase-flip",
            "bpf": "bit-phase-flip",
        }
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise ArgumentError(f"unknown channel {name!r}") from None


FLIP_PAULI = {
    ChannelKind.BIT_FLIP: SIGMA_X,
    ChannelKind.PHASE_FLIP: SIGMA_Z,
    ChannelKind.BIT_PHASE_FLIP: SIGMA_Y,
}


@dataclass(frozen=True, eq=False)
class KrausChannel:
    kind: ChannelKind
    p: float
    operators: tuple[np.ndarray, ...]

    @property
    def label(self) -> str:
        return self.kind.value

    def completeness_error(self) -> float:
        s = sum(k.conj().T @ k for k in self.operators)
        return float(np.max(np.abs(s - I2)))


@dataclass(frozen=True)
class ChannelAssignment:
    """A channel together with the qubits it acts on (``None`` means all)."""

    channel: KrausChannel
    target_qubits: tuple[int, ...] | None = field(default=None)

    def targets_for(self, n: int) -> list[int]:
        if self.target_qubits is None:
            return list(range(n))
        return check_qubits(self.target_qubits, n)


def kraus_set(kind: ChannelKind | str, p: float) -> KrausChannel:
    """Single-qubit Kraus operators for ``kind`` at decoherence strength ``p``."""
    kind = kind if isinstance(kind, ChannelKind) else ChannelKind.parse(kind)
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ArgumentError(f"p={p} outside [0, 1]")
    if kind is ChannelKind.AMPLITUDE_DAMPING:
        ops = (
            np.array([[1, 0], [0, math.sqrt(1 - p)]], dtype=np.complex128),
            np.array([[0, math.sqrt(p)], [0, 0]], dtype=np.complex128),
        )
    elif kind is ChannelKind.PHASE_DAMPING:
        ops = (
            np.array([[1, 0], [0, math.sqrt(1 - p)]], dtype=np.complex128),
            np.array([[0, 0], [0, math.sqrt(p)]], dtype=np.complex128),
        )
    elif kind is ChannelKind.DEPOLARIZING:
        a = math.sqrt(p / 4)
        ops = (math.sqrt(1 - 3 * p / 4) * I2, a * SIGMA_X, a * SIGMA_Y, a * SIGMA_Z)
    else:
        ops = (math.sqrt(1 - p) * I2, math.sqrt(p) * FLIP_PAULI[kind])
    for op in ops:
        op.setflags(write=False)
    return KrausChannel(kind, p, ops)


def lift(channel: KrausChannel, n: int, max_operators: int = MAX_LIFTED_OPERATORS) -> list[np.ndarray]:
    """All ``len(ops)**n`` tensor products of the single-qubit operators."""
    if not 1 <= n <= MAX_QUBITS:
        raise ArgumentError(f"n={n} outside [1, {MAX_QUBITS}]")
    count = len(channel.operators) ** n
    if count > max_operators:
        raise ResourceError(
            f"lifting {channel.label} to {n} qubits needs {count} operators "
            f"(budget {max_operators}); use apply_sequential instead"
        )
    return [tensor_all(combo) for combo in itertools.product(channel.operators, repeat=n)]


def _lift_on(channel: KrausChannel, n: int, targets: Sequence[int]) -> Iterable[np.ndarray]:
    slots = [channel.operators if q in targets else (I2,) for q in range(n)]
    count = math.prod(len(s) for s in slots)
    if count > MAX_LIFTED_OPERATORS:
        raise ResourceError(
            f"{count} lifted operators exceed the budget {MAX_LIFTED_OPERATORS}; "
            "use apply_sequential instead"
        )
    return (tensor_all(combo) for combo in itertools.product(*slots))


def _finish(n: int, m: np.ndarray) -> DensityMatrix:
    # remove rounding asymmetry accumulated over many Kraus terms
    return DensityMatrix(n, 0.5 * (m + m.conj().T))


def apply(channel: KrausChannel, rho: DensityMatrix, targets: Sequence[int] | None = None) -> DensityMatrix:
    """``sum_k E_k rho E_k†`` with the lifted operators ``E_k``."""
    n = rho.n_qubits
    targets = list(range(n)) if targets is None else check_qubits(targets, n)
    m = rho.matrix
    out = np.zeros_like(m)
    for e in _lift_on(channel, n, targets):
        out += e @ m @ e.conj().T
    return _finish(n, out)


def apply_single_qubit(ops: Sequence[np.ndarray], m: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """Apply ``sum_k A_k . A_k†`` on one qubit of a 2^n x 2^n matrix."""
    t = m.reshape((2,) * (2 * n))
    out = np.zeros_like(t)
    for a in ops:
        x = np.moveaxis(np.tensordot(a, t, axes=([1], [qubit])), 0, qubit)
        x = np.moveaxis(np.tensordot(x, a.conj(), axes=([n + qubit], [1])), -1, n + qubit)
        out += x
    return out.reshape(m.shape)


def apply_sequential(
    channel: KrausChannel, rho: DensityMatrix, targets: Sequence[int] | None = None
) -> DensityMatrix:
    """Same map as :func:`apply`, one target qubit at a time."""
    n = rho.n_qubits
    targets = list(range(n)) if targets is None else check_qubits(targets, n)
    m = rho.matrix
    for q in targets:
        m = apply_single_qubit(channel.operators, m, q, n)
    return _finish(n, m)


def evolve(rho: DensityMatrix, assignment: ChannelAssignment) -> DensityMatrix:
    return apply_sequential(assignment.channel, rho, assignment.targets_for(rho.n_qubits))
