"""Initial states: N-qubit Werner-GHZ mixtures and the tripartite Rindler-frame GHZ state."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError
from .qmatrix import MAX_QUBITS, DensityMatrix

R_MAX = math.pi / 4


class StateKind(str, enum.Enum):
    WERNER_GHZ = "werner-ghz"
    RINDLER_GHZ = "rindler"


@dataclass(frozen=True)
class StateFamily:
    """Selects one initial state: a Werner-GHZ mixture or the Rindler state."""

    kind: StateKind
    n_qubits: int = 3
    mu: float | None = None
    r: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", StateKind(self.kind))
        if self.kind is StateKind.RINDLER_GHZ:
            if self.n_qubits != 3:
                raise ArgumentError("the Rindler state is defined on 3 qubits only")
            if self.r is not None:
                _check_r(self.r)
        else:
            if not 2 <= self.n_qubits <= MAX_QUBITS:
                raise ArgumentError(f"n_qubits must be in [2, {MAX_QUBITS}]")
            if self.mu is not None:
                _check_mu(self.mu)

    @property
    def label(self) -> str:
        if self.kind is StateKind.RINDLER_GHZ:
            return "rindler"
        return f"werner-ghz-{self.n_qubits}"

    def build(self) -> DensityMatrix:
        if self.kind is StateKind.RINDLER_GHZ:
            if self.r is None:
                raise ArgumentError("r is required for the Rindler state")
            return rindler_tripartite(self.r)
        if self.mu is None:
            raise ArgumentError("mu is required for the Werner-GHZ state")
        return werner_ghz(self.n_qubits, self.mu)


def _check_mu(mu: float) -> None:
    if not 0.0 <= mu <= 1.0:
        raise ArgumentError(f"mu={mu} outside [0, 1]")


def _check_r(r: float) -> None:
    # small slack so that a grid endpoint computed as k*pi/4/m is accepted
    if not 0.0 <= r <= R_MAX + 1e-12:
        raise ArgumentError(f"r={r} outside [0, pi/4]")


def werner_ghz(n: int, mu: float) -> DensityMatrix:
    """``(1-mu) I/2^n + mu |GHZ><GHZ|`` with ``|GHZ> = (|0..0> + |1..1>)/sqrt(2)``."""
    if not 2 <= n <= MAX_QUBITS:
        raise ArgumentError(f"n={n} outside [2, {MAX_QUBITS}]")
    _check_mu(mu)
    d = 2**n
    m = np.eye(d, dtype=np.complex128) * ((1.0 - mu) / d)
    m[0, 0] += mu / 2
    m[-1, -1] += mu / 2
    m[0, -1] += mu / 2
    m[-1, 0] += mu / 2
    return DensityMatrix(n, m)


def rindler_tripartite(r: float) -> DensityMatrix:
    """GHZ state shared by an inertial observer and two equally accelerated ones.

    Basis order is ``|A B_I C_I>``. The region-II modes of both accelerated
    observers have been traced out; ``r`` is the common acceleration angle.
    """
    _check_r(r)
    c2, s2 = math.cos(r) ** 2, math.sin(r) ** 2
    m = np.zeros((8, 8), dtype=np.complex128)
    m[0, 0] = 0.5 * c2 * c2
    m[1, 1] = 0.5 * c2 * s2
    m[2, 2] = 0.5 * s2 * c2
    m[3, 3] = 0.5 * s2 * s2
    m[7, 7] = 0.5
    m[0, 7] = m[7, 0] = 0.5 * c2
    # the four populations on |0 x y> sum to cos^2+sin^2 squared; pin to 1/2
    m[:4, :4] /= 2 * np.trace(m[:4, :4]).real
    return DensityMatrix(3, m)


def acceleration_to_r(a: float, omega: float) -> float:
    """Acceleration angle ``r = arccos((exp(-2 pi omega / a) + 1)^(-1/2))``, with c = 1."""
    if not a > 0 or not omega > 0:
        raise ArgumentError("acceleration and frequency must be positive")
    return math.acos((math.exp(-2.0 * math.pi * omega / a) + 1.0) ** -0.5)
