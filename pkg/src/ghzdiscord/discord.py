"""Entropies, local projective measurements and multipartite discord measures.

All entropies are in bits. Three measures are exposed, each minimized over
product von Neumann measurements with one (theta, phi) pair per qubit:

* :func:`global_qd` -- global quantum discord (relative entropy to the
  locally pinched state minus the single-party contributions);
* :func:`gqd_hs` -- squared Hilbert-Schmidt distance to the pinched state;
* :func:`gqd_entropic` -- entropic multipartite geometric discord.

:func:`gqd_closed_form` evaluates the published closed-form expressions of
the geometric discord under each channel, used as an independent oracle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channels import ChannelKind, apply_single_qubit
from .errors import ArgumentError, UnsupportedError
from .optimize import MinimizeResult, ObjectiveHandle, OptimizerConfig, canonical_angles, minimize
from .qmatrix import DensityMatrix, hermitian_eigenvalues, hs_norm_sq, partial_trace
from .states import StateFamily, StateKind

ZERO_EIGENVALUE = 1e-12
CLAMP_WINDOW = 1e-9

I2 = np.eye(2, dtype=np.complex128)


@dataclass(frozen=True, eq=False)
class MeasurementBasis:
    theta: float
    phi: float
    projectors: tuple[np.ndarray, np.ndarray]


MeasurementProfile = tuple[MeasurementBasis, ...]


@dataclass(frozen=True, eq=False)
class DiscordResult:
    value: float
    minimizer: MeasurementProfile
    evaluations: int
    converged: bool
    angles: np.ndarray | None = None

    def __float__(self) -> float:
        return self.value


def _spectrum_entropy(values) -> float:
    v = np.asarray(values, dtype=float)
    v = v[v > ZERO_EIGENVALUE]
    return float(-np.sum(v * np.log2(v)))


def von_neumann_entropy(rho) -> float:
    """``-sum(l log2 l)`` over the eigenvalues of ``rho``."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else rho
    return max(_spectrum_entropy(hermitian_eigenvalues(m)), 0.0)


def relative_entropy(rho, sigma) -> float:
    """``Tr rho (log2 rho - log2 sigma)`` from eigendecompositions.

    Returns ``inf`` when the support of ``rho`` is not contained in that of ``sigma``.
    """
    a = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    b = sigma.matrix if isinstance(sigma, DensityMatrix) else np.asarray(sigma)
    la, va = np.linalg.eigh(a)
    lb, vb = np.linalg.eigh(b)
    keep = lb > ZERO_EIGENVALUE
    # weight of rho on each eigenvector of sigma
    overlap = np.real(np.einsum("ij,jk,ki->i", vb.conj().T, a, vb))
    if np.any(overlap[~keep] > 1e-10):
        return math.inf
    cross = float(np.sum(overlap[keep] * np.log2(lb[keep])))
    return -_spectrum_entropy(la) - cross


def measurement_basis(theta: float, phi: float) -> MeasurementBasis:
    """Projector pair along the Bloch direction (theta, phi).

    The second projector is built as ``I - first`` so the pair is always complete.
    """
    theta, phi = canonical_angles([theta, phi])
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    p1 = np.array(
        [[c * c, np.exp(1j * phi) * c * s], [np.exp(-1j * phi) * c * s, s * s]],
        dtype=np.complex128,
    )
    p2 = I2 - p1
    p1.setflags(write=False)
    p2.setflags(write=False)
    return MeasurementBasis(float(theta), float(phi), (p1, p2))


def profile_from_angles(angles) -> MeasurementProfile:
    a = np.asarray(angles, dtype=float).reshape(-1, 2)
    return tuple(measurement_basis(t, p) for t, p in a)


def sigma_z_profile(n: int) -> MeasurementProfile:
    return profile_from_angles(np.zeros(2 * n))


def _check_profile(rho: DensityMatrix, profile: Sequence[MeasurementBasis]) -> None:
    if len(profile) != rho.n_qubits:
        raise ArgumentError(
            f"profile has {len(profile)} bases for a {rho.n_qubits}-qubit state"
        )


def dephase(rho: DensityMatrix, profile: Sequence[MeasurementBasis]) -> DensityMatrix:
    """``sum_k Pi_k rho Pi_k`` over all product projectors of ``profile``.

    The product pinching factorizes into single-qubit pinchings, applied in turn.
    """
    _check_profile(rho, profile)
    n = rho.n_qubits
    m = rho.matrix
    for q, basis in enumerate(profile):
        m = apply_single_qubit(basis.projectors, m, q, n)
    return DensityMatrix(n, 0.5 * (m + m.conj().T))


def _clamp(v: float) -> float:
    return 0.0 if -CLAMP_WINDOW < v < 0.0 else v


def global_qd_at(rho: DensityMatrix, profile: Sequence[MeasurementBasis]) -> float:
    """Global discord for one fixed measurement profile (no minimization)."""
    _check_profile(rho, profile)
    total = von_neumann_entropy(dephase(rho, profile)) - von_neumann_entropy(rho)
    for j, basis in enumerate(profile):
        r = partial_trace(rho, [j])
        total -= von_neumann_entropy(dephase(r, [basis])) - von_neumann_entropy(r)
    return total


def gqd_hs_at(rho: DensityMatrix, profile: Sequence[MeasurementBasis]) -> float:
    return hs_norm_sq(rho.matrix - dephase(rho, profile).matrix)


def gqd_entropic_at(rho: DensityMatrix, profile: Sequence[MeasurementBasis]) -> float:
    local = sum(von_neumann_entropy(partial_trace(rho, [j])) for j in range(rho.n_qubits))
    inner = sum(
        von_neumann_entropy(dephase(partial_trace(rho, [j]), [b])) for j, b in enumerate(profile)
    ) - von_neumann_entropy(dephase(rho, profile))
    return local - von_neumann_entropy(rho) - inner


def _entropy_rows(d: np.ndarray) -> np.ndarray:
    """Shannon entropy (bits) along the last axis, ignoring near-zero entries."""
    safe = np.where(d > ZERO_EIGENVALUE, d, 1.0)
    return -np.sum(np.where(d > ZERO_EIGENVALUE, d * np.log2(safe), 0.0), axis=-1)


class _Evaluator:
    """Batched objective kernels built on measured outcome probabilities.

    For a product basis ``U = ⊗ u_j`` the pinched state is ``U diag(d) U†``
    with ``d = diag(U† rho U)``; pinched entropies and purity need only ``d``.
    ``d`` is obtained by contracting one (row, column) index pair of ``rho``
    per qubit, so no 2^n x 2^n rotation is ever formed.
    """

    def __init__(self, rho: DensityMatrix):
        n = self.n = rho.n_qubits
        t = rho.matrix.reshape((2,) * (2 * n))
        pairs = [ax for q in range(n) for ax in (q, n + q)]
        # flat index over (i_0 j_0, i_1 j_1, ...), qubit 0 most significant
        self.t = np.ascontiguousarray(t.transpose(pairs)).reshape(-1)
        marg = [partial_trace(rho, [j]).matrix for j in range(n)]
        self.marginals = np.array([m.reshape(-1) for m in marg])
        self.s_rho = von_neumann_entropy(rho)
        self.s_marginals = np.array([von_neumann_entropy(m) for m in marg])
        self.purity = hs_norm_sq(rho.matrix)

    def _kernels(self, x: np.ndarray) -> np.ndarray:
        """Shape (B, n, 4, 2): entry [(i, j), k] = conj(u[i, k]) u[j, k]."""
        a = x.reshape(x.shape[0], self.n, 2)
        c, s = np.cos(a[..., 0] / 2), np.sin(a[..., 0] / 2)
        e = np.exp(1j * a[..., 1])
        u = np.empty(a.shape[:2] + (2, 2), dtype=np.complex128)
        # columns: eigenvectors of the first and second projector
        u[..., 0, 0] = c
        u[..., 1, 0] = e.conj() * s
        u[..., 0, 1] = -e * s
        u[..., 1, 1] = c
        return (u.conj()[..., :, None, :] * u[..., None, :, :]).reshape(a.shape[:2] + (4, 2))

    def probabilities(self, x):
        """Joint outcome distribution (B, 2^n) and single-qubit ones (B, n, 2)."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        b = x.shape[0]
        k = self._kernels(x)
        joint = np.broadcast_to(self.t, (b, self.t.size))
        for q in range(self.n):
            joint = np.matmul(joint.reshape(b, 4, -1).transpose(0, 2, 1), k[:, q])
            joint = joint.reshape(b, -1)
        local = np.einsum("ja,bjak->bjk", self.marginals, k)
        return joint.real, local.real

    def qd(self, x) -> np.ndarray:
        d, local = self.probabilities(x)
        per_qubit = _entropy_rows(local) - self.s_marginals
        return _entropy_rows(d) - self.s_rho - per_qubit.sum(axis=1)

    def hs(self, x) -> np.ndarray:
        d, _ = self.probabilities(x)
        return self.purity - np.sum(d * d, axis=1)

    def entropic_inner(self, x) -> np.ndarray:
        d, local = self.probabilities(x)
        return _entropy_rows(local).sum(axis=1) - _entropy_rows(d)

    def handle(self, kernel) -> ObjectiveHandle:
        return ObjectiveHandle(lambda x: float(kernel(x)[0]), 2 * self.n, batch=kernel)


def _result(res: MinimizeResult, value: float) -> DiscordResult:
    return DiscordResult(
        value=_clamp(value),
        minimizer=profile_from_angles(res.x),
        evaluations=res.evaluations,
        converged=res.converged,
        angles=res.x,
    )


def global_qd(rho: DensityMatrix, config: OptimizerConfig | None = None) -> DiscordResult:
    """Global quantum discord, minimized over product projective measurements."""
    ev = _Evaluator(rho)
    res = minimize(ev.handle(ev.qd), config)
    return _result(res, res.value)


def gqd_hs(rho: DensityMatrix, config: OptimizerConfig | None = None) -> DiscordResult:
    """Minimal squared Hilbert-Schmidt distance from ``rho`` to a locally pinched state."""
    ev = _Evaluator(rho)
    res = minimize(ev.handle(ev.hs), config)
    return _result(res, res.value)


def gqd_entropic(rho: DensityMatrix, config: OptimizerConfig | None = None) -> DiscordResult:
    """Entropic geometric discord: local entropies minus joint entropy minus the
    best achievable (local minus joint) entropy of the measured state."""
    ev = _Evaluator(rho)
    res = minimize(ev.handle(ev.entropic_inner), config, maximize=True)
    return _result(res, sum(ev.s_marginals) - ev.s_rho - res.value)


# ---------------------------------------------------------------------------
# closed-form geometric discord under each channel

K = ChannelKind


def _flip3(p: float) -> float:
    return 1.5 * p**2 * (1 - 3 * p + 2 * p**2) ** 2 + 0.5 * (1 - p * (3 - 3 * p + 2 * p**2)) ** 2


def _flip6(p: float) -> float:
    q = 1 - p
    return (
        20 * q**6 * p**6
        + 7.5 * q**4 * p**4 * (1 - 2 * p + 2 * p**2) ** 2
        + 0.5 * (q**6 + p**6) ** 2
        + 3 * q**2 * p**2 * (1 - 4 * p + 6 * p**2 - 4 * p**3 + 2 * p**4) ** 2
    )


THREE_QUBIT_TABLE = {
    K.AMPLITUDE_DAMPING: lambda p: 0.5 * (1 - p) ** 3,
    K.DEPOLARIZING: lambda p: (4 - 3 * p) ** 4 * (1 - p) ** 2 / 512
    + p**2 * (4 + p * (7 - 3 * p)) ** 2 / 512,
    K.PHASE_DAMPING: lambda p: 0.5 * (1 - p) ** 3,
    K.BIT_FLIP: _flip3,
    K.PHASE_FLIP: lambda p: 0.5 * (1 - 2 * p) ** 6,
    K.BIT_PHASE_FLIP: _flip3,
}

SIX_QUBIT_TABLE = {
    K.AMPLITUDE_DAMPING: lambda p: 0.5 * (1 - p) ** 6,
    K.DEPOLARIZING: lambda p: 0.5 * (1 - p) ** 12,
    K.PHASE_DAMPING: lambda p: 0.5 * (1 - p) ** 6,
    K.BIT_FLIP: _flip6,
    K.PHASE_FLIP: lambda p: 0.5 * (1 - 2 * p) ** 12,
    K.BIT_PHASE_FLIP: _flip6,
}

# no bit-flip entry exists for the accelerated-frame state
RINDLER_TABLE = {
    K.AMPLITUDE_DAMPING: lambda p: 0.5 * (1 - p) ** 3,
    K.DEPOLARIZING: lambda p: (4 - 3 * p) ** 4 * (1 - p) ** 2 / 512
    + p**2 * (4 - 7 * p + 3 * p**2) / 512,
    K.PHASE_DAMPING: lambda p: 0.5 * (1 - p) ** 3,
    K.PHASE_FLIP: lambda p: 0.5 * (1 - 2 * p) ** 6,
    K.BIT_PHASE_FLIP: lambda p: 1.5 * p**2 * (1 - 3 * p + 2 * p**2) ** 2
    + 0.5 * (1 - 3 * p + 3 * p**2 - 2 * p**3) ** 2,
}

TABLES = {
    "werner-ghz-3": ("three-qubit Werner-GHZ table", THREE_QUBIT_TABLE),
    "werner-ghz-6": ("six-qubit Werner-GHZ table", SIX_QUBIT_TABLE),
    "rindler": ("accelerated-frame GHZ table", RINDLER_TABLE),
}

# rows whose expression disagrees with the channel they describe
DISCREPANT_ROWS = {("werner-ghz-3", K.DEPOLARIZING), ("rindler", K.DEPOLARIZING)}


def table_for(family: StateFamily) -> tuple[str, dict]:
    try:
        return TABLES[family.label]
    except KeyError:
        raise UnsupportedError(f"no closed-form table for state family {family.label}") from None


def gqd_closed_form(family: StateFamily, kind: ChannelKind | str, p: float) -> float:
    """Literal evaluation of the closed-form table row for (family, channel) at ``p``."""
    kind = kind if isinstance(kind, ChannelKind) else ChannelKind.parse(kind)
    if not 0.0 <= p <= 1.0:
        raise ArgumentError(f"p={p} outside [0, 1]")
    name, table = table_for(family)
    if kind not in table:
        raise UnsupportedError(f"{name} has no {kind.value} row")
    if family.kind is StateKind.RINDLER_GHZ:
        if family.r is None:
            raise ArgumentError("r is required for the Rindler closed form")
        weight = math.cos(family.r) ** 4
    else:
        if family.mu is None:
            raise ArgumentError("mu is required for the Werner-GHZ closed form")
        weight = family.mu**2
    return table[kind](float(p)) * weight
