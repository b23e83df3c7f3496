"""Multi-start simplex minimization over per-qubit measurement angles.

Angles are packed as ``[theta_0, phi_0, theta_1, phi_1, ...]``. Seeds come
from a deterministic grid that always contains the all-sigma_z point
(every theta zero); the best few seeds are refined with Nelder-Mead.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import optimize as _sciopt

from .errors import ArgumentError

Objective = Callable[[np.ndarray], float]

GRID_CHUNK = 1024


@dataclass(frozen=True)
class OptimizerConfig:
    """Search budgets.

    ``grid_points_per_angle`` is (theta points on [0, pi], phi points on
    [-pi, pi)). When the full product grid over all qubits is larger than
    ``max_grid_evaluations`` the search falls back to qubit-uniform grid
    points followed by a truncated prefix of the product grid.
    """

    grid_points_per_angle: tuple[int, int] = (5, 4)
    top_seeds: int = 3
    simplex_tolerance: float = 1e-8
    max_evaluations: int = 20000
    max_grid_evaluations: int = 8192
    initial_step: float = 0.4
    restarts: int = 3

    def __post_init__(self):
        nt, nphi = self.grid_points_per_angle
        counts = (nt, nphi, self.top_seeds, self.max_evaluations, self.max_grid_evaluations)
        if min(counts) < 1 or self.restarts < 0:
            raise ArgumentError("optimizer counts must be positive")
        if not self.simplex_tolerance > 0 or not self.initial_step > 0:
            raise ArgumentError("tolerance and initial step must be positive")


@dataclass
class ObjectiveHandle:
    """A pure function of ``arity`` angles, with an evaluation counter.

    ``batch``, when given, maps a (B, arity) array to B values and is used
    for grid evaluation.
    """

    fn: Objective
    arity: int
    batch: Callable[[np.ndarray], np.ndarray] | None = None
    evaluations: int = 0

    def __call__(self, x) -> float:
        self.evaluations += 1
        return float(self.fn(np.asarray(x, dtype=float)))

    def many(self, xs: np.ndarray) -> np.ndarray:
        self.evaluations += len(xs)
        if self.batch is None:
            return np.array([float(self.fn(x)) for x in xs])
        return np.asarray(self.batch(xs), dtype=float)

    def negated(self) -> "ObjectiveHandle":
        fn, batch = self.fn, self.batch
        return ObjectiveHandle(
            lambda x: -fn(x), self.arity, None if batch is None else (lambda xs: -batch(xs))
        )


@dataclass
class SeedRanking:
    seeds: list[tuple[np.ndarray, float]]
    evaluated: int
    truncated: bool


@dataclass
class RefineOutcome:
    x: np.ndarray
    value: float
    seed_value: float
    converged: bool
    evaluations: int


@dataclass
class MinimizeResult:
    x: np.ndarray
    value: float
    converged: bool
    evaluations: int
    grid: SeedRanking
    refinements: list[RefineOutcome] = field(default_factory=list)


def canonical_angles(x) -> np.ndarray:
    """Map every (theta, phi) pair to theta in [0, pi], phi in [-pi, pi).

    The projector pair is unchanged: (2 pi - theta, phi) and (theta, phi + pi)
    describe the same first projector.
    """
    a = np.array(x, dtype=float).reshape(-1, 2)
    th = np.mod(a[:, 0], 2 * math.pi)
    flip = th > math.pi
    th[flip] = 2 * math.pi - th[flip]
    ph = a[:, 1] + np.where(flip, math.pi, 0.0)
    ph = np.mod(ph + math.pi, 2 * math.pi) - math.pi
    return np.column_stack([th, ph]).ravel()


def bloch_axes(x) -> np.ndarray:
    """Unit Bloch vector of the first projector for every qubit, shape (n, 3)."""
    a = np.asarray(x, dtype=float).reshape(-1, 2)
    th, ph = a[:, 0], a[:, 1]
    # first projector is |n><n| with |n> = (cos(t/2), e^{-i phi} sin(t/2))
    return np.column_stack([np.sin(th) * np.cos(ph), -np.sin(th) * np.sin(ph), np.cos(th)])


def same_measurement(x, y, tol: float = 1e-9) -> bool:
    """True when two angle vectors define the same projector pairs up to relabelling."""
    dots = np.abs(np.sum(bloch_axes(x) * bloch_axes(y), axis=1))
    return bool(np.all(dots > 1 - tol))


def angle_grid(config: OptimizerConfig) -> list[tuple[float, float]]:
    """Per-qubit (theta, phi) grid with physically identical measurements removed."""
    nt, nphi = config.grid_points_per_angle
    thetas = np.linspace(0.0, math.pi, nt) if nt > 1 else np.zeros(1)
    phis = -math.pi + 2 * math.pi * np.arange(nphi) / nphi
    out: list[tuple[float, float]] = []
    for t in thetas:
        for p in phis:
            if not any(same_measurement((t, p), q) for q in out):
                out.append((float(t), float(p)))
    return out


def _candidates(n_qubits: int, config: OptimizerConfig):
    """Yield (angle vector, origin) pairs; the sigma_z point comes first."""
    yield np.zeros(2 * n_qubits), "sigma_z"
    pairs = angle_grid(config)
    if len(pairs) ** n_qubits > config.max_grid_evaluations:
        for t, p in pairs:
            yield np.tile([t, p], n_qubits), "uniform"
    for combo in itertools.product(pairs, repeat=n_qubits):
        yield np.array(combo, dtype=float).ravel(), "product"


def grid_seed(objective: ObjectiveHandle, config: OptimizerConfig) -> SeedRanking:
    """Evaluate the seed grid and return the ``top_seeds`` best points, ascending."""
    if objective.arity % 2:
        raise ArgumentError("objective arity must be even (theta, phi per qubit)")
    n_qubits = objective.arity // 2
    pairs = angle_grid(config)
    budget = config.max_grid_evaluations
    points = np.array(list(itertools.islice((x for x, _ in _candidates(n_qubits, config)), budget)))
    values = np.concatenate(
        [objective.many(points[i : i + GRID_CHUNK]) for i in range(0, len(points), GRID_CHUNK)]
    )
    scored = list(zip(points, values.tolist()))
    truncated = len(pairs) ** n_qubits > budget
    # stable sort keeps grid order among ties, so the sigma_z point wins ties
    order = sorted(range(len(scored)), key=lambda i: scored[i][1])
    seeds = []
    for i in order:
        x, v = scored[i]
        if any(same_measurement(x, s) for s, _ in seeds):
            continue
        seeds.append((x, v))
        if len(seeds) == config.top_seeds:
            break
    return SeedRanking(seeds, len(scored), truncated)


def _initial_simplex(x0: np.ndarray, step: float) -> np.ndarray:
    d = x0.size
    sim = np.tile(x0, (d + 1, 1))
    sim[1:] += step * np.eye(d)
    return sim


def refine(
    objective: ObjectiveHandle, seed, config: OptimizerConfig, seed_value: float | None = None
) -> RefineOutcome:
    """Nelder-Mead descent from ``seed``; never returns a worse point than the seed."""
    x0 = np.asarray(seed, dtype=float)
    if x0.size != objective.arity:
        raise ArgumentError(f"seed has {x0.size} angles, objective expects {objective.arity}")
    start = objective.evaluations
    best_x = x0.copy()
    best_v = objective(x0) if seed_value is None else float(seed_value)
    first_v = best_v
    step = config.initial_step
    converged = False
    for _ in range(config.restarts + 1):
        left = config.max_evaluations - (objective.evaluations - start)
        if left <= objective.arity + 1:
            converged = False
            break
        res = _sciopt.minimize(
            objective,
            best_x,
            method="Nelder-Mead",
            options={
                "initial_simplex": _initial_simplex(best_x, step),
                "xatol": np.inf,
                "fatol": config.simplex_tolerance,
                "maxfev": left,
                "adaptive": objective.arity > 4,
            },
        )
        improvement = best_v - float(res.fun)
        if res.fun < best_v:
            best_x, best_v = np.asarray(res.x, dtype=float), float(res.fun)
        converged = bool(res.success)
        if not converged or improvement <= config.simplex_tolerance:
            break
        # restart with a smaller simplex around the new incumbent
        step *= 0.25
    return RefineOutcome(
        canonical_angles(best_x), best_v, first_v, converged, objective.evaluations - start
    )


def minimize(
    objective: ObjectiveHandle | Objective,
    config: OptimizerConfig | None = None,
    arity: int | None = None,
    maximize: bool = False,
) -> MinimizeResult:
    """Grid-seeded multi-start minimization; ``maximize=True`` negates the objective.

    The returned ``value`` is always in the caller's sign convention.
    """
    config = config or OptimizerConfig()
    if not isinstance(objective, ObjectiveHandle):
        if arity is None:
            raise ArgumentError("arity is required for a bare callable")
        objective = ObjectiveHandle(objective, arity)
    handle = objective.negated() if maximize else objective

    ranking = grid_seed(handle, config)
    outcomes = [refine(handle, x, config, seed_value=v) for x, v in ranking.seeds]
    best = min(outcomes, key=lambda o: o.value)
    assert best.value <= ranking.seeds[0][1]
    sign = -1.0 if maximize else 1.0
    if maximize:
        objective.evaluations += handle.evaluations
    return MinimizeResult(
        x=best.x,
        value=sign * best.value,
        converged=any(o.converged for o in outcomes),
        evaluations=handle.evaluations,
        grid=ranking,
        refinements=outcomes,
    )
