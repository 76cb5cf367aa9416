"""Multi-restart derivative-free search over UMBS phase settings.

Alice's first vector is fixed to zero and entry 0 of the remaining three
vectors is pinned to 0 (a constant shift of any vector cancels in every
phase difference), leaving ``3(d-1)`` free angles.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .bell import dense_from_phases
from .core import PhaseSettings, check_dimension
from .rules import Side

OBJECTIVE_CAP = 12
SEARCH_CAP = 9


@dataclass(frozen=True)
class SearchProblem:
    d: int
    side: Side
    restarts: int = 20
    seed: int = 0
    max_dim: int = SEARCH_CAP

    def __post_init__(self):
        check_dimension(self.d)
        object.__setattr__(self, "side", Side.parse(self.side))
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.d > self.max_dim:
            raise ValueError(f"search limited to d <= {self.max_dim}")


@dataclass(frozen=True)
class SearchResult:
    best_phases: PhaseSettings
    best_value: float
    history: list


def objective(phases: PhaseSettings, side, d: int | None = None) -> float:
    """Extremal eigenvalue of the Bell matrix for arbitrary phase settings."""
    d = phases.d if d is None else d
    if d != phases.d:
        raise ValueError("d does not match the phase settings")
    if d > OBJECTIVE_CAP:
        raise ValueError(f"objective limited to d <= {OBJECTIVE_CAP}")
    ev = np.linalg.eigvalsh(dense_from_phases(phases))
    return float(ev[-1] if Side.parse(side) is Side.POSITIVE else ev[0])


def unpack(params: np.ndarray, d: int) -> PhaseSettings:
    free = np.zeros((3, d))
    free[:, 1:] = np.reshape(params, (3, d - 1))
    return PhaseSettings(np.zeros(d), *free)


def _restart(problem: SearchProblem, seed_seq: np.random.SeedSequence) -> tuple[float, np.ndarray]:
    d = problem.d
    sign = -1.0 if problem.side is Side.POSITIVE else 1.0
    rng = np.random.default_rng(seed_seq)
    x0 = rng.uniform(0.0, 2 * np.pi, size=3 * (d - 1))

    def f(x):
        return sign * objective(unpack(x, d), problem.side)

    res = minimize(f, x0, method="Powell",
                   options={"xtol": 1e-8, "ftol": 1e-13, "maxfev": 200_000})
    return sign * float(res.fun), res.x


def search(problem: SearchProblem, workers: int = 1) -> SearchResult:
    seeds = np.random.SeedSequence(problem.seed).spawn(problem.restarts)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(lambda s: _restart(problem, s), seeds))
    else:
        outcomes = [_restart(problem, s) for s in seeds]
    history = [(i, v) for i, (v, _) in enumerate(outcomes)]
    values = np.array([v for v, _ in outcomes])
    # argmax/argmin keep the lowest restart index on ties
    best = int(np.argmax(values) if problem.side is Side.POSITIVE else np.argmin(values))
    return SearchResult(unpack(outcomes[best][1], problem.d), float(values[best]), history)
