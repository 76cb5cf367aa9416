"""Rule -> Bell matrix -> extremal eigenpair -> noise threshold and entropy."""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .bell import DEFAULT_DENSE_CAP, build
from .core import SchmidtState, check_dimension, entropy_ratio, noise_threshold_negative, noise_threshold_positive
from .eigen import EigenResult, SolverConfig, max_eigen, min_eigen
from .rules import Side, rule_for


@dataclass(frozen=True)
class ViolationResult:
    d: int
    side: Side
    eigenvalue: float
    state: SchmidtState
    f_min: float
    violation: bool
    entropy: float
    entropy_ratio: float
    iterations: int
    residual: float
    wall_time_ms: int


def extremal_eigen(d: int, side, cfg: SolverConfig = SolverConfig(),
                   dense_cap: int = DEFAULT_DENSE_CAP) -> EigenResult:
    side = Side.parse(side)
    B = build(rule_for(side, d), d, "auto", dense_cap=dense_cap)
    solve = max_eigen if side is Side.POSITIVE else min_eigen
    return solve(B, cfg)


def from_eigen(d: int, side, eig: EigenResult, wall_time_ms: int = 0) -> ViolationResult:
    side = Side.parse(side)
    state = SchmidtState.from_vector(eig.eigenvector).canonical()
    if side is Side.POSITIVE:
        f_min = noise_threshold_positive(eig.eigenvalue)
    else:
        f_min = noise_threshold_negative(eig.eigenvalue, d)
    entropy, ratio = entropy_ratio(state)
    return ViolationResult(d, side, eig.eigenvalue, state, f_min, f_min > 0, entropy, ratio,
                           eig.iterations, eig.residual, wall_time_ms)


def solve_violation(d: int, side, cfg: SolverConfig = SolverConfig(),
                    dense_cap: int = DEFAULT_DENSE_CAP) -> ViolationResult:
    """Maximal violation on one side of the inequality at dimension d."""
    d = check_dimension(d)
    t0 = time.perf_counter()
    eig = extremal_eigen(d, side, cfg, dense_cap)
    ms = int(round((time.perf_counter() - t0) * 1000))
    return from_eigen(d, side, eig, ms)


def schmidt_symmetry_defect(state: SchmidtState) -> float:
    """``max_j |alpha_j - alpha_{d-1-j}|``."""
    a = state.alphas
    return float(np.abs(a - a[::-1]).max())
