"""Extremal eigenpairs of a Bell matrix by shifted power iteration."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bell import BellMatrix, DenseBellMatrix
from .core import CapacityError

ORACLE_CAP = 2048


@dataclass(frozen=True)
class SolverConfig:
    tolerance: float = 1e-10
    max_iterations: int = 1_000_000
    seed: int = 0

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


@dataclass(frozen=True)
class EigenResult:
    eigenvalue: float
    eigenvector: np.ndarray
    iterations: int
    residual: float


class ConvergenceError(RuntimeError):
    """Power iteration hit ``max_iterations``; ``best`` holds the last iterate."""

    def __init__(self, message: str, best: EigenResult):
        super().__init__(message)
        self.best = best


def canonicalize(v: np.ndarray) -> np.ndarray:
    """Fix the sign so the first non-negligible component is positive."""
    a = np.abs(v)
    idx = int(np.argmax(a > 1e-12 * a.max()))
    return v if v[idx] > 0 else -v


def _power(B: BellMatrix, sign: float, cfg: SolverConfig, trace: list | None) -> EigenResult:
    # B' = sign*B + R I is positive semidefinite, and its dominant eigenpair is
    # the extreme of B on the requested side.
    shift = B.gershgorin_radius()
    rng = np.random.default_rng(cfg.seed)
    v = rng.normal(size=B.d)
    v /= np.linalg.norm(v)
    lam, res = np.nan, np.inf
    for it in range(1, cfg.max_iterations + 1):
        w = B.matvec(v)
        lam = float(v @ w)
        res = float(np.linalg.norm(w - lam * v))
        if trace is not None:
            trace.append(lam)
        if res <= cfg.tolerance:
            return EigenResult(lam, canonicalize(v), it, res)
        u = sign * w + shift * v
        v = u / np.linalg.norm(u)
    best = EigenResult(lam, canonicalize(v), cfg.max_iterations, res)
    raise ConvergenceError(
        f"power iteration did not reach residual {cfg.tolerance:g} in "
        f"{cfg.max_iterations} iterations (residual {res:.3g})", best)


def max_eigen(B: BellMatrix, cfg: SolverConfig = SolverConfig(), trace: list | None = None) -> EigenResult:
    """Largest eigenpair; ``trace`` (if given) receives the Rayleigh quotients."""
    return _power(B, 1.0, cfg, trace)


def min_eigen(B: BellMatrix, cfg: SolverConfig = SolverConfig(), trace: list | None = None) -> EigenResult:
    return _power(B, -1.0, cfg, trace)


def full_spectrum_oracle(B: BellMatrix) -> np.ndarray:
    """All eigenvalues, ascending, from a dense symmetric eigendecomposition."""
    if B.d > ORACLE_CAP:
        raise CapacityError(f"full spectrum limited to d <= {ORACLE_CAP}")
    dense = B.array if isinstance(B, DenseBellMatrix) else B.to_dense()
    return np.linalg.eigvalsh(dense)
