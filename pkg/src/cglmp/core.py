"""The CGLMP functional: correlation functions, both evaluation paths, bounds,
noise thresholds and entanglement diagnostics.

Conventions
-----------
Outcomes and basis indices run over ``0..d-1``; setting indices are 1 and 2.
``M(x, d)`` is the nonnegative remainder, so ``f^{ij}(m, n)`` lies in
``[S - (d-1), S]`` with ``S = (d-1)/2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


class InvalidDimensionError(ValueError):
    pass


class CapacityError(ValueError):
    """Requested size exceeds a configured memory or enumeration cap."""


def check_dimension(d) -> int:
    if isinstance(d, (bool, np.bool_)) or int(d) != d or d < 2:
        raise InvalidDimensionError(f"dimension must be an integer >= 2, got {d!r}")
    return int(d)


def spin(d: int) -> float:
    return (check_dimension(d) - 1) / 2


@dataclass(frozen=True)
class SchmidtState:
    """Real Schmidt coefficients of ``sum_i alpha_i |ii>``.

    Negative entries are allowed; a sign is a local phase and leaves the
    entropy unchanged.
    """

    alphas: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.alphas, dtype=float)
        if a.ndim != 1:
            raise ValueError("alphas must be a 1-d vector")
        check_dimension(a.size)
        if abs(a @ a - 1.0) > 1e-12:
            raise ValueError(f"state not normalized: sum alpha^2 = {a @ a!r}")
        a.setflags(write=False)
        object.__setattr__(self, "alphas", a)

    @property
    def d(self) -> int:
        return self.alphas.size

    @classmethod
    def from_vector(cls, v) -> SchmidtState:
        v = np.asarray(v, dtype=float)
        return cls(v / np.linalg.norm(v))

    @classmethod
    def maximally_entangled(cls, d: int) -> SchmidtState:
        d = check_dimension(d)
        return cls(np.full(d, 1.0 / math.sqrt(d)))

    @classmethod
    def product(cls, d: int) -> SchmidtState:
        a = np.zeros(check_dimension(d))
        a[0] = 1.0
        return cls(a)

    @classmethod
    def random(cls, d: int, rng: np.random.Generator) -> SchmidtState:
        return cls.from_vector(rng.normal(size=check_dimension(d)))

    def canonical(self) -> SchmidtState:
        """Flip the overall sign so the first non-negligible entry is positive."""
        a = self.alphas
        idx = int(np.argmax(np.abs(a) > 1e-12 * np.abs(a).max()))
        return self if a[idx] > 0 else SchmidtState(-a)


@dataclass(frozen=True)
class PhaseSettings:
    """Phase-shifter vectors of the four UMBS measurements, in radians.

    ``phi1``/``phi2`` belong to Alice's settings, ``vphi1``/``vphi2`` to Bob's.
    """

    phi1: np.ndarray
    phi2: np.ndarray
    vphi1: np.ndarray
    vphi2: np.ndarray

    def __post_init__(self):
        vecs = [np.asarray(getattr(self, k), dtype=float) for k in ("phi1", "phi2", "vphi1", "vphi2")]
        if any(v.ndim != 1 for v in vecs) or len({v.size for v in vecs}) != 1:
            raise ValueError("all four phase vectors must be 1-d with the same length d")
        check_dimension(vecs[0].size)
        for k, v in zip(("phi1", "phi2", "vphi1", "vphi2"), vecs):
            v.setflags(write=False)
            object.__setattr__(self, k, v)

    @property
    def d(self) -> int:
        return self.phi1.size

    def alice(self, a: int) -> np.ndarray:
        return {1: self.phi1, 2: self.phi2}[a]

    def bob(self, b: int) -> np.ndarray:
        return {1: self.vphi1, 2: self.vphi2}[b]

    @classmethod
    def zeros(cls, d: int) -> PhaseSettings:
        z = np.zeros(check_dimension(d))
        return cls(z, z, z, z)

    @classmethod
    def random(cls, d: int, rng: np.random.Generator) -> PhaseSettings:
        return cls(*rng.uniform(0.0, 2 * np.pi, size=(4, check_dimension(d))))


@dataclass(frozen=True)
class NoiseModel:
    """White-noise admixture ``F * 1/d^2 + (1 - F) |Phi><Phi|``."""

    fraction: float

    def __post_init__(self):
        if not 0.0 <= self.fraction <= 1.0:
            raise ValueError(f"noise fraction must lie in [0, 1], got {self.fraction}")


# sign pattern of I_d = Q11 + Q12 - Q21 + Q22
TERMS = ((1, 1, 1.0), (1, 2, 1.0), (2, 1, -1.0), (2, 2, 1.0))


def classical_bounds(d: int, exact: bool = False):
    """Local-realistic range ``(lower, upper)`` of I_d."""
    d = check_dimension(d)
    lower = Fraction(-2) if d == 2 else Fraction(-2 * (d + 1), d - 1)
    if exact:
        return lower, Fraction(2)
    return float(lower), 2.0


def _eps(x: int) -> int:
    return 1 if x >= 0 else -1


def correlation_eigenvalue(i: int, j: int, m: int, n: int, d: int) -> float:
    d = check_dimension(d)
    if i not in (1, 2) or j not in (1, 2):
        raise ValueError(f"setting indices must be 1 or 2, got ({i}, {j})")
    if not (0 <= m < d and 0 <= n < d):
        raise ValueError(f"outcomes must lie in [0, {d}), got ({m}, {n})")
    return (d - 1) / 2 - (_eps(i - j) * (m + n)) % d


def correlation_table(i: int, j: int, d: int) -> np.ndarray:
    """``f^{ij}(m, n)`` for all outcome pairs as a d x d array."""
    d = check_dimension(d)
    k = np.arange(d)
    return (d - 1) / 2 - (_eps(i - j) * (k[:, None] + k[None, :])) % d


def _phase_diff(v: np.ndarray) -> np.ndarray:
    return v[:, None] - v[None, :]


def joint_probabilities(state: SchmidtState, phases: PhaseSettings, a: int, b: int) -> np.ndarray:
    """Full table ``P(A_a = k, B_b = l)`` indexed ``[k, l]``.

    The probability depends on ``k - l`` only, so d distinct values are
    computed and scattered.
    """
    d = state.d
    if phases.d != d:
        raise ValueError("state and phases have different dimensions")
    idx = np.arange(d)
    jm = _phase_diff(idx)
    delta = _phase_diff(phases.alice(a)) + _phase_diff(phases.bob(b))
    w = np.outer(state.alphas, state.alphas)
    # r = (k - l) mod d
    per_r = np.array([
        (w * np.cos(2 * np.pi / d * jm * r + delta)).sum() for r in range(d)
    ]) / d**2
    return per_r[(idx[:, None] - idx[None, :]) % d]


def joint_probability(state: SchmidtState, phases: PhaseSettings, a: int, b: int, k: int, l: int) -> float:
    d = state.d
    if a not in (1, 2) or b not in (1, 2):
        raise ValueError(f"setting indices must be 1 or 2, got ({a}, {b})")
    if not (0 <= k < d and 0 <= l < d):
        raise ValueError(f"outcomes must lie in [0, {d}), got ({k}, {l})")
    idx = np.arange(d)
    arg = (2 * np.pi / d * _phase_diff(idx) * (k - l)
           + _phase_diff(phases.alice(a)) + _phase_diff(phases.bob(b)))
    return float((np.outer(state.alphas, state.alphas) * np.cos(arg)).sum() / d**2)


def correlation_functions(state: SchmidtState, phases: PhaseSettings, noise: float = 0.0) -> dict:
    """``Q_ij`` for the four setting pairs, from the joint probabilities.

    Bob's outcome label is read as ``-n mod d`` when contracting with
    ``f^{ij}(m, n)``: with the UMBS probabilities depending on ``k - l`` and
    the correlation eigenvalues on ``m + n``, this relabeling is what makes
    the probability path coincide with the Bell-operator expression.

    ``noise`` mixes each table as ``F/d^2 + (1 - F) P``.
    """
    NoiseModel(noise)
    d = state.d
    S = (d - 1) / 2
    neg = (-np.arange(d)) % d
    out = {}
    for i, j, _ in TERMS:
        p = joint_probabilities(state, phases, i, j)
        p = noise / d**2 + (1.0 - noise) * p
        out[(i, j)] = float((correlation_table(i, j, d) * p[:, neg]).sum() / S)
    return out


def bell_value_from_probabilities(state: SchmidtState, phases: PhaseSettings, noise: float = 0.0) -> float:
    q = correlation_functions(state, phases, noise)
    return sum(sign * q[(i, j)] for i, j, sign in TERMS)


def pair_kernel(phases: PhaseSettings) -> np.ndarray:
    """Real symmetric kernel K with ``I_d = alpha^T K alpha`` (zero diagonal)."""
    d = phases.d
    idx = np.arange(d)
    x = np.pi / d * _phase_diff(idx)
    a1, a2 = _phase_diff(phases.phi1), _phase_diff(phases.phi2)
    b1, b2 = _phase_diff(phases.vphi1), _phase_diff(phases.vphi2)
    bracket = (-np.sin(a1 + b1 - x) + np.sin(a1 + b2 + x)
               + np.sin(a2 + b1 - x) - np.sin(a2 + b2 - x))
    denom = np.sin(x)
    np.fill_diagonal(denom, 1.0)
    k = bracket / denom / (d - 1)
    np.fill_diagonal(k, 0.0)
    return k


def bell_value_closed_form(state: SchmidtState, phases: PhaseSettings) -> float:
    """Real double sum over ``j != m``; O(d^2)."""
    if phases.d != state.d:
        raise ValueError("state and phases have different dimensions")
    a = state.alphas
    rows = (pair_kernel(phases) @ a) * a
    if state.d > 10_000:
        return math.fsum(rows)
    return float(rows.sum())


def weighted_root_sum(d: int, diff: int) -> complex:
    """``sum_k (1 - 2k/(d-1)) exp(i 2 pi k diff / d)`` by direct summation."""
    k = np.arange(check_dimension(d))
    return complex(((1 - 2 * k / (d - 1)) * np.exp(2j * np.pi * k * diff / d)).sum())


def weighted_root_sum_closed(d: int, diff: int) -> complex:
    if diff % d == 0:
        raise ValueError("closed form holds only for j != m (mod d)")
    return 2 * d / ((d - 1) * (1 - np.exp(2j * np.pi * diff / d)))


# Tolerance below which a threshold counts as "no violation"; absorbs the
# rounding of an extremal value that sits exactly on the classical bound.
VIOLATION_TOL = 1e-9


def noise_threshold_positive(i_max: float) -> float:
    """Minimal noise fraction hiding a violation of the upper bound 2.

    Returns 0.0 when ``i_max`` does not exceed the bound.
    """
    if i_max <= 0:
        raise ValueError(f"i_max must be positive, got {i_max}")
    f = 1.0 - 2.0 / i_max
    return f if f > VIOLATION_TOL else 0.0


def noise_threshold_negative(i_min: float, d: int) -> float:
    if i_min >= 0:
        raise ValueError(f"i_min must be negative, got {i_min}")
    lower, _ = classical_bounds(d)
    f = 1.0 - lower / i_min
    return f if f > VIOLATION_TOL else 0.0


def entropy_ratio(state: SchmidtState) -> tuple[float, float]:
    """Base-2 entanglement entropy of the reduced state and its ratio to log2 d."""
    p = state.alphas**2
    p = p[p > 0]
    entropy = float(-(p * np.log2(p)).sum())
    entropy = max(entropy, 0.0)
    ratio = min(entropy / math.log2(state.d), 1.0)
    return entropy, ratio
