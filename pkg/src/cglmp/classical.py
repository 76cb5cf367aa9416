"""Brute-force local bounds over deterministic strategies."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import CapacityError, check_dimension

ENUMERATION_CAP = 20


@dataclass(frozen=True)
class DeterministicStrategy:
    a1: int
    a2: int
    b1: int
    b2: int


def _twice_f(sign: int, m: np.ndarray, n: np.ndarray, d: int) -> np.ndarray:
    # 2 f^{ij}(m, n) = (d - 1) - 2 M(sign (m + n), d), an integer
    return (d - 1) - 2 * ((sign * (m + n)) % d)


def strategy_values(d: int) -> np.ndarray:
    """``(d-1) I_d`` for every strategy, shape ``(d, d, d, d)`` over (a1, a2, b1, b2)."""
    d = check_dimension(d)
    a1, a2, b1, b2 = np.meshgrid(*(np.arange(d, dtype=np.int64),) * 4, indexing="ij")
    # I_d = (1/S) sum f = (2/(d-1)) sum f = (sum 2f)/(d-1)
    return (_twice_f(1, a1, b1, d) + _twice_f(-1, a1, b2, d)
            - _twice_f(1, a2, b1, d) + _twice_f(1, a2, b2, d))


def classical_extremes(d: int):
    """Exact ``(min, max, argmin, argmax)`` of I_d over all d^4 strategies.

    Ties keep the lexicographically first strategy.
    """
    d = check_dimension(d)
    if d > ENUMERATION_CAP:
        raise CapacityError(f"enumeration limited to d <= {ENUMERATION_CAP}")
    vals = strategy_values(d).ravel()
    lo, hi = int(np.argmin(vals)), int(np.argmax(vals))

    def witness(flat):
        return DeterministicStrategy(*(int(i) for i in np.unravel_index(flat, (d,) * 4)))

    return (Fraction(int(vals[lo]), d - 1), Fraction(int(vals[hi]), d - 1),
            witness(lo), witness(hi))


def strategy_value(s: DeterministicStrategy, d: int) -> Fraction:
    d = check_dimension(d)
    total = sum(
        sign * int(_twice_f(e, np.int64(x), np.int64(y), d))
        for e, x, y, sign in ((1, s.a1, s.b1, 1), (-1, s.a1, s.b2, 1),
                              (1, s.a2, s.b1, -1), (1, s.a2, s.b2, 1))
    )
    return Fraction(total, d - 1)
