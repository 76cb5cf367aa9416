"""Phase rules fixing the UMBS settings at the extremes of I_d.

Every rule uses the uniform form ``phi1 = 0, phi2 = n pi/d,
vphi1 = n pi/(2d), vphi2 = -n pi/(2d)``; only the integers ``n_j`` differ.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import PhaseSettings, check_dimension


class Side(str, enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"

    @classmethod
    def parse(cls, value) -> Side:
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"side must be 'positive' or 'negative', got {value!r}") from None


@dataclass(frozen=True)
class PhaseRule:
    side: Side
    d: int
    n: np.ndarray

    def __post_init__(self):
        n = np.asarray(self.n, dtype=np.int64)
        if n.shape != (check_dimension(self.d),):
            raise ValueError("rule needs exactly d integers")
        n.setflags(write=False)
        object.__setattr__(self, "n", n)

    @property
    def segments(self) -> np.ndarray:
        """Block label ``s_j`` with ``n_j = j + d s_j``."""
        return (self.n - np.arange(self.d)) // self.d


def negative_segments(d: int) -> tuple[range, range, range]:
    """Index ranges taking ``n_j = j``, ``d + j`` and ``2d + j``."""
    d = check_dimension(d)
    t = (d - 2) // 3
    return range(0, t + 1), range(t + 1, d - 1 - t), range(d - 1 - t, d)


def positive_rule(d: int) -> PhaseRule:
    d = check_dimension(d)
    return PhaseRule(Side.POSITIVE, d, np.arange(d))


def negative_rule(d: int) -> PhaseRule:
    d = check_dimension(d)
    n = np.arange(d)
    for s, seg in enumerate(negative_segments(d)):
        n[seg.start:seg.stop] += s * d
    return PhaseRule(Side.NEGATIVE, d, n)


def rule_for(side, d: int) -> PhaseRule:
    return positive_rule(d) if Side.parse(side) is Side.POSITIVE else negative_rule(d)


def phases_from_rule(rule: PhaseRule) -> PhaseSettings:
    # left unreduced mod 2 pi so n_j differences stay exact
    base = rule.n * np.pi / rule.d
    return PhaseSettings(np.zeros(rule.d), base, base / 2, -base / 2)
