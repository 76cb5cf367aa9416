import math

import numpy as np
import pytest

from cglmp.core import PhaseSettings
from cglmp.rules import negative_rule, phases_from_rule, positive_rule
from cglmp.search import SearchProblem, objective, search
from cglmp.violation import extremal_eigen


def test_objective_examples():
    assert objective(phases_from_rule(positive_rule(2)), "positive") == pytest.approx(2 * math.sqrt(2), abs=1e-12)
    assert objective(phases_from_rule(negative_rule(3)), "negative") == pytest.approx(-4, abs=1e-12)
    assert objective(PhaseSettings.zeros(3), "positive") == pytest.approx(2, abs=1e-12)


def test_objective_gauge_invariance(rng):
    d = 6
    p = PhaseSettings.random(d, rng)
    base = objective(p, "positive")
    for k in range(4):
        vecs = [p.phi1, p.phi2, p.vphi1, p.vphi2]
        vecs[k] = vecs[k] + rng.uniform(-5, 5)
        assert abs(objective(PhaseSettings(*vecs), "positive") - base) < 1e-10


def test_objective_cap():
    with pytest.raises(ValueError):
        objective(PhaseSettings.zeros(13), "positive")


@pytest.mark.parametrize("d,side,expected", [
    (2, "positive", 2 * math.sqrt(2)),
    (3, "negative", -4.0),
    (4, "positive", None),
])
def test_search_rediscovers_rules(d, side, expected):
    if expected is None:
        expected = extremal_eigen(d, side).eigenvalue
    result = search(SearchProblem(d, side, restarts=20, seed=1))
    assert result.best_value == pytest.approx(expected, abs=1e-6)
    assert len(result.history) == 20
    assert objective(result.best_phases, side) == pytest.approx(result.best_value, abs=1e-12)
    assert np.all(result.best_phases.phi1 == 0)


def test_search_deterministic_and_parallel_consistent():
    a = search(SearchProblem(3, "positive", restarts=4, seed=7))
    b = search(SearchProblem(3, "positive", restarts=4, seed=7), workers=3)
    assert a.history == b.history
    assert a.best_value == b.best_value


def test_problem_validation():
    with pytest.raises(ValueError):
        SearchProblem(3, "positive", restarts=0)
    with pytest.raises(ValueError):
        SearchProblem(10, "positive")
