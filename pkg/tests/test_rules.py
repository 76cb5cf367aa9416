import numpy as np
import pytest

from cglmp.rules import Side, negative_rule, negative_segments, phases_from_rule, positive_rule


@pytest.mark.parametrize("d", [2, 4, 7])
def test_positive_rule(d):
    assert positive_rule(d).n.tolist() == list(range(d))


@pytest.mark.parametrize("d,n", [
    (2, [0, 5]),
    (3, [0, 4, 8]),
    (4, [0, 5, 6, 11]),
    (8, [0, 1, 2, 11, 12, 21, 22, 23]),
])
def test_negative_rule(d, n):
    assert negative_rule(d).n.tolist() == n


def test_d8_segments():
    a, b, c = negative_segments(8)
    assert (list(a), list(b), list(c)) == ([0, 1, 2], [3, 4], [5, 6, 7])


@pytest.mark.parametrize("d", range(2, 1001))
def test_segments_partition(d):
    ranges = negative_segments(d)
    covered = [j for r in ranges for j in r]
    assert covered == list(range(d))
    n = negative_rule(d).n
    assert np.all(np.diff(n) >= 0)
    assert set((n - np.arange(d)).tolist()) <= {0, d, 2 * d}
    assert n.min() >= 0 and n.max() < 3 * d


def test_phases_from_rule():
    p = phases_from_rule(positive_rule(2))
    np.testing.assert_allclose(p.phi1, [0, 0])
    np.testing.assert_allclose(p.phi2, [0, np.pi / 2])
    np.testing.assert_allclose(p.vphi1, [0, np.pi / 4])
    np.testing.assert_allclose(p.vphi2, [0, -np.pi / 4])
    q = phases_from_rule(negative_rule(3))
    np.testing.assert_allclose(q.phi2, [0, 4 * np.pi / 3, 8 * np.pi / 3])


def test_first_index_phases_vanish():
    for d in (2, 9, 50):
        for rule in (positive_rule(d), negative_rule(d)):
            p = phases_from_rule(rule)
            assert p.phi1[0] == p.phi2[0] == p.vphi1[0] == p.vphi2[0] == 0


def test_side_parse():
    assert Side.parse("Negative") is Side.NEGATIVE
    with pytest.raises(ValueError):
        Side.parse("left")
