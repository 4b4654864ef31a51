from fractions import Fraction as Fr

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from strichartz import whitney as W
from strichartz.exceptions import ScaleRangeError


def test_select_examples():
    assert W.select(0, 0, 2)
    assert not W.select(0, 0, 4)
    assert not W.select(0, 0, 1)


def test_partners_examples():
    assert W.partners(0, 0) == [2, 3]
    assert W.partners(0, 1) == [3]


def test_partners_subset_exhaustive():
    for k in (-3, 0, 2):
        for i in range(-64, 65):
            js = W.partners(k, i)
            assert set(js) <= {i + 2, i + 3}
            assert 1 <= len(js) <= 2


def test_covering_examples():
    assert W.covering_square(Fr(3, 10), Fr(26, 10), -4, 3) == W.DyadicSquare(0, 0, 2)
    sq = W.covering_square(Fr(11, 10), Fr(14, 10), -4, 3)
    assert sq == W.DyadicSquare(-3, 8, 11)
    assert sq.s_interval == (1, Fr(9, 8)) and sq.t_interval == (Fr(11, 8), Fr(3, 2))
    assert W.covering_square(2, 1, -4, 3) is None


def test_decompose_window():
    squares = W.decompose(W.Window(0, 8), -4, 3)
    assert len(squares) == 360
    assert all(sq.gap() / sq.scale in (1, 2) for sq in squares)
    assert squares == sorted(squares)


def test_window_and_scales_rejected():
    with pytest.raises(ValueError):
        W.Window(2, 2)
    with pytest.raises(ScaleRangeError):
        W.decompose(W.Window(0, 1), 2, 1)


def test_coverage_multiplicity_is_one():
    window = W.Window(0, 8)
    squares = W.decompose(window, -4, 3)
    counts, s, t = W.coverage_multiplicity(squares, window, 256)
    S, T = np.meshgrid(s, t, indexing="ij")
    assert np.all(counts[(T - S) >= 4 * 2.0**-4] == 1)
    assert counts.max() == 1
    assert np.all(counts[T <= S] == 0)


points = st.fractions(min_value=0, max_value=8, max_denominator=64)
FINE = W.decompose(W.Window(0, 8), -7, 3)


@given(points, points)
def test_unique_scale(s, t):
    # FINE only holds squares meeting the half-open window [0, 8)
    if not s < t < 8:
        return
    hits = [sq for sq in FINE if sq.contains(s, t)]
    found = W.covering_square(s, t, -7, 3)
    if found is None:
        assert hits == []
    else:
        assert hits == [found]


def test_sum_inequality_indicator():
    w = W.sum_inequality(np.ones(6), np.ones(6), 0, Fr(1, 2), Fr(1, 2))
    assert w.hypothesis and w.holds


def test_sum_inequality_single_entry():
    f = np.zeros(8)
    f[0] = 1.0
    g = np.ones(8)
    w = W.sum_inequality(f, g, 0, 0, 1)
    # one interval, two partners: lhs = 2 = MAX_PARTNERS * rhs
    assert w.lhs == 2.0 and w.rhs == 1.0 and w.holds


def test_sum_inequality_holds_under_hypothesis():
    rng = np.random.default_rng(3)
    for _ in range(300):
        p, pt = (Fr(int(a), 12) for a in rng.integers(0, 13, 2))
        if p + pt < 1:
            continue
        f, g = rng.exponential(size=(2, 10))
        assert W.sum_inequality(f, g, int(rng.integers(-3, 3)), p, pt, offset=int(rng.integers(-5, 5))).holds


def test_sum_violation_found_below_hypothesis():
    w = W.find_sum_violation(Fr(1, 4), Fr(1, 4), rng=0)
    assert w is not None and not w.hypothesis and not w.holds
    assert W.find_sum_violation(Fr(1, 2), Fr(1, 2), rng=0) is None


def test_sum_inequality_rejects_negative():
    with pytest.raises(ValueError):
        W.sum_inequality([-1.0], [1.0], 0, 1, 1)
