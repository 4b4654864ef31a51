from fractions import Fraction as Fr
import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sklearn.base import clone

from strichartz import exponents as E
from strichartz._validation import as_recip, exponent_to_recip, parse_rational_list, rationals_up_to
from strichartz.exceptions import ParseError
from strichartz.exponents import Branch, GapRegion, Pair, Quad

recips = st.fractions(min_value=0, max_value=1, max_denominator=12)
sigmas = st.sampled_from([Fr(1, 2), Fr(1), Fr(3, 2), Fr(2), Fr(5, 2)])
quads = st.builds(Quad, recips, recips, recips, recips)


# -- parsing -------------------------------------------------------------------


def test_inf_maps_to_zero():
    assert as_recip("inf") == 0
    assert exponent_to_recip("inf") == 0
    assert exponent_to_recip("4") == Fr(1, 4)


@pytest.mark.parametrize("bad", ["x", "", "3/0", 0.5, "5/4", "-1/2"])
def test_as_recip_rejects(bad):
    with pytest.raises(ParseError):
        as_recip(bad)


def test_parse_list():
    assert parse_rational_list("1/2, 1/6,inf", recip=True) == [Fr(1, 2), Fr(1, 6), 0]
    with pytest.raises(ParseError):
        parse_rational_list("1/2,,1")


def test_farey_count():
    assert len(rationals_up_to(12)) == 47


# -- pairs ---------------------------------------------------------------------


@pytest.mark.parametrize(
    "pair, sigma, expected",
    [
        ((Fr(1, 2), Fr(1, 6)), Fr(3, 2), True),
        ((0, Fr(1, 2)), Fr(1, 2), True),
        ((0, Fr(1, 2)), Fr(7, 3), True),
        ((Fr(1, 2), 0), Fr(1), False),
    ],
)
def test_sharp_admissible(pair, sigma, expected):
    assert E.is_sharp_admissible(Pair(*pair), sigma) is expected


def test_sharp_endpoint_tag():
    v = E.sharp_admissible_verdict(Pair(Fr(1, 2), 0), 1)
    assert not v.member
    assert E.EXCLUDED_ENDPOINT in v.failed_conditions


@pytest.mark.parametrize(
    "pair, sigma, expected",
    [
        ((0, Fr(1, 2)), Fr(1, 3), True),
        ((Fr(1, 4), Fr(1, 4)), Fr(1), True),
        ((Fr(1, 4), Fr(1, 4)), Fr(1, 2), False),
    ],
)
def test_acceptable(pair, sigma, expected):
    assert E.is_acceptable(Pair(*pair), sigma) is expected


def test_beta_examples():
    assert E.beta(Quad(0, 0, 0, 0), Fr(3, 2)) == Fr(-3, 2)
    assert E.beta(Quad(1, 0, 1, 0), 1) == 1
    assert E.beta(Quad(Fr(1, 2), Fr(1, 6), Fr(1, 2), Fr(1, 6)), Fr(3, 2)) == 0


@given(recips, recips, recips, recips, sigmas, recips)
def test_beta_affine(a, b, c, d, s, lam):
    x, y = Quad(a, b, c, d), Quad(d, c, b, a)
    mix = Quad(*(lam * u + (1 - lam) * v for u, v in zip(x, y)))
    assert E.beta(mix, s) == lam * E.beta(x, s) + (1 - lam) * E.beta(y, s)


# -- local region -----------------------------------------------------------------


def test_local_examples():
    assert E.satisfies_local(Quad(0, 0, 0, 0), Fr(3, 2)).member
    assert E.satisfies_local(Quad(Fr(1, 2), Fr(1, 6), Fr(1, 2), Fr(1, 6)), Fr(3, 2)).member
    assert not E.satisfies_local(Quad(Fr(1, 2), Fr(1, 2), Fr(1, 2), 0), 3).member
    assert E.local_region_oracle(Quad(0, 0, 0, 0), Fr(3, 2))
    assert E.local_region_oracle(Quad(Fr(1, 2), Fr(1, 6), Fr(1, 2), Fr(1, 6)), Fr(3, 2))


@given(recips, recips, recips)
def test_local_sigma_one_needs_finite_rt(q, r, qt):
    v = E.satisfies_local(Quad(q, r, qt, 0), 1)
    assert not v.member


@settings(max_examples=400)
@given(quads, sigmas)
def test_oracle_matches_closed_form(x, s):
    assert E.local_region_oracle(x, s) == E.satisfies_local(x, s).member


@settings(max_examples=300)
@given(quads, sigmas)
def test_swap_symmetry(x, s):
    assert E.satisfies_local(x, s).member == E.satisfies_local(x.swapped(), s).member
    assert E.satisfies_global(x, s).member == E.satisfies_global(x.swapped(), s).member


@settings(max_examples=300)
@given(recips, recips, sigmas)
def test_sharp_pairs_are_local(q, qt, s):
    # put both pairs on the sharp line 1/q = s (1/2 - 1/r)
    r = Fr(1, 2) - q / s
    rt = Fr(1, 2) - qt / s
    if not (0 <= r <= 1 and 0 <= rt <= 1):
        return
    x = Quad(q, r, qt, rt)
    if E.is_sharp_admissible(x.qr, s) and E.is_sharp_admissible(x.qtrt, s):
        assert E.satisfies_local(x, s).member


# -- global region ----------------------------------------------------------------


def test_global_examples():
    v = E.satisfies_global(Quad(*[Fr(3, 10)] * 4), Fr(3, 2))
    assert v.member and v.branch is Branch.NON_SHARP
    r = Fr(1, 4)  # (sigma - 1) / (2 sigma) at sigma = 2
    v = E.satisfies_global(Quad(Fr(1, 2), r, Fr(1, 2), r), 2)
    assert v.member and v.branch is Branch.SHARP
    assert E.satisfies_global(Quad(Fr(1, 2), Fr(1, 6), Fr(1, 2), Fr(1, 6)), Fr(3, 2)).member


@settings(max_examples=300)
@given(quads, sigmas)
def test_global_needs_scaling(x, s):
    if E.beta(x, s) != 0:
        v = E.satisfies_global(x, s)
        assert not v.member
        assert E.SCALING in v.failed_conditions


@settings(max_examples=300)
@given(quads, st.sampled_from([1, 2, 3, 4]))
def test_global_implies_necessary(x, n):
    if E.satisfies_global(x, Fr(n, 2)).member:
        assert E.schrodinger_global_necessary(x, n).member


@settings(max_examples=500)
@given(quads, sigmas)
def test_midpoint_pair_is_sharp(x, s):
    if E.satisfies_global(x, s).member:
        Q = (x.q + x.qt) / 2
        R = (x.r + x.rt) / 2
        assert Q <= s * (Fr(1, 2) - R)
        # the scaling equality forces equality in the defining inequality
        assert Q == s * (Fr(1, 2) - R)


# -- Schrodinger necessary conditions -------------------------------------------


def test_necessary_examples():
    assert E.schrodinger_local_necessary(Quad(0, Fr(1, 2), 0, Fr(1, 2)), 3).member
    v = E.schrodinger_local_necessary(Quad(0, Fr(3, 4), 0, Fr(1, 4)), 3)
    assert not v.member and E.DIFF_R_LE_1_N in v.failed_conditions
    v = E.schrodinger_local_necessary(Quad(1, Fr(5, 8), 1, Fr(1, 2)), 3)
    assert not v.member and E.SUM_R_LE_1 in v.failed_conditions
    assert E.schrodinger_global_necessary(Quad(*[Fr(3, 10)] * 4), 3).member


@settings(max_examples=200)
@given(quads, st.sampled_from([1, 2, 3]))
def test_global_necessary_rejects_large_q_sum(x, n):
    if x.q + x.qt > 1:
        assert E.SUM_Q_LE_1 in E.schrodinger_global_necessary(x, n).failed_conditions


# -- gap regions ------------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_gap_half_half_covered(n):
    assert E.gap_region(Fr(1, 2), Fr(1, 2), n) is GapRegion.COVERED


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_gap_r1_family(n):
    d = Fr(1, 4 * n)
    assert E.gap_region(Fr(1, 2) + d, Fr(1, 2) - d, n) is GapRegion.R1


def test_gap_fixed_points():
    assert E.gap_region(Fr(5, 8), Fr(3, 8), 3) is GapRegion.R1
    assert E.gap_region(1, 0, 3) is GapRegion.EXCLUDED


def test_gap_regions_partition():
    grid = rationals_up_to(8)
    seen = set()
    for r, rt in itertools.product(grid, grid):
        seen.add(E.gap_region(r, rt, 3))
    assert GapRegion.COVERED in seen and GapRegion.EXCLUDED in seen


# -- estimator API ---------------------------------------------------------------


def test_region_classifier_api():
    clf = E.RegionClassifier(region="local", sigma="3/2")
    assert clf.get_params() == {"region": "local", "sigma": "3/2", "n": None}
    clone(clf)
    X = [["1/2", "1/6", "1/2", "1/6"], [0, 0, 0, 0], ["1/2", "1/2", "1/2", 0]]
    assert clf.fit(X).predict(X).tolist() == [True, True, False]
    assert clf.score(X, [True, True, False]) == 1.0
    nec = E.RegionClassifier(region="nec-local", n=3).fit(X)
    assert nec.predict([["0", "1/2", "0", "1/2"]]).tolist() == [True]


def test_region_classifier_rejects():
    with pytest.raises(ValueError):
        E.RegionClassifier(region="nec-local").fit([[0, 0, 0, 0]])
    with pytest.raises(ParseError):
        E.RegionClassifier().fit([[0, 0, 0]])
    with pytest.raises(ValueError):
        E.RegionClassifier(region="nowhere").fit([[0, 0, 0, 0]])


def test_verdict_dict():
    d = E.satisfies_global(Quad(*[Fr(3, 10)] * 4), Fr(3, 2)).to_dict()
    assert d == {"member": True, "failed_conditions": [], "branch": "NonSharp"}
