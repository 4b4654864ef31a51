"""Exact decision procedures for Strichartz exponent regions.

Every exponent is stored as its reciprocal, an exact :class:`Fraction` in
[0, 1], so ``q = inf`` is just ``0`` and all region conditions are affine
comparisons. Nothing in this module touches floating point.

Two independent routes decide the local region: :func:`satisfies_local`
evaluates the closed-form inequalities, while :func:`local_region_oracle`
searches for an interpolation parameter by comparing bounds on its
reciprocal, following the constructive description of the set.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from ._validation import as_recip, as_sigma, check_dimension, check_quads

HALF = Fraction(1, 2)
ZERO = Fraction(0)
ONE = Fraction(1)

# Stable condition tags reported in Verdict.failed_conditions.
RANGE_Q = "range-q"
RANGE_R = "range-r"
RANGE_QT = "range-qt"
RANGE_RT = "range-rt"
SCALING_LINE = "scaling-line"
EXCLUDED_ENDPOINT = "excluded-(2,inf,1)"
ACCEPTABLE = "acceptable"
ACCEPTABLE_QR = "acceptable-qr"
ACCEPTABLE_QTRT = "acceptable-qtrt"
SCALING = "scaling"
SUM_Q_LT_1 = "sum-q-lt-1"
SUM_Q_LE_1 = "sum-q-le-1"
RATIO_R_RT = "ratio-r-rt"
RATIO_RT_R = "ratio-rt-r"
STRICT_RATIO_R_RT = "strict-ratio-r-rt"
STRICT_RATIO_RT_R = "strict-ratio-rt-r"
SHARP_Q_LE_R = "sharp-q-le-r"
SHARP_QT_LE_RT = "sharp-qt-le-rt"
Q_LOWER = "q-lower"
QT_LOWER = "qt-lower"
SIGMA1_R_FINITE = "sigma1-r-finite"
SIGMA1_RT_FINITE = "sigma1-rt-finite"
SUM_R_LE_1 = "sum-r-le-1"
DIFF_R_LE_1_N = "diff-r-le-1/n"
FOCUSING_R_RT = "focusing-r-rt"
FOCUSING_RT_R = "focusing-rt-r"
FLASH_Q = "flash-q"
FLASH_QT = "flash-qt"


class Branch(str, enum.Enum):
    NON_SHARP = "NonSharp"
    SHARP = "Sharp"
    NOT_APPLICABLE = "NotApplicable"


class GapRegion(str, enum.Enum):
    COVERED = "Covered"
    R1 = "R1"
    R2 = "R2"
    R3 = "R3"
    R4 = "R4"
    EXCLUDED = "Excluded"


@dataclass(frozen=True)
class Pair:
    """Reciprocal exponent pair ``(1/q, 1/r)``."""

    q: Fraction
    r: Fraction

    def __post_init__(self):
        object.__setattr__(self, "q", as_recip(self.q))
        object.__setattr__(self, "r", as_recip(self.r))

    def __iter__(self) -> Iterator[Fraction]:
        yield self.q
        yield self.r


@dataclass(frozen=True)
class Quad:
    """Reciprocal quadruple ``(1/q, 1/r; 1/qt, 1/rt)``."""

    q: Fraction
    r: Fraction
    qt: Fraction
    rt: Fraction

    def __post_init__(self):
        for name in ("q", "r", "qt", "rt"):
            object.__setattr__(self, name, as_recip(getattr(self, name)))

    @classmethod
    def from_pairs(cls, qr: Pair, qtrt: Pair) -> "Quad":
        return cls(qr.q, qr.r, qtrt.q, qtrt.r)

    @property
    def qr(self) -> Pair:
        return Pair(self.q, self.r)

    @property
    def qtrt(self) -> Pair:
        return Pair(self.qt, self.rt)

    def swapped(self) -> "Quad":
        return Quad(self.qt, self.rt, self.q, self.r)

    def __iter__(self) -> Iterator[Fraction]:
        yield from (self.q, self.r, self.qt, self.rt)

    def __str__(self) -> str:
        return f"({self.q},{self.r};{self.qt},{self.rt})"


@dataclass(frozen=True)
class Verdict:
    member: bool
    failed_conditions: tuple[str, ...] = field(default_factory=tuple)
    branch: Branch = Branch.NOT_APPLICABLE

    def to_dict(self) -> dict:
        return {
            "member": self.member,
            "failed_conditions": list(self.failed_conditions),
            "branch": self.branch.value,
        }


def _verdict(failed: list[str], branch: Branch = Branch.NOT_APPLICABLE) -> Verdict:
    return Verdict(member=not failed, failed_conditions=tuple(failed), branch=branch)


# -- pairs -----------------------------------------------------------------


def sharp_admissible_verdict(p: Pair, sigma) -> Verdict:
    s = as_sigma(sigma)
    failed = []
    if p.q > HALF:
        failed.append(RANGE_Q)
    if p.r > HALF:
        failed.append(RANGE_R)
    if p.q != s * (HALF - p.r):
        failed.append(SCALING_LINE)
    if p.q == HALF and p.r == 0 and s == 1:
        failed.append(EXCLUDED_ENDPOINT)
    return _verdict(failed)


def is_sharp_admissible(p: Pair, sigma) -> bool:
    return sharp_admissible_verdict(p, sigma).member


def is_acceptable(p: Pair, sigma) -> bool:
    s = as_sigma(sigma)
    if p.q == 0 and p.r == HALF:
        return True
    return p.q < 2 * s * (HALF - p.r)


def acceptable_verdict(p: Pair, sigma) -> Verdict:
    return _verdict([] if is_acceptable(p, sigma) else [ACCEPTABLE])


def beta(x: Quad, sigma) -> Fraction:
    """Scaling exponent of the localized estimate; zero on the scaling hyperplane."""
    s = as_sigma(sigma)
    return x.q + x.qt - s * (1 - x.r - x.rt)


# -- local region ----------------------------------------------------------


def _local_failures(x: Quad, s: Fraction) -> list[str]:
    failed = []
    # reciprocals of q, qt are already in [0, 1] by construction
    if x.r > HALF:
        failed.append(RANGE_R)
    if x.rt > HALF:
        failed.append(RANGE_RT)
    if (s - 1) * x.r > s * x.rt:
        failed.append(RATIO_R_RT)
    if (s - 1) * x.rt > s * x.r:
        failed.append(RATIO_RT_R)
    if x.q < s * (x.rt - x.r):
        failed.append(Q_LOWER)
    if x.qt < s * (x.r - x.rt):
        failed.append(QT_LOWER)
    # point/line deletion, applied after the half-space tests
    if s == 1:
        if x.r == 0:
            failed.append(SIGMA1_R_FINITE)
        if x.rt == 0:
            failed.append(SIGMA1_RT_FINITE)
    return failed


def satisfies_local(x: Quad, sigma) -> Verdict:
    """Membership in the local region (unit intervals at unit distance)."""
    return _verdict(_local_failures(x, as_sigma(sigma)))


def _ext_le(a: tuple[Fraction, Fraction], b: tuple[Fraction, Fraction]) -> bool:
    """Compare extended non-negative values ``num/den`` (``den == 0`` is +inf)."""
    an, ad = a
    bn, bd = b
    return an * bd <= bn * ad


def local_region_oracle(x: Quad, sigma) -> bool:
    """Decide local membership by searching for the interpolation parameter.

    The set is the union over ``theta`` in [0, 1] of points reached from the
    sharp-admissible square scaled by ``theta`` and then enlarged in the q
    directions. Writing ``u = 1/theta`` every constraint becomes a lower or
    upper bound on ``u``; a point belongs to the set iff every lower bound is
    at most every upper bound. Bounds are kept as ``(num, den)`` with
    non-negative parts so that zero denominators encode +inf and no division
    ever happens.
    """
    s = as_sigma(sigma)
    lower: list[tuple[Fraction, Fraction]] = [(ONE, ONE)]
    # u >= (s-1)/s * r/2 ; vacuous unless s > 1
    if s > 1:
        lower.append((s - 1, 2 * s * x.r))
        lower.append((s - 1, 2 * s * x.rt))
    # u >= (s/2) / (1/q + s/r)
    lower.append((s / 2, x.q + s * x.r))
    lower.append((s / 2, x.qt + s * x.rt))
    # u <= r/2
    upper = [(ONE, 2 * x.r), (ONE, 2 * x.rt)]

    if not all(_ext_le(lo, up) for lo in lower for up in upper):
        return False
    if s == 1 and (x.r == 0 or x.rt == 0):
        return False
    return True


# -- global region ---------------------------------------------------------


def satisfies_global(x: Quad, sigma) -> Verdict:
    """Membership in the global (scale-invariant) region."""
    s = as_sigma(sigma)
    failed = []
    if not is_acceptable(x.qr, s):
        failed.append(ACCEPTABLE_QR)
    if not is_acceptable(x.qtrt, s):
        failed.append(ACCEPTABLE_QTRT)
    if beta(x, s) != 0:
        failed.append(SCALING)

    branch = Branch.NOT_APPLICABLE
    if s == 1:
        if x.r == 0:
            failed.append(SIGMA1_R_FINITE)
        if x.rt == 0:
            failed.append(SIGMA1_RT_FINITE)
    elif s > 1:
        total = x.q + x.qt
        if total < 1:
            branch = Branch.NON_SHARP
            if (s - 1) * x.r > s * x.rt:
                failed.append(RATIO_R_RT)
            if (s - 1) * x.rt > s * x.r:
                failed.append(RATIO_RT_R)
        elif total == 1:
            branch = Branch.SHARP
            if not (s - 1) * x.r < s * x.rt:
                failed.append(STRICT_RATIO_R_RT)
            if not (s - 1) * x.rt < s * x.r:
                failed.append(STRICT_RATIO_RT_R)
            if x.r > x.q:
                failed.append(SHARP_Q_LE_R)
            if x.rt > x.qt:
                failed.append(SHARP_QT_LE_RT)
        else:
            failed.append(SUM_Q_LE_1)
    return _verdict(failed, branch)


# -- Schrodinger necessary conditions ---------------------------------------


def _rr_necessary(x: Quad, n: int) -> list[str]:
    failed = []
    if abs(x.r - x.rt) > Fraction(1, n):
        failed.append(DIFF_R_LE_1_N)
    if (n - 2) * x.r - 2 * x.q > n * x.rt:
        failed.append(FOCUSING_R_RT)
    if (n - 2) * x.rt - 2 * x.qt > n * x.r:
        failed.append(FOCUSING_RT_R)
    return failed


def schrodinger_local_necessary(x: Quad, n) -> Verdict:
    n = check_dimension(n)
    failed = []
    if x.r + x.rt > 1:
        failed.append(SUM_R_LE_1)
    failed += _rr_necessary(x, n)
    half_n = Fraction(n, 2)
    if x.q < half_n * (x.rt - x.r):
        failed.append(FLASH_Q)
    if x.qt < half_n * (x.r - x.rt):
        failed.append(FLASH_QT)
    return _verdict(failed)


def schrodinger_global_necessary(x: Quad, n) -> Verdict:
    n = check_dimension(n)
    s = Fraction(n, 2)
    failed = []
    if not is_acceptable(x.qr, s):
        failed.append(ACCEPTABLE_QR)
    if not is_acceptable(x.qtrt, s):
        failed.append(ACCEPTABLE_QTRT)
    if beta(x, s) != 0:
        failed.append(SCALING)
    if x.q + x.qt > 1:
        failed.append(SUM_Q_LE_1)
    failed += _rr_necessary(x, n)
    return _verdict(failed)


def schrodinger_local_sufficient(x: Quad, n) -> Verdict:
    return satisfies_local(x, Fraction(check_dimension(n), 2))


def schrodinger_global_sufficient(x: Quad, n) -> Verdict:
    return satisfies_global(x, Fraction(check_dimension(n), 2))


def _gap_conditions(r: Fraction, rt: Fraction, n: int) -> dict[GapRegion, bool]:
    inv_n = Fraction(1, n)
    return {
        GapRegion.R1: r > HALF and r + rt <= 1 and r - rt <= inv_n,
        GapRegion.R2: rt > HALF and r + rt <= 1 and rt - r <= inv_n,
        GapRegion.R3: (n - 2) * r > n * rt and r - rt <= inv_n,
        GapRegion.R4: (n - 2) * rt > n * r and rt - r <= inv_n,
    }


def in_gap_region(r, rt, n, which: GapRegion | str) -> bool:
    """Raw defining inequalities of one open region, without precedence."""
    return _gap_conditions(as_recip(r), as_recip(rt), check_dimension(n))[GapRegion(which)]


def gap_region(r, rt, n) -> GapRegion:
    """Classify ``(1/r, 1/rt)`` against the open regions left by the local theory.

    ``Covered`` wins over the open regions, which are then tried in order
    R1..R4; the first match is returned.
    """
    r = as_recip(r)
    rt = as_recip(rt)
    n = check_dimension(n)
    # the q-conditions never bind at 1/q = 1/qt = 1, leaving only the r-conditions
    if satisfies_local(Quad(1, r, 1, rt), Fraction(n, 2)).member:
        return GapRegion.COVERED
    for region, hit in _gap_conditions(r, rt, n).items():
        if hit:
            return region
    return GapRegion.EXCLUDED


REGION_TESTS = {
    "local": satisfies_local,
    "global": satisfies_global,
    "nec-local": schrodinger_local_necessary,
    "nec-global": schrodinger_global_necessary,
}


class RegionClassifier(ClassifierMixin, BaseEstimator):
    """Batch membership test for exponent quadruples.

    Rows of ``X`` are ``(1/q, 1/r, 1/qt, 1/rt)`` as exact rationals (or
    strings such as ``"1/2"``/``"inf"`` for reciprocal 0). ``region`` is one
    of ``local``, ``global``, ``nec-local`` or ``nec-global``; the latter two
    take the dimension ``n`` while the former take ``sigma``.

    >>> clf = RegionClassifier(region="local", sigma="3/2").fit([[0, 0, 0, 0]])
    >>> clf.predict([["1/2", "1/6", "1/2", "1/6"]]).tolist()
    [True]
    """

    def __init__(self, region: str = "local", sigma="1", n: int | None = None):
        self.region = region
        self.sigma = sigma
        self.n = n

    def _parameter(self):
        if self.region not in REGION_TESTS:
            raise ValueError(f"unknown region {self.region!r}; choose from {sorted(REGION_TESTS)}")
        if self.region.startswith("nec-"):
            if self.n is None:
                raise ValueError(f"region {self.region!r} requires n")
            return check_dimension(self.n)
        return as_sigma(self.sigma)

    def fit(self, X, y=None):
        self.param_ = self._parameter()
        self.classes_ = np.array([False, True])
        check_quads(X)
        return self

    def explain(self, X) -> list[Verdict]:
        test = REGION_TESTS[self.region]
        param = getattr(self, "param_", None) or self._parameter()
        return [test(x, param) for x in check_quads(X)]

    def predict(self, X) -> np.ndarray:
        return np.array([v.member for v in self.explain(X)], dtype=bool)
