"""Dyadic Whitney decomposition of the half-plane ``{(s, t): s < t}``.

A square of scale ``2**k`` is ``[i*lam, (i+1)*lam) x [j*lam, (j+1)*lam)``.
It is selected when it sits at least one sidelength away from the diagonal
(``j - i >= 2``) while its dyadic parent does not (``j//2 - i//2 <= 1``).
Along the chain of dyadic squares containing a point the index gap is
monotone in the scale, so exactly one scale is selected for every point of
the open half-plane. All coordinates are exact :class:`Fraction` values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from ._validation import as_fraction, as_recip, check_nonnegative_sequence, float_ratio
from .exceptions import ScaleRangeError

MAX_PARTNERS = 2


@dataclass(frozen=True, order=True)
class DyadicSquare:
    k: int
    i: int
    j: int

    @property
    def scale(self) -> Fraction:
        return Fraction(2) ** self.k

    @property
    def s_interval(self) -> tuple[Fraction, Fraction]:
        lam = self.scale
        return self.i * lam, (self.i + 1) * lam

    @property
    def t_interval(self) -> tuple[Fraction, Fraction]:
        lam = self.scale
        return self.j * lam, (self.j + 1) * lam

    def gap(self) -> Fraction:
        """Distance between the two sides, ``dist(I, J)``."""
        return (self.j - self.i - 1) * self.scale

    def contains(self, s, t) -> bool:
        s_lo, s_hi = self.s_interval
        t_lo, t_hi = self.t_interval
        return s_lo <= s < s_hi and t_lo <= t < t_hi

    def as_row(self) -> tuple:
        s_lo, s_hi = self.s_interval
        t_lo, t_hi = self.t_interval
        return (self.k, self.i, self.j, s_lo, s_hi, t_lo, t_hi)


@dataclass(frozen=True)
class Window:
    """Square window ``[lo, hi)^2`` in the (s, t) plane."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", as_fraction(self.lo))
        object.__setattr__(self, "hi", as_fraction(self.hi))
        if not self.lo < self.hi:
            raise ValueError(f"empty window [{self.lo}, {self.hi})")


def select(k: int, i: int, j: int) -> bool:
    return j - i >= 2 and j // 2 - i // 2 <= 1


def partners(k: int, i: int) -> list[int]:
    """Indices ``j`` paired with ``I = [i*lam, (i+1)*lam)`` at scale ``2**k``."""
    # the parent gap bound caps j - i at 3
    return [j for j in (i + 2, i + 3) if select(k, i, j)]


def _floor_div(x: Fraction, lam: Fraction) -> int:
    return math.floor(x / lam)


def decompose(window: Window, k_min: int, k_max: int) -> list[DyadicSquare]:
    """Selected squares meeting ``window`` with ``k_min <= k <= k_max``.

    Sorted by scale, then ``i``, then ``j``. Points closer to the diagonal
    than the finest scale allows are simply not covered.
    """
    if k_min > k_max:
        raise ScaleRangeError(f"empty scale range [{k_min}, {k_max}]")
    out = []
    for k in range(k_min, k_max + 1):
        lam = Fraction(2) ** k
        i_lo = _floor_div(window.lo, lam)
        i_hi = math.ceil(window.hi / lam)  # exclusive
        for i in range(i_lo, i_hi):
            for j in partners(k, i):
                # J must meet [lo, hi)
                if j * lam < window.hi and (j + 1) * lam > window.lo:
                    out.append(DyadicSquare(k, i, j))
    return out


def covering_square(s, t, k_min: int, k_max: int) -> DyadicSquare | None:
    """The unique selected square containing ``(s, t)``, if its scale is in range."""
    s = as_fraction(s)
    t = as_fraction(t)
    if not s < t:
        return None
    for k in range(k_min, k_max + 1):
        lam = Fraction(2) ** k
        i, j = _floor_div(s, lam), _floor_div(t, lam)
        if select(k, i, j):
            return DyadicSquare(k, i, j)
    return None


def coverage_multiplicity(squares: Sequence[DyadicSquare], window: Window, cells: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Rasterize squares onto the cell centres of a ``cells x cells`` grid.

    Returns ``(counts, s_centres, t_centres)``; ``counts[a, b]`` is the number
    of squares containing the centre ``(s_centres[a], t_centres[b])``. The
    raster must be at least as fine as the finest square so that every square
    boundary falls on a cell boundary.
    """
    width = (window.hi - window.lo) / cells
    counts = np.zeros((cells, cells), dtype=np.int64)
    centres = np.array([float_ratio(window.lo + (c + Fraction(1, 2)) * width) for c in range(cells)])
    for sq in squares:
        s_lo, s_hi = sq.s_interval
        t_lo, t_hi = sq.t_interval
        a0 = max(0, math.ceil((s_lo - window.lo) / width - Fraction(1, 2)))
        a1 = min(cells, math.ceil((s_hi - window.lo) / width - Fraction(1, 2)))
        b0 = max(0, math.ceil((t_lo - window.lo) / width - Fraction(1, 2)))
        b1 = min(cells, math.ceil((t_hi - window.lo) / width - Fraction(1, 2)))
        if a0 < a1 and b0 < b1:
            counts[a0:a1, b0:b1] += 1
    return counts, centres, centres.copy()


@dataclass(frozen=True)
class SumInequality:
    lhs: float
    rhs: float
    constant: int
    hypothesis: bool

    @property
    def holds(self) -> bool:
        return self.lhs <= self.constant * self.rhs * (1 + 1e-12)


def sum_inequality(f_norms: Iterable[float], g_norms: Iterable[float], k: int, p, pt, *, offset: int = 0) -> SumInequality:
    """Evaluate both sides of the dyadic summation inequality at scale ``2**k``.

    ``f_norms[m]`` and ``g_norms[m]`` are the local norms on the interval of
    index ``offset + m``. The left side sums ``f_I * g_J`` over selected
    squares ``I x J``; the right side is ``||f||_{pt} * ||g||_p`` with the
    global norms assembled as l^pt and l^p norms of the local ones. Each
    interval has at most two partners, so the inequality holds with constant
    :data:`MAX_PARTNERS` whenever ``1/p + 1/pt >= 1``.
    """
    f = check_nonnegative_sequence(f_norms, "f_norms")
    g = check_nonnegative_sequence(g_norms, "g_norms")
    p = as_recip(p)
    pt = as_recip(pt)
    lhs = 0.0
    for a, fa in enumerate(f):
        if fa == 0:
            continue
        for j in partners(k, offset + a):
            b = j - offset
            if 0 <= b < len(g):
                lhs += fa * g[b]
    rhs = _lp(f, pt) * _lp(g, p)
    return SumInequality(lhs=float(lhs), rhs=rhs, constant=MAX_PARTNERS, hypothesis=p + pt >= 1)


def _lp(a: np.ndarray, recip: Fraction) -> float:
    if recip == 0:
        return float(np.max(a, initial=0.0))
    return float(np.sum(a ** (1 / float(recip))) ** float(recip))


def find_sum_violation(p, pt, *, k: int = 0, trials: int = 200, length: int = 8, rng=None) -> SumInequality | None:
    """Random search for local norms breaking the summation inequality."""
    rng = np.random.default_rng(rng)
    for _ in range(trials):
        width = rng.uniform(0.2, 1.0)
        f = rng.uniform(1 - width, 1.0, size=length)
        g = rng.uniform(1 - width, 1.0, size=length)
        w = sum_inequality(f, g, k, p, pt)
        if not w.holds:
            return w
    return None
