"""Region boundaries as vertex lists, by scanning an exact rational grid.

Every exported region is convex, so the boundary of the grid points that
pass the membership test is their convex hull. Coordinates are
``(1/q, 1/r)`` for pair regions and ``(1/r, 1/rt)`` for the r-plane regions.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Callable

from ._validation import as_sigma, check_dimension
from .exponents import (
    GapRegion,
    Pair,
    Quad,
    in_gap_region,
    is_acceptable,
    is_sharp_admissible,
    satisfies_local,
    schrodinger_local_necessary,
)

Point = tuple[Fraction, Fraction]

# region tag -> (parameter kind, plane, predicate factory)
_SIGMA_REGIONS = {
    "sharp": ("1/q,1/r", lambda s: lambda x, y: is_sharp_admissible(Pair(x, y), s)),
    "acceptable": ("1/q,1/r", lambda s: lambda x, y: is_acceptable(Pair(x, y), s)),
    # the q-conditions are monotone in 1/q, so 1/q = 1/qt = 1 projects onto the r-plane
    "local-rr": ("1/r,1/rt", lambda s: lambda x, y: satisfies_local(Quad(1, x, 1, y), s).member),
}
_DIM_REGIONS = {
    "suff-local-rr": lambda n: lambda x, y: satisfies_local(Quad(1, x, 1, y), Fraction(n, 2)).member,
    "nec-local-rr": lambda n: lambda x, y: schrodinger_local_necessary(Quad(1, x, 1, y), n).member,
    "R1": lambda n: lambda x, y: in_gap_region(x, y, n, GapRegion.R1),
    "R2": lambda n: lambda x, y: in_gap_region(x, y, n, GapRegion.R2),
    "R3": lambda n: lambda x, y: in_gap_region(x, y, n, GapRegion.R3),
    "R4": lambda n: lambda x, y: in_gap_region(x, y, n, GapRegion.R4),
}

FIGURES = {
    1: ("sigma", ["sharp", "acceptable"]),
    2: ("sigma", ["local-rr"]),
    4: ("n", ["suff-local-rr", "nec-local-rr", "R1", "R2", "R3", "R4"]),
}


def region_tags() -> list[str]:
    return sorted(_SIGMA_REGIONS) + sorted(_DIM_REGIONS)


def _predicate(region: str, param) -> Callable[[Fraction, Fraction], bool]:
    if region in _SIGMA_REGIONS:
        return _SIGMA_REGIONS[region][1](as_sigma(param))
    if region in _DIM_REGIONS:
        return _DIM_REGIONS[region](check_dimension(param))
    raise ValueError(f"unknown region tag {region!r}; choose from {region_tags()}")


def _cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: list[Point]) -> list[Point]:
    """Counter-clockwise hull without collinear points (monotone chain)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return hull


def export_region_boundary(region: str, param, resolution: int) -> list[Point]:
    """Boundary vertices of ``region`` scanned on the grid ``{k/resolution}``.

    ``param`` is sigma for ``sharp``, ``acceptable`` and ``local-rr``, and the
    dimension ``n`` for the Schrodinger r-plane regions. Degenerate regions
    come back as a segment (two endpoints), a single point, or empty.
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    pred = _predicate(region, param)
    grid = [Fraction(k, resolution) for k in range(resolution + 1)]
    members = [(x, y) for x in grid for y in grid if pred(x, y)]
    return convex_hull(members)


def to_csv(vertices: list[Point]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["x", "y"])
    for x, y in vertices:
        writer.writerow([f"{float(x):.12g}", f"{float(y):.12g}"])
    return buf.getvalue()


def to_exact_json(vertices: list[Point]) -> str:
    data = [[[x.numerator, x.denominator], [y.numerator, y.denominator]] for x, y in vertices]
    return json.dumps(data)


def figure_regions(figure: int) -> tuple[str, list[str]]:
    if figure not in FIGURES:
        raise ValueError(f"unknown figure {figure}; choose from {sorted(FIGURES)}")
    return FIGURES[figure]
