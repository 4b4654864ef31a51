from fractions import Fraction as Fr
import json

import pytest

from strichartz import boundary as B


def test_sharp_segment():
    assert B.export_region_boundary("sharp", Fr(3, 2), 6) == [(0, Fr(1, 2)), (Fr(1, 2), Fr(1, 6))]


def test_acceptable_triangle_sigma_one():
    verts = B.export_region_boundary("acceptable", 1, 8)
    # open triangle below 1/q = 2(1/2 - 1/r), scanned at 1/8, plus the vertex (0, 1/2)
    assert verts == [(0, 0), (Fr(7, 8), 0), (0, Fr(1, 2))]


def test_local_rr_polygon():
    verts = B.export_region_boundary("local-rr", Fr(3, 2), 12)
    assert set(verts) == {(0, 0), (Fr(1, 2), Fr(1, 6)), (Fr(1, 2), Fr(1, 2)), (Fr(1, 6), Fr(1, 2))}


def test_hull_of_collinear_points():
    pts = [(Fr(k), Fr(k)) for k in range(4)]
    assert B.convex_hull(pts) == [(0, 0), (3, 3)]


def test_csv_and_exact_json():
    verts = [(Fr(1, 3), Fr(0))]
    assert B.to_csv(verts) == "x,y\n0.333333333333,0\n"
    assert json.loads(B.to_exact_json(verts)) == [[[1, 3], [0, 1]]]


@pytest.mark.parametrize("figure", [1, 2, 4])
def test_figures_export(figure):
    kind, regions = B.figure_regions(figure)
    param = 3 if kind == "n" else Fr(3, 2)
    for region in regions:
        B.export_region_boundary(region, param, 8)


def test_unknown_region_and_figure():
    with pytest.raises(ValueError):
        B.export_region_boundary("nowhere", 1, 8)
    with pytest.raises(ValueError):
        B.figure_regions(3)
    with pytest.raises(ValueError):
        B.export_region_boundary("sharp", 1, 1)
