import numpy as np
import pytest

from mintime_consensus import geometry


def test_hull_square_with_interior_points():
    pts = np.array([[0, 0], [1, 0], [1, 1], [0, 1], [0.5, 0.5], [0.2, 0.8]])
    hull = geometry.convex_hull(pts)
    assert len(hull) == 4
    assert geometry.polygon_area(hull) == pytest.approx(1.0)
    assert geometry.polygon_area_signed(hull) > 0  # CCW


def test_hull_degenerate_segment_and_point():
    seg = geometry.convex_hull(np.array([[0, 0], [1, 1], [0.5, 0.5]]))
    assert len(seg) == 2
    pt = geometry.convex_hull(np.array([[2.0, 3.0], [2.0, 3.0]]))
    assert len(pt) == 1


def test_point_in_convex():
    square = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float)
    assert geometry.point_in_convex((0.5, 0.5), square)
    assert geometry.point_in_convex((1.0, 1.0), square)
    assert not geometry.point_in_convex((1.2, 0.5), square)
    assert geometry.point_in_convex((1.05, 0.5), square, eps=0.1)
    # eps must measure true distance near a corner, not edge-line distance
    assert not geometry.point_in_convex((1.5, 1.5), square, eps=0.1)


def test_clip_self_is_identity():
    rng = np.random.default_rng(0)
    for _ in range(20):
        poly = geometry.convex_hull(rng.normal(size=(30, 2)))
        inter = geometry.clip_convex(poly, poly)
        assert abs(geometry.polygon_area(inter) - geometry.polygon_area(poly)) < 1e-9


def test_clip_disjoint_translates_empty():
    tri = np.array([[0, 0], [1, 0], [0, 1]], dtype=float)
    far = tri + np.array([10.0, 0.0])
    assert len(geometry.clip_convex(tri, far)) == 0


def test_clip_known_overlap_area():
    a = np.array([[0, 0], [2, 0], [2, 2], [0, 2]], dtype=float)
    b = np.array([[1, 1], [3, 1], [3, 3], [1, 3]], dtype=float)
    inter = geometry.clip_convex(a, b)
    assert geometry.polygon_area(inter) == pytest.approx(1.0, abs=1e-12)


def test_clip_associative_on_random_triples():
    rng = np.random.default_rng(4)
    for _ in range(15):
        polys = [geometry.convex_hull(rng.normal(size=(25, 2)) + rng.normal(scale=0.3, size=2))
                 for _ in range(3)]
        ab_c = geometry.clip_convex(geometry.clip_convex(polys[0], polys[1]), polys[2])
        a_bc = geometry.clip_convex(polys[0], geometry.clip_convex(polys[1], polys[2]))
        assert abs(geometry.polygon_area(ab_c) - geometry.polygon_area(a_bc)) < 1e-9


def test_centroid_of_square():
    square = np.array([[0, 0], [2, 0], [2, 2], [0, 2]], dtype=float)
    assert np.allclose(geometry.polygon_centroid(square), [1.0, 1.0])
