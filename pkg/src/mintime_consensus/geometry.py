"""Planar convex-geometry helpers: hulls, clipping, membership, distances."""

from __future__ import annotations

import numpy as np

try:
    from scipy.spatial import ConvexHull, QhullError
except ImportError:  # pragma: no cover - scipy always present in practice
    ConvexHull = None
    QhullError = Exception


def _canonical_ccw(verts: np.ndarray) -> np.ndarray:
    """Orient counterclockwise and roll so the lexicographically smallest vertex leads."""
    if len(verts) >= 3 and polygon_area_signed(verts) < 0:
        verts = verts[::-1]
    start = np.lexsort((verts[:, 1], verts[:, 0]))[0]
    return np.roll(verts, -start, axis=0)


def _monotone_chain(pts: np.ndarray) -> np.ndarray:
    """O(n log n) hull; handles collinear/degenerate input (may return 1-2 points)."""
    pts = np.unique(pts, axis=0)
    if len(pts) <= 2:
        return pts

    def half(points):
        out = []
        for q in points:
            while len(out) >= 2:
                d1 = out[-1] - out[-2]
                d2 = q - out[-2]
                if d1[0] * d2[1] - d1[1] * d2[0] > 0:
                    break
                out.pop()
            out.append(q)
        return out

    lower = half(pts)
    upper = half(pts[::-1])
    hull = np.array(lower[:-1] + upper[:-1])
    if len(hull) < 3:
        return np.unique(hull, axis=0)
    return hull


def convex_hull(points) -> np.ndarray:
    """Convex hull of a point cloud as a CCW (m, 2) array.

    Degenerate clouds (point or segment) come back with 1 or 2 vertices.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("expected an (n, 2) point array")
    if len(pts) == 0:
        return pts.reshape(0, 2)
    if len(pts) >= 3 and ConvexHull is not None:
        try:
            hull = ConvexHull(pts)
            return _canonical_ccw(pts[hull.vertices])
        except QhullError:
            pass  # collinear input; fall through
    out = _monotone_chain(pts)
    if len(out) >= 3:
        out = _canonical_ccw(out)
    return out


def polygon_area_signed(verts: np.ndarray) -> float:
    x, y = verts[:, 0], verts[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def polygon_area(verts: np.ndarray) -> float:
    if len(verts) < 3:
        return 0.0
    return abs(polygon_area_signed(verts))


def polygon_centroid(verts: np.ndarray) -> np.ndarray:
    """Area centroid; falls back to the vertex mean for degenerate polygons."""
    if len(verts) == 0:
        raise ValueError("empty polygon has no centroid")
    if len(verts) < 3:
        return verts.mean(axis=0)
    x, y = verts[:, 0], verts[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    a = cross.sum() / 2.0
    if abs(a) < 1e-300:
        return verts.mean(axis=0)
    cx = np.sum((x + xn) * cross) / (6.0 * a)
    cy = np.sum((y + yn) * cross) / (6.0 * a)
    return np.array([cx, cy])


def point_segment_distance(pt, a, b) -> float:
    ab = b - a
    denom = float(ab @ ab)
    if denom == 0.0:
        return float(np.hypot(*(pt - a)))
    t = np.clip(float((pt - a) @ ab) / denom, 0.0, 1.0)
    return float(np.hypot(*(pt - (a + t * ab))))


def point_in_convex(pt, verts: np.ndarray, eps: float = 0.0) -> bool:
    """True if pt is inside the CCW convex polygon or within eps of it."""
    pt = np.asarray(pt, dtype=float)
    if len(verts) == 0:
        return False
    if len(verts) == 1:
        return float(np.hypot(*(pt - verts[0]))) <= eps
    if len(verts) == 2:
        return point_segment_distance(pt, verts[0], verts[1]) <= eps
    a = verts
    bnext = np.roll(verts, -1, axis=0)
    edge = bnext - a
    lengths = np.hypot(edge[:, 0], edge[:, 1])
    lengths[lengths == 0] = 1.0
    # signed distance to each edge line, positive inside for CCW orientation
    signed = (edge[:, 0] * (pt[1] - a[:, 1]) - edge[:, 1] * (pt[0] - a[:, 0])) / lengths
    if np.all(signed >= -eps):
        return True
    # outside some edge line by more than eps in line distance; check true
    # polygon distance to be fair near vertices
    if eps > 0.0:
        d = min(point_segment_distance(pt, a[i], bnext[i]) for i in range(len(verts)))
        return d <= eps
    return False


def clip_convex(subject: np.ndarray, clip: np.ndarray) -> np.ndarray:
    """Sutherland-Hodgman clip of `subject` by convex CCW polygon `clip`.

    Subject may be degenerate (a point or segment).  Returns (m, 2), possibly
    with m == 0 for an empty intersection.
    """
    subject = np.asarray(subject, dtype=float)
    clip = np.asarray(clip, dtype=float)
    if len(subject) == 0 or len(clip) == 0:
        return np.zeros((0, 2))
    if len(clip) < 3:
        if len(subject) < 3:
            # both degenerate: accept coincident points only
            kept = [p for p in clip if any(np.allclose(p, q, atol=1e-9) for q in subject)]
            return np.array(kept) if kept else np.zeros((0, 2))
        subject, clip = clip, subject
    out = [p for p in subject]
    m = len(clip)
    for i in range(m):
        if not out:
            return np.zeros((0, 2))
        a, b = clip[i], clip[(i + 1) % m]
        ex, ey = b - a
        inp = out
        out = []
        s = inp[-1]
        s_in = ex * (s[1] - a[1]) - ey * (s[0] - a[0]) >= 0.0
        for e in inp:
            e_in = ex * (e[1] - a[1]) - ey * (e[0] - a[0]) >= 0.0
            if e_in:
                if not s_in:
                    out.append(_line_intersect(a, b, s, e))
                out.append(e)
            elif s_in:
                out.append(_line_intersect(a, b, s, e))
            s, s_in = e, e_in
    verts = _dedupe(np.array(out))
    if len(verts) >= 3:
        verts = _canonical_ccw(verts)
    return verts


def _line_intersect(a, b, s, e):
    d1 = b - a
    d2 = e - s
    denom = d1[0] * d2[1] - d1[1] * d2[0]
    if denom == 0.0:
        return e.copy() if isinstance(e, np.ndarray) else np.array(e)
    t = ((s[0] - a[0]) * d2[1] - (s[1] - a[1]) * d2[0]) / denom
    return a + t * d1


def _dedupe(verts: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    if len(verts) <= 1:
        return verts
    scale = 1.0 + np.abs(verts).max()
    keep = [verts[0]]
    for v in verts[1:]:
        if np.hypot(*(v - keep[-1])) > tol * scale:
            keep.append(v)
    if len(keep) > 1 and np.hypot(*(keep[0] - keep[-1])) <= tol * scale:
        keep.pop()
    return np.array(keep)


def hausdorff_vertices(P: np.ndarray, Q: np.ndarray) -> float:
    """Symmetric Hausdorff distance between vertex sets (adequate for dense polygons)."""
    if len(P) == 0 or len(Q) == 0:
        raise ValueError("empty polygon")
    d = np.hypot(P[:, None, 0] - Q[None, :, 0], P[:, None, 1] - Q[None, :, 1])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def _points_to_polygon_dist(pts: np.ndarray, poly: np.ndarray) -> np.ndarray:
    """Distance from each point to the polygon outline (vectorized over edges)."""
    a = poly
    b = np.roll(poly, -1, axis=0)
    ab = b - a                                      # (m, 2)
    denom = np.einsum("ij,ij->i", ab, ab)
    denom[denom == 0.0] = 1.0
    ap = pts[:, None, :] - a[None, :, :]            # (n, m, 2)
    t = np.clip(np.einsum("nmj,mj->nm", ap, ab) / denom[None, :], 0.0, 1.0)
    proj = a[None, :, :] + t[..., None] * ab[None, :, :]
    d = np.hypot(pts[:, None, 0] - proj[..., 0], pts[:, None, 1] - proj[..., 1])
    return d.min(axis=1)


def polygon_hausdorff(P: np.ndarray, Q: np.ndarray) -> float:
    """Hausdorff distance between two convex polygon boundaries (vertex-to-edge)."""
    if len(P) == 0 or len(Q) == 0:
        raise ValueError("empty polygon")
    if len(P) == 1 or len(Q) == 1:
        return hausdorff_vertices(P, Q)
    return float(max(_points_to_polygon_dist(P, Q).max(),
                     _points_to_polygon_dist(Q, P).max()))


def sagitta_estimate(poly: np.ndarray) -> float:
    """Largest chord-to-arc deficit of a polygon inscribed in a smooth convex curve.

    For uniform sampling of a curve with turn angle theta across an edge of
    length L, the sagitta is about L * theta / 8; used to bound how far an
    inscribed polygon can under-cover its curve.
    """
    if len(poly) < 3:
        return 0.0
    e = np.roll(poly, -1, axis=0) - poly
    lens = np.hypot(e[:, 0], e[:, 1])
    nz = lens > 0
    if nz.sum() < 3:
        return 0.0
    u = e[nz] / lens[nz, None]
    cosang = np.clip(np.einsum("ij,ij->i", u, np.roll(u, -1, axis=0)), -1.0, 1.0)
    turn = np.arccos(cosang)
    return float((lens[nz] * np.maximum(turn, np.roll(turn, 1))).max() / 8.0)
