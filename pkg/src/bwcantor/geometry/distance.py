"""Exact distances between closed polylines.

A k-d tree over the vertices proposes candidate segment pairs and compiled
kernels evaluate them.  Two segments at distance ``delta`` have vertices
within ``delta + h1 + h2`` of each other (``h`` the segment lengths), which
is what makes the prefilter radii safe.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange
from scipy.spatial import cKDTree

__all__ = [
    "segment_lengths",
    "cumulative_length",
    "min_distance_between",
    "self_min_distance",
    "nearest_on_polyline",
]


@njit(cache=True)
def _seg_seg(p0, p1, q0, q1):
    d1 = p1 - p0
    d2 = q1 - q0
    r = p0 - q0
    a = d1[0] * d1[0] + d1[1] * d1[1] + d1[2] * d1[2]
    e = d2[0] * d2[0] + d2[1] * d2[1] + d2[2] * d2[2]
    f = d2[0] * r[0] + d2[1] * r[1] + d2[2] * r[2]
    eps = 1e-300
    if a <= eps and e <= eps:
        s = 0.0
        t = 0.0
    elif a <= eps:
        s = 0.0
        t = min(max(f / e, 0.0), 1.0)
    else:
        c = d1[0] * r[0] + d1[1] * r[1] + d1[2] * r[2]
        if e <= eps:
            t = 0.0
            s = min(max(-c / a, 0.0), 1.0)
        else:
            b = d1[0] * d2[0] + d1[1] * d2[1] + d1[2] * d2[2]
            denom = a * e - b * b
            if denom > 1e-14 * a * e:
                s = min(max((b * f - c * e) / denom, 0.0), 1.0)
            else:
                s = 0.0
            t = (b * s + f) / e
            if t < 0.0:
                t = 0.0
                s = min(max(-c / a, 0.0), 1.0)
            elif t > 1.0:
                t = 1.0
                s = min(max((b - c) / a, 0.0), 1.0)
    x = r + d1 * s - d2 * t
    return np.sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])


@njit(parallel=True, cache=True)
def _pair_distances(A, ia, B, ib):
    out = np.empty(ia.shape[0])
    for k in prange(ia.shape[0]):
        i = ia[k]
        j = ib[k]
        out[k] = _seg_seg(A[i], A[i + 1], B[j], B[j + 1])
    return out


@njit(parallel=True, cache=True)
def _point_segment(P, ip, S, js):
    dist = np.empty(ip.shape[0])
    frac = np.empty(ip.shape[0])
    for k in prange(ip.shape[0]):
        p = P[ip[k]]
        a = S[js[k]]
        d = S[js[k] + 1] - a
        dd = d[0] * d[0] + d[1] * d[1] + d[2] * d[2]
        w = p - a
        t = 0.0
        if dd > 0.0:
            t = (w[0] * d[0] + w[1] * d[1] + w[2] * d[2]) / dd
            t = min(max(t, 0.0), 1.0)
        x = w - d * t
        dist[k] = np.sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])
        frac[k] = t
    return dist, frac


def _closed(x: np.ndarray) -> np.ndarray:
    x = np.ascontiguousarray(x, dtype=np.float64)
    return np.vstack([x, x[:1]])


def segment_lengths(x: np.ndarray) -> np.ndarray:
    """Lengths of the ``N`` edges of a closed polyline."""
    return np.linalg.norm(np.roll(x, -1, axis=0) - x, axis=1)


def cumulative_length(x: np.ndarray) -> np.ndarray:
    """Arc length at each vertex, followed by the total (``N + 1`` entries)."""
    return np.concatenate([[0.0], np.cumsum(segment_lengths(x))])


def _expand(i: np.ndarray, j: np.ndarray, na: int, nb: int) -> tuple[np.ndarray, np.ndarray]:
    """Vertex pairs to the segment pairs incident to them."""
    ii = np.concatenate([i, i, (i - 1) % na, (i - 1) % na])
    jj = np.concatenate([j, (j - 1) % nb, j, (j - 1) % nb])
    key = np.unique(ii.astype(np.int64) * nb + jj)
    return key // nb, key % nb


def min_distance_between(a: np.ndarray, b: np.ndarray) -> float:
    """Minimum distance between two closed polylines."""
    ta, tb = cKDTree(a), cKDTree(b)
    d0, _ = tb.query(a, k=1)
    radius = float(np.min(d0)) + float(segment_lengths(a).max()) + float(segment_lengths(b).max())
    pairs = ta.query_ball_tree(tb, r=radius)
    i = np.repeat(np.arange(len(a)), [len(p) for p in pairs])
    j = np.fromiter((x for p in pairs for x in p), dtype=np.int64, count=len(i))
    si, sj = _expand(i, j, len(a), len(b))
    return float(np.min(_pair_distances(_closed(a), si, _closed(b), sj)))


def self_min_distance(x: np.ndarray, local_arc: float, cutoff: float) -> float:
    """Minimum distance between non-local segments of a closed polyline.

    Segments are local when the arc separating them is shorter than
    ``local_arc`` (adjacent segments always are).  Only distances below
    ``cutoff`` are resolved; ``cutoff`` itself is returned otherwise.
    """
    n = len(x)
    h = segment_lengths(x)
    cum = np.concatenate([[0.0], np.cumsum(h)])
    total = cum[-1]
    pairs = cKDTree(x).query_pairs(r=cutoff + 2 * float(h.max()), output_type="ndarray")
    if len(pairs) == 0:
        return cutoff
    si, sj = _expand(pairs[:, 0], pairs[:, 1], n, n)
    # arc between the segments: from the end of one to the start of the other, both ways round
    fwd = (cum[sj] - cum[si + 1]) % total
    bwd = (cum[si] - cum[sj + 1]) % total
    gap = np.minimum(fwd, bwd)
    adjacent = (si == sj) | ((si + 1) % n == sj) | ((sj + 1) % n == si)
    keep = ~adjacent & (gap >= local_arc)
    if not np.any(keep):
        return cutoff
    c = _closed(x)
    d = _pair_distances(c, si[keep], c, sj[keep])
    return float(min(cutoff, d.min()))


def nearest_on_polyline(points: np.ndarray, poly: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Distance from each point to a closed polyline and the arc-length parameter there."""
    h = segment_lengths(poly)
    cum = np.concatenate([[0.0], np.cumsum(h)])
    tree = cKDTree(poly)
    d0, _ = tree.query(points, k=1)
    hits = tree.query_ball_point(points, r=d0 + float(h.max()) + 1e-300)
    ip = np.repeat(np.arange(len(points)), [len(p) for p in hits])
    jv = np.fromiter((x for p in hits for x in p), dtype=np.int64, count=len(ip))
    n = len(poly)
    ip = np.concatenate([ip, ip])
    js = np.concatenate([jv, (jv - 1) % n])
    dist, frac = _point_segment(np.ascontiguousarray(points, dtype=np.float64), ip, _closed(poly), js)
    order = np.lexsort((dist, ip))
    first = np.ones(len(order), dtype=bool)
    first[1:] = ip[order][1:] != ip[order][:-1]
    sel = order[first]
    s = cum[js[sel]] + frac[sel] * h[js[sel]]
    return dist[sel], s
