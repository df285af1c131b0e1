"""Gauss linking number of closed polygons.

Each pair of edges contributes the solid angle of the quadrilateral they
span, written with two ``arctan2`` terms, so the double sum is exact for
polygons (not a quadrature) and rounding only absorbs floating-point error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit, prange

from ..errors import CurvesTooClose, ValidationError
from .distance import min_distance_between

__all__ = ["LinkingResult", "linking_number", "gauss_sum"]


@njit(parallel=True, cache=True)
def _gauss_sum(ls, ks):
    """Closed polylines with the first point repeated at the end."""
    total = 0.0
    nl = ls.shape[0]
    nk = ks.shape[0]
    for i in prange(nk - 1):
        acc = 0.0
        for j in range(nl - 1):
            a = ls[j] - ks[i]
            b = ls[j] - ks[i + 1]
            c = ls[j + 1] - ks[i + 1]
            d = ls[j + 1] - ks[i]
            p = a[0] * (b[1] * c[2] - b[2] * c[1]) + a[1] * (b[2] * c[0] - b[0] * c[2]) + a[2] * (
                b[0] * c[1] - b[1] * c[0]
            )
            an = np.sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2])
            bn = np.sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2])
            cn = np.sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2])
            dn = np.sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2])
            ab = a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
            bc = b[0] * c[0] + b[1] * c[1] + b[2] * c[2]
            ca = c[0] * a[0] + c[1] * a[1] + c[2] * a[2]
            ad = a[0] * d[0] + a[1] * d[1] + a[2] * d[2]
            dc = d[0] * c[0] + d[1] * c[1] + d[2] * c[2]
            d1 = an * bn * cn + ab * cn + bc * an + ca * bn
            d2 = an * dn * cn + ad * cn + dc * an + ca * dn
            acc += np.arctan2(p, d1) + np.arctan2(p, d2)
        total += acc
    return total / (2.0 * np.pi)


def _closed(x: np.ndarray) -> np.ndarray:
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != 3 or x.shape[0] < 3:
        raise ValidationError("curves must be (N, 3) arrays with N >= 3")
    return np.vstack([x, x[:1]])


def gauss_sum(c1: np.ndarray, c2: np.ndarray) -> float:
    """Unrounded discrete Gauss linking sum of two closed polylines (no closing point)."""
    return float(_gauss_sum(_closed(c1), _closed(c2)))


@dataclass(frozen=True)
class LinkingResult:
    value: int
    raw: float
    separation: float

    @property
    def error(self) -> float:
        return abs(self.raw - self.value)


def linking_number(c1: np.ndarray, c2: np.ndarray, rel_tol: float = 1e-9) -> LinkingResult:
    """Linking number of two disjoint closed polylines.

    Raises :class:`CurvesTooClose` when the polylines come within
    ``rel_tol`` times their joint diameter of each other.
    """
    sep = min_distance_between(np.asarray(c1, float), np.asarray(c2, float))
    both = np.vstack([c1, c2])
    scale = float(np.max(np.ptp(both, axis=0)))
    if sep <= rel_tol * scale:
        raise CurvesTooClose(f"curves come within {sep:.3e} of each other")
    raw = gauss_sum(c1, c2)
    return LinkingResult(int(round(raw)), raw, sep)
