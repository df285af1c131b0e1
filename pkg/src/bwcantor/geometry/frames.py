"""Rotation-minimizing frames on closed polylines (double reflection).

The transported frame generally fails to close up by some angle about the
tangent; that angle is spread uniformly over arc length so the corrected
frame is periodic.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import GeometryError
from .distance import cumulative_length

__all__ = [
    "discrete_tangents",
    "rotation_minimizing_frame",
    "closure_defect",
    "orthonormality_error",
    "frame_closure_error",
]


def discrete_tangents(x: np.ndarray) -> np.ndarray:
    """Unit central-difference tangents of a closed polyline."""
    t = np.roll(x, -1, axis=0) - np.roll(x, 1, axis=0)
    norm = np.linalg.norm(t, axis=1, keepdims=True)
    if np.any(norm == 0):
        raise GeometryError("repeated samples: tangent undefined")
    return t / norm


def _initial_normal(t0: np.ndarray) -> np.ndarray:
    axis = np.eye(3)[int(np.argmin(np.abs(t0)))]
    n = axis - np.dot(axis, t0) * t0
    return n / np.linalg.norm(n)


def _transport(x: np.ndarray, t: np.ndarray, n0: np.ndarray) -> np.ndarray:
    """Double-reflection transport of ``n0`` around the closed curve (returns N + 1 normals)."""
    m = len(x)
    normals = np.empty((m + 1, 3))
    normals[0] = n0
    for i in range(m):
        j = (i + 1) % m
        v1 = x[j] - x[i]
        c1 = np.dot(v1, v1)
        r = normals[i] - (2.0 / c1) * np.dot(v1, normals[i]) * v1
        tl = t[i] - (2.0 / c1) * np.dot(v1, t[i]) * v1
        v2 = t[j] - tl
        c2 = np.dot(v2, v2)
        if c2 > 0:
            r = r - (2.0 / c2) * np.dot(v2, r) * v2
        r = r - np.dot(r, t[j]) * t[j]
        normals[i + 1] = r / np.linalg.norm(r)
    return normals


def closure_defect(normals: np.ndarray, binormals: np.ndarray, t0: np.ndarray) -> float:
    """Signed angle from the first normal to the transported last one, about ``t0``."""
    end = normals[-1]
    return math.atan2(float(np.dot(end, binormals[0])), float(np.dot(end, normals[0])))


def rotation_minimizing_frame(x: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(tangent, normal, binormal)`` per vertex, periodic after closure correction."""
    x = np.asarray(x, dtype=float)
    t = discrete_tangents(x)
    normals = _transport(x, t, _initial_normal(t[0]))
    b0 = np.cross(t[0], normals[0])
    alpha = closure_defect(normals, b0[None, :], t[0])
    cum = cumulative_length(x)
    angle = -alpha * cum[:-1] / cum[-1]
    n = normals[:-1]
    b = np.cross(t, n)
    ca, sa = np.cos(angle)[:, None], np.sin(angle)[:, None]
    n2 = ca * n + sa * b
    b2 = np.cross(t, n2)
    return t, n2, b2


def orthonormality_error(t: np.ndarray, n: np.ndarray, b: np.ndarray) -> float:
    """Worst deviation of ``(t, n, b)`` from an orthonormal triple over all samples."""
    errs = [
        np.abs(np.einsum("ij,ij->i", n, n) - 1),
        np.abs(np.einsum("ij,ij->i", b, b) - 1),
        np.abs(np.einsum("ij,ij->i", n, b)),
        np.abs(np.einsum("ij,ij->i", t, n)),
        np.abs(np.einsum("ij,ij->i", t, b)),
    ]
    return float(max(e.max() for e in errs))


def frame_closure_error(x: np.ndarray, normals: np.ndarray) -> float:
    """Worst angle between the stored normals and a fresh transport of the first one.

    The fresh transport is corrected with the same uniform spreading of the
    closure defect, so a rotation-minimizing, periodic frame scores ~0,
    including at the wrap from the last sample back to the first.
    """
    x = np.asarray(x, dtype=float)
    t = discrete_tangents(x)
    fresh = _transport(x, t, normals[0])
    b0 = np.cross(t[0], normals[0])
    alpha = closure_defect(fresh, b0[None, :], t[0])
    cum = cumulative_length(x)
    angle = -alpha * cum / cum[-1]
    tt = np.vstack([t, t[:1]])
    bb = np.cross(tt, fresh)
    corrected = np.cos(angle)[:, None] * fresh + np.sin(angle)[:, None] * bb
    stored = np.vstack([normals, normals[:1]])
    cross = np.linalg.norm(np.cross(corrected, stored), axis=1)
    dot = np.einsum("ij,ij->i", corrected, stored)
    return float(np.max(np.abs(np.arctan2(cross, dot))))
