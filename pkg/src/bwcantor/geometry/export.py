"""OBJ tube meshes and a JSON dump of the core curves.

Both formats are written deterministically: fixed float formatting, tori in
build order, and an atomic rename at the end.
"""

from __future__ import annotations

import json
import math
import os
from pathlib import Path
from typing import Sequence

import numpy as np

from ..errors import ValidationError
from ..io import atomic_write_text
from ..tree import NodeAddress
from .embed import SolidTorusEmbedding

__all__ = ["CURVES_SCHEMA", "tube_vertices", "obj_text", "export_mesh", "curves_dict", "export_curves", "load_curves"]

CURVES_SCHEMA = "bwcantor-curves.v1"


def tube_vertices(e: SolidTorusEmbedding, segments: int = 8) -> np.ndarray:
    """``(N, segments, 3)`` ring vertices of the tube around ``e``'s core."""
    phi = np.arange(segments) * (2 * math.pi / segments)
    ring = np.cos(phi)[None, :, None] * e.normal[:, None, :] + np.sin(phi)[None, :, None] * e.binormal[:, None, :]
    return e.core[:, None, :] + e.radius * ring


def obj_text(embeddings: Sequence[SolidTorusEmbedding], segments: int = 8) -> str:
    if not embeddings:
        raise ValidationError("no tori to export")
    lines = ["# nested solid tori", f"# tori {len(embeddings)}"]
    base = 1
    for e in embeddings:
        verts = tube_vertices(e, segments)
        n = verts.shape[0]
        lines.append(f"g {e.name}")
        lines.extend(f"v {x:.9f} {y:.9f} {z:.9f}" for x, y, z in verts.reshape(-1, 3))
        i = np.arange(n)[:, None]
        k = np.arange(segments)[None, :]
        a = base + i * segments + k
        b = base + ((i + 1) % n) * segments + k
        c = base + ((i + 1) % n) * segments + (k + 1) % segments
        d = base + i * segments + (k + 1) % segments
        tris = np.stack([np.stack([a, b, c], -1), np.stack([a, c, d], -1)], axis=2).reshape(-1, 3)
        lines.extend(f"f {p} {q} {r}" for p, q, r in tris.tolist())
        base += n * segments
    return "\n".join(lines) + "\n"


def export_mesh(embeddings: Sequence[SolidTorusEmbedding], path: str | os.PathLike, segments: int = 8) -> Path:
    """Triangulated tubes, one ``g`` group per torus."""
    return atomic_write_text(path, obj_text(embeddings, segments))


def curves_dict(embeddings: Sequence[SolidTorusEmbedding], metadata: dict | None = None) -> dict:
    if not embeddings:
        raise ValidationError("no tori to export")
    tori = []
    for e in embeddings:
        tori.append({
            "name": e.name,
            "node": str(e.node),
            "kind": e.kind,
            "whitehead_level": e.whitehead_level,
            "parent": e.parent,
            "level": e.level,
            "radius": e.radius,
            "core": e.core.tolist(),
            "normal": e.normal.tolist(),
            "binormal": e.binormal.tolist(),
        })
    return {"schema": CURVES_SCHEMA, "metadata": dict(metadata or {}), "tori": tori}


def export_curves(
    embeddings: Sequence[SolidTorusEmbedding], path: str | os.PathLike, metadata: dict | None = None
) -> Path:
    return atomic_write_text(path, json.dumps(curves_dict(embeddings, metadata), indent=1) + "\n")


def load_curves(path: str | os.PathLike) -> tuple[list[SolidTorusEmbedding], dict]:
    """Inverse of :func:`export_curves` (model curves are not stored)."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if data.get("schema") != CURVES_SCHEMA:
        raise ValidationError(f"not a {CURVES_SCHEMA} document")
    out = []
    for t in data["tori"]:
        out.append(SolidTorusEmbedding(
            np.asarray(t["core"], dtype=float),
            np.asarray(t["normal"], dtype=float),
            np.asarray(t["binormal"], dtype=float),
            float(t["radius"]),
            NodeAddress.from_string(t["node"]),
            t["kind"],
            int(t["whitehead_level"]),
            t["parent"],
            int(t["level"]),
        ))
    return out, data["metadata"]
