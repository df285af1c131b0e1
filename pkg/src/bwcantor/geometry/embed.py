"""Nested solid tori realizing the first stages of a defining sequence.

Each child core is a model curve pushed through its parent's tube
coordinates (core, frame, radius).  The child then gets its own
rotation-minimizing frame and a radius chosen as a fixed fraction of the
free room around it, which is what later verification measures against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace

import numpy as np

from ..errors import DepthTooLarge, ResolutionTooCoarse, ValidationError
from ..tree import DefiningSequenceSpec, NodeAddress
from .distance import cumulative_length, min_distance_between, nearest_on_polyline, self_min_distance
from .frames import rotation_minimizing_frame
from .model import TWO_PI, ModelCurve, ModelParams, Stadium, bing_stadia, whitehead_stadium

__all__ = [
    "GeometryParams",
    "SolidTorusEmbedding",
    "embed_stage_tree",
    "root_embedding",
    "expected_torus_count",
    "map_through_tube",
    "curvature_radius",
]

ROOT, BING_LEFT, BING_RIGHT, WHITEHEAD = "root", "bing-left", "bing-right", "whitehead"


@dataclass(frozen=True)
class GeometryParams:
    major_radius: float = 3.0
    minor_radius: float = 1.0
    samples: int = 512
    sample_cap: int = 16384
    clearance_fraction: float = 0.4
    safety: float = 0.05
    min_radius_ratio: float = 1e-7
    max_depth: int = 4
    max_tori: int = 256
    dense_factor: int = 8
    tube_segments: int = 8
    model: ModelParams = field(default_factory=ModelParams)

    def __post_init__(self) -> None:
        if not (0 < self.minor_radius < self.major_radius):
            raise ValidationError("need 0 < minor_radius < major_radius")
        if self.samples < 16 or self.sample_cap < self.samples:
            raise ValidationError("need samples >= 16 and sample_cap >= samples")
        if not (0 < self.clearance_fraction <= 1):
            raise ValidationError("clearance_fraction must lie in (0, 1]")
        if self.safety < 0 or self.min_radius_ratio < 0:
            raise ValidationError("safety and min_radius_ratio must be >= 0")
        if self.dense_factor < 2 or self.tube_segments < 3 or self.max_depth < 0 or self.max_tori < 1:
            raise ValidationError("dense_factor >= 2, tube_segments >= 3, max_depth >= 0, max_tori >= 1")

    @classmethod
    def from_dict(cls, data: dict) -> GeometryParams:
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ValidationError(f"unknown geometry parameters: {sorted(unknown)}")
        kw = dict(data)
        if "model" in kw:
            model = kw["model"]
            if not isinstance(model, dict) or set(model) - {"a", "b", "margin"}:
                raise ValidationError("model must be an object with keys among a, b, margin")
            kw["model"] = ModelParams(**model)
        for k, v in kw.items():
            if k != "model" and (isinstance(v, bool) or not isinstance(v, (int, float))):
                raise ValidationError(f"geometry parameter {k} must be a number")
        return cls(**kw)

    def to_dict(self) -> dict:
        out = {f.name: getattr(self, f.name) for f in fields(self) if f.name != "model"}
        out["model"] = {"a": self.model.a, "b": self.model.b, "margin": self.model.margin}
        return out

    def scaled(self, factor: float) -> GeometryParams:
        return replace(self, major_radius=self.major_radius * factor, minor_radius=self.minor_radius * factor)


@dataclass(frozen=True, eq=False)
class SolidTorusEmbedding:
    """One solid torus: a closed core polyline, its frame and tube radius.

    ``whitehead_level`` numbers the Whitehead nestings inside a node (0 for
    the node torus itself); ``parent`` indexes the enclosing torus in the
    embedding list and ``level`` counts all nestings from the root.
    """

    core: np.ndarray
    normal: np.ndarray
    binormal: np.ndarray
    radius: float
    node: NodeAddress
    kind: str
    whitehead_level: int = 0
    parent: int | None = None
    level: int = 0
    model: ModelCurve | None = None

    @property
    def name(self) -> str:
        if self.kind == ROOT:
            return ROOT
        kind = f"{self.kind}-{self.whitehead_level}" if self.kind == WHITEHEAD else self.kind
        return f"{self.node}_{kind}"

    @property
    def length(self) -> float:
        return float(cumulative_length(self.core)[-1])

    def with_radius(self, radius: float) -> SolidTorusEmbedding:
        return replace(self, radius=radius)


def root_embedding(params: GeometryParams) -> SolidTorusEmbedding:
    """Round torus about the z-axis; normals point away from the axis."""
    n = params.samples
    phi = np.arange(n) * (TWO_PI / n)
    radial = np.stack([np.cos(phi), np.sin(phi), np.zeros(n)], axis=-1)
    tangent = np.stack([-np.sin(phi), np.cos(phi), np.zeros(n)], axis=-1)
    core = params.major_radius * radial
    theta = np.stack([phi, np.zeros(n), np.zeros(n)], axis=-1)
    model = ModelCurve(theta, TWO_PI * params.major_radius / params.minor_radius, None, "core")
    return SolidTorusEmbedding(
        core, radial, np.cross(tangent, radial), params.minor_radius, NodeAddress(()), ROOT, model=model
    )


def map_through_tube(parent: SolidTorusEmbedding, xuv: np.ndarray, aspect: float) -> np.ndarray:
    """Send unrolled model points ``(x, u, v)`` into 3-space through ``parent``'s tube."""
    cum = cumulative_length(parent.core)
    total = cum[-1]
    s = (xuv[:, 0] / aspect % 1.0) * total
    k = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(parent.core) - 1)
    k1 = (k + 1) % len(parent.core)
    f = ((s - cum[k]) / (cum[k + 1] - cum[k]))[:, None]
    c = (1 - f) * parent.core[k] + f * parent.core[k1]
    nrm = (1 - f) * parent.normal[k] + f * parent.normal[k1]
    nrm /= np.linalg.norm(nrm, axis=1, keepdims=True)
    bin_ = (1 - f) * parent.binormal[k] + f * parent.binormal[k1]
    bin_ -= np.einsum("ij,ij->i", bin_, nrm)[:, None] * nrm
    bin_ /= np.linalg.norm(bin_, axis=1, keepdims=True)
    return c + parent.radius * (xuv[:, 1:2] * nrm + xuv[:, 2:3] * bin_)


def curvature_radius(x: np.ndarray) -> float:
    """Smallest discrete radius of curvature ``min(h1, h2) / (2 tan(phi / 2))`` over vertices."""
    e_out = np.roll(x, -1, axis=0) - x
    e_in = x - np.roll(x, 1, axis=0)
    h_out = np.linalg.norm(e_out, axis=1)
    h_in = np.linalg.norm(e_in, axis=1)
    cosang = np.einsum("ij,ij->i", e_in, e_out) / (h_in * h_out)
    phi = np.arccos(np.clip(cosang, -1.0, 1.0))
    with np.errstate(divide="ignore"):
        rho = np.minimum(h_in, h_out) / (2.0 * np.tan(0.5 * phi))
    return float(np.min(rho))


def _resample(stadium: Stadium, parent: SolidTorusEmbedding, aspect: float, n: int, dense: int) -> np.ndarray:
    """Parameters spreading ``n`` samples half by arc length, half by turning angle."""
    t = np.arange(dense) * (stadium.perimeter / dense)
    pts = map_through_tube(parent, stadium.evaluate(t), aspect)
    seg = np.roll(pts, -1, axis=0) - pts
    h = np.linalg.norm(seg, axis=1)
    cosang = np.einsum("ij,ij->i", np.roll(seg, 1, axis=0), seg) / (np.roll(h, 1) * h)
    turn = np.arccos(np.clip(cosang, -1.0, 1.0))
    # turning at vertex i is spread over the two segments meeting there
    w_turn = 0.5 * (turn + np.roll(turn, -1))
    measure = 0.5 * h / h.sum() + 0.5 * w_turn / w_turn.sum()
    cum = np.concatenate([[0.0], np.cumsum(measure)])
    knots = np.append(t, stadium.perimeter)
    return np.interp(np.arange(n) / n, cum, knots)


def _child_curve(
    parent: SolidTorusEmbedding, stadium: Stadium, aspect: float, level: int, params: GeometryParams
) -> tuple[np.ndarray, ModelCurve]:
    n = min(params.sample_cap, params.samples << level)
    t = _resample(stadium, parent, aspect, n, params.dense_factor * n)
    xuv = stadium.evaluate(t)
    core = map_through_tube(parent, xuv, aspect)
    theta = xuv.copy()
    theta[:, 0] = (xuv[:, 0] / aspect % 1.0) * TWO_PI
    return core, ModelCurve(theta, aspect, stadium)


def _wall_room(parent: SolidTorusEmbedding, core: np.ndarray) -> float:
    mids = 0.5 * (core + np.roll(core, -1, axis=0))
    d, _ = nearest_on_polyline(np.vstack([core, mids]), parent.core)
    return parent.radius - float(d.max())


def _build_children(
    parent: SolidTorusEmbedding,
    parent_index: int,
    stadia: tuple[Stadium, ...],
    kinds: tuple[str, ...],
    nodes: tuple[NodeAddress, ...],
    wlevel: int,
    aspect: float,
    params: GeometryParams,
    root_radius: float,
) -> list[SolidTorusEmbedding]:
    level = parent.level + 1
    curves = [_child_curve(parent, s, aspect, level, params) for s in stadia]
    rooms = []
    for core, _ in curves:
        wall = _wall_room(parent, core)
        rho = curvature_radius(core)
        upper = params.clearance_fraction * min(wall, rho)
        local = math.pi * upper * (1 + params.safety)
        selfd = self_min_distance(core, local, 2.0 * parent.radius)
        rooms.append(min(wall, rho, 0.5 * selfd))
    if len(curves) == 2:
        half = 0.5 * min_distance_between(curves[0][0], curves[1][0])
        rooms = [min(r, half) for r in rooms]
    out = []
    for (core, model), room, kind, node in zip(curves, rooms, kinds, nodes):
        radius = params.clearance_fraction * room
        if not radius > params.min_radius_ratio * root_radius:
            raise ResolutionTooCoarse(
                f"torus {node}/{kind} at nesting level {level} gets radius {radius:.3e}, "
                f"below {params.min_radius_ratio:g} of the root radius"
            )
        _, nrm, bn = rotation_minimizing_frame(core)
        out.append(
            SolidTorusEmbedding(core, nrm, bn, radius, node, kind, wlevel, parent_index, level, model)
        )
    return out


def expected_torus_count(spec: DefiningSequenceSpec, depth: int) -> int:
    """Node tori up to ``depth`` plus the Whitehead nestings of non-leaf nodes."""
    return (1 << (depth + 1)) - 1 + sum(_labels(spec, depth).values())


def _labels(spec: DefiningSequenceSpec, depth: int) -> dict[NodeAddress, int]:
    return {
        _address(i, j): int(spec.label(_address(i, j))) for i in range(depth) for j in range(1 << i)
    }


def _address(depth: int, ordinal: int) -> NodeAddress:
    return NodeAddress(tuple((ordinal >> (depth - 1 - k)) & 1 for k in range(depth)))


def embed_stage_tree(
    spec: DefiningSequenceSpec, depth: int, params: GeometryParams = GeometryParams()
) -> list[SolidTorusEmbedding]:
    """Tori of the first ``depth`` tree levels, parents before children.

    A node with label ``w`` receives ``w`` nested Whitehead tori and its Bing
    pair goes inside the innermost one.  Leaves at ``depth`` get neither.
    """
    if not isinstance(depth, int) or depth < 0:
        raise ValidationError(f"depth must be a natural number, got {depth!r}")
    if depth > params.max_depth:
        raise DepthTooLarge(f"depth {depth} exceeds max_depth {params.max_depth}")
    labels = _labels(spec, depth)
    count = (1 << (depth + 1)) - 1 + sum(labels.values())
    if count > params.max_tori:
        raise DepthTooLarge(f"{count} tori exceed max_tori {params.max_tori}")

    root = root_embedding(params)
    out = [root]
    frontier = [0]
    for _ in range(depth):
        nxt = []
        for idx in frontier:
            node_torus = out[idx]
            host, host_idx = node_torus, idx
            for w in range(1, labels[node_torus.node] + 1):
                aspect = host.length / host.radius
                (child,) = _build_children(
                    host, host_idx, (whitehead_stadium(aspect, params.model),), (WHITEHEAD,),
                    (node_torus.node,), w, aspect, params, root.radius,
                )
                out.append(child)
                host, host_idx = child, len(out) - 1
            aspect = host.length / host.radius
            pair = _build_children(
                host, host_idx, bing_stadia(aspect, params.model), (BING_LEFT, BING_RIGHT),
                (node_torus.node.child(0), node_torus.node.child(1)),
                0, aspect, params, root.radius,
            )
            for child in pair:
                out.append(child)
                nxt.append(len(out) - 1)
        frontier = nxt
    return out
