"""Numerical certification of a nested-torus build.

Each check yields a record with the measured value and a margin; the margin
is positive exactly when the check passes.  Length margins (containment,
disjointness, embeddedness) scale with the construction; angle and count
margins do not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import GeometryError, ValidationError
from .distance import min_distance_between, nearest_on_polyline, self_min_distance, cumulative_length
from .embed import BING_LEFT, BING_RIGHT, ROOT, SolidTorusEmbedding
from .frames import discrete_tangents, frame_closure_error, orthonormality_error
from .linking import gauss_sum
from .model import winding_number

__all__ = [
    "BING_PAIR_LINKING",
    "Tolerances",
    "CheckRecord",
    "VerificationReport",
    "verify_embedding",
    "parent_degree",
    "meridian_circle",
]

#: Linking number of the two Bing cores, measured with the Gauss sum when the
#: model was designed and frozen here as a regression constant.
BING_PAIR_LINKING = 0

LENGTH, ANGLE, COUNT = "length", "angle", "count"


@dataclass(frozen=True)
class Tolerances:
    frame: float = 1e-9
    closure: float = 1e-9
    safety: float = 0.05
    rounding: float = 0.1
    bing_linking: int = BING_PAIR_LINKING
    meridian_samples: int = 64


@dataclass(frozen=True)
class CheckRecord:
    check: str
    subject: str
    value: float
    margin: float
    unit: str
    detail: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.margin > 0)

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "subject": self.subject,
            "value": self.value,
            "margin": self.margin,
            "unit": self.unit,
            "passed": self.passed,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class VerificationReport:
    records: tuple[CheckRecord, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def failures(self) -> list[CheckRecord]:
        return [r for r in self.records if not r.passed]

    def by_check(self, name: str) -> list[CheckRecord]:
        return [r for r in self.records if r.check == name]

    def checks(self) -> list[str]:
        return sorted({r.check for r in self.records})

    def to_dict(self) -> dict:
        return {"passed": self.passed, "records": [r.to_dict() for r in self.records]}


def meridian_circle(host: SolidTorusEmbedding, radius: float, samples: int = 64, at: int = 0) -> np.ndarray:
    """Circle of the given radius around ``host``'s core, in the normal plane at sample ``at``."""
    phi = np.arange(samples) * (2 * math.pi / samples)
    n, b = host.normal[at], host.binormal[at]
    return host.core[at] + radius * (np.cos(phi)[:, None] * n + np.sin(phi)[:, None] * b)


def parent_degree(curve: np.ndarray, host: SolidTorusEmbedding) -> float:
    """Degree of the host-core parameter (nearest point) along a closed curve."""
    _, s = nearest_on_polyline(curve, host.core)
    total = cumulative_length(host.core)[-1]
    d = np.diff(np.append(s, s[0]))
    d = (d + 0.5 * total) % total - 0.5 * total
    return float(d.sum() / total)


def _frame_records(i: int, e: SolidTorusEmbedding, tol: Tolerances) -> list[CheckRecord]:
    t = discrete_tangents(e.core)
    err = orthonormality_error(t, e.normal, e.binormal)
    if not np.isfinite(err):
        err = math.inf
    try:
        closure = frame_closure_error(e.core, e.normal) if math.isfinite(err) else math.inf
    except GeometryError:
        closure = math.inf
    return [
        CheckRecord("frame-orthonormality", e.name, err, tol.frame - err, ANGLE),
        CheckRecord("frame-closure", e.name, closure, tol.closure - closure, ANGLE),
    ]


def _self_record(e: SolidTorusEmbedding, tol: Tolerances) -> CheckRecord:
    need = 2 * e.radius * (1 + tol.safety)
    local = math.pi * e.radius * (1 + tol.safety)
    d = self_min_distance(e.core, local, 4 * need)
    return CheckRecord(
        "self-embeddedness", e.name, d, d - need, LENGTH,
        f"non-local segments (arc gap >= {local:.3e}) at distance >= {d:.6e}",
    )


def _containment_record(e: SolidTorusEmbedding, host: SolidTorusEmbedding) -> CheckRecord:
    mids = 0.5 * (e.core + np.roll(e.core, -1, axis=0))
    d, _ = nearest_on_polyline(np.vstack([e.core, mids]), host.core)
    worst = float(d.max())
    return CheckRecord(
        "containment", f"{e.name} in {host.name}", worst, (host.radius - e.radius) - worst, LENGTH,
        "max core distance from parent core against parent radius minus child radius",
    )


def _sibling_record(a: SolidTorusEmbedding, b: SolidTorusEmbedding, tol: Tolerances) -> CheckRecord:
    d = min_distance_between(a.core, b.core)
    need = (a.radius + b.radius) * (1 + tol.safety)
    return CheckRecord("sibling-disjointness", f"{a.name} / {b.name}", d, d - need, LENGTH)


def _winding_records(e: SolidTorusEmbedding, host: SolidTorusEmbedding | None, tol: Tolerances) -> list[CheckRecord]:
    expected = 1 if e.kind == ROOT else 0
    out = []
    if e.model is not None:
        try:
            w = winding_number(e.model)
            out.append(CheckRecord("winding-model", e.name, w, 0.5 - abs(w - expected), COUNT,
                                   f"theta degree {w}, expected {expected}"))
        except GeometryError as exc:
            out.append(CheckRecord("winding-model", e.name, math.nan, -1.0, COUNT, str(exc)))
    if host is None:
        # the root links a small meridian circle of its own tube once
        circle = meridian_circle(e, 2.0 * e.radius, tol.meridian_samples)
        raw = gauss_sum(e.core, circle)
        out.append(CheckRecord("winding-gauss", e.name, raw, tol.rounding - abs(abs(raw) - 1), COUNT,
                               "linking with a meridian circle of the root tube"))
        return out
    deg = parent_degree(e.core, host)
    out.append(CheckRecord("winding-degree", e.name, deg, 0.5 - abs(deg - expected), COUNT,
                           "degree of the parent-core parameter along the core"))
    d, _ = nearest_on_polyline(e.core, host.core)
    circle = meridian_circle(host, 0.5 * (host.radius + float(d.max())), tol.meridian_samples)
    raw = gauss_sum(e.core, circle)
    out.append(CheckRecord("winding-gauss", e.name, raw, tol.rounding - abs(raw - expected), COUNT,
                           "linking with a meridian circle of the parent tube"))
    return out


def verify_embedding(
    embeddings: Sequence[SolidTorusEmbedding], tolerances: Tolerances = Tolerances()
) -> VerificationReport:
    """Check frames, embeddedness, nesting, disjointness, winding and Bing linking.

    Disjointness of tori in different subtrees follows from containment in
    disjoint parents, so only Bing siblings are compared directly.
    """
    if not embeddings:
        raise ValidationError("nothing to verify")
    tol = tolerances
    recs: list[CheckRecord] = []
    children: dict[int, list[int]] = {}
    for i, e in enumerate(embeddings):
        if e.parent is not None:
            children.setdefault(e.parent, []).append(i)
    for i, e in enumerate(embeddings):
        host = embeddings[e.parent] if e.parent is not None else None
        recs.extend(_frame_records(i, e, tol))
        recs.append(_self_record(e, tol))
        if host is not None:
            recs.append(_containment_record(e, host))
        recs.extend(_winding_records(e, host, tol))
        if host is not None and host.parent is not None:
            grand = embeddings[host.parent]
            deg = parent_degree(e.core, grand)
            recs.append(CheckRecord("winding-composition", f"{e.name} in {grand.name}", deg,
                                    0.5 - abs(deg), COUNT, "degree of the grandparent-core parameter"))
    for parent, kids in sorted(children.items()):
        pair = [embeddings[k] for k in kids if embeddings[k].kind in (BING_LEFT, BING_RIGHT)]
        if len(pair) != 2:
            continue
        a, b = pair
        recs.append(_sibling_record(a, b, tol))
        raw = gauss_sum(a.core, b.core)
        ok = round(raw) == tol.bing_linking
        recs.append(CheckRecord(
            "bing-linking", f"{a.name} / {b.name}", raw,
            tol.rounding - abs(raw - tol.bing_linking) if ok else -abs(raw - tol.bing_linking), COUNT,
            f"Gauss sum against frozen constant {tol.bing_linking}",
        ))
    return VerificationReport(tuple(recs))
