"""Model curves in solid-torus coordinates.

A point of the model solid torus is ``(theta, u, v)`` with ``theta`` the
angle along the core and ``(u, v)`` in the unit cross-section disk.  Shapes
are designed in the unrolled picture ``x = theta * aspect / (2 pi)`` where
``aspect`` is core length over tube radius, so clasps keep their proportions
however long the parent torus is.

Every model link is built from stadia: a long thin loop with two strands at
``u = +-a`` joined by half-circle turns of radius ``a``.  The ends of a
stadium lean out of the ``u`` plane (``v = tilt * b * u / a`` along a turn)
and two facing turns with opposite tilts, one turn-radius apart, interlock
as a clasp.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import StepTooLarge, ValidationError

__all__ = [
    "ModelParams",
    "Stadium",
    "ModelCurve",
    "model_core",
    "model_whitehead",
    "model_bing_pair",
    "whitehead_stadium",
    "bing_stadia",
    "winding_number",
    "DEFAULT_ASPECT",
    "BING_CONFIGURATIONS",
]

TWO_PI = 2.0 * math.pi

#: Core length over tube radius of the default root torus (major radius 3, minor 1).
DEFAULT_ASPECT = TWO_PI * 3.0


@dataclass(frozen=True)
class ModelParams:
    """``a``: strand offset and turn radius; ``b``: clasp tilt; ``margin``: wall clearance."""

    a: float = 0.45
    b: float = 0.3
    margin: float = 0.05

    def __post_init__(self) -> None:
        if not (0 < self.a and 0 < self.b and 0 <= self.margin < 1):
            raise ValidationError("model parameters must satisfy a, b > 0 and 0 <= margin < 1")
        if math.hypot(self.a, self.b) > 1 - self.margin:
            raise ValidationError("model curves would leave the cross-section (a^2 + b^2 too large)")


@dataclass(frozen=True)
class Stadium:
    """Loop whose turn centres sit at ``center -+ length/2`` on the ``u = 0`` line.

    Parametrized by model arc length (ignoring ``v``), starting mid-way along
    the ``u = -a`` strand and running towards ``+x``.
    """

    center: float
    length: float
    a: float
    b: float
    tilt_left: int
    tilt_right: int

    @property
    def perimeter(self) -> float:
        return 2.0 * self.length + TWO_PI * self.a

    def turn_intervals(self) -> tuple[tuple[float, float], tuple[float, float]]:
        """Parameter ranges of the right and left turns."""
        half, arc = 0.5 * self.length, math.pi * self.a
        right = (half, half + arc)
        left = (half + arc + self.length, half + 2 * arc + self.length)
        return right, left

    def evaluate(self, t: np.ndarray) -> np.ndarray:
        """``(x, u, v)`` at parameters ``t`` (taken modulo the perimeter)."""
        a, b, ell = self.a, self.b, self.length
        arc = math.pi * a
        xl, xr = self.center - 0.5 * ell, self.center + 0.5 * ell
        s = (np.asarray(t, dtype=float) + 0.5 * ell) % self.perimeter
        x = np.empty_like(s)
        u = np.empty_like(s)
        tilt = np.empty_like(s)

        m = s < ell  # lower strand, left to right
        x[m], u[m] = xl + s[m], -a
        tilt[m] = self._tilt(s[m] / ell)

        m2 = (s >= ell) & (s < ell + arc)  # right turn
        phi = -0.5 * math.pi + (s[m2] - ell) / a
        x[m2], u[m2] = xr + a * np.cos(phi), a * np.sin(phi)
        tilt[m2] = self.tilt_right

        m3 = (s >= ell + arc) & (s < 2 * ell + arc)  # upper strand, right to left
        r = s[m3] - ell - arc
        x[m3], u[m3] = xr - r, a
        tilt[m3] = self._tilt(1.0 - r / ell)

        m4 = s >= 2 * ell + arc  # left turn
        phi = (s[m4] - 2 * ell - arc) / a
        x[m4], u[m4] = xl - a * np.sin(phi), a * np.cos(phi)
        tilt[m4] = self.tilt_left

        v = tilt * b * u / a
        return np.stack([x, u, v], axis=-1)

    def _tilt(self, frac: np.ndarray) -> np.ndarray:
        w = 0.5 * (1.0 - np.cos(math.pi * frac))
        return self.tilt_left + (self.tilt_right - self.tilt_left) * w


@dataclass(frozen=True, eq=False)
class ModelCurve:
    """Closed sampled curve; ``samples[:, 0]`` is ``theta`` in ``[0, 2 pi)``."""

    samples: np.ndarray
    aspect: float
    stadium: Stadium | None = None
    name: str = ""

    @property
    def n(self) -> int:
        return int(self.samples.shape[0])

    def radial_extent(self) -> float:
        return float(np.max(np.hypot(self.samples[:, 1], self.samples[:, 2])))

    def max_step(self) -> float:
        """Largest spacing between consecutive samples in the unrolled model picture."""
        x = self.samples[:, 0] * self.aspect / TWO_PI
        dx = np.diff(np.append(x, x[0]))
        dx = (dx + 0.5 * self.aspect) % self.aspect - 0.5 * self.aspect
        du = np.diff(np.append(self.samples[:, 1], self.samples[0, 1]))
        dv = np.diff(np.append(self.samples[:, 2], self.samples[0, 2]))
        return float(np.max(np.sqrt(dx * dx + du * du + dv * dv)))


def _to_model(xuv: np.ndarray, aspect: float) -> np.ndarray:
    out = xuv.copy()
    out[:, 0] = (xuv[:, 0] / aspect % 1.0) * TWO_PI
    return out


def _sample(stadium: Stadium, aspect: float, samples: int, name: str) -> ModelCurve:
    if samples < 8:
        raise ValidationError("model curves need at least 8 samples")
    t = np.arange(samples) * (stadium.perimeter / samples)
    return ModelCurve(_to_model(stadium.evaluate(t), aspect), aspect, stadium, name)


def _check_aspect(aspect: float, params: ModelParams, parts: int) -> None:
    if aspect <= parts * (2 * params.a + 1e-9):
        raise ValidationError(f"aspect {aspect} too small for the clasps")


def whitehead_stadium(aspect: float = DEFAULT_ASPECT, params: ModelParams = ModelParams()) -> Stadium:
    """One stadium whose right end clasps its own left end across ``x = 0``."""
    _check_aspect(aspect, params, 1)
    h = params.a
    return Stadium(0.5 * aspect, aspect - h, params.a, params.b, -1, 1)


#: Tilts (A left, A right, B left, B right) of the two Bing stadia.  "X" leans
#: each stadium one way throughout and gives linking number 0; "Y" gives the
#: doubly linked pair, used only to show the clasps are genuine.
BING_CONFIGURATIONS = {"X": (1, 1, -1, -1), "Y": (-1, 1, -1, 1)}


def bing_stadia(
    aspect: float = DEFAULT_ASPECT, params: ModelParams = ModelParams(), configuration: str = "X"
) -> tuple[Stadium, Stadium]:
    """Two stadia centred at ``x = 0`` and ``x = aspect / 2``, clasped at both ends."""
    _check_aspect(aspect, params, 2)
    try:
        al, ar, bl, br = BING_CONFIGURATIONS[configuration]
    except KeyError:
        raise ValidationError(f"unknown Bing configuration {configuration!r}") from None
    ell = 0.5 * aspect - params.a
    return (
        Stadium(0.0, ell, params.a, params.b, al, ar),
        Stadium(0.5 * aspect, ell, params.a, params.b, bl, br),
    )


def model_core(samples: int = 512) -> ModelCurve:
    """The core circle ``u = v = 0`` itself."""
    if samples < 3:
        raise ValidationError("need at least 3 samples")
    theta = np.arange(samples) * (TWO_PI / samples)
    pts = np.stack([theta, np.zeros(samples), np.zeros(samples)], axis=-1)
    return ModelCurve(pts, TWO_PI, None, "core")


def model_whitehead(
    aspect: float = DEFAULT_ASPECT, samples: int = 512, params: ModelParams = ModelParams()
) -> ModelCurve:
    return _sample(whitehead_stadium(aspect, params), aspect, samples, "whitehead")


def model_bing_pair(
    aspect: float = DEFAULT_ASPECT,
    samples: int = 512,
    params: ModelParams = ModelParams(),
    configuration: str = "X",
) -> tuple[ModelCurve, ModelCurve]:
    sa, sb = bing_stadia(aspect, params, configuration)
    return _sample(sa, aspect, samples, "bing-left"), _sample(sb, aspect, samples, "bing-right")


def winding_number(curve: ModelCurve, max_step: float = 0.5 * math.pi) -> int:
    """Degree of ``theta`` along the closed curve.

    Steps are read modulo ``2 pi`` in ``[-pi, pi)``; a step larger than
    ``max_step`` in absolute value is ambiguous and raises
    :class:`StepTooLarge`.
    """
    theta = curve.samples[:, 0]
    d = np.diff(np.append(theta, theta[0]))
    d = (d + math.pi) % TWO_PI - math.pi
    worst = float(np.max(np.abs(d)))
    if worst > max_step:
        raise StepTooLarge(f"theta step {worst:.3f} exceeds {max_step:.3f}")
    total = float(np.sum(d)) / TWO_PI
    k = round(total)
    if abs(total - k) > 1e-6:
        raise StepTooLarge(f"theta degree {total} is not an integer")
    return int(k)
