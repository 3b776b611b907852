"""Human attention maps: stroke rasterization and assistance-level classification.

An attention map is a single-channel raster holding exactly two values:
255 on sketched boundary pixels, 10 everywhere else. The constant background
keeps the extra input channel trainable without carrying information.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np
from PIL import Image

from .errors import InvalidArgumentError, InvalidGeometryError
from .geometry import Point2, Ring, total_perimeter
from .raster import draw_polyline

ATTENTION_VALUE = 255
BACKGROUND_VALUE = 10

# Assistance class boundaries on the sketch-length / perimeter ratio,
# both endpoints inclusive on the medium side.
MINOR_ASSIST_MAX = 0.25
MEDIUM_ASSIST_MAX = 0.50


class AssistanceClass(Enum):
    MINOR = "minor"
    MEDIUM = "medium"
    MAJOR = "major"


@dataclass(frozen=True)
class Stroke:
    """One pen gesture: ordered points plus wall-clock timing."""

    points: tuple[Point2, ...]
    start_time: float = 0.0
    duration: float = 0.0

    def __init__(self, points: Sequence[Point2], start_time: float = 0.0, duration: float = 0.0):
        pts = tuple(
            p if isinstance(p, Point2) else Point2(float(p[0]), float(p[1])) for p in points
        )
        if not pts:
            raise InvalidArgumentError("a stroke needs at least one point")
        if duration < 0:
            raise InvalidArgumentError(f"stroke duration must be >= 0, got {duration}")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "start_time", float(start_time))
        object.__setattr__(self, "duration", float(duration))

    def length(self) -> float:
        """Euclidean polyline length; single-point strokes have length 0."""
        return sum(
            math.hypot(b.x - a.x, b.y - a.y) for a, b in zip(self.points, self.points[1:])
        )


@dataclass(frozen=True)
class AttentionMap:
    """Single-channel raster whose pixels are all 10 or 255."""

    pixels: np.ndarray = field(repr=False)

    def __post_init__(self):
        px = self.pixels
        if px.ndim != 2 or px.dtype != np.uint8:
            raise InvalidArgumentError("attention map needs a 2D uint8 array")
        if not np.isin(px, (BACKGROUND_VALUE, ATTENTION_VALUE)).all():
            raise InvalidArgumentError(
                f"attention map pixels must be {BACKGROUND_VALUE} or {ATTENTION_VALUE}"
            )
        px.setflags(write=False)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def data(self) -> bytes:
        """Row-major pixel bytes."""
        return self.pixels.tobytes()

    def to_png(self) -> bytes:
        import io

        buf = io.BytesIO()
        Image.fromarray(self.pixels, mode="L").save(buf, format="PNG")
        return buf.getvalue()

    def save_png(self, path) -> None:
        Image.fromarray(self.pixels, mode="L").save(path, format="PNG")

    @classmethod
    def from_png(cls, source) -> "AttentionMap":
        import io

        if isinstance(source, (bytes, bytearray)):
            source = io.BytesIO(source)
        arr = np.asarray(Image.open(source).convert("L"), dtype=np.uint8)
        return cls(arr.copy())

    @classmethod
    def blank(cls, width: int, height: int) -> "AttentionMap":
        if width < 1 or height < 1:
            raise InvalidArgumentError(f"map dimensions must be positive, got {width}x{height}")
        return cls(np.full((height, width), BACKGROUND_VALUE, dtype=np.uint8))


def rasterize(
    strokes: Sequence[Stroke], width: int, height: int, thickness: int = 1
) -> AttentionMap:
    """Burn stroke polylines into an attention map.

    Stroke points are clamped into the image rectangle, rounded to pixel
    centers, connected with 8-connected lines, and dilated to `thickness`.
    """
    if width < 1 or height < 1:
        raise InvalidArgumentError(f"image dimensions must be positive, got {width}x{height}")
    if thickness < 1:
        raise InvalidArgumentError(f"thickness must be >= 1, got {thickness}")
    canvas = np.full((height, width), BACKGROUND_VALUE, dtype=np.uint8)
    for stroke in strokes:
        pts = [
            (
                int(round(min(max(p.x, 0.0), width - 1.0))),
                int(round(min(max(p.y, 0.0), height - 1.0))),
            )
            for p in stroke.points
        ]
        draw_polyline(canvas, pts, ATTENTION_VALUE, thickness)
    return AttentionMap(canvas)


def sketch_length(strokes: Sequence[Stroke]) -> float:
    """Total polyline length of all strokes, in pixels."""
    return sum(s.length() for s in strokes)


def coverage_ratio(strokes: Sequence[Stroke], rings: Ring | Sequence[Ring]) -> float:
    """Sketch length over boundary perimeter (the LS/PP statistic).

    Multi-ring objects use the sum of ring perimeters. Redundant over-tracing
    can push the ratio above 1; callers that need a bounded quantity should
    clamp it themselves.
    """
    if isinstance(rings, Ring):
        rings = (rings,)
    p = total_perimeter(rings)
    if p <= 0:
        raise InvalidGeometryError("coverage ratio needs a boundary with positive perimeter")
    return sketch_length(strokes) / p


def classify_assistance(ratio: float) -> AssistanceClass:
    """Bin a coverage ratio: <25% minor, 25..50% medium, >50% major."""
    if ratio < 0:
        raise InvalidArgumentError(f"coverage ratio must be >= 0, got {ratio}")
    if ratio < MINOR_ASSIST_MAX:
        return AssistanceClass.MINOR
    if ratio <= MEDIUM_ASSIST_MAX:
        return AssistanceClass.MEDIUM
    return AssistanceClass.MAJOR
