"""Polygon measurement, adaptive boundary simplification, and curvature classification.

Object boundaries are closed polygons ("rings"). The simplification tolerance is
not a free parameter: it is always 3% of the ring's perimeter, which makes the
retained-vertex count comparable across object scales. Objects are then binned
into low / medium / high curvature by how many vertices survive.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InvalidArgumentError, InvalidGeometryError

EPSILON_PERIMETER_FRACTION = 0.03

# Curvature class boundaries, inclusive on the medium side.
LOW_CURVATURE_MAX = 5
MEDIUM_CURVATURE_MAX = 10


@dataclass(frozen=True)
class Point2:
    """A point in pixel coordinates."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InvalidGeometryError(f"point coordinates must be finite, got ({self.x}, {self.y})")


class CurvatureClass(enum.Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"


class Ring:
    """An ordered closed polygon boundary; the last vertex connects back to the first.

    At least 3 vertices are required and consecutive duplicates (including the
    wrap-around pair) are rejected so the segment count stays well defined.
    """

    __slots__ = ("vertices",)

    def __init__(self, vertices: Sequence[Point2]):
        verts = tuple(
            v if isinstance(v, Point2) else Point2(float(v[0]), float(v[1])) for v in vertices
        )
        if len(verts) < 3:
            raise InvalidGeometryError(f"a ring needs at least 3 vertices, got {len(verts)}")
        for a, b in zip(verts, verts[1:] + verts[:1]):
            if a.x == b.x and a.y == b.y:
                raise InvalidGeometryError(f"consecutive duplicate vertex at ({a.x}, {a.y})")
        self.vertices = verts

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __eq__(self, other):
        return isinstance(other, Ring) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return f"Ring({len(self.vertices)} vertices)"


def perimeter(ring: Ring) -> float:
    """Total Euclidean length of all segments, including the closing one."""
    verts = ring.vertices
    total = 0.0
    for a, b in zip(verts, verts[1:] + verts[:1]):
        total += math.hypot(b.x - a.x, b.y - a.y)
    return total


def area(ring: Ring) -> float:
    """Absolute shoelace area of the ring."""
    verts = ring.vertices
    acc = 0.0
    for a, b in zip(verts, verts[1:] + verts[:1]):
        acc += a.x * b.y - b.x * a.y
    return abs(acc) / 2.0


def total_perimeter(rings: Iterable[Ring]) -> float:
    return sum(perimeter(r) for r in rings)


def total_area(rings: Iterable[Ring]) -> float:
    return sum(area(r) for r in rings)


def adaptive_epsilon(ring: Ring) -> float:
    """Simplification tolerance: 3% of the ring perimeter."""
    return EPSILON_PERIMETER_FRACTION * perimeter(ring)


def _line_distance(p: Point2, a: Point2, b: Point2) -> float:
    """Perpendicular distance from p to the infinite line through a and b.

    Falls back to the distance to a when the chord is degenerate.
    """
    dx = b.x - a.x
    dy = b.y - a.y
    norm = math.hypot(dx, dy)
    if norm == 0.0:
        return math.hypot(p.x - a.x, p.y - a.y)
    return abs(dy * (p.x - a.x) - dx * (p.y - a.y)) / norm


def _rdp_open(points: Sequence[Point2], first: int, last: int, eps: float, keep, deviation):
    """Mark interior points of points[first..last] that survive simplification.

    A point survives when its distance to the current chord strictly exceeds
    eps; the causing distance is recorded so callers can rank retained points.
    """
    dmax = 0.0
    index = -1
    for i in range(first + 1, last):
        d = _line_distance(points[i], points[first], points[last])
        if d > dmax:
            dmax = d
            index = i
    if dmax > eps:
        keep[index] = True
        deviation[index] = dmax
        _rdp_open(points, first, index, eps, keep, deviation)
        _rdp_open(points, index, last, eps, keep, deviation)


def _farthest_pair(verts: Sequence[Point2]) -> tuple[int, int]:
    """Indices of the two mutually farthest vertices; smallest index pair on ties."""
    best = (0, 1)
    best_d = -1.0
    n = len(verts)
    for i in range(n):
        for j in range(i + 1, n):
            d = (verts[i].x - verts[j].x) ** 2 + (verts[i].y - verts[j].y) ** 2
            if d > best_d:
                best_d = d
                best = (i, j)
    return best


def simplify_closed_indexed(
    vertices: Sequence[Point2], eps: float
) -> list[tuple[int, Point2, float]]:
    """Simplify a closed vertex sequence, returning (index, vertex, deviation) triples.

    The ring is anchored at its two mutually farthest vertices, each open half
    is simplified independently, and the halves are merged. Anchors carry an
    infinite deviation since no chord ever challenged them. The result is in
    ring order starting from the first anchor.
    """
    n = len(vertices)
    if n < 3:
        return [(i, v, math.inf) for i, v in enumerate(vertices)]
    i0, i1 = _farthest_pair(vertices)

    keep = [False] * n
    deviation = [0.0] * n
    keep[i0] = keep[i1] = True
    deviation[i0] = deviation[i1] = math.inf

    # Half A runs i0 -> i1 in ring order, half B wraps i1 -> i0.
    half_a = list(range(i0, i1 + 1))
    half_b = list(range(i1, n)) + list(range(0, i0 + 1))

    for half in (half_a, half_b):
        pts = [vertices[k] for k in half]
        local_keep = [False] * len(pts)
        local_dev = [0.0] * len(pts)
        _rdp_open(pts, 0, len(pts) - 1, eps, local_keep, local_dev)
        for local, orig in enumerate(half):
            if local_keep[local]:
                keep[orig] = True
                deviation[orig] = local_dev[local]

    order = list(range(i0, n)) + list(range(0, i0))
    return [(k, vertices[k], deviation[k]) for k in order if keep[k]]


def simplify_closed(vertices: Sequence[Point2], eps: float) -> tuple[Point2, ...]:
    """Retained vertices of a closed boundary simplified at tolerance eps."""
    return tuple(v for _, v, _ in simplify_closed_indexed(vertices, eps))


def curvature_points(ring: Ring) -> tuple[Point2, ...]:
    """Vertices retained by simplification at the ring's adaptive tolerance.

    These are the object's curvature points; their count drives
    :func:`classify_curvature`. Degenerate rings may retain only 2 points.
    """
    return simplify_closed(ring.vertices, adaptive_epsilon(ring))


def curvature_points_indexed(ring: Ring) -> list[tuple[int, Point2, float]]:
    """Like :func:`curvature_points` but with original index and retention deviation."""
    return simplify_closed_indexed(ring.vertices, adaptive_epsilon(ring))


def curvature_count(rings: Iterable[Ring]) -> int:
    """Summed curvature-point count over an object's rings, each at its own tolerance."""
    return sum(len(curvature_points(r)) for r in rings)


def classify_curvature(count: int) -> CurvatureClass:
    """Bin a curvature-point count: <6 low, 6..10 medium, >10 high."""
    if count < 0:
        raise InvalidArgumentError(f"curvature count must be non-negative, got {count}")
    if count <= LOW_CURVATURE_MAX:
        return CurvatureClass.LOW
    if count <= MEDIUM_CURVATURE_MAX:
        return CurvatureClass.MEDIUM
    return CurvatureClass.HIGH
