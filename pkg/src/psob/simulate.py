"""Synthetic partial-boundary sketches, standing in for human annotators.

Strokes are arcs of the ground-truth boundary centered on the retained
curvature points, optionally perturbed perpendicular to the boundary, with
timing synthesized from a constant drawing speed plus think-time latency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .attention import Stroke
from .errors import InvalidArgumentError
from .geometry import Point2, Ring, curvature_points_indexed, perimeter

# Back-solved so default simulated timings land near the reference corpus
# means (sketch ~2.0 s over ~138 px of stroke, interaction ~7.2 s).
DEFAULT_SKETCH_SPEED = 69.2
DEFAULT_LATENCY = 5.2


@dataclass(frozen=True)
class SimConfig:
    target_coverage: float
    jitter_sigma: float = 0.0
    seed: int = 0
    points_per_arc: int = 8

    def __post_init__(self):
        if not 0.0 <= self.target_coverage <= 1.0:
            raise InvalidArgumentError(
                f"target_coverage must be in [0, 1], got {self.target_coverage}"
            )
        if self.jitter_sigma < 0:
            raise InvalidArgumentError(f"jitter_sigma must be >= 0, got {self.jitter_sigma}")
        if self.points_per_arc < 2:
            raise InvalidArgumentError(f"points_per_arc must be >= 2, got {self.points_per_arc}")


@dataclass(frozen=True)
class SimulatedSketch:
    """Simulation result; `used_fallback` marks the single-arc degenerate path."""

    strokes: tuple[Stroke, ...]
    used_fallback: bool = False


@dataclass(frozen=True)
class TimedSketch:
    strokes: tuple[Stroke, ...]
    sketch_time: float
    interaction_time: float


class _BoundaryWalk:
    """Arc-length parametrization of a ring boundary."""

    def __init__(self, ring: Ring):
        self.verts = ring.vertices
        n = len(self.verts)
        self.cum = [0.0]
        for i in range(n):
            a = self.verts[i]
            b = self.verts[(i + 1) % n]
            self.cum.append(self.cum[-1] + math.hypot(b.x - a.x, b.y - a.y))
        self.length = self.cum[-1]

    def locate(self, t: float) -> tuple[int, float]:
        """Segment index and offset within it for arc position t (mod length)."""
        t = t % self.length
        # cum is sorted; linear scan is fine at polygon sizes
        for i in range(len(self.verts)):
            if t < self.cum[i + 1] or i == len(self.verts) - 1:
                return i, t - self.cum[i]
        raise AssertionError("unreachable")

    def point_and_normal(self, t: float) -> tuple[float, float, float, float]:
        i, offset = self.locate(t)
        a = self.verts[i]
        b = self.verts[(i + 1) % len(self.verts)]
        seg = math.hypot(b.x - a.x, b.y - a.y)
        ux = (b.x - a.x) / seg
        uy = (b.y - a.y) / seg
        return a.x + ux * offset, a.y + uy * offset, -uy, ux

    def vertex_positions_inside(self, t_start: float, t_end: float) -> list[float]:
        """Unwrapped arc positions of ring vertices strictly inside (t_start, t_end)."""
        out = []
        for base in self.cum[:-1]:
            for shift in (-self.length, 0.0, self.length, 2 * self.length):
                t = base + shift
                if t_start < t < t_end:
                    out.append(t)
        return sorted(out)


def _arc_stroke(
    walk: _BoundaryWalk,
    center_t: float,
    arc_len: float,
    points_per_arc: int,
    jitter_sigma: float,
    rng: np.random.Generator,
) -> Stroke:
    t0 = center_t - arc_len / 2.0
    t1 = center_t + arc_len / 2.0
    base = list(np.linspace(t0, t1, points_per_arc))
    # Keep the polyline on the boundary between samples by also visiting the
    # ring vertices inside the arc, so its length equals the arc length.
    positions = sorted(set(base) | set(walk.vertex_positions_inside(t0, t1)))
    pts = []
    for t in positions:
        x, y, nx, ny = walk.point_and_normal(t)
        if jitter_sigma > 0:
            off = rng.normal(0.0, jitter_sigma)
            x += nx * off
            y += ny * off
        pts.append(Point2(x, y))
    return Stroke(pts)


def simulate_sketch(ring: Ring, config: SimConfig) -> SimulatedSketch:
    """Sketch arcs centered on the highest-deviation curvature points.

    Arc lengths are chosen so the summed stroke length hits
    target_coverage * perimeter. Deterministic for a fixed seed. When fewer
    than 3 curvature points exist the simulator falls back to one arc starting
    at the sharpest vertex and flags the result.
    """
    if config.target_coverage == 0.0:
        return SimulatedSketch(strokes=())

    rng = np.random.default_rng(config.seed)
    walk = _BoundaryWalk(ring)
    target_len = config.target_coverage * walk.length

    retained = curvature_points_indexed(ring)
    # Highest retention deviation first; anchors (inf) lead, ties by index.
    ordered = sorted(retained, key=lambda item: (-item[2], item[0]))

    if len(ordered) < 3:
        start_idx = ordered[0][0] if ordered else 0
        start_t = walk.cum[start_idx]
        stroke = _arc_stroke(
            walk,
            (start_t + target_len / 2.0) % walk.length,
            target_len,
            max(config.points_per_arc, 2),
            config.jitter_sigma,
            rng,
        )
        return SimulatedSketch(strokes=(stroke,), used_fallback=True)

    arc_len = target_len / len(ordered)
    strokes = []
    for idx, _, _ in ordered:
        center_t = walk.cum[idx]
        strokes.append(
            _arc_stroke(
                walk, center_t, arc_len, config.points_per_arc, config.jitter_sigma, rng
            )
        )
    return SimulatedSketch(strokes=tuple(strokes))


def simulate_timing(
    strokes: Sequence[Stroke],
    speed: float = DEFAULT_SKETCH_SPEED,
    latency: float = DEFAULT_LATENCY,
) -> TimedSketch:
    """Assign durations from drawing speed and spread latency between strokes.

    Each stroke's duration is its length over `speed`; the total interaction
    time is the summed sketch time plus `latency`, realized as equal idle gaps
    before each stroke and after the last one.
    """
    if speed <= 0:
        raise InvalidArgumentError(f"speed must be positive, got {speed}")
    if latency < 0:
        raise InvalidArgumentError(f"latency must be >= 0, got {latency}")
    n = len(strokes)
    sketch_time = sum(s.length() / speed for s in strokes)
    gap = latency / (n + 1)
    timed = []
    clock = 0.0
    for s in strokes:
        clock += gap
        duration = s.length() / speed
        timed.append(Stroke(s.points, start_time=clock, duration=duration))
        clock += duration
    return TimedSketch(
        strokes=tuple(timed),
        sketch_time=sketch_time,
        interaction_time=sketch_time + latency,
    )
