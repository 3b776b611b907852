"""Shared test fixtures and polygon generators."""

from __future__ import annotations

import math
import random

from hypothesis import HealthCheck, settings

from psob.geometry import Point2, Ring

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def square_ring(side: float = 100.0, x: float = 0.0, y: float = 0.0) -> Ring:
    return Ring([(x, y), (x + side, y), (x + side, y + side), (x, y + side)])


def star_points(
    rng: random.Random,
    n: int,
    cx: float = 0.0,
    cy: float = 0.0,
    r_min: float = 20.0,
    r_max: float = 100.0,
) -> list[tuple[float, float]]:
    """Vertices of a random star-shaped polygon (simple by construction)."""
    angles = sorted(rng.uniform(0.0, 2.0 * math.pi) for _ in range(n))
    pts = []
    for a in angles:
        r = rng.uniform(r_min, r_max)
        pts.append((cx + r * math.cos(a), cy + r * math.sin(a)))
    return [p for i, p in enumerate(pts) if i == 0 or p != pts[i - 1]]


def random_ring(rng: random.Random, max_vertices: int = 12, **kwargs) -> Ring:
    while True:
        pts = star_points(rng, rng.randrange(3, max_vertices + 1), **kwargs)
        if len(pts) < 3:
            continue
        try:
            return Ring(pts)
        except Exception:
            continue


def regular_ring(n: int, radius: float = 100.0, cx: float = 0.0, cy: float = 0.0) -> Ring:
    pts = [
        (cx + radius * math.cos(2 * math.pi * i / n), cy + radius * math.sin(2 * math.pi * i / n))
        for i in range(n)
    ]
    return Ring(pts)


def five_pointed_star(outer: float = 100.0, inner: float = 40.0) -> Ring:
    pts = []
    for i in range(10):
        r = outer if i % 2 == 0 else inner
        a = math.pi / 2 + i * math.pi / 5
        pts.append((r * math.cos(a), r * math.sin(a)))
    return Ring(pts)


def rotate_ring(ring: Ring, theta: float) -> Ring:
    c, s = math.cos(theta), math.sin(theta)
    return Ring([Point2(c * p.x - s * p.y, s * p.x + c * p.y) for p in ring.vertices])
