"""Shared raster primitives: line drawing, polygon fill, and mask resampling.

All rasterization uses the pixel-center convention: pixel (row i, col j)
samples the continuous point (j + 0.5, i + 0.5).
"""

from __future__ import annotations

from typing import Iterable, Sequence

import cv2
import numpy as np

from .errors import InvalidArgumentError
from .geometry import Ring


def bresenham_line(x0: int, y0: int, x1: int, y1: int) -> list[tuple[int, int]]:
    """8-connected integer line from (x0, y0) to (x1, y1), endpoints included."""
    points = []
    dx = abs(x1 - x0)
    dy = -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    x, y = x0, y0
    while True:
        points.append((x, y))
        if x == x1 and y == y1:
            break
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x += sx
        if e2 <= dx:
            err += dx
            y += sy
    return points


def draw_polyline(
    canvas: np.ndarray, points: Sequence[tuple[int, int]], value: int, thickness: int = 1
) -> None:
    """Stamp a polyline onto a 2D canvas in place, dilated to a square of side `thickness`."""
    if thickness < 1:
        raise InvalidArgumentError(f"thickness must be >= 1, got {thickness}")
    h, w = canvas.shape
    lo = -(thickness // 2)
    hi = (thickness - 1) // 2
    seen_single = len(points) == 1
    pixels = set()
    if seen_single:
        pixels.add(points[0])
    else:
        for (ax, ay), (bx, by) in zip(points, points[1:]):
            pixels.update(bresenham_line(ax, ay, bx, by))
    for px, py in pixels:
        y0 = max(0, py + lo)
        y1 = min(h - 1, py + hi)
        x0 = max(0, px + lo)
        x1 = min(w - 1, px + hi)
        if y0 <= y1 and x0 <= x1:
            canvas[y0 : y1 + 1, x0 : x1 + 1] = value


def polygon_mask(rings: Iterable[Ring], width: int, height: int) -> np.ndarray:
    """Even-odd scanline fill of one object's rings into a boolean (H, W) mask.

    A pixel is covered when its center lies inside an odd number of rings, so
    inner rings act as holes. Crossings use the half-open rule on both axes.
    """
    if width < 1 or height < 1:
        raise InvalidArgumentError(f"mask dimensions must be positive, got {width}x{height}")
    edges = []
    for ring in rings:
        verts = ring.vertices
        for a, b in zip(verts, verts[1:] + verts[:1]):
            if a.y != b.y:
                edges.append((a.x, a.y, b.x, b.y))
    mask = np.zeros((height, width), dtype=bool)
    if not edges:
        return mask
    e = np.asarray(edges, dtype=np.float64)
    x0, y0, x1, y1 = e[:, 0], e[:, 1], e[:, 2], e[:, 3]
    for row in range(height):
        yc = row + 0.5
        crossing = (y0 > yc) != (y1 > yc)
        if not crossing.any():
            continue
        t = (yc - y0[crossing]) / (y1[crossing] - y0[crossing])
        xs = np.sort(x0[crossing] + t * (x1[crossing] - x0[crossing]))
        for left, right in zip(xs[0::2], xs[1::2]):
            # pixel centers j + 0.5 in [left, right)
            j0 = int(np.ceil(left - 0.5))
            j1 = int(np.ceil(right - 0.5)) - 1
            if j1 < 0 or j0 > width - 1:
                continue
            mask[row, max(0, j0) : min(width - 1, j1) + 1] = True
    return mask


def scale_mask(mask: np.ndarray, new_width: int, new_height: int) -> np.ndarray:
    """Resample a boolean mask by bilinear interpolation thresholded at 0.5."""
    if new_width < 1 or new_height < 1:
        raise InvalidArgumentError(f"mask dimensions must be positive, got {new_width}x{new_height}")
    scaled = cv2.resize(
        mask.astype(np.float32), (new_width, new_height), interpolation=cv2.INTER_LINEAR
    )
    return scaled > 0.5


def mask_to_rings(mask: np.ndarray) -> list[Ring]:
    """Trace a binary mask back into rings via marching squares.

    Contours sit on the 0.5 level between pixel centers, so re-rasterizing the
    result with :func:`polygon_mask` reproduces the input almost exactly.
    """
    from skimage import measure

    padded = np.zeros((mask.shape[0] + 2, mask.shape[1] + 2), dtype=np.float32)
    padded[1:-1, 1:-1] = mask
    rings = []
    for contour in measure.find_contours(padded, 0.5):
        # (row, col) index space -> (x, y) pixel-center space, minus the pad
        pts = [(c - 1.0 + 0.5, r - 1.0 + 0.5) for r, c in contour]
        if len(pts) > 1 and pts[0] == pts[-1]:
            pts = pts[:-1]
        deduped = [p for i, p in enumerate(pts) if i == 0 or p != pts[i - 1]]
        while len(deduped) > 1 and deduped[0] == deduped[-1]:
            deduped.pop()
        if len(deduped) >= 3:
            rings.append(Ring(deduped))
    return rings
