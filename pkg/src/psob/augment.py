"""Joint augmentation of image raster, attention map, rings, and boxes.

The pipeline is flip -> large-scale jitter -> fixed-size crop, with simple
copy-paste composing objects across samples. Every op keeps geometry and
rasters consistent and preserves the attention map's two-value domain.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Mapping, Sequence

import cv2
import numpy as np

from .attention import BACKGROUND_VALUE, AttentionMap, Stroke
from .errors import InvalidArgumentError
from .geometry import Point2, Ring
from .raster import mask_to_rings, polygon_mask

PASTE_SELECT_PROB = 0.5
MIN_SURVIVING_AREA = 1e-9


@dataclass(frozen=True)
class AugConfig:
    flip_prob: float = 0.5
    jitter_range: tuple[float, float] = (0.1, 2.0)
    target_size: tuple[int, int] = (1024, 1024)
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.flip_prob <= 1.0:
            raise InvalidArgumentError(f"flip_prob must be in [0, 1], got {self.flip_prob}")
        lo, hi = self.jitter_range
        if not 0 < lo <= hi:
            raise InvalidArgumentError(f"jitter_range must satisfy 0 < min <= max, got {self.jitter_range}")
        tw, th = self.target_size
        if tw < 1 or th < 1:
            raise InvalidArgumentError(f"target_size must be positive, got {self.target_size}")


@dataclass(frozen=True)
class SampleObject:
    """One object's geometry inside a sample; bbox is derived from the rings.

    Strokes are carried along and mapped by the same coordinate transforms,
    but never clipped: the raster ops clamp out-of-canvas points on draw.
    """

    id: int
    category_id: int
    rings: tuple[Ring, ...]
    strokes: tuple[Stroke, ...] = ()
    extra: Mapping[str, Any] = field(default_factory=dict)

    def bounds(self) -> tuple[float, float, float, float]:
        xs = [v.x for r in self.rings for v in r.vertices]
        ys = [v.y for r in self.rings for v in r.vertices]
        return min(xs), min(ys), max(xs) - min(xs), max(ys) - min(ys)

    def mask(self, width: int, height: int) -> np.ndarray:
        return polygon_mask(self.rings, width, height)


@dataclass(frozen=True)
class Sample:
    image: np.ndarray
    attention: AttentionMap
    objects: tuple[SampleObject, ...]

    def __post_init__(self):
        img = self.image
        if img.ndim != 3 or img.shape[2] != 3 or img.dtype != np.uint8:
            raise InvalidArgumentError("sample image must be (H, W, 3) uint8")
        if img.shape[:2] != self.attention.pixels.shape:
            raise InvalidArgumentError(
                f"image {img.shape[:2]} and attention {self.attention.pixels.shape} dims differ"
            )

    @property
    def width(self) -> int:
        return self.image.shape[1]

    @property
    def height(self) -> int:
        return self.image.shape[0]


def _rng_for(config: AugConfig, rng: np.random.Generator | None) -> np.random.Generator:
    return rng if rng is not None else np.random.default_rng(config.seed)


def derive_seed(root_seed: int, index: int) -> np.random.SeedSequence:
    """Stable per-sample seed stream so parallel workers reproduce serial runs."""
    return np.random.SeedSequence(entropy=root_seed, spawn_key=(index,))


# ---------------------------------------------------------------------------
# Deterministic transforms (parameters already drawn)
# ---------------------------------------------------------------------------

def _map_strokes(strokes: Sequence[Stroke], fn) -> tuple[Stroke, ...]:
    return tuple(
        Stroke([fn(p) for p in s.points], start_time=s.start_time, duration=s.duration)
        for s in strokes
    )


def _map_rings(objects: Sequence[SampleObject], fn) -> tuple[SampleObject, ...]:
    out = []
    for obj in objects:
        rings = tuple(Ring([fn(v) for v in ring.vertices]) for ring in obj.rings)
        out.append(replace(obj, rings=rings, strokes=_map_strokes(obj.strokes, fn)))
    return tuple(out)


def flip_sample(sample: Sample) -> Sample:
    w = sample.width
    mirror = lambda p: Point2(w - 1 - p.x, p.y)
    return Sample(
        image=sample.image[:, ::-1].copy(),
        attention=AttentionMap(np.ascontiguousarray(sample.attention.pixels[:, ::-1])),
        objects=_map_rings(sample.objects, mirror),
    )


def scale_sample(sample: Sample, scale: float) -> Sample:
    """Resize by `scale`: bilinear image, nearest attention, scaled coordinates.

    Raster dims round to integers, so coordinates are multiplied by the
    realized per-axis scale (rounded_dim / dim) to stay aligned with the grid.
    """
    new_w = int(round(sample.width * scale))
    new_h = int(round(sample.height * scale))
    if new_w < 1 or new_h < 1:
        raise InvalidArgumentError(f"scale {scale} collapses {sample.width}x{sample.height} to zero")
    sx = new_w / sample.width
    sy = new_h / sample.height
    image = cv2.resize(sample.image, (new_w, new_h), interpolation=cv2.INTER_LINEAR)
    attn = cv2.resize(sample.attention.pixels, (new_w, new_h), interpolation=cv2.INTER_NEAREST)
    return Sample(
        image=image,
        attention=AttentionMap(np.ascontiguousarray(attn)),
        objects=_map_rings(sample.objects, lambda p: Point2(p.x * sx, p.y * sy)),
    )


def _clip_polygon(points: list[tuple[float, float]], w: float, h: float) -> list[tuple[float, float]]:
    """Sutherland-Hodgman clip against the rectangle [0, w] x [0, h]."""

    def clip_edge(pts, inside, intersect):
        out = []
        for i, cur in enumerate(pts):
            prev = pts[i - 1]
            cur_in = inside(cur)
            if inside(prev) != cur_in:
                out.append(intersect(prev, cur))
            if cur_in:
                out.append(cur)
        return out

    def cross_x(bound):
        def f(a, b):
            t = (bound - a[0]) / (b[0] - a[0])
            return (bound, a[1] + t * (b[1] - a[1]))
        return f

    def cross_y(bound):
        def f(a, b):
            t = (bound - a[1]) / (b[1] - a[1])
            return (a[0] + t * (b[0] - a[0]), bound)
        return f

    pts = points
    for inside, intersect in (
        (lambda p: p[0] >= 0, cross_x(0.0)),
        (lambda p: p[0] <= w, cross_x(w)),
        (lambda p: p[1] >= 0, cross_y(0.0)),
        (lambda p: p[1] <= h, cross_y(h)),
    ):
        if not pts:
            return []
        pts = clip_edge(pts, inside, intersect)
    return pts


def _shoelace(points: Sequence[tuple[float, float]]) -> float:
    acc = 0.0
    for (ax, ay), (bx, by) in zip(points, list(points[1:]) + [points[0]]):
        acc += ax * by - bx * ay
    return abs(acc) / 2.0


def _clip_object(obj: SampleObject, dx: float, dy: float, w: int, h: int) -> SampleObject | None:
    rings = []
    for ring in obj.rings:
        pts = [(v.x - dx, v.y - dy) for v in ring.vertices]
        clipped = _clip_polygon(pts, float(w), float(h))
        deduped = [p for i, p in enumerate(clipped) if i == 0 or p != clipped[i - 1]]
        while len(deduped) > 1 and deduped[0] == deduped[-1]:
            deduped.pop()
        if len(deduped) >= 3 and _shoelace(deduped) > MIN_SURVIVING_AREA:
            rings.append(Ring(deduped))
    if not rings:
        return None
    shift = lambda p: Point2(p.x - dx, p.y - dy)
    return replace(obj, rings=tuple(rings), strokes=_map_strokes(obj.strokes, shift))


def crop_sample(sample: Sample, x0: int, y0: int, target_w: int, target_h: int) -> Sample:
    image = np.zeros((target_h, target_w, 3), dtype=np.uint8)
    attn = np.full((target_h, target_w), BACKGROUND_VALUE, dtype=np.uint8)
    src_x1 = min(sample.width, x0 + target_w)
    src_y1 = min(sample.height, y0 + target_h)
    if src_x1 > x0 and src_y1 > y0:
        image[: src_y1 - y0, : src_x1 - x0] = sample.image[y0:src_y1, x0:src_x1]
        attn[: src_y1 - y0, : src_x1 - x0] = sample.attention.pixels[y0:src_y1, x0:src_x1]
    objects = []
    for obj in sample.objects:
        clipped = _clip_object(obj, float(x0), float(y0), target_w, target_h)
        if clipped is not None:
            objects.append(clipped)
    return Sample(image=image, attention=AttentionMap(attn), objects=tuple(objects))


# ---------------------------------------------------------------------------
# Random ops
# ---------------------------------------------------------------------------

def random_flip(sample: Sample, config: AugConfig, rng: np.random.Generator | None = None) -> Sample:
    """Mirror the whole sample horizontally with probability config.flip_prob."""
    rng = _rng_for(config, rng)
    if config.flip_prob > 0 and rng.random() < config.flip_prob:
        return flip_sample(sample)
    return sample


def large_scale_jitter(
    sample: Sample, config: AugConfig, rng: np.random.Generator | None = None
) -> Sample:
    """Resize by a scale drawn uniformly from config.jitter_range."""
    rng = _rng_for(config, rng)
    lo, hi = config.jitter_range
    return scale_sample(sample, float(rng.uniform(lo, hi)))


def fixed_size_crop(
    sample: Sample, config: AugConfig, rng: np.random.Generator | None = None
) -> Sample:
    """Crop (or pad) to config.target_size with a uniformly random window."""
    rng = _rng_for(config, rng)
    tw, th = config.target_size
    x0 = int(rng.integers(0, max(sample.width - tw, 0) + 1))
    y0 = int(rng.integers(0, max(sample.height - th, 0) + 1))
    return crop_sample(sample, x0, y0, tw, th)


def simple_copy_paste(
    sample_a: Sample,
    sample_b: Sample,
    seed: int | np.random.Generator = 0,
) -> Sample:
    """Paste a random subset of sample_b's objects on top of sample_a.

    Pasted masks take the source image and attention pixels; occluded parts of
    sample_a's objects are subtracted in raster space and re-vectorized, and
    fully covered objects are dropped. Pasted objects keep their geometry.
    """
    if (sample_a.width, sample_a.height) != (sample_b.width, sample_b.height):
        raise InvalidArgumentError(
            f"samples must share dimensions, got {sample_a.width}x{sample_a.height} "
            f"and {sample_b.width}x{sample_b.height}"
        )
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    selected = [obj for obj in sample_b.objects if rng.random() < PASTE_SELECT_PROB]
    if not selected:
        return sample_a

    w, h = sample_a.width, sample_a.height
    paste_union = np.zeros((h, w), dtype=bool)
    for obj in selected:
        paste_union |= obj.mask(w, h)

    image = sample_a.image.copy()
    attn = sample_a.attention.pixels.copy()
    image[paste_union] = sample_b.image[paste_union]
    attn[paste_union] = sample_b.attention.pixels[paste_union]

    survivors = []
    for obj in sample_a.objects:
        mask = obj.mask(w, h)
        overlap = mask & paste_union
        if not overlap.any():
            survivors.append(obj)
            continue
        remaining = mask & ~paste_union
        if not remaining.any():
            continue
        rings = mask_to_rings(remaining)
        if rings:
            survivors.append(replace(obj, rings=tuple(rings)))
    return Sample(
        image=image,
        attention=AttentionMap(attn),
        objects=tuple(survivors) + tuple(selected),
    )


def augment_pipeline(
    sample: Sample, config: AugConfig, rng: np.random.Generator | None = None
) -> Sample:
    """flip -> jitter -> crop, a pure function of (sample, config seed)."""
    rng = _rng_for(config, rng)
    sample = random_flip(sample, config, rng)
    sample = large_scale_jitter(sample, config, rng)
    return fixed_size_crop(sample, config, rng)
