"""Dataset records, COCO-compatible JSON I/O, scale classes, and corpus statistics.

The on-disk format is the COCO/LVIS schema extended with per-annotation
`strokes`, `interaction_time`, and `sketch_time` fields plus a top-level
`split` name. Unknown fields round-trip untouched. Serialization is canonical:
keys sorted, floats fixed to 6 decimal places, so identical splits produce
identical bytes.
"""

from __future__ import annotations

import enum
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

from . import geometry
from .attention import Stroke, sketch_length
from .errors import InvalidArgumentError, ParseError, ReferentialIntegrityError
from .geometry import Point2, Ring

SPLIT_NAMES = ("train", "validation", "test")

# Scale class area boundaries in px^2 (32^2 and 96^2), half-open upward.
SMALL_AREA_MAX = 1024
MEDIUM_AREA_MAX = 9216

BBOX_CONTAINMENT_TOLERANCE = 1.0

_IMAGE_FIELDS = frozenset({"id", "file_name", "width", "height"})
_CATEGORY_FIELDS = frozenset({"id", "name"})
_ANNOTATION_FIELDS = frozenset(
    {"id", "image_id", "category_id", "bbox", "segmentation", "strokes",
     "interaction_time", "sketch_time"}
)


class ScaleClass(enum.Enum):
    SMALL = "small"
    MEDIUM = "medium"
    LARGE = "large"


def classify_scale(area: float) -> ScaleClass:
    """Bin an object area: < 32^2 small, [32^2, 96^2) medium, >= 96^2 large."""
    if area < 0:
        raise InvalidArgumentError(f"area must be >= 0, got {area}")
    if area < SMALL_AREA_MAX:
        return ScaleClass.SMALL
    if area < MEDIUM_AREA_MAX:
        return ScaleClass.MEDIUM
    return ScaleClass.LARGE


def bbox_of_rings(rings: Sequence[Ring]) -> tuple[float, float, float, float]:
    xs = [v.x for r in rings for v in r.vertices]
    ys = [v.y for r in rings for v in r.vertices]
    return min(xs), min(ys), max(xs) - min(xs), max(ys) - min(ys)


@dataclass(frozen=True)
class ImageInfo:
    id: int
    file_name: str
    width: int
    height: int
    extra: Mapping[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class CategoryInfo:
    id: int
    name: str
    extra: Mapping[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class AnnotationRecord:
    """One annotated object: geometry, sketch strokes, and timing."""

    id: int
    image_id: int
    category_id: int
    bbox: tuple[float, float, float, float]
    rings: tuple[Ring, ...]
    strokes: tuple[Stroke, ...] = ()
    interaction_time: float = 0.0
    sketch_time: float = 0.0
    extra: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        x, y, w, h = self.bbox
        if w <= 0 or h <= 0:
            raise InvalidArgumentError(f"bbox sides must be positive, got w={w}, h={h}")
        if self.sketch_time > self.interaction_time:
            raise InvalidArgumentError(
                f"sketch_time {self.sketch_time} exceeds interaction_time {self.interaction_time}"
            )
        tol = BBOX_CONTAINMENT_TOLERANCE
        for ring in self.rings:
            for v in ring.vertices:
                if not (x - tol <= v.x <= x + w + tol and y - tol <= v.y <= y + h + tol):
                    raise InvalidArgumentError(
                        f"ring vertex ({v.x}, {v.y}) outside bbox of annotation {self.id}"
                    )

    def object_area(self) -> float:
        return geometry.total_area(self.rings)

    def object_perimeter(self) -> float:
        return geometry.total_perimeter(self.rings)


@dataclass(frozen=True)
class DatasetSplit:
    name: str
    images: tuple[ImageInfo, ...]
    annotations: tuple[AnnotationRecord, ...]
    categories: tuple[CategoryInfo, ...]
    extra: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.name not in SPLIT_NAMES:
            raise InvalidArgumentError(f"split name must be one of {SPLIT_NAMES}, got {self.name!r}")
        _check_unique("image", (im.id for im in self.images))
        _check_unique("annotation", (a.id for a in self.annotations))
        _check_unique("category", (c.id for c in self.categories))
        image_ids = {im.id for im in self.images}
        category_ids = {c.id for c in self.categories}
        for ann in self.annotations:
            if ann.image_id not in image_ids:
                raise ReferentialIntegrityError(
                    f"annotation {ann.id} references unknown image_id {ann.image_id}"
                )
            if ann.category_id not in category_ids:
                raise ReferentialIntegrityError(
                    f"annotation {ann.id} references unknown category_id {ann.category_id}"
                )

    def image_by_id(self, image_id: int) -> ImageInfo:
        for im in self.images:
            if im.id == image_id:
                return im
        raise ReferentialIntegrityError(f"no image with id {image_id}")


def _check_unique(kind: str, ids: Iterable[int]) -> None:
    seen = set()
    for i in ids:
        if i in seen:
            raise ReferentialIntegrityError(f"duplicate {kind} id {i}")
        seen.add(i)


# ---------------------------------------------------------------------------
# JSON mapping
# ---------------------------------------------------------------------------

def _rings_to_segmentation(rings: Sequence[Ring]) -> list[list[float]]:
    return [[coord for v in r.vertices for coord in (v.x, v.y)] for r in rings]


def _segmentation_to_rings(seg: Any, ann_id: Any) -> tuple[Ring, ...]:
    if not isinstance(seg, list):
        raise ParseError(f"annotation {ann_id}: segmentation must be a list of rings")
    rings = []
    for flat in seg:
        if not isinstance(flat, list) or len(flat) < 6 or len(flat) % 2:
            raise ParseError(f"annotation {ann_id}: ring needs an even list of >= 6 coordinates")
        pts = [Point2(float(flat[i]), float(flat[i + 1])) for i in range(0, len(flat), 2)]
        rings.append(Ring(pts))
    return tuple(rings)


def _stroke_to_json(stroke: Stroke) -> dict:
    return {
        "points": [[p.x, p.y] for p in stroke.points],
        "start_time": stroke.start_time,
        "duration": stroke.duration,
    }


def _stroke_from_json(obj: Any, ann_id: Any) -> Stroke:
    try:
        points = [Point2(float(x), float(y)) for x, y in obj["points"]]
        return Stroke(points, float(obj.get("start_time", 0.0)), float(obj.get("duration", 0.0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"annotation {ann_id}: malformed stroke ({exc})") from exc


def split_to_json(split: DatasetSplit) -> dict:
    images = [
        {**im.extra, "id": im.id, "file_name": im.file_name, "width": im.width, "height": im.height}
        for im in split.images
    ]
    categories = [{**c.extra, "id": c.id, "name": c.name} for c in split.categories]
    annotations = []
    for a in split.annotations:
        annotations.append(
            {
                **a.extra,
                "id": a.id,
                "image_id": a.image_id,
                "category_id": a.category_id,
                "bbox": list(a.bbox),
                "segmentation": _rings_to_segmentation(a.rings),
                "strokes": [_stroke_to_json(s) for s in a.strokes],
                "interaction_time": a.interaction_time,
                "sketch_time": a.sketch_time,
            }
        )
    return {
        **split.extra,
        "split": split.name,
        "images": images,
        "annotations": annotations,
        "categories": categories,
    }


def _require(obj: Mapping, key: str, where: str):
    if key not in obj:
        raise ParseError(f"{where}: missing required field {key!r}")
    return obj[key]


def split_from_json(doc: Any) -> DatasetSplit:
    if not isinstance(doc, dict):
        raise ParseError("top-level document must be a JSON object")
    for key in ("images", "annotations", "categories"):
        _require(doc, key, "split")

    images = []
    for obj in doc["images"]:
        images.append(
            ImageInfo(
                id=int(_require(obj, "id", "image")),
                file_name=str(_require(obj, "file_name", "image")),
                width=int(_require(obj, "width", "image")),
                height=int(_require(obj, "height", "image")),
                extra={k: v for k, v in obj.items() if k not in _IMAGE_FIELDS},
            )
        )
    categories = [
        CategoryInfo(
            id=int(_require(obj, "id", "category")),
            name=str(_require(obj, "name", "category")),
            extra={k: v for k, v in obj.items() if k not in _CATEGORY_FIELDS},
        )
        for obj in doc["categories"]
    ]
    annotations = []
    for obj in doc["annotations"]:
        ann_id = _require(obj, "id", "annotation")
        bbox = _require(obj, "bbox", f"annotation {ann_id}")
        if not isinstance(bbox, list) or len(bbox) != 4:
            raise ParseError(f"annotation {ann_id}: bbox must be [x, y, w, h]")
        annotations.append(
            AnnotationRecord(
                id=int(ann_id),
                image_id=int(_require(obj, "image_id", f"annotation {ann_id}")),
                category_id=int(_require(obj, "category_id", f"annotation {ann_id}")),
                bbox=tuple(float(v) for v in bbox),
                rings=_segmentation_to_rings(obj.get("segmentation", []), ann_id),
                strokes=tuple(_stroke_from_json(s, ann_id) for s in obj.get("strokes", [])),
                interaction_time=float(obj.get("interaction_time", 0.0)),
                sketch_time=float(obj.get("sketch_time", 0.0)),
                extra={k: v for k, v in obj.items() if k not in _ANNOTATION_FIELDS},
            )
        )
    known_top = {"split", "images", "annotations", "categories"}
    return DatasetSplit(
        name=str(doc.get("split", "train")),
        images=tuple(images),
        annotations=tuple(annotations),
        categories=tuple(categories),
        extra={k: v for k, v in doc.items() if k not in known_top},
    )


def load_split(path) -> DatasetSplit:
    """Parse and fully validate a split file.

    Raises ParseError with the byte offset for malformed JSON and
    ReferentialIntegrityError for dangling ids.
    """
    with open(path, "rb") as fh:
        text = fh.read().decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at byte offset {exc.pos}: {exc.msg}", offset=exc.pos) from exc
    try:
        return split_from_json(doc)
    except (InvalidArgumentError, ParseError, ReferentialIntegrityError):
        raise
    except Exception as exc:  # malformed values of the right JSON shape
        raise ParseError(f"{path}: {exc}") from exc


def canonical_json(doc: Any) -> str:
    """Deterministic JSON text: sorted keys, floats fixed to 6 decimals."""
    out = io.StringIO()
    _dump(doc, out)
    out.write("\n")
    return out.getvalue()


def _dump(obj: Any, out: io.StringIO) -> None:
    if obj is None or obj is True or obj is False:
        out.write(json.dumps(obj))
    elif isinstance(obj, bool):  # pragma: no cover - caught above
        out.write(json.dumps(obj))
    elif isinstance(obj, int):
        out.write(str(obj))
    elif isinstance(obj, float):
        if not math.isfinite(obj):
            raise InvalidArgumentError(f"cannot serialize non-finite float {obj}")
        out.write(f"{obj:.6f}")
    elif isinstance(obj, str):
        out.write(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, (list, tuple)):
        out.write("[")
        for i, item in enumerate(obj):
            if i:
                out.write(",")
            _dump(item, out)
        out.write("]")
    elif isinstance(obj, Mapping):
        out.write("{")
        for i, key in enumerate(sorted(obj)):
            if not isinstance(key, str):
                raise InvalidArgumentError(f"JSON object keys must be strings, got {key!r}")
            if i:
                out.write(",")
            out.write(json.dumps(key, ensure_ascii=False))
            out.write(":")
            _dump(obj[key], out)
        out.write("}")
    else:
        raise InvalidArgumentError(f"cannot serialize {type(obj).__name__} to JSON")


def save_split(split: DatasetSplit, path) -> None:
    """Write a split as canonical JSON so save -> load -> save is byte stable."""
    text = canonical_json(split_to_json(split))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# Corpus statistics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CorpusStats:
    """Per-split means of the sketch bookkeeping fields; None when the split is empty."""

    annotation_count: int
    mean_interaction_time: float | None
    mean_sketch_time: float | None
    mean_curvature_count: float | None
    mean_perimeter: float | None
    mean_coverage_percent: float | None
    mean_stroke_count: float | None

    def to_dict(self) -> dict:
        return {
            "annotation_count": self.annotation_count,
            "mean_interaction_time": self.mean_interaction_time,
            "mean_sketch_time": self.mean_sketch_time,
            "mean_curvature_count": self.mean_curvature_count,
            "mean_perimeter": self.mean_perimeter,
            "mean_coverage_percent": self.mean_coverage_percent,
            "mean_stroke_count": self.mean_stroke_count,
        }


def corpus_stats(split: DatasetSplit) -> CorpusStats:
    anns = split.annotations
    n = len(anns)
    if n == 0:
        return CorpusStats(0, None, None, None, None, None, None)

    def mean(values):
        return sum(values) / n

    coverages = []
    for a in anns:
        p = a.object_perimeter()
        coverages.append(100.0 * sketch_length(a.strokes) / p if p > 0 else 0.0)
    return CorpusStats(
        annotation_count=n,
        mean_interaction_time=mean([a.interaction_time for a in anns]),
        mean_sketch_time=mean([a.sketch_time for a in anns]),
        mean_curvature_count=mean([geometry.curvature_count(a.rings) for a in anns]),
        mean_perimeter=mean([a.object_perimeter() for a in anns]),
        mean_coverage_percent=mean(coverages),
        mean_stroke_count=mean([len(a.strokes) for a in anns]),
    )
