"""Segmentation metrics and study statistics.

Covers raster IoU, COCO-protocol average precision with scale, curvature, and
assistance stratification, per-scale mean IoU, balanced factorial ANOVA, and
ordinary least squares regression with t-test p-values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Any, Callable, Hashable, Mapping, Sequence

import numpy as np
import scipy.linalg
import scipy.stats

from .attention import AssistanceClass, classify_assistance, coverage_ratio
from .dataset import AnnotationRecord, DatasetSplit, ScaleClass, classify_scale
from .errors import (
    DesignError,
    InvalidArgumentError,
    ParseError,
    ReferentialIntegrityError,
    SingularDesignError,
    UndefinedIoUError,
)
from .geometry import CurvatureClass, Ring, classify_curvature, curvature_count, total_area
from .raster import polygon_mask

IOU_THRESHOLDS = tuple(round(0.5 + 0.05 * i, 2) for i in range(10))
RECALL_POINTS = np.linspace(0.0, 1.0, 101)
SIGNIFICANCE_THRESHOLD = 0.05


# ---------------------------------------------------------------------------
# IoU
# ---------------------------------------------------------------------------

MaskLike = "np.ndarray | Ring | Sequence[Ring]"


def _as_mask(value, width: int | None, height: int | None) -> np.ndarray:
    if isinstance(value, np.ndarray):
        if value.ndim != 2:
            raise InvalidArgumentError(f"mask raster must be 2-D, got shape {value.shape}")
        return value.astype(bool, copy=False)
    rings = (value,) if isinstance(value, Ring) else tuple(value)
    if width is None or height is None:
        raise InvalidArgumentError("width and height are required to rasterize ring masks")
    return polygon_mask(rings, width, height)


def mask_iou(a, b, *, width: int | None = None, height: int | None = None) -> float:
    """Intersection over union of two masks (rasters or rings) in pixel space."""
    ma = _as_mask(a, width, height)
    mb = _as_mask(b, width, height)
    if ma.shape != mb.shape:
        raise InvalidArgumentError(f"mask dimensions differ: {ma.shape} vs {mb.shape}")
    union = int(np.count_nonzero(ma | mb))
    if union == 0:
        raise UndefinedIoUError("IoU of two empty masks is undefined")
    inter = int(np.count_nonzero(ma & mb))
    return inter / union


def bbox_iou(a: Sequence[float], b: Sequence[float]) -> float:
    """IoU of two (x, y, w, h) boxes."""
    ax, ay, aw, ah = a
    bx, by, bw, bh = b
    area_a = aw * ah
    area_b = bw * bh
    if area_a <= 0 and area_b <= 0:
        raise UndefinedIoUError("IoU of two empty boxes is undefined")
    ix = max(0.0, min(ax + aw, bx + bw) - max(ax, bx))
    iy = max(0.0, min(ay + ah, by + bh) - max(ay, by))
    inter = ix * iy
    return inter / (area_a + area_b - inter)


# ---------------------------------------------------------------------------
# Detections
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Detection:
    """One predicted object: a mask (rings or raster), a score, and a box."""

    image_id: int
    category_id: int
    score: float
    rings: tuple[Ring, ...] = ()
    mask: np.ndarray | None = None
    bbox: tuple[float, float, float, float] | None = None

    def __post_init__(self):
        if not 0.0 <= self.score <= 1.0:
            raise InvalidArgumentError(f"score must be in [0, 1], got {self.score}")
        if not self.rings and self.mask is None:
            raise InvalidArgumentError("detection needs rings or a raster mask")
        if self.mask is not None and (self.mask.ndim != 2 or not self.mask.any()):
            raise InvalidArgumentError("raster mask must be 2-D and non-empty")

    def resolved_bbox(self) -> tuple[float, float, float, float]:
        if self.bbox is not None:
            return self.bbox
        if self.rings:
            xs = [v.x for r in self.rings for v in r.vertices]
            ys = [v.y for r in self.rings for v in r.vertices]
            return (min(xs), min(ys), max(xs) - min(xs), max(ys) - min(ys))
        rows = np.flatnonzero(self.mask.any(axis=1))
        cols = np.flatnonzero(self.mask.any(axis=0))
        return (
            float(cols[0]),
            float(rows[0]),
            float(cols[-1] - cols[0] + 1),
            float(rows[-1] - rows[0] + 1),
        )

    def raster(self, width: int, height: int) -> np.ndarray:
        if self.mask is not None:
            if self.mask.shape != (height, width):
                raise InvalidArgumentError(
                    f"raster mask shape {self.mask.shape} does not match image {height}x{width}"
                )
            return self.mask.astype(bool, copy=False)
        return polygon_mask(self.rings, width, height)


def load_detections(path: str | Path) -> list[Detection]:
    """Read detections from a results-style JSON array."""
    raw = Path(path).read_text(encoding="utf-8")
    try:
        entries = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", offset=exc.pos) from None
    if not isinstance(entries, list):
        raise ParseError("detections document must be a JSON array", offset=0)
    out = []
    for i, entry in enumerate(entries):
        try:
            rings = _segmentation_rings(entry.get("segmentation"))
            bbox = entry.get("bbox")
            out.append(
                Detection(
                    image_id=int(entry["image_id"]),
                    category_id=int(entry["category_id"]),
                    score=float(entry["score"]),
                    rings=rings,
                    bbox=tuple(float(v) for v in bbox) if bbox is not None else None,
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"detection entry {i} is malformed: {exc}", offset=0) from None
    return out


def _segmentation_rings(segmentation) -> tuple[Ring, ...]:
    if not segmentation:
        return ()
    rings = []
    for flat in segmentation:
        pts = [(float(flat[i]), float(flat[i + 1])) for i in range(0, len(flat), 2)]
        rings.append(Ring(pts))
    return tuple(rings)


# ---------------------------------------------------------------------------
# COCO-protocol AP
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VariantReport:
    """AP summary for one mask representation (raster or box)."""

    ap: float | None
    ap50: float | None
    by_stratum: Mapping[Hashable, float | None]

    @property
    def ap_small(self) -> float | None:
        return self.by_stratum.get(ScaleClass.SMALL)

    @property
    def ap_medium(self) -> float | None:
        return self.by_stratum.get(ScaleClass.MEDIUM)

    @property
    def ap_large(self) -> float | None:
        return self.by_stratum.get(ScaleClass.LARGE)


@dataclass(frozen=True)
class EvalReport:
    mask: VariantReport
    bbox: VariantReport

    def to_dict(self) -> dict:
        def variant(v: VariantReport) -> dict:
            def enc(x):
                return "undefined" if x is None else x

            strata = {}
            for key, value in v.by_stratum.items():
                name = key.value if hasattr(key, "value") else str(key)
                family = type(key).__name__ if hasattr(key, "value") else "custom"
                strata.setdefault(family, {})[name] = enc(value)
            return {"ap": enc(v.ap), "ap50": enc(v.ap50), "by_stratum": strata}

        return {"mask": variant(self.mask), "bbox": variant(self.bbox)}

    def format_table(self) -> str:
        def cell(x):
            return "undef" if x is None else f"{x:.3f}"

        header = f"{'':<6}{'AP':>8}{'AP50':>8}{'APS':>8}{'APM':>8}{'APL':>8}"
        lines = [header]
        for label, v in (("mask", self.mask), ("bbox", self.bbox)):
            lines.append(
                f"{label:<6}{cell(v.ap):>8}{cell(v.ap50):>8}"
                f"{cell(v.ap_small):>8}{cell(v.ap_medium):>8}{cell(v.ap_large):>8}"
            )
        for label, v in (("mask", self.mask), ("bbox", self.bbox)):
            for family, members in (
                ("curvature", CurvatureClass),
                ("assistance", AssistanceClass),
            ):
                parts = [
                    f"{m.value}={cell(v.by_stratum.get(m))}"
                    for m in members
                    if m in v.by_stratum
                ]
                if parts:
                    lines.append(f"{label} AP by {family}: " + "  ".join(parts))
        return "\n".join(lines)


def annotation_strata(ann: AnnotationRecord) -> tuple[Hashable, ...]:
    """Scale, curvature, and assistance class of a ground-truth object."""
    scale = classify_scale(total_area(ann.rings))
    curv = classify_curvature(curvature_count(ann.rings))
    if ann.strokes:
        assist = classify_assistance(coverage_ratio(ann.strokes, ann.rings))
    else:
        assist = AssistanceClass.MINOR
    return (scale, curv, assist)


@dataclass
class _CatImage:
    gts: list[AnnotationRecord]
    dets: list[Detection]
    iou: np.ndarray  # (n_det, n_gt)


def _greedy_match(iou: np.ndarray, gt_ignore: Sequence[bool], threshold: float) -> list[int]:
    """Per-image greedy matching at one threshold; returns matched GT index or -1.

    Detections are visited in descending score order (the caller's row order);
    non-ignored ground truths are preferred, and ties between equal IoUs go to
    the earlier ground truth.
    """
    order = sorted(range(len(gt_ignore)), key=lambda g: gt_ignore[g])
    thr = min(threshold, 1.0 - 1e-10)
    taken = [False] * len(gt_ignore)
    matches = []
    for d in range(iou.shape[0]):
        best_v = -1.0
        best_g = -1
        for g in order:
            if taken[g]:
                continue
            if best_g > -1 and not gt_ignore[best_g] and gt_ignore[g]:
                break
            v = iou[d, g]
            if v < thr or v <= best_v:
                continue
            best_v = v
            best_g = g
        if best_g >= 0:
            taken[best_g] = True
        matches.append(best_g)
    return matches


def _category_threshold_ap(
    cat_images: Sequence[_CatImage],
    ignore_of: Callable[[AnnotationRecord], bool],
    count_unmatched_fp: bool,
) -> list[float] | None:
    """Average precision per IoU threshold for one category, or None without GT."""
    npig = sum(1 for ci in cat_images for g in ci.gts if not ignore_of(g))
    if npig == 0:
        return None
    aps = []
    for t in IOU_THRESHOLDS:
        scores = []
        is_tp = []
        ignored = []
        for ci in cat_images:
            gt_ignore = [ignore_of(g) for g in ci.gts]
            matches = _greedy_match(ci.iou, gt_ignore, t)
            for d, m in enumerate(matches):
                scores.append(ci.dets[d].score)
                if m >= 0:
                    is_tp.append(not gt_ignore[m])
                    ignored.append(gt_ignore[m])
                else:
                    is_tp.append(False)
                    ignored.append(not count_unmatched_fp)
        if not scores:
            aps.append(0.0)
            continue
        order = np.argsort(-np.asarray(scores), kind="mergesort")
        tp = np.asarray(is_tp)[order]
        keep = ~np.asarray(ignored)[order]
        tp_cum = np.cumsum(tp[keep])
        fp_cum = np.cumsum(~tp[keep])
        if tp_cum.size == 0:
            aps.append(0.0)
            continue
        recall = tp_cum / npig
        precision = tp_cum / np.maximum(tp_cum + fp_cum, 1e-12)
        prec = precision.tolist()
        for i in range(len(prec) - 1, 0, -1):
            prec[i - 1] = max(prec[i - 1], prec[i])
        idx = np.searchsorted(recall, RECALL_POINTS, side="left")
        q = [prec[i] if i < len(prec) else 0.0 for i in idx]
        aps.append(float(np.mean(q)))
    return aps


def coco_ap(
    gts: DatasetSplit,
    detections: Sequence[Detection],
    stratifier: Callable[[AnnotationRecord], Hashable | tuple[Hashable, ...]] | None = None,
) -> EvalReport:
    """COCO-protocol AP over IoU thresholds 0.50:0.05:0.95 with stratification.

    AP uses 101-point precision interpolation and greedy score-descending
    matching. Stratified figures treat out-of-stratum ground truth as ignore
    regions; a detection inherits the stratum of the ground truth it matches
    and is ignored when unmatched. Strata with no ground truth report None.
    """
    known_images = {img.id for img in gts.images}
    known_categories = {cat.id for cat in gts.categories}
    for det in detections:
        if det.image_id not in known_images:
            raise ReferentialIntegrityError(f"detection references unknown image {det.image_id}")
        if det.category_id not in known_categories:
            raise ReferentialIntegrityError(
                f"detection references unknown category {det.category_id}"
            )

    if stratifier is None:
        strata_of = annotation_strata
        seed_keys: tuple[Hashable, ...] = tuple(ScaleClass) + tuple(CurvatureClass) + tuple(
            AssistanceClass
        )
    else:
        def strata_of(ann, _fn=stratifier):
            result = _fn(ann)
            return result if isinstance(result, tuple) else (result,)

        seed_keys = ()

    gt_strata: dict[int, tuple[Hashable, ...]] = {
        ann.id: strata_of(ann) for ann in gts.annotations
    }
    all_strata: list[Hashable] = list(seed_keys)
    for strata in gt_strata.values():
        for s in strata:
            if s not in all_strata:
                all_strata.append(s)

    categories = sorted({ann.category_id for ann in gts.annotations})
    image_ids = sorted(known_images)

    def build(variant: str) -> VariantReport:
        per_cat: dict[int, list[_CatImage]] = {c: [] for c in categories}
        for image_id in image_ids:
            info = gts.image_by_id(image_id)
            for cat in categories:
                g = [a for a in gts.annotations if a.image_id == image_id and a.category_id == cat]
                d = sorted(
                    (dt for dt in detections if dt.image_id == image_id and dt.category_id == cat),
                    key=lambda dt: -dt.score,
                )
                if not g and not d:
                    continue
                iou = np.zeros((len(d), len(g)))
                if variant == "mask":
                    gt_masks = [polygon_mask(a.rings, info.width, info.height) for a in g]
                    for di, det in enumerate(d):
                        dm = det.raster(info.width, info.height)
                        for gi, gm in enumerate(gt_masks):
                            union = int(np.count_nonzero(dm | gm))
                            if union:
                                iou[di, gi] = int(np.count_nonzero(dm & gm)) / union
                else:
                    for di, det in enumerate(d):
                        db = det.resolved_bbox()
                        for gi, a in enumerate(g):
                            iou[di, gi] = bbox_iou(db, a.bbox)
                per_cat[cat].append(_CatImage(gts=g, dets=d, iou=iou))

        overall: list[list[float]] = []
        for cat in categories:
            aps = _category_threshold_ap(per_cat[cat], lambda a: False, True)
            if aps is not None:
                overall.append(aps)
        if overall:
            arr = np.asarray(overall)
            ap = float(arr.mean())
            ap50 = float(arr[:, 0].mean())
        else:
            ap = None
            ap50 = None

        by_stratum: dict[Hashable, float | None] = {}
        for stratum in all_strata:
            cat_values = []
            for cat in categories:
                aps = _category_threshold_ap(
                    per_cat[cat],
                    lambda a, s=stratum: s not in gt_strata[a.id],
                    False,
                )
                if aps is not None:
                    cat_values.append(float(np.mean(aps)))
            by_stratum[stratum] = float(np.mean(cat_values)) if cat_values else None
        return VariantReport(ap=ap, ap50=ap50, by_stratum=by_stratum)

    return EvalReport(mask=build("mask"), bbox=build("bbox"))


def miou_by_scale(
    gts: Sequence[Sequence[Ring] | AnnotationRecord],
    masks: Sequence[Any],
    *,
    width: int | None = None,
    height: int | None = None,
) -> dict[ScaleClass, float | None]:
    """Mean IoU between each GT and its mask, grouped by the GT's scale class."""
    if len(gts) != len(masks):
        raise InvalidArgumentError(f"{len(gts)} ground truths but {len(masks)} masks")
    sums: dict[ScaleClass, list[float]] = {cls: [] for cls in ScaleClass}
    for gt, mask in zip(gts, masks):
        rings = gt.rings if isinstance(gt, AnnotationRecord) else tuple(gt)
        if isinstance(mask, np.ndarray):
            h, w = mask.shape
        else:
            if width is None or height is None:
                raise InvalidArgumentError("width and height required for ring masks")
            w, h = width, height
        value = mask_iou(rings, mask, width=w, height=h)
        sums[classify_scale(total_area(rings))].append(value)
    return {
        cls: (sum(vals) / len(vals) if vals else None) for cls, vals in sums.items()
    }


# ---------------------------------------------------------------------------
# Factorial ANOVA
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AnovaEffect:
    name: str
    ss: float
    df: int
    f: float
    df_error: int
    p: float

    @property
    def significant(self) -> bool:
        return self.p < SIGNIFICANCE_THRESHOLD


@dataclass(frozen=True)
class AnovaResult:
    effects: tuple[AnovaEffect, ...]
    error_ss: float
    error_df: int
    total_ss: float
    grand_mean: float

    def effect(self, name: str) -> AnovaEffect:
        for e in self.effects:
            if e.name == name:
                return e
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "effects": [
                {
                    "name": e.name,
                    "ss": e.ss,
                    "df": e.df,
                    "f": e.f,
                    "df_error": e.df_error,
                    "p": e.p,
                    "significant": e.significant,
                }
                for e in self.effects
            ],
            "error_ss": self.error_ss,
            "error_df": self.error_df,
            "total_ss": self.total_ss,
            "grand_mean": self.grand_mean,
        }


def factorial_anova(
    cells: Mapping[tuple, float | Sequence[float]],
    factor_names: Sequence[str] | None = None,
) -> AnovaResult:
    """Balanced fixed-effects factorial ANOVA over fully crossed cells.

    Cell keys are level tuples, one component per factor; values are a single
    response or an equal-length sequence of replicates. With one replicate the
    highest-order interaction serves as the error term. p-values come from the
    F distribution's survival function (regularized incomplete beta).
    """
    if not cells:
        raise DesignError("no cells given")
    keys = list(cells)
    n_factors = len(keys[0])
    if n_factors == 0 or any(len(k) != n_factors for k in keys):
        raise DesignError("all cell keys must be equal-length, non-empty tuples")
    if factor_names is None:
        factor_names = tuple(f"factor{i + 1}" for i in range(n_factors))
    if len(factor_names) != n_factors:
        raise DesignError(f"expected {n_factors} factor names, got {len(factor_names)}")

    levels = [sorted({k[i] for k in keys}, key=repr) for i in range(n_factors)]
    for name, lv in zip(factor_names, levels):
        if len(lv) < 2:
            raise DesignError(f"factor {name!r} has a single level: {lv[0]!r}")
    index = [{level: j for j, level in enumerate(lv)} for lv in levels]
    shape = tuple(len(lv) for lv in levels)

    first = cells[keys[0]]
    reps = len(first) if isinstance(first, Sequence) and not isinstance(first, str) else 1
    data = np.full(shape + (reps,), np.nan)
    for key, value in cells.items():
        vals = (
            list(value)
            if isinstance(value, Sequence) and not isinstance(value, str)
            else [value]
        )
        if len(vals) != reps:
            raise DesignError(f"cell {key!r} has {len(vals)} replicates, expected {reps}")
        data[tuple(index[i][key[i]] for i in range(n_factors))] = vals
    if np.isnan(data).any():
        flat = np.isnan(data).any(axis=-1)
        missing = np.argwhere(flat)[0]
        cell = tuple(levels[i][j] for i, j in enumerate(missing))
        raise DesignError(f"missing cell {cell!r}: design must be fully crossed")

    grand = float(data.mean())
    total_ss = float(((data - grand) ** 2).sum())

    means: dict[frozenset, np.ndarray] = {frozenset(): np.asarray(grand)}
    factors = tuple(range(n_factors))
    subsets = []
    for size in range(1, n_factors + 1):
        subsets.extend(frozenset(c) for c in combinations(factors, size))
    for s in subsets:
        drop = tuple(i for i in factors if i not in s) + (n_factors,)
        means[s] = data.mean(axis=drop)

    def effect_array(s: frozenset) -> np.ndarray:
        total = np.zeros(tuple(shape[i] for i in sorted(s)))
        for size in range(0, len(s) + 1):
            for t in combinations(sorted(s), size):
                tset = frozenset(t)
                arr = means[tset]
                idx = [None] * len(s)
                for pos, i in enumerate(sorted(s)):
                    if i in tset:
                        idx[pos] = slice(None)
                arr = arr[tuple(idx)] if len(s) else arr
                sign = (-1) ** (len(s) - size)
                total = total + sign * arr
        return total

    ss: dict[frozenset, float] = {}
    df: dict[frozenset, int] = {}
    for s in subsets:
        outside = 1
        for i in factors:
            if i not in s:
                outside *= shape[i]
        ss[s] = float((effect_array(s) ** 2).sum() * reps * outside)
        df[s] = int(np.prod([shape[i] - 1 for i in sorted(s)]))

    if reps > 1:
        cell_means = data.mean(axis=-1, keepdims=True)
        error_ss = float(((data - cell_means) ** 2).sum())
        error_df = int(np.prod(shape) * (reps - 1))
        tested = subsets
    else:
        top = frozenset(factors)
        if n_factors < 2:
            raise DesignError("one factor with a single replicate leaves no error term")
        error_ss = ss[top]
        error_df = df[top]
        tested = [s for s in subsets if s != top]

    if error_df <= 0:
        raise DesignError("error term has zero degrees of freedom")
    mse = error_ss / error_df

    effects = []
    for s in tested:
        name = ":".join(factor_names[i] for i in sorted(s))
        if ss[s] <= 0.0:
            f_stat, p = 0.0, 1.0
        elif mse <= 0.0:
            f_stat, p = float("inf"), 0.0
        else:
            f_stat = (ss[s] / df[s]) / mse
            p = float(scipy.stats.f.sf(f_stat, df[s], error_df))
        effects.append(
            AnovaEffect(name=name, ss=ss[s], df=df[s], f=f_stat, df_error=error_df, p=p)
        )
    return AnovaResult(
        effects=tuple(effects),
        error_ss=error_ss,
        error_df=error_df,
        total_ss=total_ss,
        grand_mean=grand,
    )


# ---------------------------------------------------------------------------
# Regression
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegressionResult:
    coefficients: tuple[float, ...]
    std_errors: tuple[float, ...]
    t_stats: tuple[float, ...]
    p_values: tuple[float, ...]
    r_squared: float
    residual_df: int
    names: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "coefficients": dict(zip(self.names, self.coefficients)),
            "std_errors": dict(zip(self.names, self.std_errors)),
            "t_stats": dict(zip(self.names, self.t_stats)),
            "p_values": dict(zip(self.names, self.p_values)),
            "r_squared": self.r_squared,
            "residual_df": self.residual_df,
        }


def ols_regression(
    y: Sequence[float],
    X: Sequence[Sequence[float]] | np.ndarray,
    predictor_names: Sequence[str] | None = None,
) -> RegressionResult:
    """Least squares fit of y on X plus an intercept, via the normal equations.

    The Gram matrix is solved with a pivoted LU factorization. Reports R**2
    and two-sided t-test p-values per coefficient (intercept first).
    """
    yv = np.asarray(y, dtype=float)
    Xv = np.asarray(X, dtype=float)
    if Xv.ndim == 1:
        Xv = Xv[:, None]
    if yv.ndim != 1 or Xv.ndim != 2 or yv.shape[0] != Xv.shape[0]:
        raise InvalidArgumentError(
            f"need y of shape (n,) and X of shape (n, p), got {yv.shape} and {Xv.shape}"
        )
    n, p = Xv.shape
    k = p + 1
    if n < k + 1:
        raise InvalidArgumentError(f"need at least {k + 1} rows for {p} predictors, got {n}")
    if predictor_names is None:
        predictor_names = tuple(f"x{i + 1}" for i in range(p))
    if len(predictor_names) != p:
        raise InvalidArgumentError(f"expected {p} predictor names, got {len(predictor_names)}")

    A = np.column_stack([np.ones(n), Xv])
    if np.linalg.matrix_rank(A) < k:
        raise SingularDesignError("design matrix is rank deficient")
    gram = A.T @ A
    beta = scipy.linalg.solve(gram, A.T @ yv)

    resid = yv - A @ beta
    sse = float(resid @ resid)
    df = n - k
    sst = float(((yv - yv.mean()) ** 2).sum())
    if sst <= 0.0:
        r_squared = 1.0 if sse <= 1e-12 else 0.0
    else:
        r_squared = max(0.0, min(1.0, 1.0 - sse / sst))

    sigma2 = sse / df
    cov = sigma2 * scipy.linalg.inv(gram)
    se = np.sqrt(np.maximum(np.diag(cov), 0.0))
    t_stats = np.empty(k)
    p_values = np.empty(k)
    for i in range(k):
        if se[i] > 0.0:
            t_stats[i] = beta[i] / se[i]
            p_values[i] = 2.0 * float(scipy.stats.t.sf(abs(t_stats[i]), df))
        elif abs(beta[i]) <= 1e-12:
            t_stats[i] = 0.0
            p_values[i] = 1.0
        else:
            t_stats[i] = float("inf") if beta[i] > 0 else float("-inf")
            p_values[i] = 0.0
    return RegressionResult(
        coefficients=tuple(float(b) for b in beta),
        std_errors=tuple(float(s) for s in se),
        t_stats=tuple(float(t) for t in t_stats),
        p_values=tuple(float(v) for v in p_values),
        r_squared=float(r_squared),
        residual_df=df,
        names=("intercept",) + tuple(predictor_names),
    )
