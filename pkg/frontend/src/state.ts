/** Pure presentation logic: badges, review-mode highlights, undo planning. */

import type { AnalysisRecord, UiStroke, XY } from "./types.js";

export interface Badge {
  label: string;
  /** CSS class suffix: "minor" | "medium" | "major" | "none". */
  tone: string;
}

/** The assistance badge for an analysis record. */
export function assistanceBadge(record: AnalysisRecord | null): Badge {
  const cls = record?.assistance_class;
  if (!cls) return { label: "n/a", tone: "none" };
  const label = cls.charAt(0).toUpperCase() + cls.slice(1);
  return { label, tone: cls };
}

/** Human-readable one-liners for the analysis panel. */
export function analysisLines(record: AnalysisRecord | null): string[] {
  if (!record || record.empty) return ["no strokes yet"];
  const lines: string[] = [];
  if (record.curvature_count !== undefined) {
    lines.push(`curvature points: ${record.curvature_count} (${record.curvature_class})`);
  }
  if (record.scale_class !== undefined) lines.push(`scale: ${record.scale_class}`);
  if (record.coverage_ratio !== undefined) {
    lines.push(`boundary coverage: ${(record.coverage_ratio * 100).toFixed(1)}%`);
  }
  if (record.preview_iou !== undefined) {
    lines.push(`preview IoU: ${record.preview_iou.toFixed(3)} (closure preview, not a prediction)`);
  }
  return lines;
}

function pointToSegment(p: XY, a: XY, b: XY): number {
  const vx = b[0] - a[0];
  const vy = b[1] - a[1];
  const wx = p[0] - a[0];
  const wy = p[1] - a[1];
  const len2 = vx * vx + vy * vy;
  const t = len2 === 0 ? 0 : Math.max(0, Math.min(1, (wx * vx + wy * vy) / len2));
  return Math.hypot(p[0] - (a[0] + t * vx), p[1] - (a[1] + t * vy));
}

/** Distance from a point to the nearest drawn stroke segment. */
export function distanceToStrokes(p: XY, strokes: readonly UiStroke[]): number {
  let best = Infinity;
  for (const stroke of strokes) {
    const pts = stroke.points;
    if (pts.length === 1) {
      best = Math.min(best, Math.hypot(p[0] - pts[0]![0], p[1] - pts[0]![1]));
      continue;
    }
    for (let i = 1; i < pts.length; i++) {
      best = Math.min(best, pointToSegment(p, pts[i - 1]!, pts[i]!));
    }
  }
  return best;
}

export const DEFAULT_COVER_RADIUS = 15;

/**
 * Ground-truth ring vertices not yet covered by any stroke (no stroke passes
 * within `radius` px). Review mode highlights these as missing object parts.
 * The vertices come from the GT rings held by the UI; for hand-labeled
 * polygons these are exactly the corners an annotator is expected to hit.
 */
export function uncoveredVertices(
  gtRings: readonly XY[][],
  strokes: readonly UiStroke[],
  radius: number = DEFAULT_COVER_RADIUS,
): XY[] {
  const out: XY[] = [];
  for (const ring of gtRings) {
    for (const v of ring) {
      if (distanceToStrokes(v, strokes) > radius) out.push(v);
    }
  }
  return out;
}

/**
 * Undo plan: the service appends strokes monotonically, so undo re-creates
 * the session and replays every stroke but the last.
 */
export function strokesAfterUndo(strokes: readonly UiStroke[]): UiStroke[] {
  return strokes.slice(0, -1);
}
