/** Shared wire and domain types for the annotation UI. */

/** One point as transmitted to the service: [x, y] in image coordinates. */
export type XY = [number, number];

/**
 * A captured pen stroke. Field names and units match the service's stroke
 * schema exactly, so a UiStroke serializes to a request body (and into an
 * exported split document) without translation.
 */
export interface UiStroke {
  /** Polyline in image coordinates, decimated at capture time. */
  points: XY[];
  /** Seconds from the session epoch to pointer-down. */
  start_time: number;
  /** Pen-down seconds (pointer-up minus pointer-down). */
  duration: number;
}

/** Body for POST /sessions. */
export interface SessionConfig {
  width: number;
  height: number;
  gt_rings?: XY[][];
  image_path?: string;
}

/** The analysis record returned by GET /sessions/{id}/analysis. */
export interface AnalysisRecord {
  empty: boolean;
  stroke_count?: number;
  sketch_length?: number;
  sketch_time?: number;
  basis?: "ground_truth" | "stroke_closure";
  curvature_count?: number;
  curvature_class?: "low" | "medium" | "high";
  scale_class?: "small" | "medium" | "large";
  coverage_ratio?: number;
  assistance_class?: "minor" | "medium" | "major";
  preview_iou?: number;
  preview_note?: string;
}
