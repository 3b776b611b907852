import { describe, expect, it } from "vitest";

import {
  analysisLines,
  assistanceBadge,
  distanceToStrokes,
  strokesAfterUndo,
  uncoveredVertices,
} from "../src/state.js";
import type { AnalysisRecord, UiStroke, XY } from "../src/types.js";

function stroke(points: XY[]): UiStroke {
  return { points, start_time: 0, duration: 1 };
}

const SQUARE: XY[][] = [[[40, 40], [160, 40], [160, 160], [40, 160]]];

describe("assistanceBadge", () => {
  it("maps each assistance class to its badge", () => {
    for (const [cls, label] of [
      ["minor", "Minor"],
      ["medium", "Medium"],
      ["major", "Major"],
    ] as const) {
      const badge = assistanceBadge({ empty: false, assistance_class: cls });
      expect(badge.label).toBe(label);
      expect(badge.tone).toBe(cls);
    }
  });

  it("is n/a without an analysis or without a class", () => {
    expect(assistanceBadge(null)).toEqual({ label: "n/a", tone: "none" });
    expect(assistanceBadge({ empty: true })).toEqual({ label: "n/a", tone: "none" });
  });
});

describe("analysisLines", () => {
  it("summarizes a full record", () => {
    const record: AnalysisRecord = {
      empty: false,
      curvature_count: 4,
      curvature_class: "low",
      scale_class: "large",
      coverage_ratio: 0.3,
      assistance_class: "medium",
      preview_iou: 0.512,
    };
    const lines = analysisLines(record);
    expect(lines).toContain("curvature points: 4 (low)");
    expect(lines).toContain("scale: large");
    expect(lines).toContain("boundary coverage: 30.0%");
    expect(lines.some((l) => l.includes("preview IoU: 0.512"))).toBe(true);
    expect(lines.some((l) => l.includes("not a prediction"))).toBe(true);
  });

  it("handles the empty marker", () => {
    expect(analysisLines({ empty: true })).toEqual(["no strokes yet"]);
    expect(analysisLines(null)).toEqual(["no strokes yet"]);
  });
});

describe("distanceToStrokes", () => {
  it("uses segment distance, not vertex distance", () => {
    const s = stroke([[0, 0], [100, 0]]);
    expect(distanceToStrokes([50, 3], [s])).toBeCloseTo(3, 12);
  });

  it("handles single-point strokes", () => {
    expect(distanceToStrokes([3, 4], [stroke([[0, 0]])])).toBeCloseTo(5, 12);
  });

  it("is infinite with no strokes", () => {
    expect(distanceToStrokes([0, 0], [])).toBe(Infinity);
  });
});

describe("uncoveredVertices", () => {
  it("highlights the corners not yet sketched", () => {
    // Strokes near two corners of the square; the two far corners stay
    // highlighted.
    const strokes = [
      stroke([[35, 45], [45, 35]]), // grazes (40, 40)
      stroke([[155, 35], [165, 45]]), // grazes (160, 40)
    ];
    const uncovered = uncoveredVertices(SQUARE, strokes, 15);
    expect(uncovered).toEqual([[160, 160], [40, 160]]);
  });

  it("is empty after a full boundary trace", () => {
    const trace = stroke([[40, 40], [160, 40], [160, 160], [40, 160], [40, 40]]);
    expect(uncoveredVertices(SQUARE, [trace], 15)).toEqual([]);
  });

  it("marks every vertex with no strokes at all", () => {
    expect(uncoveredVertices(SQUARE, [], 15)).toHaveLength(4);
  });

  it("respects the radius", () => {
    const s = stroke([[40, 52], [40, 60]]); // 12 px below the first corner
    expect(uncoveredVertices(SQUARE, [s], 15)).toHaveLength(3);
    expect(uncoveredVertices(SQUARE, [s], 10)).toHaveLength(4);
  });
});

describe("strokesAfterUndo", () => {
  it("drops only the last stroke", () => {
    const a = stroke([[0, 0], [1, 1]]);
    const b = stroke([[2, 2], [3, 3]]);
    expect(strokesAfterUndo([a, b])).toEqual([a]);
    expect(strokesAfterUndo([a])).toEqual([]);
    expect(strokesAfterUndo([])).toEqual([]);
  });
});
