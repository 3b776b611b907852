/**
 * End-to-end round trip against the real annotation service: a scripted
 * pointer session traces a known square, and the service's analysis,
 * attention map, and export must agree with what was drawn.
 *
 * Requires the `psob` package (and its CLI) to be installed; the test spawns
 * `psob serve` on a private port.
 */

import { execFileSync, spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { PNG } from "pngjs";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ServiceClient, recreateSession } from "../src/api.js";
import { assistanceBadge, distanceToStrokes, uncoveredVertices } from "../src/state.js";
import { StrokeRecorder, strokeLength } from "../src/stroke.js";
import type { UiStroke, XY } from "../src/types.js";

const PORT = 8931;
const BASE = `http://127.0.0.1:${PORT}`;

const GT_RING: XY[] = [[40, 40], [160, 40], [160, 160], [40, 160]];
const PERIMETER = 480;

let server: ChildProcess;
const client = new ServiceClient(BASE);

beforeAll(async () => {
  server = spawn("psob", ["serve", "--bind", `127.0.0.1:${PORT}`], {
    stdio: ["ignore", "ignore", "pipe"],
  });
  const stderr: Buffer[] = [];
  server.stderr?.on("data", (chunk: Buffer) => stderr.push(chunk));
  const deadline = Date.now() + 20_000;
  while (Date.now() < deadline) {
    if (await client.healthz()) return;
    if (server.exitCode !== null) break;
    await new Promise((r) => setTimeout(r, 200));
  }
  throw new Error(`service did not come up: ${Buffer.concat(stderr).toString()}`);
}, 30_000);

afterAll(() => {
  server?.kill();
});

/**
 * Script a stroke along the square boundary: walk `length` px from the
 * perimeter position `from` (measured clockwise from the first corner),
 * sampling every 2 px, with pen-down timing supplied by the fake clock.
 */
function traceBoundary(
  from: number,
  length: number,
  startMs: number,
  durationMs: number,
): UiStroke {
  const corners = [...GT_RING, GT_RING[0]!];
  const pointAt = (s: number): XY => {
    let remaining = ((s % PERIMETER) + PERIMETER) % PERIMETER;
    for (let i = 0; i < 4; i++) {
      const a = corners[i]!;
      const b = corners[i + 1]!;
      const leg = Math.hypot(b[0] - a[0], b[1] - a[1]);
      if (remaining <= leg) {
        const t = remaining / leg;
        return [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
      }
      remaining -= leg;
    }
    return corners[0]!;
  };

  let t = startMs;
  const rec = new StrokeRecorder({ now: () => t, epoch: 0 });
  rec.begin(...pointAt(from));
  for (let s = 2; s < length; s += 2) rec.move(...pointAt(from + s));
  t = startMs + durationMs;
  const stroke = rec.end(...pointAt(from + length))!;
  // Corner vertices sit at multiples of 120 px and are multiples of 2, so
  // the 2 px sampling lands on them exactly and the polyline length is the
  // boundary distance walked.
  expect(strokeLength(stroke.points)).toBeCloseTo(length, 9);
  return stroke;
}

describe("scripted square trace through the live service", () => {
  // Four strokes tiling the square boundary exactly once: running coverage
  // 0.2 -> 0.25 -> 0.5 -> 1.0 to pin the badge transitions at both class
  // boundaries (0.25 and 0.50 are inclusive).
  const strokes = [
    traceBoundary(0, 96, 500, 1500),
    traceBoundary(96, 24, 3000, 800),
    traceBoundary(120, 120, 6000, 2000),
    traceBoundary(240, 240, 9000, 2500),
  ];
  const expectedBadges = ["Minor", "Medium", "Medium", "Major"];
  const expectedCoverage = [0.2, 0.25, 0.5, 1.0];
  let sessionId: string;

  it("creates a session with the ground-truth square", async () => {
    sessionId = await client.createSession({
      width: 200,
      height: 200,
      gt_rings: [GT_RING],
      image_path: "square.png",
    });
    expect(sessionId).toMatch(/^[0-9a-f]{32}$/);
    const before = await client.analysis(sessionId);
    expect(before.coverage_ratio).toBe(0);
    expect(before.curvature_count).toBe(4);
    expect(before.curvature_class).toBe("low");
    expect(assistanceBadge(before).label).toBe("Minor");
  });

  it("walks the assistance badge across the 25% and 50% thresholds", async () => {
    for (let i = 0; i < strokes.length; i++) {
      await client.addStroke(sessionId, strokes[i]!);
      const record = await client.analysis(sessionId);
      expect(record.coverage_ratio).toBeCloseTo(expectedCoverage[i]!, 6);
      expect(assistanceBadge(record).label).toBe(expectedBadges[i]!);
    }
  });

  it("reaches full-coverage analysis for the complete trace", async () => {
    const record = await client.analysis(sessionId);
    expect(record.coverage_ratio!).toBeGreaterThanOrEqual(0.98);
    expect(record.coverage_ratio!).toBeLessThanOrEqual(1.02);
    expect(record.assistance_class).toBe("major");
    expect(record.basis).toBe("ground_truth");
    expect(record.preview_iou!).toBeGreaterThan(0.9); // closure == the square
    expect(record.sketch_time).toBeCloseTo(6.8, 9);
  });

  it("rasterizes an attention map matching the drawn trace within 1 px", async () => {
    const png = PNG.sync.read(Buffer.from(await client.attentionMapPng(sessionId)));
    expect(png.width).toBe(200);
    expect(png.height).toBe(200);
    const values = new Set<number>();
    let litPixels = 0;
    for (let y = 0; y < png.height; y++) {
      for (let x = 0; x < png.width; x++) {
        const v = png.data[4 * (y * png.width + x)]!;
        values.add(v);
        if (v === 255) {
          litPixels += 1;
          expect(distanceToStrokes([x, y], strokes)).toBeLessThanOrEqual(1.0);
        }
      }
    }
    expect(values).toEqual(new Set([10, 255]));
    // Every drawn sample sits on an integer coordinate, so its own pixel
    // must be lit (their distance to the map's 255-set is 0 < 1 px).
    for (const stroke of strokes) {
      for (const [x, y] of stroke.points) {
        expect(png.data[4 * (Math.round(y) * png.width + Math.round(x))]).toBe(255);
      }
    }
    expect(litPixels).toBeGreaterThanOrEqual(PERIMETER - 4); // the square outline
  });

  it("review mode has nothing left to highlight", () => {
    expect(uncoveredVertices([GT_RING], strokes)).toEqual([]);
    expect(uncoveredVertices([GT_RING], strokes.slice(0, 2))).toHaveLength(2);
  });

  it("exports a split document the dataset library loads cleanly", async () => {
    const text = await client.exportSplit(sessionId);
    const doc = JSON.parse(text);
    expect(doc.split).toBe("train");
    expect(doc.images[0]).toMatchObject({ width: 200, height: 200, file_name: "square.png" });
    const ann = doc.annotations[0];
    expect(ann.segmentation).toEqual([[40, 40, 160, 40, 160, 160, 40, 160]]);
    expect(ann.bbox).toEqual([40, 40, 120, 120]);
    expect(ann.strokes.map((s: { duration: number }) => s.duration)).toEqual([
      1.5, 0.8, 2.0, 2.5,
    ]);
    expect(ann.sketch_time).toBeCloseTo(6.8, 9);
    expect(ann.interaction_time).toBeCloseTo(11.0, 9); // first pen-down to last pen-up

    const dir = mkdtempSync(join(tmpdir(), "psob-ui-"));
    const path = join(dir, "export.json");
    writeFileSync(path, text);
    const out = execFileSync("python3", [
      "-c",
      "import sys; from psob.dataset import load_split; s = load_split(sys.argv[1]); print(len(s.annotations))",
      path,
    ]);
    expect(out.toString().trim()).toBe("1");
  });

  it("undo replays the remaining strokes into a fresh session", async () => {
    const kept = strokes.slice(0, 3);
    const freshId = await recreateSession(
      client,
      { width: 200, height: 200, gt_rings: [GT_RING] },
      kept,
    );
    expect(freshId).not.toBe(sessionId);
    const record = await client.analysis(freshId);
    expect(record.stroke_count).toBe(3);
    expect(record.coverage_ratio).toBeCloseTo(0.5, 6);
    expect(assistanceBadge(record).label).toBe("Medium");
    // The original session is untouched.
    const original = await client.analysis(sessionId);
    expect(original.stroke_count).toBe(4);
  });
});
