/** Pointer capture: turns a pointer-down / move / up sequence into one stroke. */

import type { UiStroke, XY } from "./types.js";

export interface RecorderOptions {
  /**
   * Minimum spacing in pixels between consecutive recorded points.
   * Pointer-move events closer than this to the last kept point are dropped
   * to bound stroke size.
   */
  minSpacing?: number;
  /** Keep every pointer sample regardless of spacing. */
  rawSampling?: boolean;
  /** Clock in milliseconds; injectable for tests. */
  now?: () => number;
  /**
   * Session epoch in clock milliseconds; stroke start_time is measured from
   * here. Defaults to the time of the first begin().
   */
  epoch?: number;
}

/**
 * Records one stroke at a time. begin() on pointer-down, move() per
 * pointer-move, end() on pointer-up; end() returns the finished stroke.
 */
export class StrokeRecorder {
  private readonly minSpacing: number;
  private readonly rawSampling: boolean;
  private readonly now: () => number;
  private epoch: number | null;

  private points: XY[] = [];
  private downAt = 0;
  private active = false;

  constructor(options: RecorderOptions = {}) {
    this.minSpacing = options.minSpacing ?? 1;
    this.rawSampling = options.rawSampling ?? false;
    this.now = options.now ?? (() => performance.now());
    this.epoch = options.epoch ?? null;
  }

  get isActive(): boolean {
    return this.active;
  }

  /** The stroke drawn so far, for live rendering. */
  get currentPoints(): readonly XY[] {
    return this.points;
  }

  begin(x: number, y: number): void {
    this.downAt = this.now();
    if (this.epoch === null) this.epoch = this.downAt;
    this.points = [[x, y]];
    this.active = true;
  }

  move(x: number, y: number): void {
    if (!this.active) return;
    this.push(x, y, this.rawSampling);
  }

  end(x: number, y: number): UiStroke | null {
    if (!this.active) return null;
    // Always keep the pointer-up position: it is the drawn endpoint even
    // when it lands inside the decimation radius of the previous point.
    this.push(x, y, true);
    const upAt = this.now();
    const stroke: UiStroke = {
      points: this.points,
      start_time: (this.downAt - (this.epoch ?? this.downAt)) / 1000,
      duration: (upAt - this.downAt) / 1000,
    };
    this.points = [];
    this.active = false;
    return stroke;
  }

  cancel(): void {
    this.points = [];
    this.active = false;
  }

  private push(x: number, y: number, force: boolean): void {
    const last = this.points[this.points.length - 1];
    if (last !== undefined) {
      if (last[0] === x && last[1] === y) return; // exact duplicate
      if (!force && Math.hypot(x - last[0], y - last[1]) < this.minSpacing) return;
    }
    this.points.push([x, y]);
  }
}

/** Total polyline length of a stroke in pixels. */
export function strokeLength(points: readonly XY[]): number {
  let total = 0;
  for (let i = 1; i < points.length; i++) {
    const a = points[i - 1]!;
    const b = points[i]!;
    total += Math.hypot(b[0] - a[0], b[1] - a[1]);
  }
  return total;
}
