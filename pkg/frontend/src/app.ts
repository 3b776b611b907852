/** Browser entry point: canvas capture wired to the annotation service. */

import { ServiceClient, StrokeOutbox, recreateSession } from "./api.js";
import { analysisLines, assistanceBadge, uncoveredVertices } from "./state.js";
import { StrokeRecorder } from "./stroke.js";
import type { AnalysisRecord, SessionConfig, UiStroke, XY } from "./types.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const canvas = el<HTMLCanvasElement>("canvas");
const ctx = canvas.getContext("2d")!;
const fileInput = el<HTMLInputElement>("image-file");
const gtInput = el<HTMLInputElement>("gt-rings");
const categoryInput = el<HTMLInputElement>("category");
const startButton = el<HTMLButtonElement>("start-session");
const undoButton = el<HTMLButtonElement>("undo");
const exportButton = el<HTMLButtonElement>("export");
const rawToggle = el<HTMLInputElement>("raw-sampling");
const reviewToggle = el<HTMLInputElement>("review-mode");
const attentionToggle = el<HTMLInputElement>("show-attention");
const badgeNode = el<HTMLSpanElement>("assistance-badge");
const analysisNode = el<HTMLUListElement>("analysis");
const bannerNode = el<HTMLDivElement>("offline-banner");
const retryButton = el<HTMLButtonElement>("retry");

const client = new ServiceClient("");

let config: SessionConfig | null = null;
let outbox: StrokeOutbox | null = null;
let strokes: UiStroke[] = [];
let gtRings: XY[][] = [];
let image: HTMLImageElement | null = null;
let attentionBitmap: ImageBitmap | null = null;
let analysis: AnalysisRecord | null = null;
let recorder = new StrokeRecorder();

function setBanner(visible: boolean): void {
  bannerNode.hidden = !visible;
}

function parseRings(text: string): XY[][] {
  if (!text.trim()) return [];
  const parsed = JSON.parse(text) as XY[][];
  if (!Array.isArray(parsed)) throw new Error("GT rings must be a JSON array of rings");
  return parsed;
}

function render(): void {
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  if (image) ctx.drawImage(image, 0, 0);
  if (attentionBitmap && attentionToggle.checked) {
    ctx.globalAlpha = 0.45;
    ctx.drawImage(attentionBitmap, 0, 0);
    ctx.globalAlpha = 1.0;
  }
  ctx.lineWidth = 2;
  ctx.strokeStyle = "#19c37d";
  for (const stroke of strokes) drawPolyline(stroke.points);
  if (recorder.isActive) drawPolyline(recorder.currentPoints);
  if (reviewToggle.checked && gtRings.length) {
    ctx.strokeStyle = "#4b8bff";
    ctx.setLineDash([6, 4]);
    for (const ring of gtRings) drawPolyline([...ring, ring[0]!]);
    ctx.setLineDash([]);
    ctx.fillStyle = "#ff4b4b";
    for (const [x, y] of uncoveredVertices(gtRings, strokes)) {
      ctx.beginPath();
      ctx.arc(x, y, 5, 0, 2 * Math.PI);
      ctx.fill();
    }
  }
}

function drawPolyline(points: readonly XY[]): void {
  if (points.length === 0) return;
  ctx.beginPath();
  ctx.moveTo(points[0]![0], points[0]![1]);
  for (const [x, y] of points.slice(1)) ctx.lineTo(x, y);
  ctx.stroke();
}

function renderPanel(): void {
  const badge = assistanceBadge(analysis);
  badgeNode.textContent = badge.label;
  badgeNode.className = `badge badge-${badge.tone}`;
  analysisNode.replaceChildren(
    ...analysisLines(analysis).map((line) => {
      const li = document.createElement("li");
      li.textContent = line;
      return li;
    }),
  );
}

async function refreshOverlays(): Promise<void> {
  if (!outbox) return;
  try {
    const [record, png] = await Promise.all([
      client.analysis(outbox.sessionId),
      client.attentionMapPng(outbox.sessionId),
    ]);
    analysis = record;
    attentionBitmap = await createImageBitmap(new Blob([png], { type: "image/png" }));
    setBanner(false);
  } catch {
    setBanner(true);
  }
  render();
  renderPanel();
}

function canvasPoint(ev: PointerEvent): XY {
  const rect = canvas.getBoundingClientRect();
  return [
    ((ev.clientX - rect.left) / rect.width) * canvas.width,
    ((ev.clientY - rect.top) / rect.height) * canvas.height,
  ];
}

canvas.addEventListener("pointerdown", (ev) => {
  if (!outbox) return;
  canvas.setPointerCapture(ev.pointerId);
  recorder.begin(...canvasPoint(ev));
});

canvas.addEventListener("pointermove", (ev) => {
  recorder.move(...canvasPoint(ev));
  if (recorder.isActive) render();
});

canvas.addEventListener("pointerup", async (ev) => {
  const stroke = recorder.end(...canvasPoint(ev));
  if (!stroke || !outbox) return;
  strokes.push(stroke);
  render();
  const delivered = await outbox.submit(stroke);
  setBanner(!delivered);
  if (delivered) await refreshOverlays();
});

retryButton.addEventListener("click", async () => {
  if (!outbox) return;
  const flushed = await outbox.retry();
  setBanner(!flushed);
  if (flushed) await refreshOverlays();
});

fileInput.addEventListener("change", () => {
  const file = fileInput.files?.[0];
  if (!file) return;
  const img = new Image();
  img.onload = () => {
    image = img;
    canvas.width = img.naturalWidth;
    canvas.height = img.naturalHeight;
    render();
  };
  img.src = URL.createObjectURL(file);
});

startButton.addEventListener("click", async () => {
  try {
    gtRings = parseRings(gtInput.value);
  } catch (err) {
    alert(`Bad GT rings: ${(err as Error).message}`);
    return;
  }
  config = {
    width: canvas.width,
    height: canvas.height,
    image_path: fileInput.files?.[0]?.name,
  };
  if (gtRings.length) config.gt_rings = gtRings;
  const sessionId = await client.createSession(config);
  outbox = new StrokeOutbox(client, sessionId);
  strokes = [];
  analysis = null;
  attentionBitmap = null;
  recorder = new StrokeRecorder({ rawSampling: rawToggle.checked });
  reviewToggle.disabled = gtRings.length === 0;
  reviewToggle.title = gtRings.length
    ? "Overlay the ground-truth outline and uncovered corners"
    : "Load GT rings to enable review mode";
  if (!gtRings.length) reviewToggle.checked = false;
  await refreshOverlays();
});

rawToggle.addEventListener("change", () => {
  recorder = new StrokeRecorder({ rawSampling: rawToggle.checked });
});

reviewToggle.addEventListener("change", render);
attentionToggle.addEventListener("change", render);

undoButton.addEventListener("click", async () => {
  if (!outbox || !config || strokes.length === 0) return;
  strokes = strokes.slice(0, -1);
  outbox = new StrokeOutbox(
    client,
    await recreateSession(client, config, strokes),
  );
  await refreshOverlays();
});

exportButton.addEventListener("click", async () => {
  if (!outbox) return;
  let text = await client.exportSplit(outbox.sessionId);
  const category = categoryInput.value.trim();
  if (category) {
    // Free-text category label; without one the service's canonical bytes
    // pass through untouched.
    const doc = JSON.parse(text) as Record<string, unknown>;
    doc["categories"] = [{ id: 1, name: category }];
    text = JSON.stringify(doc);
  }
  const blob = new Blob([text], { type: "application/json" });
  const a = document.createElement("a");
  a.href = URL.createObjectURL(blob);
  a.download = `${outbox.sessionId}.json`;
  a.click();
  URL.revokeObjectURL(a.href);
});
