// DOM wiring for the interactive loop: upload, scribble, pick a method,
// drag the threshold. All numbers on screen come from service responses.

import { ApiClient, ApiError, MethodName, SessionMeta } from "./api.js";
import { drawCurve, sliderToThreshold, thresholdToSlider } from "./curve.js";
import { LatestWins } from "./inflight.js";
import { buildOverlay } from "./overlay.js";
import { decodePgm, Pgm } from "./pgm.js";
import { ScribbleBuffer, strokeSegment } from "./scribble.js";
import type { SegmentationResult } from "./api.js";

const api = new ApiClient("");
const sliderGate = new LatestWins<SegmentationResult>();

interface UiState {
  session: SessionMeta | null;
  gt: Pgm | null;
  scribbles: ScribbleBuffer | null;
  scribblesApplied: boolean;
  mapReady: Set<MethodName>;
  lastStroke: [number, number] | null;
  drawing: boolean;
}

const state: UiState = {
  session: null,
  gt: null,
  scribbles: null,
  scribblesApplied: false,
  mapReady: new Set(),
  lastStroke: null,
  drawing: false,
};

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const stackInput = el<HTMLInputElement>("stack-file");
const gtInput = el<HTMLInputElement>("gt-file");
const preview = el<HTMLImageElement>("preview");
const scribbleCanvas = el<HTMLCanvasElement>("scribble-layer");
const overlayCanvas = el<HTMLCanvasElement>("overlay-layer");
const brushInput = el<HTMLInputElement>("brush-radius");
const applyButton = el<HTMLButtonElement>("apply-scribbles");
const clearButton = el<HTMLButtonElement>("clear-scribbles");
const methodSelect = el<HTMLSelectElement>("method");
const slider = el<HTMLInputElement>("threshold");
const thresholdLabel = el<HTMLSpanElement>("threshold-value");
const diceLabel = el<HTMLSpanElement>("dice-value");
const banner = el<HTMLDivElement>("banner");
const curvePanel = el<HTMLDivElement>("curve-panel");
const curveCanvas = el<HTMLCanvasElement>("curve-canvas");
const jumpButton = el<HTMLButtonElement>("jump-best");
const statsLabel = el<HTMLSpanElement>("compute-stats");

function showBanner(text: string): void {
  banner.textContent = text;
  banner.hidden = false;
}

function clearBanner(): void {
  banner.hidden = true;
}

function currentMethod(): MethodName {
  return methodSelect.value as MethodName;
}

function setApplyEnabled(): void {
  applyButton.disabled = !state.scribbles || state.scribbles.count === 0;
}

// ---------------------------------------------------------------------------
// upload
// ---------------------------------------------------------------------------

stackInput.addEventListener("change", async () => {
  const file = stackInput.files?.[0];
  if (!file) return;
  clearBanner();
  try {
    const bytes = new Uint8Array(await file.arrayBuffer());
    const meta = await api.createSession(bytes);
    state.session = meta;
    state.gt = null;
    state.mapReady.clear();
    state.scribbles = new ScribbleBuffer(meta.width, meta.height);
    state.scribblesApplied = false;
    for (const canvas of [scribbleCanvas, overlayCanvas]) {
      canvas.width = meta.width;
      canvas.height = meta.height;
    }
    preview.src = api.previewUrl(meta.id) + `?nonce=${Date.now()}`;
    curvePanel.hidden = true;
    diceLabel.textContent = "-";
    setApplyEnabled();
  } catch (err) {
    showBanner(`upload failed: ${(err as Error).message}`);
  }
});

gtInput.addEventListener("change", async () => {
  const file = gtInput.files?.[0];
  if (!file || !state.session) return;
  try {
    const bytes = new Uint8Array(await file.arrayBuffer());
    await api.uploadGroundTruth(state.session.id, bytes);
    state.gt = decodePgm(bytes);
    curvePanel.hidden = false;
    await refreshSegmentation();
    await refreshCurve();
  } catch (err) {
    showBanner(`ground truth rejected: ${(err as Error).message}`);
  }
});

// ---------------------------------------------------------------------------
// scribble drawing
// ---------------------------------------------------------------------------

function canvasPixel(event: PointerEvent): [number, number] {
  const rect = scribbleCanvas.getBoundingClientRect();
  const x = ((event.clientX - rect.left) / rect.width) * scribbleCanvas.width;
  const y = ((event.clientY - rect.top) / rect.height) * scribbleCanvas.height;
  return [x, y];
}

function paintScribblePixels(pixels: Array<[number, number]>): void {
  const ctx = scribbleCanvas.getContext("2d")!;
  ctx.fillStyle = "rgba(255, 64, 64, 0.9)";
  for (const [x, y] of pixels) ctx.fillRect(x, y, 1, 1);
}

scribbleCanvas.addEventListener("pointerdown", (event) => {
  if (!state.scribbles) return;
  state.drawing = true;
  scribbleCanvas.setPointerCapture(event.pointerId);
  const [x, y] = canvasPixel(event);
  const radius = Number(brushInput.value) || 1;
  const pixels = strokeSegment(x, y, x, y, radius,
                               state.scribbles.width, state.scribbles.height);
  state.scribbles.add(pixels);
  paintScribblePixels(pixels);
  state.lastStroke = [x, y];
  setApplyEnabled();
});

scribbleCanvas.addEventListener("pointermove", (event) => {
  if (!state.drawing || !state.scribbles || !state.lastStroke) return;
  const [x, y] = canvasPixel(event);
  const radius = Number(brushInput.value) || 1;
  const pixels = strokeSegment(state.lastStroke[0], state.lastStroke[1], x, y,
                               radius, state.scribbles.width,
                               state.scribbles.height);
  state.scribbles.add(pixels);
  paintScribblePixels(pixels);
  state.lastStroke = [x, y];
  setApplyEnabled();
});

for (const type of ["pointerup", "pointercancel"] as const) {
  scribbleCanvas.addEventListener(type, () => {
    state.drawing = false;
    state.lastStroke = null;
  });
}

clearButton.addEventListener("click", () => {
  state.scribbles?.clear();
  scribbleCanvas.getContext("2d")!
    .clearRect(0, 0, scribbleCanvas.width, scribbleCanvas.height);
  setApplyEnabled();
});

applyButton.addEventListener("click", async () => {
  if (!state.session || !state.scribbles || state.scribbles.count === 0) return;
  clearBanner();
  try {
    await api.putScribbles(state.session.id, state.scribbles.toPoints());
    state.scribblesApplied = true;
    state.mapReady.clear(); // service dropped its cache; recompute lazily
    await ensureMap();
    await refreshSegmentation();
    await refreshCurve();
  } catch (err) {
    showBanner(`scribbles rejected: ${(err as Error).message}`);
  }
});

// ---------------------------------------------------------------------------
// distance map + segmentation
// ---------------------------------------------------------------------------

async function ensureMap(): Promise<void> {
  if (!state.session || !state.scribblesApplied) return;
  const method = currentMethod();
  const meta = await api.computeDistance(state.session.id, method);
  state.mapReady.add(method);
  statsLabel.textContent = meta.compute_ms > 0
    ? `computed in ${meta.compute_ms.toFixed(0)} ms`
    : "served from cache";
}

async function refreshSegmentation(): Promise<void> {
  if (!state.session || !state.mapReady.has(currentMethod())) return;
  const t = sliderToThreshold(Number(slider.value));
  thresholdLabel.textContent = t.toFixed(3);
  const sessionId = state.session.id;
  const method = currentMethod();
  try {
    const result = await sliderGate.submit(
      () => api.fetchSegmentation(sessionId, method, t));
    if (result === undefined) return; // superseded by a newer slider value
    renderOverlay(result);
  } catch (err) {
    if (err instanceof ApiError && err.status === 409) {
      showBanner("no distance map yet: draw scribbles and apply them first");
    } else {
      showBanner((err as Error).message);
    }
  }
}

function renderOverlay(result: SegmentationResult): void {
  const mask = decodePgm(result.maskBytes);
  const rgba = buildOverlay(mask, state.gt);
  const ctx = overlayCanvas.getContext("2d")!;
  ctx.putImageData(new ImageData(rgba, mask.width, mask.height), 0, 0);
  diceLabel.textContent = result.dice === null ? "-" : result.dice.toFixed(4);
  clearBanner();
}

slider.addEventListener("input", () => {
  void refreshSegmentation();
});

methodSelect.addEventListener("change", async () => {
  if (!state.session) return;
  clearBanner();
  try {
    await ensureMap();
    await refreshSegmentation();
    await refreshCurve();
  } catch (err) {
    if (err instanceof ApiError && err.status === 409) {
      showBanner("draw scribbles and apply them before computing a map");
    } else {
      showBanner((err as Error).message);
    }
  }
});

// ---------------------------------------------------------------------------
// dice curve panel
// ---------------------------------------------------------------------------

let lastCurveBest: number | null = null;

async function refreshCurve(): Promise<void> {
  if (!state.session || !state.gt || !state.mapReady.has(currentMethod())) {
    return;
  }
  try {
    const curve = await api.fetchCurve(state.session.id, currentMethod());
    lastCurveBest = curve.best_threshold;
    curvePanel.hidden = false;
    drawCurve(curveCanvas.getContext("2d")!, curve,
              sliderToThreshold(Number(slider.value)));
  } catch (err) {
    if (!(err instanceof ApiError && err.status === 409)) {
      showBanner((err as Error).message);
    }
  }
}

jumpButton.addEventListener("click", () => {
  if (lastCurveBest === null) return;
  slider.value = String(thresholdToSlider(lastCurveBest));
  void refreshSegmentation();
  void refreshCurve();
});
