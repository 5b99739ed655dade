// DOM wiring for the interactive loop: upload, scribble, pick a method,
// drag the threshold. All numbers on screen come from service responses.
import { ApiClient, ApiError } from "./api.js";
import { drawCurve, sliderToThreshold, thresholdToSlider } from "./curve.js";
import { LatestWins } from "./inflight.js";
import { buildOverlay } from "./overlay.js";
import { decodePgm } from "./pgm.js";
import { ScribbleBuffer, strokeSegment } from "./scribble.js";
const api = new ApiClient("");
const sliderGate = new LatestWins();
const state = {
    session: null,
    gt: null,
    scribbles: null,
    scribblesApplied: false,
    mapReady: new Set(),
    lastStroke: null,
    drawing: false,
};
function el(id) {
    const node = document.getElementById(id);
    if (!node)
        throw new Error(`missing element #${id}`);
    return node;
}
const stackInput = el("stack-file");
const gtInput = el("gt-file");
const preview = el("preview");
const scribbleCanvas = el("scribble-layer");
const overlayCanvas = el("overlay-layer");
const brushInput = el("brush-radius");
const applyButton = el("apply-scribbles");
const clearButton = el("clear-scribbles");
const methodSelect = el("method");
const slider = el("threshold");
const thresholdLabel = el("threshold-value");
const diceLabel = el("dice-value");
const banner = el("banner");
const curvePanel = el("curve-panel");
const curveCanvas = el("curve-canvas");
const jumpButton = el("jump-best");
const statsLabel = el("compute-stats");
function showBanner(text) {
    banner.textContent = text;
    banner.hidden = false;
}
function clearBanner() {
    banner.hidden = true;
}
function currentMethod() {
    return methodSelect.value;
}
function setApplyEnabled() {
    applyButton.disabled = !state.scribbles || state.scribbles.count === 0;
}
// ---------------------------------------------------------------------------
// upload
// ---------------------------------------------------------------------------
stackInput.addEventListener("change", async () => {
    const file = stackInput.files?.[0];
    if (!file)
        return;
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
    }
    catch (err) {
        showBanner(`upload failed: ${err.message}`);
    }
});
gtInput.addEventListener("change", async () => {
    const file = gtInput.files?.[0];
    if (!file || !state.session)
        return;
    try {
        const bytes = new Uint8Array(await file.arrayBuffer());
        await api.uploadGroundTruth(state.session.id, bytes);
        state.gt = decodePgm(bytes);
        curvePanel.hidden = false;
        await refreshSegmentation();
        await refreshCurve();
    }
    catch (err) {
        showBanner(`ground truth rejected: ${err.message}`);
    }
});
// ---------------------------------------------------------------------------
// scribble drawing
// ---------------------------------------------------------------------------
function canvasPixel(event) {
    const rect = scribbleCanvas.getBoundingClientRect();
    const x = ((event.clientX - rect.left) / rect.width) * scribbleCanvas.width;
    const y = ((event.clientY - rect.top) / rect.height) * scribbleCanvas.height;
    return [x, y];
}
function paintScribblePixels(pixels) {
    const ctx = scribbleCanvas.getContext("2d");
    ctx.fillStyle = "rgba(255, 64, 64, 0.9)";
    for (const [x, y] of pixels)
        ctx.fillRect(x, y, 1, 1);
}
scribbleCanvas.addEventListener("pointerdown", (event) => {
    if (!state.scribbles)
        return;
    state.drawing = true;
    scribbleCanvas.setPointerCapture(event.pointerId);
    const [x, y] = canvasPixel(event);
    const radius = Number(brushInput.value) || 1;
    const pixels = strokeSegment(x, y, x, y, radius, state.scribbles.width, state.scribbles.height);
    state.scribbles.add(pixels);
    paintScribblePixels(pixels);
    state.lastStroke = [x, y];
    setApplyEnabled();
});
scribbleCanvas.addEventListener("pointermove", (event) => {
    if (!state.drawing || !state.scribbles || !state.lastStroke)
        return;
    const [x, y] = canvasPixel(event);
    const radius = Number(brushInput.value) || 1;
    const pixels = strokeSegment(state.lastStroke[0], state.lastStroke[1], x, y, radius, state.scribbles.width, state.scribbles.height);
    state.scribbles.add(pixels);
    paintScribblePixels(pixels);
    state.lastStroke = [x, y];
    setApplyEnabled();
});
for (const type of ["pointerup", "pointercancel"]) {
    scribbleCanvas.addEventListener(type, () => {
        state.drawing = false;
        state.lastStroke = null;
    });
}
clearButton.addEventListener("click", () => {
    state.scribbles?.clear();
    scribbleCanvas.getContext("2d")
        .clearRect(0, 0, scribbleCanvas.width, scribbleCanvas.height);
    setApplyEnabled();
});
applyButton.addEventListener("click", async () => {
    if (!state.session || !state.scribbles || state.scribbles.count === 0)
        return;
    clearBanner();
    try {
        await api.putScribbles(state.session.id, state.scribbles.toPoints());
        state.scribblesApplied = true;
        state.mapReady.clear(); // service dropped its cache; recompute lazily
        await ensureMap();
        await refreshSegmentation();
        await refreshCurve();
    }
    catch (err) {
        showBanner(`scribbles rejected: ${err.message}`);
    }
});
// ---------------------------------------------------------------------------
// distance map + segmentation
// ---------------------------------------------------------------------------
async function ensureMap() {
    if (!state.session || !state.scribblesApplied)
        return;
    const method = currentMethod();
    const meta = await api.computeDistance(state.session.id, method);
    state.mapReady.add(method);
    statsLabel.textContent = meta.compute_ms > 0
        ? `computed in ${meta.compute_ms.toFixed(0)} ms`
        : "served from cache";
}
async function refreshSegmentation() {
    if (!state.session || !state.mapReady.has(currentMethod()))
        return;
    const t = sliderToThreshold(Number(slider.value));
    thresholdLabel.textContent = t.toFixed(3);
    const sessionId = state.session.id;
    const method = currentMethod();
    try {
        const result = await sliderGate.submit(() => api.fetchSegmentation(sessionId, method, t));
        if (result === undefined)
            return; // superseded by a newer slider value
        renderOverlay(result);
    }
    catch (err) {
        if (err instanceof ApiError && err.status === 409) {
            showBanner("no distance map yet: draw scribbles and apply them first");
        }
        else {
            showBanner(err.message);
        }
    }
}
function renderOverlay(result) {
    const mask = decodePgm(result.maskBytes);
    const rgba = buildOverlay(mask, state.gt);
    const ctx = overlayCanvas.getContext("2d");
    ctx.putImageData(new ImageData(rgba, mask.width, mask.height), 0, 0);
    diceLabel.textContent = result.dice === null ? "-" : result.dice.toFixed(4);
    clearBanner();
}
slider.addEventListener("input", () => {
    void refreshSegmentation();
});
methodSelect.addEventListener("change", async () => {
    if (!state.session)
        return;
    clearBanner();
    try {
        await ensureMap();
        await refreshSegmentation();
        await refreshCurve();
    }
    catch (err) {
        if (err instanceof ApiError && err.status === 409) {
            showBanner("draw scribbles and apply them before computing a map");
        }
        else {
            showBanner(err.message);
        }
    }
});
// ---------------------------------------------------------------------------
// dice curve panel
// ---------------------------------------------------------------------------
let lastCurveBest = null;
async function refreshCurve() {
    if (!state.session || !state.gt || !state.mapReady.has(currentMethod())) {
        return;
    }
    try {
        const curve = await api.fetchCurve(state.session.id, currentMethod());
        lastCurveBest = curve.best_threshold;
        curvePanel.hidden = false;
        drawCurve(curveCanvas.getContext("2d"), curve, sliderToThreshold(Number(slider.value)));
    }
    catch (err) {
        if (!(err instanceof ApiError && err.status === 409)) {
            showBanner(err.message);
        }
    }
}
jumpButton.addEventListener("click", () => {
    if (lastCurveBest === null)
        return;
    slider.value = String(thresholdToSlider(lastCurveBest));
    void refreshSegmentation();
    void refreshCurve();
});
