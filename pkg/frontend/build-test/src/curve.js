// Slider quantization (8-bit grid matches the 256-step sweep) and the
// Dice-vs-threshold chart.
export const SLIDER_MAX = 255;
export function sliderToThreshold(value) {
    return Math.min(SLIDER_MAX, Math.max(0, value)) / SLIDER_MAX;
}
export function thresholdToSlider(t) {
    return Math.min(SLIDER_MAX, Math.max(0, Math.round(t * SLIDER_MAX)));
}
/** |quantized - t|; jumping to a swept threshold stays within one step. */
export function quantizationError(t) {
    return Math.abs(sliderToThreshold(thresholdToSlider(t)) - t);
}
export function drawCurve(ctx, curve, currentT) {
    const { width, height } = ctx.canvas;
    ctx.clearRect(0, 0, width, height);
    ctx.fillStyle = "#181c22";
    ctx.fillRect(0, 0, width, height);
    const pad = 22;
    const plotW = width - 2 * pad;
    const plotH = height - 2 * pad;
    const toX = (t) => pad + t * plotW;
    const toY = (d) => pad + (1 - d) * plotH;
    ctx.strokeStyle = "#3a4250";
    ctx.lineWidth = 1;
    ctx.strokeRect(pad, pad, plotW, plotH);
    ctx.strokeStyle = "#6ea8ff";
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    curve.thresholds.forEach((t, i) => {
        const x = toX(t);
        const y = toY(curve.dice[i]);
        if (i === 0)
            ctx.moveTo(x, y);
        else
            ctx.lineTo(x, y);
    });
    ctx.stroke();
    if (currentT !== null) {
        ctx.strokeStyle = "#888";
        ctx.setLineDash([3, 3]);
        ctx.beginPath();
        ctx.moveTo(toX(currentT), pad);
        ctx.lineTo(toX(currentT), pad + plotH);
        ctx.stroke();
        ctx.setLineDash([]);
    }
    // best point marker
    ctx.fillStyle = "#ffd35c";
    ctx.beginPath();
    ctx.arc(toX(curve.best_threshold), toY(curve.best_dice), 4, 0, 2 * Math.PI);
    ctx.fill();
    ctx.fillStyle = "#ddd";
    ctx.font = "11px sans-serif";
    ctx.fillText(`best ${curve.best_dice.toFixed(3)} @ t=${curve.best_threshold.toFixed(3)}`, pad + 4, pad + 12);
}
