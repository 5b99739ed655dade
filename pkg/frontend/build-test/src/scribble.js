// Brush-stroke rasterization: pointer positions become in-bounds pixel
// coordinates. Everything outside the image is clipped silently.
/** Disc of pixels with center distance < radius, clipped to the image. */
export function stampBrush(cx, cy, radius, width, height) {
    const out = [];
    const r = Math.max(1, radius);
    const x0 = Math.ceil(cx - r);
    const x1 = Math.floor(cx + r);
    const y0 = Math.ceil(cy - r);
    const y1 = Math.floor(cy + r);
    for (let y = y0; y <= y1; y++) {
        if (y < 0 || y >= height)
            continue;
        for (let x = x0; x <= x1; x++) {
            if (x < 0 || x >= width)
                continue;
            const dx = x - cx;
            const dy = y - cy;
            if (dx * dx + dy * dy < r * r)
                out.push([x, y]);
        }
    }
    return out;
}
/** Stamp the brush along the segment so fast strokes leave no gaps. */
export function strokeSegment(x0, y0, x1, y1, radius, width, height) {
    const steps = Math.max(1, Math.ceil(Math.hypot(x1 - x0, y1 - y0)));
    const out = [];
    for (let s = 0; s <= steps; s++) {
        const t = s / steps;
        out.push(...stampBrush(x0 + (x1 - x0) * t, y0 + (y1 - y0) * t, radius, width, height));
    }
    return out;
}
/** Accumulates deduplicated foreground pixels for one scribble session. */
export class ScribbleBuffer {
    constructor(width, height) {
        this.width = width;
        this.height = height;
        this.keys = new Set();
    }
    add(pixels) {
        for (const [x, y] of pixels) {
            if (x < 0 || x >= this.width || y < 0 || y >= this.height)
                continue;
            this.keys.add(y * this.width + x);
        }
    }
    clear() {
        this.keys.clear();
    }
    get count() {
        return this.keys.size;
    }
    /** Row-major foreground points, ready to PUT to the service. */
    toPoints() {
        return [...this.keys]
            .sort((a, b) => a - b)
            .map((key) => ({
            x: key % this.width,
            y: Math.floor(key / this.width),
            label: 1,
        }));
    }
}
