// Compose the translucent result overlay: segmentation in blue, ground
// truth in white, their intersection in a lighter blue.
export const SEGMENTATION_RGBA = [40, 90, 255, 140];
export const GT_RGBA = [255, 255, 255, 110];
export const BOTH_RGBA = [150, 190, 255, 160];
export function buildOverlay(mask, gt) {
    if (gt && (gt.width !== mask.width || gt.height !== mask.height)) {
        throw new Error("ground truth dimensions do not match the mask");
    }
    const out = new Uint8ClampedArray(mask.width * mask.height * 4);
    for (let p = 0; p < mask.pixels.length; p++) {
        const seg = mask.pixels[p] === 1;
        const truth = gt !== null && gt.pixels[p] === 1;
        let rgba = null;
        if (seg && truth)
            rgba = BOTH_RGBA;
        else if (seg)
            rgba = SEGMENTATION_RGBA;
        else if (truth)
            rgba = GT_RGBA;
        if (rgba) {
            out[p * 4] = rgba[0];
            out[p * 4 + 1] = rgba[1];
            out[p * 4 + 2] = rgba[2];
            out[p * 4 + 3] = rgba[3];
        }
    }
    return out;
}
/** Pixels marked as segmentation in an overlay buffer (blue or light blue). */
export function overlaySegmentationPixels(overlay) {
    const n = overlay.length / 4;
    const out = new Uint8Array(n);
    for (let p = 0; p < n; p++) {
        const r = overlay[p * 4];
        const g = overlay[p * 4 + 1];
        const b = overlay[p * 4 + 2];
        const a = overlay[p * 4 + 3];
        const isSeg = (r === SEGMENTATION_RGBA[0] && g === SEGMENTATION_RGBA[1] &&
            b === SEGMENTATION_RGBA[2] && a === SEGMENTATION_RGBA[3]) ||
            (r === BOTH_RGBA[0] && g === BOTH_RGBA[1] &&
                b === BOTH_RGBA[2] && a === BOTH_RGBA[3]);
        out[p] = isSeg ? 1 : 0;
    }
    return out;
}
