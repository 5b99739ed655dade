// Minimal binary PGM (P5) decoder for the masks the service returns.

export interface Pgm {
  width: number;
  height: number;
  /** one byte per pixel, 0 or 1 (values > 127 import as 1) */
  pixels: Uint8Array;
}

const WHITESPACE = new Set([0x20, 0x09, 0x0d, 0x0a]);

export function decodePgm(bytes: Uint8Array): Pgm {
  const tokens: string[] = [];
  let i = 0;
  while (tokens.length < 4 && i < bytes.length) {
    const b = bytes[i];
    if (WHITESPACE.has(b)) {
      i += 1;
    } else if (b === 0x23) {
      // '#' comment runs to end of line
      while (i < bytes.length && bytes[i] !== 0x0a) i += 1;
    } else {
      let j = i;
      while (j < bytes.length && !WHITESPACE.has(bytes[j]) && bytes[j] !== 0x23) {
        j += 1;
      }
      tokens.push(String.fromCharCode(...bytes.subarray(i, j)));
      i = j;
    }
  }
  if (tokens.length < 4) throw new Error("incomplete PGM header");
  if (tokens[0] !== "P5") throw new Error(`not a binary PGM: ${tokens[0]}`);
  const width = Number(tokens[1]);
  const height = Number(tokens[2]);
  const maxval = Number(tokens[3]);
  if (!Number.isInteger(width) || !Number.isInteger(height) || width < 1 || height < 1) {
    throw new Error(`bad PGM dimensions ${tokens[1]} x ${tokens[2]}`);
  }
  if (maxval !== 255) throw new Error(`unsupported maxval ${maxval}`);
  i += 1; // single whitespace byte before the payload
  const payload = bytes.subarray(i, i + width * height);
  if (payload.length < width * height) {
    throw new Error(`PGM payload is ${payload.length} bytes, expected ${width * height}`);
  }
  const pixels = new Uint8Array(width * height);
  for (let p = 0; p < pixels.length; p++) {
    pixels[p] = payload[p] > 127 ? 1 : 0;
  }
  return { width, height, pixels };
}
