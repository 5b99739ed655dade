import assert from "node:assert/strict";
import { test } from "node:test";

import { decodePgm } from "../src/pgm.js";

function pgmBytes(header: string, payload: number[]): Uint8Array {
  const head = new TextEncoder().encode(header);
  const out = new Uint8Array(head.length + payload.length);
  out.set(head);
  out.set(payload, head.length);
  return out;
}

test("decodes a simple mask", () => {
  const pgm = decodePgm(pgmBytes("P5\n3 2\n255\n", [0, 255, 0, 255, 0, 255]));
  assert.equal(pgm.width, 3);
  assert.equal(pgm.height, 2);
  assert.deepEqual([...pgm.pixels], [0, 1, 0, 1, 0, 1]);
});

test("applies the >127 midpoint rule", () => {
  const pgm = decodePgm(pgmBytes("P5\n2 1\n255\n", [127, 128]));
  assert.deepEqual([...pgm.pixels], [0, 1]);
});

test("skips header comments", () => {
  const pgm = decodePgm(pgmBytes("P5\n# hi\n2 1\n255\n", [255, 0]));
  assert.deepEqual([...pgm.pixels], [1, 0]);
});

test("rejects non-P5 and short payloads", () => {
  assert.throws(() => decodePgm(pgmBytes("P6\n1 1\n255\n", [0, 0, 0])));
  assert.throws(() => decodePgm(pgmBytes("P5\n2 2\n255\n", [0])));
  assert.throws(() => decodePgm(pgmBytes("P5\n1 1\n65535\n", [0, 0])));
});
