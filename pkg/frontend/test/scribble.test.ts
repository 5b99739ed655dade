import assert from "node:assert/strict";
import { test } from "node:test";

import { ScribbleBuffer, stampBrush, strokeSegment } from "../src/scribble.js";

test("radius-1 click yields exactly one point", () => {
  assert.deepEqual(stampBrush(10, 10, 1, 32, 32), [[10, 10]]);
});

test("radius-2 stamp covers the 8-neighborhood", () => {
  const pixels = stampBrush(5, 5, 2, 32, 32);
  assert.equal(pixels.length, 9);
  for (const [x, y] of pixels) {
    assert.ok(Math.abs(x - 5) <= 1 && Math.abs(y - 5) <= 1);
  }
});

test("strokes outside the image are clipped silently", () => {
  assert.deepEqual(stampBrush(-10, -10, 2, 32, 32), []);
  const edge = stampBrush(0, 0, 2, 32, 32);
  for (const [x, y] of edge) {
    assert.ok(x >= 0 && y >= 0);
  }
});

test("segments leave no gaps", () => {
  const buffer = new ScribbleBuffer(64, 64);
  buffer.add(strokeSegment(2, 2, 40, 30, 1, 64, 64));
  const points = buffer.toPoints();
  // every step along the line lands within 1 px of some stamped pixel
  for (let s = 0; s <= 100; s++) {
    const x = 2 + ((40 - 2) * s) / 100;
    const y = 2 + ((30 - 2) * s) / 100;
    const near = points.some((p) => Math.hypot(p.x - x, p.y - y) <= 1.5);
    assert.ok(near, `gap near ${x},${y}`);
  }
});

test("buffer deduplicates and reports counts", () => {
  const buffer = new ScribbleBuffer(16, 16);
  buffer.add([[3, 4], [3, 4], [5, 6]]);
  assert.equal(buffer.count, 2);
  const points = buffer.toPoints();
  assert.deepEqual(points, [
    { x: 3, y: 4, label: 1 },
    { x: 5, y: 6, label: 1 },
  ]);
  buffer.clear();
  assert.equal(buffer.count, 0);
});

test("buffer drops out-of-bounds additions", () => {
  const buffer = new ScribbleBuffer(8, 8);
  buffer.add([[-1, 0], [8, 0], [0, 8], [7, 7]]);
  assert.equal(buffer.count, 1);
});
