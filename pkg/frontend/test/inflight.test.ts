import assert from "node:assert/strict";
import { test } from "node:test";

import { LatestWins } from "../src/inflight.js";

function deferred<T>() {
  let resolve!: (v: T) => void;
  const promise = new Promise<T>((r) => (resolve = r));
  return { promise, resolve };
}

test("runs immediately when idle", async () => {
  const gate = new LatestWins<number>();
  assert.equal(await gate.submit(async () => 7), 7);
  assert.equal(gate.maxObservedInflight, 1);
});

test("at most one request in flight; intermediate values are dropped", async () => {
  const gate = new LatestWins<number>();
  const first = deferred<number>();
  let started = 0;

  const p1 = gate.submit(() => {
    started += 1;
    return first.promise;
  });
  const p2 = gate.submit(async () => {
    started += 1;
    return 2;
  });
  const p3 = gate.submit(async () => {
    started += 1;
    return 3;
  });

  assert.equal(gate.inflight, 1);
  assert.equal(started, 1);
  first.resolve(1);

  assert.equal(await p1, 1);
  assert.equal(await p2, undefined); // superseded before it ever ran
  assert.equal(await p3, 3);
  assert.equal(started, 2); // the middle task never started
  assert.equal(gate.maxObservedInflight, 1);
});

test("latest value wins after a burst", async () => {
  const gate = new LatestWins<number>();
  const results: Array<number | undefined> = [];
  const burst = [0.1, 0.2, 0.3, 0.4, 0.5].map((t) =>
    gate.submit(async () => {
      await new Promise((r) => setTimeout(r, 5));
      return t;
    }).then((v) => results.push(v)),
  );
  await Promise.all(burst);
  const settled = results.filter((v) => v !== undefined);
  assert.equal(settled[settled.length - 1], 0.5);
  assert.equal(gate.maxObservedInflight, 1);
});

test("a failing task does not wedge the gate", async () => {
  const gate = new LatestWins<number>();
  await assert.rejects(
    gate.submit(async () => {
      throw new Error("boom");
    }),
  );
  assert.equal(await gate.submit(async () => 9), 9);
});
