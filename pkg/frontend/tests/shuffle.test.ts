import { describe, expect, it } from "vitest";

import { mulberry32, seededShuffle } from "../src/shuffle.js";

describe("mulberry32", () => {
  it("is deterministic per seed", () => {
    const a = mulberry32(42);
    const b = mulberry32(42);
    expect([a(), a(), a()]).toEqual([b(), b(), b()]);
  });

  it("stays in [0, 1)", () => {
    const rand = mulberry32(7);
    for (let i = 0; i < 1000; i++) {
      const x = rand();
      expect(x).toBeGreaterThanOrEqual(0);
      expect(x).toBeLessThan(1);
    }
  });
});

describe("seededShuffle", () => {
  const items = ["a", "b", "c", "d", "e", "f", "g", "h"];

  it("is reproducible from the seed", () => {
    expect(seededShuffle(items, 123)).toEqual(seededShuffle(items, 123));
  });

  it("keeps exactly the same elements", () => {
    const shuffled = seededShuffle(items, 99);
    expect([...shuffled].sort()).toEqual([...items].sort());
  });

  it("does not mutate its input", () => {
    const copy = items.slice();
    seededShuffle(items, 5);
    expect(items).toEqual(copy);
  });

  it("different seeds usually differ", () => {
    const orders = new Set(
      [1, 2, 3, 4, 5].map((seed) => seededShuffle(items, seed).join("")),
    );
    expect(orders.size).toBeGreaterThan(1);
  });
});
