import { describe, expect, it } from "vitest";

import { HashBackend } from "../src/hash_backend.js";
import { MASK } from "../src/template.js";

describe("hash backend", () => {
  const backend = new HashBackend();

  it("returns one state per mask, in order", async () => {
    const states = await backend.maskStates(`alpha ${MASK} beta ${MASK} gamma`);
    expect(states).toHaveLength(2);
    expect(states[0]).toHaveLength(backend.hiddenSize);
    // Different surroundings produce different states.
    const diff = states[0].some((x, i) => x !== states[1][i]);
    expect(diff).toBe(true);
  });

  it("is deterministic across instances", async () => {
    const other = new HashBackend();
    const a = await backend.maskStates(`the storm ${MASK} tonight`);
    const b = await other.maskStates(`the storm ${MASK} tonight`);
    expect(Array.from(a[0])).toEqual(Array.from(b[0]));
  });

  it("depends on context tokens", async () => {
    const [a] = await backend.maskStates(`rain means ${MASK}`);
    const [b] = await backend.maskStates(`goal means ${MASK}`);
    expect(Array.from(a)).not.toEqual(Array.from(b));
  });

  it("keeps mask markers through tokenization", () => {
    const tokens = backend.tokenize(`This sentence: "Hi" means ${MASK}.`);
    expect(tokens.filter((t) => t === MASK)).toHaveLength(1);
    expect(tokens).toContain("sentence");
  });

  it("rejects prompts beyond the context window", async () => {
    const long = Array(200).fill("word").join(" ");
    await expect(backend.maskStates(`${long} ${MASK}`)).rejects.toThrow(/context/);
  });

  it("closer tokens weigh more", async () => {
    // "storm" adjacent to the mask vs far from it: the state should align
    // more with the storm token vector when adjacent.
    const [near] = await backend.maskStates(`a b c d storm ${MASK}`);
    const [far] = await backend.maskStates(`storm a b c d ${MASK}`);
    const [stormOnly] = await backend.maskStates(`storm ${MASK}`);
    const dot = (x: Float64Array, y: Float64Array) =>
      x.reduce((acc, v, i) => acc + v * y[i], 0);
    expect(dot(near, stormOnly)).toBeGreaterThan(dot(far, stormOnly));
  });
});
