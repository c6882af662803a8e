import { describe, expect, it } from "vitest";

import {
  DEFAULT_TEMPLATE_X,
  DEFAULT_TEMPLATE_Y,
  MASK,
  fillClassTemplate,
  fillDocumentTemplate,
  makePromptSpec,
} from "../src/template.js";

describe("prompt spec validation", () => {
  it("accepts the default templates", () => {
    const spec = makePromptSpec("sentiment", ["negative", "positive"]);
    expect(spec.templateX).toBe(DEFAULT_TEMPLATE_X);
    expect(spec.templateY).toBe(DEFAULT_TEMPLATE_Y);
  });

  it("requires exactly two masks in the document template", () => {
    expect(() =>
      makePromptSpec("topic", ["a", "b"], `"{text}" means ${MASK} about {concept}.`),
    ).toThrow(/two/);
    expect(() =>
      makePromptSpec(
        "topic",
        ["a", "b"],
        `"{text}" ${MASK} {concept} ${MASK} and ${MASK}.`,
      ),
    ).toThrow(/two/);
  });

  it("requires document and concept slots", () => {
    expect(() =>
      makePromptSpec("topic", ["a", "b"], `${MASK} and ${MASK} but no slots.`),
    ).toThrow(/\{text\}/);
  });

  it("requires exactly one mask and a class slot in the class template", () => {
    expect(() =>
      makePromptSpec("topic", ["a", "b"], undefined, `"{class}" has no mask.`),
    ).toThrow(/one/);
    expect(() =>
      makePromptSpec("topic", ["a", "b"], undefined, `${MASK} without a class slot.`),
    ).toThrow(/\{class\}/);
  });

  it("rejects duplicate or missing class names", () => {
    expect(() => makePromptSpec("topic", ["a", "a"])).toThrow(/distinct/);
    expect(() => makePromptSpec("topic", ["only"])).toThrow(/2 class/);
  });

  it("rejects an empty concept", () => {
    expect(() => makePromptSpec("  ", ["a", "b"])).toThrow(/concept/);
  });
});

describe("template filling", () => {
  const spec = makePromptSpec("sentiment", ["negative", "positive"]);

  it("substitutes document text and concept", () => {
    const prompt = fillDocumentTemplate(spec, "great movie");
    expect(prompt).toBe(
      `This sentence: "great movie" means ${MASK}. Its sentiment is ${MASK}.`,
    );
  });

  it("substitutes the class name", () => {
    expect(fillClassTemplate(spec, "positive")).toBe(
      `This sentiment: "positive" means ${MASK}.`,
    );
  });

  it("empty document slot yields the denoising prompt", () => {
    expect(fillDocumentTemplate(spec, "")).toBe(
      `This sentence: "" means ${MASK}. Its sentiment is ${MASK}.`,
    );
  });
});
