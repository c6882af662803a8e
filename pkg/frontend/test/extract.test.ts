import { describe, expect, it } from "vitest";

import { HashBackend } from "../src/hash_backend.js";
import { denoiseState, extract, parseCorpus, truncateToBudget } from "../src/extract.js";
import { fillDocumentTemplate, makePromptSpec } from "../src/template.js";

const spec = makePromptSpec("topic", ["weather", "sports"]);

describe("denoiseState", () => {
  it("subtracts elementwise", () => {
    const out = denoiseState(Float64Array.from([3, 5]), Float64Array.from([1, 2]));
    expect(Array.from(out)).toEqual([2, 3]);
  });

  it("identity when the template contribution is zero", () => {
    const raw = Float64Array.from([0.5, -0.25]);
    const out = denoiseState(raw, new Float64Array(2));
    expect(Array.from(out)).toEqual(Array.from(raw));
  });

  it("rejects width mismatches", () => {
    expect(() => denoiseState(new Float64Array(3), new Float64Array(2))).toThrow(/width/);
  });
});

describe("truncation", () => {
  const backend = new HashBackend(32, 40);

  it("passes short documents through", () => {
    const { text, truncated } = truncateToBudget(backend, spec, "a short one", 40);
    expect(truncated).toBe(false);
    expect(text).toBe("a short one");
  });

  it("truncates the document, never the template", () => {
    const long = Array(100).fill("token").join(" ");
    const { text, truncated } = truncateToBudget(backend, spec, long, 40);
    expect(truncated).toBe(true);
    const prompt = fillDocumentTemplate(spec, text);
    expect(backend.tokenize(prompt).length).toBeLessThanOrEqual(40);
    // The template frame survives verbatim.
    expect(prompt.startsWith('This sentence: "')).toBe(true);
    expect(prompt.endsWith("Its topic is [MASK].")).toBe(true);
  });

  it("rejects a window too small for the template itself", () => {
    expect(() => truncateToBudget(backend, spec, "x", 5)).toThrow(/template alone/);
  });
});

describe("corpus parsing", () => {
  it("reads tab-separated ids", () => {
    const docs = parseCorpus("a1\tfirst text\na2\tsecond text\n");
    expect(docs).toEqual([
      { id: "a1", text: "first text" },
      { id: "a2", text: "second text" },
    ]);
  });

  it("numbers plain lines", () => {
    const docs = parseCorpus("first\n\nsecond\n");
    expect(docs.map((d) => d.id)).toEqual(["doc-00000", "doc-00001"]);
  });
});

describe("extract", () => {
  const backend = new HashBackend();
  const corpus = [
    { id: "w0", text: "the storm soaked the valley under heavy rain" },
    { id: "s0", text: "the team scored a late goal in the match" },
    { id: "w1", text: "sunshine and a mild temperature over the coast" },
  ];

  it("produces unit rows with matching ids", async () => {
    const { bundle, skippedIds } = await extract(corpus, spec, backend);
    expect(bundle.docIds).toEqual(["w0", "s0", "w1"]);
    expect(skippedIds).toEqual([]);
    expect(bundle.classNames).toEqual(["weather", "sports"]);
    for (const rows of [bundle.textual, bundle.predictive, bundle.classEmbeds]) {
      for (const row of rows) {
        const norm = Math.hypot(...row);
        expect(norm).toBeCloseTo(1.0, 10);
      }
    }
  });

  it("textual and predictive rows differ", async () => {
    const { bundle } = await extract(corpus, spec, backend);
    expect(Array.from(bundle.textual[0])).not.toEqual(Array.from(bundle.predictive[0]));
  });

  it("is deterministic", async () => {
    const a = await extract(corpus, spec, backend);
    const b = await extract(corpus, spec, backend);
    expect(Array.from(a.bundle.predictive[1])).toEqual(Array.from(b.bundle.predictive[1]));
  });

  it("skips documents that cancel to zero after denoising", async () => {
    const warnings: string[] = [];
    const { bundle, skippedIds } = await extract(
      [...corpus, { id: "empty", text: "" }],
      spec,
      backend,
      { warn: (m) => warnings.push(m) },
    );
    expect(skippedIds).toEqual(["empty"]);
    expect(bundle.docIds).not.toContain("empty");
    expect(warnings.some((w) => w.includes("degenerate"))).toBe(true);
  });

  it("records truncated documents and still embeds them", async () => {
    const warnings: string[] = [];
    const tiny = new HashBackend(32, 48);
    const { bundle, truncatedIds } = await extract(
      [...corpus, { id: "long", text: Array(120).fill("drizzle").join(" ") }],
      spec,
      tiny,
      { warn: (m) => warnings.push(m) },
    );
    expect(truncatedIds).toEqual(["long"]);
    expect(bundle.docIds).toContain("long");
    expect(warnings.some((w) => w.includes("truncated"))).toBe(true);
  });

  it("rejects duplicate ids and empty corpora", async () => {
    await expect(extract([], spec, backend)).rejects.toThrow(/empty/);
    await expect(
      extract([corpus[0], { ...corpus[1], id: "w0" }], spec, backend),
    ).rejects.toThrow(/distinct/);
  });

  it("identical documents get identical rows", async () => {
    const twin = [
      { id: "a", text: "the forecast warned of thunder" },
      { id: "b", text: "the forecast warned of thunder" },
    ];
    const { bundle } = await extract(twin, spec, backend);
    expect(Array.from(bundle.textual[0])).toEqual(Array.from(bundle.textual[1]));
    expect(Array.from(bundle.predictive[0])).toEqual(Array.from(bundle.predictive[1]));
  });
});
