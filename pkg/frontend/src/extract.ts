/**
 * Extraction pipeline: corpus in, bundle file out.
 *
 * Each document is placed in the double-mask template; the first mask's
 * hidden state becomes the textual embedding and the second the
 * predictive embedding. Each class name goes through the single-mask
 * class template. Raw mask states carry the template's own contribution
 * (template and length bias), so the same template is run once with the
 * document slot empty and its mask states are subtracted position-for-
 * position before normalization. Documents whose denoised states vanish
 * (the degenerate empty-content case) are skipped with a warning.
 */

import { MlmBackend, isZeroVector, l2normalize } from "./backend.js";
import { Bundle } from "./bundle.js";
import { PromptSpec, fillClassTemplate, fillDocumentTemplate, validatePromptSpec } from "./template.js";

export interface CorpusDoc {
  id: string;
  text: string;
}

export interface ExtractOptions {
  /** Subtract the empty-slot template states before normalizing. */
  denoise?: boolean;
  batchSize?: number;
  /** Override the backend's context limit (tokens), never above it. */
  maxLength?: number;
  warn?: (message: string) => void;
}

export interface ExtractResult {
  bundle: Bundle;
  skippedIds: string[];
  truncatedIds: string[];
}

export function denoiseState(raw: Float64Array, templateOnly: Float64Array): Float64Array {
  if (raw.length !== templateOnly.length) {
    throw new Error(`width mismatch: ${raw.length} vs ${templateOnly.length}`);
  }
  const out = new Float64Array(raw.length);
  for (let i = 0; i < raw.length; i++) out[i] = raw[i] - templateOnly[i];
  return out;
}

/** Trim document text so the filled template fits the context window. */
export function truncateToBudget(
  backend: MlmBackend,
  spec: PromptSpec,
  text: string,
  maxLength: number,
): { text: string; truncated: boolean } {
  const templateTokens = backend.tokenize(fillDocumentTemplate(spec, "")).length;
  const budget = maxLength - templateTokens;
  if (budget <= 0) {
    throw new Error(
      `template alone (${templateTokens} tokens) exceeds the ${maxLength}-token context`,
    );
  }
  const tokens = backend.tokenize(text);
  if (tokens.length <= budget) {
    return { text, truncated: false };
  }
  return { text: backend.detokenize(tokens.slice(0, budget)), truncated: true };
}

export async function extract(
  corpus: CorpusDoc[],
  spec: PromptSpec,
  backend: MlmBackend,
  options: ExtractOptions = {},
): Promise<ExtractResult> {
  validatePromptSpec(spec);
  if (corpus.length === 0) {
    throw new Error("corpus is empty");
  }
  const ids = new Set(corpus.map((d) => d.id));
  if (ids.size !== corpus.length) {
    throw new Error("document ids must be distinct");
  }
  const denoise = options.denoise ?? true;
  const warn = options.warn ?? ((m) => console.warn(m));
  const maxLength = Math.min(options.maxLength ?? backend.maxTokens, backend.maxTokens);

  // One pass over the bare templates gives the bias states to subtract.
  const docBias = await backend.maskStates(fillDocumentTemplate(spec, ""));
  if (docBias.length !== 2) {
    throw new Error(`document template produced ${docBias.length} mask states, expected 2`);
  }

  const batchSize = Math.max(1, options.batchSize ?? 16);
  const textual: Float64Array[] = [];
  const predictive: Float64Array[] = [];
  const docIds: string[] = [];
  const skippedIds: string[] = [];
  const truncatedIds: string[] = [];

  for (let at = 0; at < corpus.length; at += batchSize) {
    const batch = corpus.slice(at, at + batchSize);
    const states = await Promise.all(
      batch.map((doc) => {
        const fit = truncateToBudget(backend, spec, doc.text, maxLength);
        if (fit.truncated) {
          truncatedIds.push(doc.id);
          warn(`document ${doc.id}: text truncated to fit the context window`);
        }
        return backend.maskStates(fillDocumentTemplate(spec, fit.text));
      }),
    );
    batch.forEach((doc, b) => {
      if (states[b].length !== 2) {
        throw new Error(`document ${doc.id}: got ${states[b].length} mask states, expected 2`);
      }
      const pair = denoise
        ? states[b].map((s, k) => denoiseState(s, docBias[k]))
        : states[b];
      if (pair.some((s) => isZeroVector(s))) {
        skippedIds.push(doc.id);
        warn(`document ${doc.id}: degenerate embedding after denoising, skipped`);
        return;
      }
      textual.push(l2normalize(pair[0]));
      predictive.push(l2normalize(pair[1]));
      docIds.push(doc.id);
    });
  }
  if (docIds.length === 0) {
    throw new Error("every document was skipped as degenerate");
  }

  const classEmbeds: Float64Array[] = [];
  for (const name of spec.classNames) {
    const prompt = fillClassTemplate(spec, name);
    const states = await backend.maskStates(prompt);
    if (states.length !== 1) {
      throw new Error(`class "${name}": got ${states.length} mask states, expected 1`);
    }
    let state = states[0];
    if (denoise) {
      const bias = await backend.maskStates(fillClassTemplate(spec, ""));
      state = denoiseState(state, bias[0]);
    }
    if (isZeroVector(state)) {
      throw new Error(`class "${name}": degenerate embedding after denoising`);
    }
    classEmbeds.push(l2normalize(state));
  }

  return {
    bundle: {
      textual,
      predictive,
      classEmbeds,
      classNames: spec.classNames,
      docIds,
      goldLabels: null,
      renormalized: false,
    },
    skippedIds,
    truncatedIds,
  };
}

/** Parse a corpus file: `id<TAB>text` lines, or one document per line. */
export function parseCorpus(content: string): CorpusDoc[] {
  const lines = content.split("\n").filter((line) => line.trim().length > 0);
  return lines.map((line, i) => {
    const tab = line.indexOf("\t");
    if (tab >= 0) {
      return { id: line.slice(0, tab).trim(), text: line.slice(tab + 1).trim() };
    }
    return { id: `doc-${String(i).padStart(5, "0")}`, text: line.trim() };
  });
}
