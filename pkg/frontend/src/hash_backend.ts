/**
 * Deterministic, model-free backend for tests and offline runs.
 *
 * Every token type gets a fixed pseudo-random unit vector derived from a
 * hash of its surface form; a mask position's hidden state is the
 * distance-damped sum of the surrounding token vectors. Crude, but it has
 * the two properties the extractor machinery needs from a real masked LM:
 * states depend on the whole context, and the template contributes a
 * common component that denoising can remove. Fully deterministic, no
 * model download.
 */

import { MlmBackend } from "./backend.js";
import { MASK } from "./template.js";

const TOKEN_RE = /\[MASK\]|[A-Za-z0-9']+|[^\sA-Za-z0-9]/g;

function fnv1a(text: string): number {
  let h = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    h ^= text.charCodeAt(i);
    h = Math.imul(h, 0x01000193);
  }
  return h >>> 0;
}

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export class HashBackend implements MlmBackend {
  readonly name = "hash";
  readonly hiddenSize: number;
  readonly maxTokens: number;
  private readonly cache = new Map<string, Float64Array>();

  constructor(hiddenSize = 64, maxTokens = 128) {
    this.hiddenSize = hiddenSize;
    this.maxTokens = maxTokens;
  }

  tokenize(text: string): string[] {
    const raw = text.match(TOKEN_RE) ?? [];
    return raw.map((t) => (t === MASK ? t : t.toLowerCase()));
  }

  detokenize(tokens: string[]): string {
    return tokens.join(" ");
  }

  private tokenVector(token: string): Float64Array {
    let vec = this.cache.get(token);
    if (vec !== undefined) return vec;
    const rng = mulberry32(fnv1a(token));
    vec = new Float64Array(this.hiddenSize);
    let sq = 0;
    for (let i = 0; i < this.hiddenSize; i++) {
      // Box-Muller; rng never returns 0 exactly by construction.
      const u = rng() || 1e-12;
      const v = rng();
      vec[i] = Math.sqrt(-2 * Math.log(u)) * Math.cos(2 * Math.PI * v);
      sq += vec[i] * vec[i];
    }
    const norm = Math.sqrt(sq);
    for (let i = 0; i < this.hiddenSize; i++) vec[i] /= norm;
    this.cache.set(token, vec);
    return vec;
  }

  async maskStates(prompt: string): Promise<Float64Array[]> {
    const tokens = this.tokenize(prompt);
    if (tokens.length > this.maxTokens) {
      throw new Error(
        `prompt of ${tokens.length} tokens exceeds the ${this.maxTokens}-token context`,
      );
    }
    const states: Float64Array[] = [];
    for (let p = 0; p < tokens.length; p++) {
      if (tokens[p] !== MASK) continue;
      const acc = new Float64Array(this.hiddenSize);
      for (let q = 0; q < tokens.length; q++) {
        if (q === p || tokens[q] === MASK) continue;
        const damp = 1 / (1 + Math.abs(p - q));
        const tv = this.tokenVector(tokens[q]);
        for (let i = 0; i < this.hiddenSize; i++) acc[i] += damp * tv[i];
      }
      states.push(acc);
    }
    return states;
  }
}
