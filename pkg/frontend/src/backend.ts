/**
 * Backend contract: a masked language model that exposes per-token final
 * hidden states for a prompt. The extractor only needs the states at the
 * mask positions, plus enough tokenizer access to truncate document text
 * without touching the template.
 */

export interface MlmBackend {
  readonly name: string;
  readonly hiddenSize: number;
  /** Hard context limit in tokens; prompts beyond it must be avoided. */
  readonly maxTokens: number;
  /** Tokenize arbitrary text (no specials); used for truncation budgets. */
  tokenize(text: string): string[];
  /** Reassemble a token slice back into text. */
  detokenize(tokens: string[]): string;
  /**
   * Run the model on a prompt and return the final hidden state at each
   * mask position, in order of appearance.
   */
  maskStates(prompt: string): Promise<Float64Array[]>;
}

export function l2normalize(vec: Float64Array): Float64Array {
  let sq = 0;
  for (const x of vec) sq += x * x;
  const norm = Math.sqrt(sq);
  if (norm === 0) {
    throw new Error("cannot normalize a zero vector");
  }
  const out = new Float64Array(vec.length);
  for (let i = 0; i < vec.length; i++) out[i] = vec[i] / norm;
  return out;
}

export function isZeroVector(vec: Float64Array, tol = 1e-12): boolean {
  for (const x of vec) {
    if (Math.abs(x) > tol) return false;
  }
  return true;
}
