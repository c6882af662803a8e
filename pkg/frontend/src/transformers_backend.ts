/**
 * Backend over a real masked language model via transformers.js.
 *
 * Requires `@huggingface/transformers` to be installed and the model
 * weights to be reachable (hub download or local cache); neither ships
 * with this package. The default model is a base-size bidirectional
 * encoder; any masked LM exposing hidden states works.
 */

import { MlmBackend } from "./backend.js";
import { MASK } from "./template.js";

export const DEFAULT_MODEL_ID = "Xenova/roberta-base";

export async function loadTransformersBackend(
  modelId: string = DEFAULT_MODEL_ID,
): Promise<MlmBackend> {
  let lib: any;
  try {
    lib = await import("@huggingface/transformers" as string);
  } catch {
    throw new Error(
      "the transformers backend needs the optional dependency " +
        "@huggingface/transformers (npm install @huggingface/transformers) " +
        "and network or cached model weights; use --backend hash for the " +
        "deterministic offline backend",
    );
  }
  const tokenizer = await lib.AutoTokenizer.from_pretrained(modelId);
  const model = await lib.AutoModel.from_pretrained(modelId);
  const maskToken: string = tokenizer.mask_token ?? "<mask>";
  const maskId: number = tokenizer.mask_token_id;
  const hiddenSize: number = model.config.hidden_size;
  const maxTokens: number = model.config.max_position_embeddings ?? 512;

  return {
    name: `transformers:${modelId}`,
    hiddenSize,
    maxTokens,
    tokenize(text: string): string[] {
      return tokenizer.tokenize(text);
    },
    detokenize(tokens: string[]): string {
      return tokenizer.decoder
        ? tokenizer.decode(tokenizer.convert_tokens_to_ids(tokens), {
            skip_special_tokens: true,
          })
        : tokens.join(" ");
    },
    async maskStates(prompt: string): Promise<Float64Array[]> {
      const text = prompt.split(MASK).join(maskToken);
      const inputs = await tokenizer(text, { truncation: false });
      const output = await model(inputs);
      const hidden = output.last_hidden_state;
      const ids: bigint[] = Array.from(inputs.input_ids.data);
      const states: Float64Array[] = [];
      for (let pos = 0; pos < ids.length; pos++) {
        if (Number(ids[pos]) !== maskId) continue;
        const row = hidden.slice([0, 1], [pos, pos + 1]).data;
        states.push(Float64Array.from(row as ArrayLike<number>));
      }
      return states;
    },
  };
}
