export { MlmBackend, l2normalize, isZeroVector } from "./backend.js";
export { Bundle, readBundle, writeBundle, MAGIC, FORMAT_VERSION } from "./bundle.js";
export {
  CorpusDoc,
  ExtractOptions,
  ExtractResult,
  denoiseState,
  extract,
  parseCorpus,
  truncateToBudget,
} from "./extract.js";
export { HashBackend } from "./hash_backend.js";
export {
  DEFAULT_TEMPLATE_X,
  DEFAULT_TEMPLATE_Y,
  MASK,
  PromptSpec,
  fillClassTemplate,
  fillDocumentTemplate,
  makePromptSpec,
  validatePromptSpec,
} from "./template.js";
export { DEFAULT_MODEL_ID, loadTransformersBackend } from "./transformers_backend.js";
