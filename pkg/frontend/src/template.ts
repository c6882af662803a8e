/**
 * Prompt templates for extracting embeddings from a masked language model.
 *
 * The document template carries two mask slots: the first condenses the
 * sentence itself (textual embedding), the second condenses its relation
 * to the target concept (predictive embedding). The class template carries
 * a single mask for the class-name embedding.
 */

export const MASK = "[MASK]";
export const DOC_SLOT = "{text}";
export const CONCEPT_SLOT = "{concept}";
export const CLASS_SLOT = "{class}";

export interface PromptSpec {
  /** Target domain of the classes, e.g. "sentiment" or "topic". */
  concept: string;
  classNames: string[];
  /** Document template: exactly two masks, a document slot, a concept slot. */
  templateX: string;
  /** Class template: exactly one mask and a class slot. */
  templateY: string;
}

export const DEFAULT_TEMPLATE_X = `This sentence: "${DOC_SLOT}" means ${MASK}. Its ${CONCEPT_SLOT} is ${MASK}.`;
export const DEFAULT_TEMPLATE_Y = `This ${CONCEPT_SLOT}: "${CLASS_SLOT}" means ${MASK}.`;

export function makePromptSpec(
  concept: string,
  classNames: string[],
  templateX: string = DEFAULT_TEMPLATE_X,
  templateY: string = DEFAULT_TEMPLATE_Y,
): PromptSpec {
  const spec = { concept, classNames, templateX, templateY };
  validatePromptSpec(spec);
  return spec;
}

function count(haystack: string, needle: string): number {
  return haystack.split(needle).length - 1;
}

export function validatePromptSpec(spec: PromptSpec): void {
  if (!spec.concept.trim()) {
    throw new Error("concept must be a non-empty string");
  }
  if (spec.classNames.length < 2) {
    throw new Error(`need at least 2 class names, got ${spec.classNames.length}`);
  }
  if (new Set(spec.classNames).size !== spec.classNames.length) {
    throw new Error("class names must be distinct");
  }
  if (count(spec.templateX, MASK) !== 2) {
    throw new Error(`document template must contain exactly two ${MASK} slots`);
  }
  if (count(spec.templateX, DOC_SLOT) !== 1 || count(spec.templateX, CONCEPT_SLOT) !== 1) {
    throw new Error(`document template must contain ${DOC_SLOT} and ${CONCEPT_SLOT} exactly once`);
  }
  if (count(spec.templateY, MASK) !== 1) {
    throw new Error(`class template must contain exactly one ${MASK} slot`);
  }
  if (count(spec.templateY, CLASS_SLOT) !== 1) {
    throw new Error(`class template must contain ${CLASS_SLOT} exactly once`);
  }
}

/** Fill the document template; an empty text yields the denoising prompt. */
export function fillDocumentTemplate(spec: PromptSpec, text: string): string {
  return spec.templateX.replace(DOC_SLOT, text).replace(CONCEPT_SLOT, spec.concept);
}

/** Fill the class template for one class name. */
export function fillClassTemplate(spec: PromptSpec, className: string): string {
  return spec.templateY.replace(CLASS_SLOT, className).replace(CONCEPT_SLOT, spec.concept);
}
