/**
 * Writer (and test-support reader) for the embedding bundle container.
 *
 * Layout, little-endian throughout: magic "DEUCEBND", one version byte,
 * a uint64 manifest length, the UTF-8 JSON manifest (counts, dim, class
 * names, doc ids, optional gold labels, renormalization flag), then three
 * row-major float32 matrices: textual (N x dim), predictive (N x dim),
 * class (C x dim). The selection pipeline validates all of it on load;
 * rows are written unit-normalized so validation passes bit-for-bit.
 */

import { writeFileSync, readFileSync } from "node:fs";

export const MAGIC = "DEUCEBND";
export const FORMAT_VERSION = 1;

export interface Bundle {
  textual: Float64Array[];
  predictive: Float64Array[];
  classEmbeds: Float64Array[];
  classNames: string[];
  docIds: string[];
  goldLabels: number[] | null;
  renormalized: boolean;
}

function matrixBytes(rows: Float64Array[], dim: number, name: string): Buffer {
  const buf = Buffer.alloc(rows.length * dim * 4);
  rows.forEach((row, r) => {
    if (row.length !== dim) {
      throw new Error(`${name} row ${r} has width ${row.length}, expected ${dim}`);
    }
    for (let i = 0; i < dim; i++) {
      if (!Number.isFinite(row[i])) {
        throw new Error(`non-finite value in ${name} row ${r}`);
      }
      buf.writeFloatLE(Math.fround(row[i]), (r * dim + i) * 4);
    }
  });
  return buf;
}

export function writeBundle(bundle: Bundle, path: string): void {
  const n = bundle.textual.length;
  const c = bundle.classEmbeds.length;
  if (n === 0 || c === 0) {
    throw new Error("bundle must contain at least one document and one class");
  }
  const dim = bundle.textual[0].length;
  if (bundle.predictive.length !== n) {
    throw new Error(`${bundle.predictive.length} predictive rows for ${n} documents`);
  }
  if (bundle.docIds.length !== n || bundle.classNames.length !== c) {
    throw new Error("doc id / class name counts do not match the matrices");
  }
  if (bundle.goldLabels !== null && bundle.goldLabels.length !== n) {
    throw new Error("gold label count does not match the documents");
  }

  const manifest = Buffer.from(
    JSON.stringify({
      n_docs: n,
      n_classes: c,
      dim,
      class_names: bundle.classNames,
      doc_ids: bundle.docIds,
      gold_labels: bundle.goldLabels,
      renormalized: bundle.renormalized,
    }),
    "utf-8",
  );
  const header = Buffer.alloc(17);
  header.write(MAGIC, 0, "ascii");
  header.writeUInt8(FORMAT_VERSION, 8);
  header.writeBigUInt64LE(BigInt(manifest.length), 9);

  writeFileSync(
    path,
    Buffer.concat([
      header,
      manifest,
      matrixBytes(bundle.textual, dim, "textual"),
      matrixBytes(bundle.predictive, dim, "predictive"),
      matrixBytes(bundle.classEmbeds, dim, "class"),
    ]),
  );
}

export function readBundle(path: string): Bundle {
  const raw = readFileSync(path);
  if (raw.length < 17 || raw.toString("ascii", 0, 8) !== MAGIC) {
    throw new Error("not a bundle file");
  }
  if (raw.readUInt8(8) !== FORMAT_VERSION) {
    throw new Error(`unsupported bundle version ${raw.readUInt8(8)}`);
  }
  const manifestLen = Number(raw.readBigUInt64LE(9));
  const manifest = JSON.parse(raw.toString("utf-8", 17, 17 + manifestLen));
  const { n_docs: n, n_classes: c, dim } = manifest;

  let offset = 17 + manifestLen;
  const readMatrix = (rows: number): Float64Array[] => {
    const out: Float64Array[] = [];
    for (let r = 0; r < rows; r++) {
      const row = new Float64Array(dim);
      for (let i = 0; i < dim; i++) {
        row[i] = raw.readFloatLE(offset);
        offset += 4;
      }
      out.push(row);
    }
    return out;
  };
  const textual = readMatrix(n);
  const predictive = readMatrix(n);
  const classEmbeds = readMatrix(c);
  if (offset !== raw.length) {
    throw new Error(`trailing bytes: read ${offset} of ${raw.length}`);
  }
  return {
    textual,
    predictive,
    classEmbeds,
    classNames: manifest.class_names,
    docIds: manifest.doc_ids,
    goldLabels: manifest.gold_labels,
    renormalized: manifest.renormalized,
  };
}
