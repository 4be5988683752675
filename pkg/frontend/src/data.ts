/** Readers for the simulator's export formats.
 *
 * Text: tab-separated rows with `#` header lines carrying provenance and
 * a `# complex = 0|1` flag; complex columns interleave (re, im).
 * Binary: "PLTR1" magic, u32 meta length + UTF-8 meta, u32 field count,
 * u32 rows, u32 cols, f64 row axis, per-field (u16 name length, name,
 * u8 complex flag), then row-major f64 payloads (complex interleaved).
 * Tables: `# columns: ...` header plus float rows.
 */

import { readFileSync } from "node:fs";

export interface FieldData {
  axisName: string;
  axis: Float64Array;
  /** field name -> row-major [rows][cols]; complex stored as magnitude +
   * separate re/im planes */
  fields: Map<string, Matrix>;
  meta: Map<string, string>;
}

export interface Matrix {
  rows: number;
  cols: number;
  re: Float64Array;
  im: Float64Array | null;
}

export function matrixValue(m: Matrix, r: number, c: number): number {
  const v = m.re[r * m.cols + c];
  if (m.im === null) return v;
  return Math.hypot(v, m.im[r * m.cols + c]);
}

export function matrixReal(m: Matrix, r: number, c: number): number {
  return m.re[r * m.cols + c];
}

function parseMetaLine(meta: Map<string, string>, line: string): void {
  const idx = line.indexOf(" = ");
  if (idx > 0) meta.set(line.slice(0, idx), line.slice(idx + 3));
}

export function readBinary(path: string): FieldData {
  const buf = readFileSync(path);
  if (buf.toString("ascii", 0, 5) !== "PLTR1") {
    throw new Error(`${path}: not a PLTR1 container`);
  }
  let off = 5;
  const metaLen = buf.readUInt32LE(off);
  off += 4;
  const metaText = buf.toString("utf8", off, off + metaLen);
  off += metaLen;
  const meta = new Map<string, string>();
  let axisName = "axis";
  for (const line of metaText.split("\n")) {
    if (line.startsWith("axis = ")) axisName = line.slice(7);
    else parseMetaLine(meta, line);
  }
  const nFields = buf.readUInt32LE(off);
  const rows = buf.readUInt32LE(off + 4);
  const cols = buf.readUInt32LE(off + 8);
  off += 12;
  const axis = new Float64Array(rows);
  for (let i = 0; i < rows; i++) axis[i] = buf.readDoubleLE(off + 8 * i);
  off += 8 * rows;
  const headers: Array<{ name: string; complex: boolean }> = [];
  for (let i = 0; i < nFields; i++) {
    const nameLen = buf.readUInt16LE(off);
    off += 2;
    const name = buf.toString("utf8", off, off + nameLen);
    off += nameLen;
    headers.push({ name, complex: buf[off] === 1 });
    off += 1;
  }
  const fields = new Map<string, Matrix>();
  for (const { name, complex } of headers) {
    const n = rows * cols;
    const re = new Float64Array(n);
    const im = complex ? new Float64Array(n) : null;
    for (let i = 0; i < n; i++) {
      if (complex) {
        re[i] = buf.readDoubleLE(off + 16 * i);
        im![i] = buf.readDoubleLE(off + 16 * i + 8);
      } else {
        re[i] = buf.readDoubleLE(off + 8 * i);
      }
    }
    off += 8 * n * (complex ? 2 : 1);
    fields.set(name, { rows, cols, re, im });
  }
  return { axisName, axis, fields, meta };
}

export function readText(path: string): FieldData {
  const text = readFileSync(path, "utf8");
  const meta = new Map<string, string>();
  let axisName = "axis";
  let fieldName = "field";
  let complex = false;
  const rows: number[][] = [];
  for (const raw of text.split("\n")) {
    const line = raw.trim();
    if (!line) continue;
    if (line.startsWith("#")) {
      const body = line.replace(/^#\s*/, "");
      if (body.startsWith("poltrans field: ")) {
        fieldName = body.slice("poltrans field: ".length);
      } else if (body.startsWith("complex = ")) {
        complex = body.endsWith("1");
      } else if (body.startsWith("columns: ")) {
        axisName = body.slice("columns: ".length).split("\t")[0];
      } else {
        parseMetaLine(meta, body);
      }
      continue;
    }
    rows.push(line.split("\t").map(Number));
  }
  const nRows = rows.length;
  const nVals = nRows ? rows[0].length - 1 : 0;
  const cols = complex ? nVals / 2 : nVals;
  const axis = new Float64Array(nRows);
  const re = new Float64Array(nRows * cols);
  const im = complex ? new Float64Array(nRows * cols) : null;
  rows.forEach((row, r) => {
    axis[r] = row[0];
    for (let c = 0; c < cols; c++) {
      if (complex) {
        re[r * cols + c] = row[1 + 2 * c];
        im![r * cols + c] = row[2 + 2 * c];
      } else {
        re[r * cols + c] = row[1 + c];
      }
    }
  });
  const fields = new Map<string, Matrix>();
  fields.set(fieldName, { rows: nRows, cols, re, im });
  return { axisName, axis, fields, meta };
}

export function readField(path: string): FieldData {
  return path.endsWith(".plt") ? readBinary(path) : readText(path);
}

export interface Table {
  columns: Map<string, Float64Array>;
  meta: Map<string, string>;
}

export function readTable(path: string): Table {
  const text = readFileSync(path, "utf8");
  const meta = new Map<string, string>();
  let names: string[] | null = null;
  const rows: number[][] = [];
  for (const raw of text.split("\n")) {
    const line = raw.trim();
    if (!line) continue;
    if (line.startsWith("#")) {
      const body = line.replace(/^#\s*/, "");
      if (body.startsWith("columns: ")) {
        names = body.slice("columns: ".length).split(/\s+/);
      } else {
        parseMetaLine(meta, body);
      }
      continue;
    }
    rows.push(line.split("\t").map(Number));
  }
  if (!names) throw new Error(`${path}: missing '# columns:' header`);
  const columns = new Map<string, Float64Array>();
  names.forEach((name, i) => {
    columns.set(name, Float64Array.from(rows.map((r) => r[i])));
  });
  return { columns, meta };
}

/** Reconstruct site positions r_n = n dr - L/2 from the provenance echo. */
export function sitePositions(data: FieldData): Float64Array {
  const length = Number(data.meta.get("model.length"));
  const numSites = Number(data.meta.get("model.num_sites"));
  const field = data.fields.values().next().value as Matrix | undefined;
  const cols = field ? field.cols : 0;
  const out = new Float64Array(cols);
  if (Number.isFinite(length) && Number.isFinite(numSites) && numSites > 0) {
    const dr = length / numSites;
    for (let i = 0; i < cols; i++) out[i] = i * dr - length / 2;
  } else {
    for (let i = 0; i < cols; i++) out[i] = i;
  }
  return out;
}
