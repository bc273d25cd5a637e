/**
 * FCIDUMP parsing: Fortran-namelist header plus whitespace-separated
 * `value i j k l` records (1-based indices).  Handles the plain restricted
 * layout, the `! MU=<float>` long-range sidecar annotation, and the
 * Molpro IUHF=1 unrestricted block layout.
 */

import { readFileSync } from "node:fs";

export interface FcidumpHeader {
  norb: number;
  nelec: number;
  ms2: number;
  iuhf: boolean;
  mu: number | null;
}

export interface RestrictedIntegrals {
  header: FcidumpHeader;
  /** chemist-ordered dense tensor, length norb^4 */
  g: Float64Array;
  h: Float64Array;
  eCore: number;
}

export interface UnrestrictedIntegrals {
  header: FcidumpHeader;
  gAA: Float64Array;
  gBB: Float64Array;
  gAB: Float64Array;
  hA: Float64Array;
  hB: Float64Array;
  eCore: number;
}

interface RawRecord {
  value: number;
  i: number;
  j: number;
  k: number;
  l: number;
}

function parseHeader(lines: string[]): { header: FcidumpHeader; firstRecord: number } {
  let mu: number | null = null;
  let idx = 0;
  while (idx < lines.length && !lines[idx].trim().toUpperCase().startsWith("&FCI")) {
    const line = lines[idx].trim();
    if (line.startsWith("!")) {
      const m = /MU\s*=\s*([0-9.EeDd+\-]+)/i.exec(line);
      if (m) mu = Number(m[1].replace(/[dD]/, "e"));
    } else if (line.length > 0) {
      throw new Error(`unexpected content before &FCI header: ${line}`);
    }
    idx += 1;
  }
  if (idx === lines.length) throw new Error("no &FCI namelist header found");

  const headerLines: string[] = [];
  let end = -1;
  for (let j = idx; j < lines.length; j += 1) {
    const upper = lines[j].toUpperCase();
    const endPos = upper.indexOf("&END");
    const slash = / (\/)(\s|$)|^\//.exec(lines[j]);
    if (endPos >= 0) {
      headerLines.push(lines[j].slice(0, endPos));
      end = j;
      break;
    }
    if (slash) {
      headerLines.push(lines[j].slice(0, slash.index));
      end = j;
      break;
    }
    headerLines.push(lines[j]);
  }
  if (end < 0) throw new Error("unterminated &FCI namelist");

  const blob = headerLines.join(" ").replace(/^\s*&FCI/i, "");
  const fields = new Map<string, string>();
  // lazy value match up to the next key= or end of header
  const re = /([A-Za-z0-9_]+)\s*=\s*([^=]*?)(?=(?:,?\s*[A-Za-z0-9_]+\s*=)|$)/g;
  for (const m of blob.matchAll(re)) {
    fields.set(m[1].toUpperCase(), m[2].trim().replace(/,+$/, "").trim());
  }
  const intField = (key: string, fallback: number | null = null): number => {
    const raw = fields.get(key);
    if (raw === undefined) {
      if (fallback === null) throw new Error(`header is missing ${key}`);
      return fallback;
    }
    return Number.parseInt(raw.split(",")[0], 10);
  };
  return {
    header: {
      norb: intField("NORB"),
      nelec: intField("NELEC"),
      ms2: intField("MS2", 0),
      iuhf: intField("IUHF", 0) !== 0,
      mu,
    },
    firstRecord: end + 1,
  };
}

function parseRecords(lines: string[], start: number): RawRecord[] {
  const out: RawRecord[] = [];
  for (let idx = start; idx < lines.length; idx += 1) {
    const line = lines[idx].trim();
    if (line.length === 0 || line.startsWith("!")) continue;
    const parts = line.split(/\s+/);
    if (parts.length !== 5) {
      throw new Error(`line ${idx + 1}: expected 'value i j k l', got '${line}'`);
    }
    const value = Number(parts[0].replace(/[dD]/, "e"));
    if (!Number.isFinite(value)) throw new Error(`line ${idx + 1}: non-finite value`);
    out.push({
      value,
      i: Number.parseInt(parts[1], 10),
      j: Number.parseInt(parts[2], 10),
      k: Number.parseInt(parts[3], 10),
      l: Number.parseInt(parts[4], 10),
    });
  }
  return out;
}

function fillTwoBody(records: RawRecord[], norb: number, pairOnly: boolean): Float64Array {
  const g = new Float64Array(norb ** 4);
  const at = (p: number, q: number, r: number, s: number) =>
    ((p * norb + q) * norb + r) * norb + s;
  for (const rec of records) {
    const p = rec.i - 1;
    const q = rec.j - 1;
    const r = rec.k - 1;
    const s = rec.l - 1;
    if (Math.min(p, q, r, s) < 0 || Math.max(p, q, r, s) >= norb) {
      throw new Error(`orbital index out of range in record ${JSON.stringify(rec)}`);
    }
    const pairs: Array<[number, number, number, number]> = [
      [p, q, r, s], [q, p, r, s], [p, q, s, r], [q, p, s, r],
    ];
    if (!pairOnly) {
      pairs.push([r, s, p, q], [s, r, p, q], [r, s, q, p], [s, r, q, p]);
    }
    for (const [a, b, c, d] of pairs) g[at(a, b, c, d)] = rec.value;
  }
  return g;
}

function fillOneBody(records: RawRecord[], norb: number): Float64Array {
  const h = new Float64Array(norb * norb);
  for (const rec of records) {
    const p = rec.i - 1;
    const q = rec.j - 1;
    if (rec.k !== 0 || rec.l !== 0 || p < 0 || q < 0 || p >= norb || q >= norb) {
      throw new Error(`malformed one-body record ${JSON.stringify(rec)}`);
    }
    h[p * norb + q] = rec.value;
    h[q * norb + p] = rec.value;
  }
  return h;
}

export function loadRestricted(path: string): RestrictedIntegrals {
  const lines = readFileSync(path, "utf8").split("\n");
  const { header, firstRecord } = parseHeader(lines);
  if (header.iuhf) throw new Error(`${path} is an IUHF=1 file; use loadUnrestricted`);
  const records = parseRecords(lines, firstRecord);
  const twoBody: RawRecord[] = [];
  const oneBody: RawRecord[] = [];
  let eCore = 0;
  for (const rec of records) {
    if (rec.i === 0 && rec.j === 0 && rec.k === 0 && rec.l === 0) eCore = rec.value;
    else if (rec.k === 0 && rec.l === 0) oneBody.push(rec);
    else twoBody.push(rec);
  }
  return {
    header,
    g: fillTwoBody(twoBody, header.norb, false),
    h: fillOneBody(oneBody, header.norb),
    eCore,
  };
}

export function loadUnrestricted(path: string): UnrestrictedIntegrals {
  const lines = readFileSync(path, "utf8").split("\n");
  const { header, firstRecord } = parseHeader(lines);
  if (!header.iuhf) throw new Error(`${path} is not an IUHF=1 file`);
  const records = parseRecords(lines, firstRecord);
  const blocks: RawRecord[][] = [[]];
  let eCore = 0;
  for (const rec of records) {
    if (rec.i === 0 && rec.j === 0 && rec.k === 0 && rec.l === 0) {
      if (blocks.length <= 5) blocks.push([]);
      else eCore = rec.value;
      continue;
    }
    blocks[blocks.length - 1].push(rec);
  }
  if (blocks.length < 6) throw new Error(`${path}: missing IUHF blocks`);
  const n = header.norb;
  return {
    header,
    gAA: fillTwoBody(blocks[0], n, false),
    gBB: fillTwoBody(blocks[1], n, false),
    gAB: fillTwoBody(blocks[2], n, true),
    hA: fillOneBody(blocks[3], n),
    hB: fillOneBody(blocks[4], n),
    eCore,
  };
}

export function tensorAt(
  g: Float64Array, norb: number, p: number, q: number, r: number, s: number,
): number {
  return g[((p * norb + q) * norb + r) * norb + s];
}

/** Largest |a - b| over two equally sized tensors. */
export function maxAbsDiff(a: Float64Array, b: Float64Array): number {
  if (a.length !== b.length) throw new Error("tensor size mismatch");
  let worst = 0;
  for (let i = 0; i < a.length; i += 1) {
    const d = Math.abs(a[i] - b[i]);
    if (d > worst) worst = d;
  }
  return worst;
}
