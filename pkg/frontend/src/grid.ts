/**
 * ASQEM-GRID v1 reader: ASCII header `ASQEM-GRID 1 <n_points> <n_orbitals>`
 * followed by little-endian float64 weights and point-major MO values.
 */

import { readFileSync } from "node:fs";

export interface GridData {
  nPoints: number;
  nOrbitals: number;
  weights: Float64Array;
  /** point-major: moValues[k * nOrbitals + p] = phi_p(r_k) */
  moValues: Float64Array;
}

export function loadGrid(path: string): GridData {
  const raw = readFileSync(path);
  const nl = raw.indexOf(0x0a);
  if (nl < 0) throw new Error(`${path}: missing header line`);
  const header = raw.subarray(0, nl).toString("ascii").trim().split(/\s+/);
  if (header.length !== 4 || header[0] !== "ASQEM-GRID") {
    throw new Error(`${path}: bad header ${header.join(" ")}`);
  }
  if (header[1] !== "1") throw new Error(`${path}: unsupported version ${header[1]}`);
  const nPoints = Number.parseInt(header[2], 10);
  const nOrbitals = Number.parseInt(header[3], 10);
  const expected = 8 * nPoints * (1 + nOrbitals);
  const payload = raw.subarray(nl + 1);
  if (payload.length < expected) {
    throw new Error(`${path}: truncated payload (${payload.length} < ${expected})`);
  }
  const weights = new Float64Array(nPoints);
  const moValues = new Float64Array(nPoints * nOrbitals);
  for (let k = 0; k < nPoints; k += 1) {
    weights[k] = payload.readDoubleLE(8 * k);
    if (!(weights[k] >= 0)) throw new Error(`${path}: negative or NaN weight`);
  }
  const base = 8 * nPoints;
  for (let i = 0; i < nPoints * nOrbitals; i += 1) {
    const v = payload.readDoubleLE(base + 8 * i);
    if (!Number.isFinite(v)) throw new Error(`${path}: non-finite MO value`);
    moValues[i] = v;
  }
  return { nPoints, nOrbitals, weights, moValues };
}

/** Quadrature overlap sum_k w_k phi_p phi_q over the first nCheck orbitals. */
export function orthonormalityDefect(grid: GridData, nCheck: number): number {
  const { nPoints, nOrbitals, weights, moValues } = grid;
  let worst = 0;
  for (let p = 0; p < nCheck; p += 1) {
    for (let q = p; q < nCheck; q += 1) {
      let s = 0;
      for (let k = 0; k < nPoints; k += 1) {
        s += weights[k] * moValues[k * nOrbitals + p] * moValues[k * nOrbitals + q];
      }
      const dev = Math.abs(s - (p === q ? 1 : 0));
      if (dev > worst) worst = dev;
    }
  }
  return worst;
}

/** Integral of the closed-shell density built from the first nOcc orbitals. */
export function integratedDensity(grid: GridData, nOcc: number): number {
  const { nPoints, nOrbitals, weights, moValues } = grid;
  let total = 0;
  for (let k = 0; k < nPoints; k += 1) {
    let rho = 0;
    for (let p = 0; p < nOcc; p += 1) {
      const v = moValues[k * nOrbitals + p];
      rho += 2 * v * v;
    }
    total += weights[k] * rho;
  }
  return total;
}
