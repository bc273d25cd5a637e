/** Fixture manifests: schema, checksum recomputation, drift detection. */

import { createHash } from "node:crypto";
import { readFileSync, readdirSync } from "node:fs";
import { join } from "node:path";

export interface ReferenceEntry {
  value: number;
  provenance: string;
}

export interface Manifest {
  name: string;
  basis: string;
  orbital_provenance: string;
  n_orbitals: number;
  n_electrons: number;
  ms2: number;
  e_scf: number;
  geometry: Array<{ symbol: string; xyz_angstrom: number[] }>;
  references: Record<string, ReferenceEntry | unknown>;
  checksums: Record<string, string>;
  mu_values?: number[];
  generator_version: string;
}

export function loadManifest(dir: string): Manifest {
  const manifest = JSON.parse(
    readFileSync(join(dir, "manifest.json"), "utf8"),
  ) as Manifest;
  for (const key of [
    "name", "basis", "orbital_provenance", "n_orbitals", "n_electrons",
    "e_scf", "geometry", "references", "checksums", "generator_version",
  ]) {
    if (!(key in manifest)) throw new Error(`${dir}: manifest missing '${key}'`);
  }
  return manifest;
}

export function sha256(path: string): string {
  return createHash("sha256").update(readFileSync(path)).digest("hex");
}

export interface DriftReport {
  missing: string[];
  changed: string[];
  unlisted: string[];
  ok: string[];
}

/** Compare every checksum in the manifest against the committed files. */
export function checkDrift(dir: string, manifest: Manifest): DriftReport {
  const report: DriftReport = { missing: [], changed: [], unlisted: [], ok: [] };
  for (const [name, digest] of Object.entries(manifest.checksums)) {
    let actual: string;
    try {
      actual = sha256(join(dir, name));
    } catch {
      report.missing.push(name);
      continue;
    }
    if (actual === digest) report.ok.push(name);
    else report.changed.push(name);
  }
  for (const entry of readdirSync(dir)) {
    if (entry === "manifest.json") continue;
    if (!(entry in manifest.checksums)) report.unlisted.push(entry);
  }
  return report;
}

export function referenceValue(manifest: Manifest, key: string): number | null {
  const entry = manifest.references[key] as ReferenceEntry | undefined;
  if (!entry || typeof entry !== "object" || !("value" in entry)) return null;
  return entry.value;
}
