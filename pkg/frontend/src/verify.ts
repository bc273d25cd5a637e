/**
 * The fixture verification suite: every check is hermetic (committed files
 * only, no chemistry driver) and consumes the embedding artifact purely
 * through its external file formats.
 */

import { existsSync } from "node:fs";
import { join } from "node:path";

import { loadRestricted, loadUnrestricted, maxAbsDiff, tensorAt } from "./fcidump.js";
import { integratedDensity, loadGrid, orthonormalityDefect } from "./grid.js";
import { checkDrift, loadManifest, referenceValue } from "./manifest.js";

export interface CheckResult {
  fixture: string;
  check: string;
  passed: boolean;
  detail: string;
}

/** Published reference energies the manifests must agree with. */
const PUBLISHED_SCF: Record<string, { value: number; tol: number }> = {
  h2o_sto3g: { value: -74.961, tol: 1e-3 },
  h2o_631gs: { value: -76.009, tol: 1e-3 },
  h2o_631gs_ks: { value: -75.84, tol: 1e-3 },
  ch2_631gs: { value: -38.921, tol: 1e-3 },
};

const MU_TAGS: Record<string, string> = {
  "0.01": "lr_mu0p01.fcidump",
  "7.25": "lr_mu7p25.fcidump",
  "1000": "lr_mu1000.fcidump",
  "10000": "lr_mu10000.fcidump",
};

export function verifyFixture(root: string, name: string): CheckResult[] {
  const dir = join(root, name);
  const results: CheckResult[] = [];
  const push = (check: string, passed: boolean, detail: string) =>
    results.push({ fixture: name, check, passed, detail });
  const guarded = (check: string, fn: () => void) => {
    try {
      fn();
    } catch (err) {
      push(check, false, `exception: ${(err as Error).message}`);
    }
  };

  const manifest = loadManifest(dir);

  const drift = checkDrift(dir, manifest);
  push(
    "checksums",
    drift.missing.length === 0 && drift.changed.length === 0 &&
      drift.unlisted.length === 0,
    `${drift.ok.length} ok, ${drift.changed.length} changed, ` +
      `${drift.missing.length} missing, ${drift.unlisted.length} unlisted`,
  );

  const published = PUBLISHED_SCF[name];
  if (published) {
    const dev = Math.abs(manifest.e_scf - published.value);
    push(
      "scf-vs-published",
      dev < published.tol,
      `e_scf=${manifest.e_scf.toFixed(6)} vs ${published.value} (dev ${(dev * 1e3).toFixed(3)} mHa)`,
    );
  }

  const fcidumpPath = join(dir, "fcidump");
  guarded("determinant-energy", () => {
  if (manifest.orbital_provenance === "UHF") {
    const u = loadUnrestricted(fcidumpPath);
    push(
      "header-consistency",
      u.header.norb === manifest.n_orbitals &&
        u.header.nelec === manifest.n_electrons &&
        u.header.ms2 === manifest.ms2,
      `NORB=${u.header.norb}, NELEC=${u.header.nelec}, MS2=${u.header.ms2}`,
    );
    // UHF determinant energy recomputed from the committed blocks
    const n = u.header.norb;
    const nA = (u.header.nelec + u.header.ms2) / 2;
    const nB = u.header.nelec - nA;
    let e = u.eCore;
    for (let i = 0; i < nA; i += 1) e += u.hA[i * n + i];
    for (let i = 0; i < nB; i += 1) e += u.hB[i * n + i];
    for (let i = 0; i < nA; i += 1) {
      for (let j = 0; j < nA; j += 1) {
        e += 0.5 * (tensorAt(u.gAA, n, i, i, j, j) - tensorAt(u.gAA, n, i, j, j, i));
      }
    }
    for (let i = 0; i < nB; i += 1) {
      for (let j = 0; j < nB; j += 1) {
        e += 0.5 * (tensorAt(u.gBB, n, i, i, j, j) - tensorAt(u.gBB, n, i, j, j, i));
      }
    }
    for (let i = 0; i < nA; i += 1) {
      for (let j = 0; j < nB; j += 1) e += tensorAt(u.gAB, n, i, i, j, j);
    }
    const dev = Math.abs(e - manifest.e_scf);
    push(
      "determinant-energy",
      dev < 1e-8,
      `recomputed ${e.toFixed(9)} vs manifest ${manifest.e_scf.toFixed(9)}`,
    );
  } else {
    const r = loadRestricted(fcidumpPath);
    push(
      "header-consistency",
      r.header.norb === manifest.n_orbitals &&
        r.header.nelec === manifest.n_electrons,
      `NORB=${r.header.norb}, NELEC=${r.header.nelec}`,
    );
    // closed-shell determinant energy from the committed integrals
    const n = r.header.norb;
    const nOcc = r.header.nelec / 2;
    let e = r.eCore;
    for (let j = 0; j < nOcc; j += 1) e += 2 * r.h[j * n + j];
    for (let i = 0; i < nOcc; i += 1) {
      for (let j = 0; j < nOcc; j += 1) {
        e += 2 * tensorAt(r.g, n, i, i, j, j) - tensorAt(r.g, n, i, j, j, i);
      }
    }
    const isKs = manifest.orbital_provenance.startsWith("RKS");
    // HF orbitals: determinant energy IS the SCF energy; KS orbitals: the
    // determinant energy differs from the KS total by the xc pieces, so
    // only a sanity window applies
    const dev = Math.abs(e - manifest.e_scf);
    push(
      "determinant-energy",
      isKs ? dev < 0.5 : dev < 1e-8,
      `recomputed ${e.toFixed(9)} vs manifest ${manifest.e_scf.toFixed(9)}` +
        (isKs ? " (KS orbitals: window check)" : ""),
    );
  }

  });

  guarded("sidecars", () => {
  if (manifest.mu_values) {
    const base = loadRestricted(fcidumpPath);
    const n = base.header.norb;
    for (const mu of manifest.mu_values) {
      const tag = MU_TAGS[String(mu)];
      const path = join(dir, tag);
      if (!existsSync(path)) {
        push(`sidecar-mu${mu}`, false, `missing ${tag}`);
        continue;
      }
      const lr = loadRestricted(path);
      const muOk = lr.header.mu !== null && Math.abs(lr.header.mu - mu) < 1e-12;
      const boundOk =
        tensorAt(lr.g, n, 0, 0, 0, 0) <= tensorAt(base.g, n, 0, 0, 0, 0) + 1e-12;
      push(
        `sidecar-mu${mu}`,
        muOk && boundOk,
        `MU annotation ${lr.header.mu}, (00|00): ` +
          `${tensorAt(lr.g, n, 0, 0, 0, 0).toFixed(8)} <= ` +
          `${tensorAt(base.g, n, 0, 0, 0, 0).toFixed(8)}`,
      );
      if (mu >= 10000) {
        const dev = maxAbsDiff(lr.g, base.g);
        push(
          "large-mu-limit",
          dev < 1e-6,
          `max|g_lr - g| = ${dev.toExponential(2)} at mu=${mu} (bound 1e-6)`,
        );
      } else if (mu >= 1000) {
        // short-range remainder is a core contact term ~ pi/mu^2 * int rho^2
        const dev = maxAbsDiff(lr.g, base.g);
        push(
          "large-mu-contact-bound",
          dev < 1e-4,
          `max|g_lr - g| = ${dev.toExponential(2)} at mu=${mu} (bound 1e-4)`,
        );
      }
    }
  }

  });

  guarded("grid", () => {
  const gridPath = join(dir, "grid.asqem");
  if (existsSync(gridPath)) {
    const grid = loadGrid(gridPath);
    const nOcc = manifest.n_electrons / 2;
    const defect = orthonormalityDefect(grid, nOcc);
    push(
      "grid-orthonormality",
      grid.nOrbitals === manifest.n_orbitals && defect < 1e-5,
      `defect ${defect.toExponential(2)} over ${nOcc} occupied orbitals`,
    );
    const ne = integratedDensity(grid, nOcc);
    push(
      "grid-density",
      Math.abs(ne - manifest.n_electrons) < 1e-4,
      `integrated density ${ne.toFixed(7)} vs ${manifest.n_electrons}`,
    );
  }
  });

  return results;
}

export function verifyAll(root: string, fixtures: string[]): CheckResult[] {
  const out: CheckResult[] = [];
  for (const name of fixtures) out.push(...verifyFixture(root, name));
  return out;
}

export const DEFAULT_FIXTURES = [
  "h2_sto3g",
  "h2o_sto3g",
  "h2o_631gs",
  "h2o_631gs_ks",
  "ch2_631gs",
];
