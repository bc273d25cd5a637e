import assert from "node:assert/strict";
import { cpSync, mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import { test } from "node:test";

import { checkDrift, loadManifest } from "../src/manifest.js";
import { DEFAULT_FIXTURES, verifyAll, verifyFixture } from "../src/verify.js";

// compiled location is dist/test/, three levels below the repository root
const FIXTURES = resolve(import.meta.dirname, "../../../tests/fixtures");

test("all committed fixtures pass every check", () => {
  const results = verifyAll(FIXTURES, DEFAULT_FIXTURES);
  const failed = results.filter((r) => !r.passed);
  assert.deepEqual(
    failed.map((r) => `${r.fixture}/${r.check}: ${r.detail}`),
    [],
  );
  // the sweep fixture must exercise checksum, energy, sidecar and grid checks
  const ks = results.filter((r) => r.fixture === "h2o_631gs_ks");
  const kinds = new Set(ks.map((r) => r.check));
  for (const expected of [
    "checksums", "scf-vs-published", "determinant-energy",
    "sidecar-mu7.25", "large-mu-limit", "grid-orthonormality", "grid-density",
  ]) {
    assert.ok(kinds.has(expected), `missing check ${expected}`);
  }
});

test("manifest reference energies match the published values within 1 mHa", () => {
  const expectations: Array<[string, number]> = [
    ["h2o_sto3g", -74.961],
    ["h2o_631gs", -76.009],
    ["h2o_631gs_ks", -75.84],
    ["ch2_631gs", -38.921],
  ];
  for (const [name, value] of expectations) {
    const manifest = loadManifest(join(FIXTURES, name));
    assert.ok(
      Math.abs(manifest.e_scf - value) < 1e-3,
      `${name}: ${manifest.e_scf} vs ${value}`,
    );
  }
});

test("drift detection flags a modified file", () => {
  const scratch = mkdtempSync(join(tmpdir(), "drift-"));
  const dir = join(scratch, "h2_sto3g");
  cpSync(join(FIXTURES, "h2_sto3g"), dir, { recursive: true });
  writeFileSync(join(dir, "fcidump"), "tampered\n");
  const manifest = loadManifest(dir);
  const report = checkDrift(dir, manifest);
  assert.deepEqual(report.changed, ["fcidump"]);
  const results = verifyFixture(scratch, "h2_sto3g");
  const checksum = results.find((r) => r.check === "checksums");
  assert.ok(checksum && !checksum.passed);
});

test("drift detection flags unlisted files", () => {
  const scratch = mkdtempSync(join(tmpdir(), "drift-"));
  const dir = join(scratch, "h2_sto3g");
  cpSync(join(FIXTURES, "h2_sto3g"), dir, { recursive: true });
  writeFileSync(join(dir, "extra.dat"), "stray\n");
  const report = checkDrift(dir, loadManifest(dir));
  assert.deepEqual(report.unlisted, ["extra.dat"]);
});
