/** Command line: verify the committed fixture tree, one line per check. */

import { resolve } from "node:path";

import { DEFAULT_FIXTURES, verifyAll } from "./verify.js";

function main(): number {
  const root = resolve(process.argv[2] ?? "../tests/fixtures");
  const results = verifyAll(root, DEFAULT_FIXTURES);
  let failures = 0;
  for (const r of results) {
    const status = r.passed ? "PASS" : "FAIL";
    if (!r.passed) failures += 1;
    console.log(`${status}  ${r.fixture.padEnd(14)} ${r.check.padEnd(24)} ${r.detail}`);
  }
  console.log(`\n${results.length - failures}/${results.length} checks passed`);
  return failures === 0 ? 0 : 1;
}

process.exit(main());
