#!/usr/bin/env python3
"""Benchmark: compiled kernels vs the NumPy fallback on the hot loops.

Covers the three kernel entry points on a realistic mapped molecular
Hamiltonian (H2O/6-31G* CAS(6,10), 18 qubits after reduction, ~40k Pauli
terms over a 14400-dimensional particle sector) and on a mid-size register
(CAS(2,5), 8 qubits) where full-vector statevector work dominates VQE.

Run:  python benchmarks/bench_kernels.py [--quick]
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from asqem._kernels import _pauli_np  # noqa: E402

try:
    from asqem._kernels import _pauli_cy
except ImportError:
    _pauli_cy = None

from asqem.fcidump import load_fcidump  # noqa: E402
from asqem.fermion import to_fermion_operator  # noqa: E402
from asqem.hf_embedding import assemble_active_hamiltonian  # noqa: E402
from asqem.integrals import ActiveSpace  # noqa: E402
from asqem.mappings import MappingConfig, map_operator, sector_basis  # noqa: E402

FIXTURES = Path(__file__).parent.parent / "tests" / "fixtures"


def _mapped_problem(n_el, n_mo):
    sys_ = load_fcidump(FIXTURES / "h2o_631gs" / "fcidump")
    as_ = ActiveSpace.from_counts(sys_.n_orbitals, sys_.n_electrons, n_el, n_mo)
    ham = assemble_active_hamiltonian(sys_, as_)
    cfg = MappingConfig(
        "parity", 2 * n_mo, True, as_.n_active_alpha, as_.n_active_beta
    )
    qop = map_operator(to_fermion_operator(ham), cfg)
    basis = sector_basis(cfg, as_.n_active_alpha, as_.n_active_beta)
    return qop, basis, cfg


def _time(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench(quick: bool) -> None:
    backends = [("numpy", _pauli_np)]
    if _pauli_cy is not None:
        backends.append(("cython", _pauli_cy))
    else:
        print("compiled kernels not built; benchmarking the fallback only")

    rows = []

    # full-register statevector work (VQE-style): CAS(2,5), 8 qubits
    qop, _, cfg = _mapped_problem(2, 5)
    xs, zs, cs = qop.mask_arrays()
    dim = 1 << cfg.n_qubits
    idx = np.arange(dim, dtype=np.uint64)
    rng = np.random.default_rng(0)
    state = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    state /= np.linalg.norm(state)
    for name, mod in backends:
        t_apply, out = _time(lambda: mod.apply_pauli_sum(xs, zs, cs, state, idx))
        t_expect, val = _time(lambda: mod.expectation(xs, zs, cs, state, idx))
        rows.append((f"apply  8q x {len(cs)} terms", name, t_apply, out))
        rows.append((f"expect 8q x {len(cs)} terms", name, t_expect, val))

    # sector assembly: CAS(6,10) -> 18 qubits, dim 14400 (skipped in --quick)
    if not quick:
        qop, basis, cfg = _mapped_problem(6, 10)
        xs, zs, cs = qop.mask_arrays()
        for name, mod in backends:
            t_sector, _ = _time(
                lambda: mod.sector_matrix_entries(xs, zs, cs, basis), repeat=1
            )
            rows.append(
                (f"sector 18q x {len(cs)} terms, dim {len(basis)}", name, t_sector, None)
            )

    print(f"{'kernel':<44} {'backend':<8} {'best (s)':>10}")
    print("-" * 68)
    baselines = {}
    for label, name, t, _ in rows:
        line = f"{label:<44} {name:<8} {t:>10.4f}"
        if name == "numpy":
            baselines[label] = t
        elif label in baselines:
            line += f"   x{baselines[label] / t:.1f}"
        print(line)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--quick", action="store_true", help="skip the 18-qubit case")
    args = ap.parse_args()
    bench(args.quick)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
