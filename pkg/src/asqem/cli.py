"""Command-line surface: hf-embed, dft-embed, and sweep-mu.

Exit codes: 0 success, 1 configuration/input error, 2 numeric
non-convergence (a report is still written).  All input validation happens
before any heavy computation.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from pathlib import Path

import numpy as np

from .fcidump import attach_lr_integrals, load_fcidump
from .gridfile import load_grid
from .hf_embedding import assemble_active_hamiltonian, embedded_energy
from .integrals import ActiveSpace, MolecularSystem
from .metrics import ReferenceEnergies, epsilon_dft, epsilon_hf
from .report import RunReport, write_report
from .rsdft import run_dft_embedding, sweep_mu, write_sweep_csv
from .solve import SolverConfig, solve_embedded
from .vqe import VqeConfig

__all__ = ["main"]

_ACTIVE_RE = re.compile(r"^(\d+)(?:\((\d+)\))?,(\d+)$")


class ConfigError(ValueError):
    pass


def _parse_active(spec: str):
    m = _ACTIVE_RE.match(spec.strip())
    if not m:
        raise ConfigError(
            f"bad --active {spec!r}: expected 'n_elec,n_mo' or 'n_elec(n_alpha),n_mo'"
        )
    n_el, n_alpha, n_mo = m.group(1), m.group(2), m.group(3)
    return int(n_el), (None if n_alpha is None else int(n_alpha)), int(n_mo)


def _parse_index_list(spec: str) -> tuple[int, ...]:
    return tuple(int(x) for x in spec.split(",") if x.strip() != "")


def _active_space(args, system: MolecularSystem) -> ActiveSpace:
    if args.active_indices:
        if args.active is not None:
            raise ConfigError("--active and --active-indices are exclusive")
        active = _parse_index_list(args.active_indices)
        inactive = (
            _parse_index_list(args.inactive_indices) if args.inactive_indices else ()
        )
        n_act_el = system.n_electrons - 2 * len(inactive)
        n_alpha = system.n_alpha - len(inactive)
        return ActiveSpace.from_index_lists(
            system.n_orbitals, inactive, active, n_act_el, n_alpha
        )
    if args.active is None:
        raise ConfigError("an active space (--active) is required")
    n_el, n_alpha, n_mo = _parse_active(args.active)
    if n_el <= 0 or n_mo <= 0:
        raise ConfigError("active space needs positive electron and orbital counts")
    if n_alpha is None and n_el % 2 == 1 and system.n_alpha != system.n_beta:
        raise ConfigError("odd active electron count needs the (n_alpha) annotation")
    return ActiveSpace.from_counts(
        system.n_orbitals,
        system.n_electrons,
        n_el,
        n_mo,
        n_active_alpha=n_alpha,
        n_alpha=system.n_alpha if n_alpha is None else None,
    )


def _solver_config(args) -> SolverConfig:
    vqe = VqeConfig(
        optimizer=args.optimizer,
        energy_tol=args.vqe_tol,
        max_evaluations=args.max_evaluations,
        trace_path=args.trace_csv,
    )
    return SolverConfig(
        kind=args.solver,
        mapping=args.mapping,
        reduce_two_qubits=args.reduce,
        vqe=vqe,
    )


def _load_manifest(path):
    if path is None:
        return {}
    return json.loads(Path(path).read_text())


def _check_file(path, what) -> Path:
    if path is None:
        raise ConfigError(f"missing required input: {what}")
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"{what} not found: {p}")
    return p


def _mapping_doc(cfg: SolverConfig, n_qubits: int | None) -> dict:
    return {
        "scheme": cfg.mapping,
        "two_qubit_reduction": cfg.reduce_two_qubits,
        "n_qubits": n_qubits,
    }


def _common_inputs(args, manifest) -> dict:
    return {
        "fcidump": str(args.fcidump),
        "refs": None if args.refs is None else str(args.refs),
        "active": args.active or args.active_indices,
        "solver": args.solver,
        "optimizer": args.optimizer,
        "seed": args.seed,
        "threads": args.threads,
        "orbital_provenance": manifest.get("orbital_provenance"),
    }


def cmd_hf_embed(args) -> int:
    _check_file(args.fcidump, "--fcidump")
    if args.refs is not None:
        _check_file(args.refs, "--refs")
    system = load_fcidump(args.fcidump)
    as_ = _active_space(args, system)
    solver = _solver_config(args)
    manifest = _load_manifest(args.refs)
    refs = ReferenceEnergies.from_manifest(manifest)
    inputs = _common_inputs(args, manifest)

    unrestricted = system.spin_resolved_integrals or as_.n_active_alpha * 2 != as_.n_active_electrons
    try:
        ham = assemble_active_hamiltonian(system, as_, unrestricted=unrestricted)
        sol = solve_embedded(ham, solver)
        e_rdm = embedded_energy(ham, sol.d1, sol.d2)
        metrics = {}
        if refs.e_hf is not None and refs.e_ccsd is not None:
            metrics["epsilon_hf"] = epsilon_hf(sol.energy, refs)
        checks = {
            "rdm_trace_defect": abs(sol.d1.trace() - as_.n_active_electrons),
            "rdm_energy_defect": abs(e_rdm - sol.energy),
        }
        converged = sol.vqe_result.converged if sol.vqe_result else True
        report = RunReport(
            scheme="hf-embed",
            status="ok" if converged else "not_converged",
            inputs=inputs,
            result={
                "energy": sol.energy,
                "e_offset": ham.e_offset,
                "n_qubits": sol.n_qubits,
                "converged": converged,
                "active_space": {
                    "inactive": list(as_.inactive),
                    "active": list(as_.active),
                    "n_active_electrons": as_.n_active_electrons,
                    "n_active_alpha": as_.n_active_alpha,
                },
                "mapping": _mapping_doc(solver, sol.n_qubits),
            },
            metrics=metrics,
            checks=checks,
        )
    except (ValueError, FloatingPointError, RuntimeError) as exc:
        report = RunReport(
            scheme="hf-embed", status="failed", inputs=inputs,
            result={}, error=str(exc),
        )
        _emit(report, args)
        return 2
    _emit(report, args, print_energy=True)
    return 0 if report.status == "ok" else 2


def cmd_dft_embed(args) -> int:
    _check_file(args.fcidump, "--fcidump")
    lr_path = _check_file(args.lr, "--lr")
    grid_path = _check_file(args.grid, "--grid")
    if args.refs is not None:
        _check_file(args.refs, "--refs")
    system = load_fcidump(args.fcidump)
    system = attach_lr_integrals(system, lr_path)
    grid = load_grid(grid_path, n_occupied=system.n_electrons // 2)
    as_ = _active_space(args, system)
    solver = _solver_config(args)
    manifest = _load_manifest(args.refs)
    refs = ReferenceEnergies.from_manifest(manifest)
    occupations = manifest.get("mo_occupations")
    if isinstance(occupations, list):
        occupations = np.asarray(occupations, dtype=float)
    else:
        occupations = None
    inputs = _common_inputs(args, manifest)
    inputs.update({"lr_fcidump": str(lr_path), "grid": str(grid_path),
                   "mu": system.mu, "tolerance": args.tol,
                   "max_iterations": args.max_iter})

    try:
        hist = run_dft_embedding(
            system, as_, grid, solver,
            tol=args.tol, max_iter=args.max_iter, damping=args.damping,
            initial_occupations=occupations,
        )
        if args.history_csv:
            hist.write_csv(args.history_csv)
        metrics = {}
        if refs.e_dft is not None and refs.e_ccsd is not None:
            metrics["epsilon_dft"] = epsilon_dft(hist.final_energy, refs)
        report = RunReport(
            scheme="dft-embed",
            status="ok" if hist.converged else "not_converged",
            inputs=inputs,
            result={
                "energy": hist.final_energy,
                "converged": hist.converged,
                "iterations": hist.n_iterations,
                "n_qubits": hist.solution.n_qubits,
                "mu": system.mu,
                "mapping": _mapping_doc(solver, hist.solution.n_qubits),
            },
            history=[
                {
                    "iteration": s.iteration,
                    "e_total": s.energy,
                    "abs_delta_e": abs(s.delta_e) if np.isfinite(s.delta_e) else None,
                    "trace_d_active": s.trace_d_active,
                }
                for s in hist.states
            ],
            metrics=metrics,
            checks={"grid_orthonormality_defect": grid.orthonormality_defect},
        )
    except (ValueError, FloatingPointError, RuntimeError) as exc:
        report = RunReport(
            scheme="dft-embed", status="failed", inputs=inputs,
            result={}, error=str(exc),
        )
        _emit(report, args)
        return 2
    _emit(report, args, print_energy=True)
    return 0 if report.status == "ok" else 2


def cmd_sweep_mu(args) -> int:
    _check_file(args.fcidump, "--fcidump")
    grid_path = _check_file(args.grid, "--grid")
    if not args.point:
        raise ConfigError("sweep-mu needs at least one --point MU PATH")
    points = []
    for mu_str, path in args.point:
        try:
            mu = float(mu_str)
        except ValueError:
            raise ConfigError(f"bad --point mu value {mu_str!r}") from None
        points.append((mu, _check_file(path, f"--point {mu_str}")))
    system = load_fcidump(args.fcidump)
    grid = load_grid(grid_path, n_occupied=system.n_electrons // 2)
    as_ = _active_space(args, system)
    solver = _solver_config(args)
    manifest = _load_manifest(args.refs)
    inputs = _common_inputs(args, manifest)
    inputs.update({"grid": str(grid_path),
                   "points": [[mu, str(p)] for mu, p in points]})

    results = sweep_mu(
        system, as_, points, grid, solver,
        tol=args.tol, max_iter=args.max_iter, threads=args.threads,
    )
    if args.sweep_csv:
        write_sweep_csv(results, args.sweep_csv)
    ok = [p for p in results if p.error is None and p.converged]
    best = min(ok, key=lambda p: p.energy) if ok else None
    report = RunReport(
        scheme="sweep-mu",
        status="ok" if len(ok) == len(results) else "not_converged",
        inputs=inputs,
        result={
            "points": [
                {
                    "mu": p.mu,
                    "energy": p.energy,
                    "iterations": p.n_iterations,
                    "converged": p.converged,
                    "error": p.error,
                }
                for p in results
            ],
            "mu_optimal": None if best is None else best.mu,
            "energy_optimal": None if best is None else best.energy,
        },
    )
    _emit(report, args, print_energy=False)
    if best is not None:
        print(f"optimal mu = {best.mu:g}  E = {best.energy:.6f}")
    return 0 if report.status == "ok" else 2


def _emit(report: RunReport, args, print_energy: bool = False) -> None:
    if args.out:
        write_report(report, args.out)
    if report.status == "failed":
        print(f"error: {report.error}", file=sys.stderr)
    elif print_energy:
        print(f"E = {report.result['energy']:.10f}  [{report.status}]")


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--fcidump", required=True, help="full-range FCIDUMP path")
    sub.add_argument("--refs", help="manifest JSON with reference energies")
    sub.add_argument("--active", help="'n_elec,n_mo' or 'n_elec(n_alpha),n_mo'")
    sub.add_argument("--active-indices", help="explicit active MO indices (0-based)")
    sub.add_argument("--inactive-indices", help="explicit inactive MO indices")
    sub.add_argument("--mapping", choices=["jw", "parity"], default="parity")
    reduction = sub.add_mutually_exclusive_group()
    reduction.add_argument("--reduce", dest="reduce", action="store_true",
                           default=None, help="parity two-qubit reduction (default)")
    reduction.add_argument("--no-reduce", dest="reduce", action="store_false")
    sub.add_argument("--solver", choices=["exact", "vqe"], default="exact")
    sub.add_argument("--optimizer", choices=["l-bfgs-b", "nelder-mead"],
                     default="l-bfgs-b")
    sub.add_argument("--vqe-tol", type=float, default=1e-9)
    sub.add_argument("--max-evaluations", type=int, default=10000)
    sub.add_argument("--tol", type=float, default=1e-10,
                     help="energy convergence threshold (Hartree)")
    sub.add_argument("--max-iter", type=int, default=50)
    sub.add_argument("--damping", type=float, default=0.0)
    sub.add_argument("--out", help="report JSON output path")
    sub.add_argument("--history-csv", help="per-iteration history CSV path")
    sub.add_argument("--trace-csv", help="VQE optimizer trace CSV path")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument(
        "--threads", type=int,
        default=int(os.environ.get("ASQEM_THREADS", "1")),
        help="worker threads (default from ASQEM_THREADS)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="asqem",
        description="Active-space quantum embedding in HF and RS-DFT environments",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    hf = subs.add_parser("hf-embed", help="mean-field embedding, one shot")
    _add_common(hf)
    hf.set_defaults(func=cmd_hf_embed)

    dft = subs.add_parser("dft-embed", help="self-consistent RS-DFT embedding")
    _add_common(dft)
    dft.add_argument("--lr", required=True, help="long-range sidecar FCIDUMP")
    dft.add_argument("--grid", required=True, help="ASQEM-GRID quadrature file")
    dft.set_defaults(func=cmd_dft_embed)

    sw = subs.add_parser("sweep-mu", help="range-separation parameter sweep")
    _add_common(sw)
    sw.add_argument("--grid", required=True, help="ASQEM-GRID quadrature file")
    sw.add_argument("--point", nargs=2, action="append", metavar=("MU", "PATH"),
                    help="one sweep point: mu value and its LR sidecar")
    sw.add_argument("--sweep-csv", help="sweep results CSV path")
    sw.set_defaults(func=cmd_sweep_mu)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.reduce is None:
        args.reduce = args.mapping == "parity"
    if args.reduce and args.mapping != "parity":
        print("error: --reduce requires --mapping parity", file=sys.stderr)
        return 1
    np.random.seed(args.seed)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
