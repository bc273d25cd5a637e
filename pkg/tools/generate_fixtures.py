#!/usr/bin/env python3
"""Generate the committed test fixtures (maintainer script, never run in CI).

Emits, per molecule: an FCIDUMP over converged SCF orbitals, optional
erf-kernel long-range sidecars, an ASQEM-GRID quadrature file for the KS
fixture, and a manifest with geometries, occupations, reference energies
(driver-computed where possible, literature values otherwise) and sha256
checksums.  Run with --verify to regenerate into a scratch directory and
compare checksums against the committed manifests.

Usage:  python tools/generate_fixtures.py [--out DIR] [--verify]
"""

from __future__ import annotations

import argparse
import json
import shutil
import sys
import tempfile
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from fixturegen.emit import (
    sha256,
    write_fcidump_restricted,
    write_fcidump_unrestricted,
    write_grid_file,
    write_manifest,
)
from fixturegen.integrals import Molecule, compute_integrals
from fixturegen.scf import (
    becke_grid,
    mo_integrals,
    run_rhf,
    run_rks_lda,
    run_uhf,
    uhf_mo_integrals,
)

GENERATOR_VERSION = "1.0"

H2O_GEOM = [
    ("O", (0.0, 0.0, 0.115)),
    ("H", (0.0, 0.754, -0.459)),
    ("H", (0.0, -0.754, -0.459)),
]

_R_CH, _ANG_CH = 1.0753, np.deg2rad(133.93)
CH2_GEOM = [
    ("C", (0.0, 0.0, 0.0)),
    ("H", (0.0, _R_CH * np.sin(_ANG_CH / 2), _R_CH * np.cos(_ANG_CH / 2))),
    ("H", (0.0, -_R_CH * np.sin(_ANG_CH / 2), _R_CH * np.cos(_ANG_CH / 2))),
]

H2_GEOM = [("H", (0.0, 0.0, 0.0)), ("H", (0.0, 0.0, 0.7414))]

KS_MU_VALUES = (0.01, 7.25, 1000.0, 10000.0)


def _geometry_record(geom):
    return [{"symbol": s, "xyz_angstrom": list(x)} for s, x in geom]


def _base_manifest(name, geom, basis, provenance, res_energy, n_orb, n_elec, ms2,
                   mo_energies, mo_occupations, references):
    return {
        "name": name,
        "geometry": _geometry_record(geom),
        "basis": basis,
        "orbital_provenance": provenance,
        "n_orbitals": n_orb,
        "n_electrons": n_elec,
        "ms2": ms2,
        "e_scf": res_energy,
        "mo_energies": mo_energies,
        "mo_occupations": mo_occupations,
        "references": references,
        "generator_version": GENERATOR_VERSION,
    }


def gen_restricted_hf(out, name, geom, basis, references, multiplicity=1):
    mol = Molecule.from_angstrom(geom, multiplicity=multiplicity)
    res = run_rhf(mol, basis)
    assert res.converged, name
    h_mo, g_mo = mo_integrals(res)
    d = out / name
    d.mkdir(parents=True, exist_ok=True)
    write_fcidump_restricted(
        d / "fcidump", h_mo, g_mo, mol.nuclear_repulsion(), mol.n_electrons, 0
    )
    man = _base_manifest(
        name, geom, basis, "RHF", res.e_total, res.basis.n_ao, mol.n_electrons, 0,
        list(res.mo_energy), list(res.mo_occ), references,
    )
    man["references"]["e_hf"] = {"value": res.e_total, "provenance": "driver RHF"}
    write_manifest(d, man)
    print(f"{name}: E_RHF = {res.e_total:.6f}")
    return res


def gen_ks_fixture(out, name, geom, basis, references):
    mol = Molecule.from_angstrom(geom)
    points, weights = becke_grid(mol, n_radial=45, n_theta=14, n_phi=26)
    res, points, weights, ao = run_rks_lda(mol, basis, points, weights)
    assert res.converged, name
    h_mo, g_mo = mo_integrals(res)
    d = out / name
    d.mkdir(parents=True, exist_ok=True)
    write_fcidump_restricted(
        d / "fcidump", h_mo, g_mo, mol.nuclear_repulsion(), mol.n_electrons, 0
    )
    mo_vals = ao @ res.mo_coeff
    write_grid_file(d / "grid.asqem", weights, mo_vals)
    for mu in KS_MU_VALUES:
        _, _, _, eri_lr = compute_integrals(res.basis, omega=mu)
        eri_lr = np.einsum(
            "pqrs,p,q,r,s->pqrs", eri_lr, res.scales, res.scales, res.scales,
            res.scales, optimize=True,
        )
        c = res.mo_coeff
        g_lr = np.einsum("pi,qj,rk,sl,pqrs->ijkl", c, c, c, c, eri_lr, optimize=True)
        tag = f"{mu:g}".replace(".", "p")
        write_fcidump_restricted(
            d / f"lr_mu{tag}.fcidump", np.zeros_like(h_mo), g_lr, 0.0,
            mol.n_electrons, 0, mu=mu,
        )
        # sanity: the LR kernel never exceeds the bare kernel on the diagonal
        assert g_lr[0, 0, 0, 0] <= g_mo[0, 0, 0, 0] + 1e-12
    man = _base_manifest(
        name, geom, basis, "RKS-LDA/VWN5", res.e_total, res.basis.n_ao,
        mol.n_electrons, 0, list(res.mo_energy), list(res.mo_occ), references,
    )
    man["references"]["e_dft"] = {"value": res.e_total, "provenance": "driver RKS LDA/VWN5"}
    man["mu_values"] = list(KS_MU_VALUES)
    man["grid"] = {
        "n_points": int(len(weights)),
        "scheme": "Becke partition, 45-point mapped Gauss-Legendre radial, "
                  "14x26 Gauss-Legendre x uniform angular",
    }
    write_manifest(d, man)
    print(f"{name}: E_RKS = {res.e_total:.6f}  grid points = {len(weights)}")
    return res


def gen_unrestricted_hf(out, name, geom, basis, references, multiplicity):
    mol = Molecule.from_angstrom(geom, multiplicity=multiplicity)
    res = run_uhf(mol, basis)
    assert res.converged, name
    h_a, h_b, g_aa, g_bb, g_ab = uhf_mo_integrals(res)
    d = out / name
    d.mkdir(parents=True, exist_ok=True)
    write_fcidump_unrestricted(
        d / "fcidump", h_a, h_b, g_aa, g_bb, g_ab, mol.nuclear_repulsion(),
        mol.n_electrons, multiplicity - 1,
    )
    man = _base_manifest(
        name, geom, basis, "UHF", res.e_total, res.basis.n_ao, mol.n_electrons,
        multiplicity - 1,
        {"alpha": list(res.mo_energy[0]), "beta": list(res.mo_energy[1])},
        {"alpha": list(res.mo_occ[0]), "beta": list(res.mo_occ[1])},
        references,
    )
    man["references"]["e_hf"] = {"value": res.e_total, "provenance": "driver UHF"}
    write_manifest(d, man)
    print(f"{name}: E_UHF = {res.e_total:.6f}")
    return res


def generate_all(out: Path) -> None:
    gen_restricted_hf(
        out, "h2_sto3g", H2_GEOM, "sto-3g",
        {"note": "full-space FCI identity fixture; no literature references"},
    )
    gen_restricted_hf(
        out, "h2o_sto3g", H2O_GEOM, "sto-3g",
        {
            "e_ccsd": {"value": -75.009, "provenance": "literature"},
            "e_casci_cas10_7": {"value": -75.009, "provenance": "literature"},
        },
    )
    gen_restricted_hf(
        out, "h2o_631gs", H2O_GEOM, "6-31g*",
        {
            "e_ccsd": {"value": -76.204, "provenance": "literature"},
            "e_casci_cas6_10": {"value": -76.102, "provenance": "literature"},
            "e_casscf_cas6_10": {"value": -76.119, "provenance": "literature"},
        },
    )
    gen_ks_fixture(
        out, "h2o_631gs_ks", H2O_GEOM, "6-31g*",
        {
            "e_ccsd": {"value": -76.204, "provenance": "literature"},
            "e_dft_published": {"value": -75.840, "provenance": "literature"},
            "e_dft_emb_cas6_6_mu7p25": {"value": -76.068, "provenance": "literature"},
        },
    )
    gen_unrestricted_hf(
        out, "ch2_631gs", CH2_GEOM, "6-31g*",
        {
            "e_ccsd": {"value": -39.022, "provenance": "literature"},
            "e_casci_cas6_4_10": {"value": -38.959, "provenance": "literature"},
        },
        multiplicity=3,
    )


def verify(committed: Path) -> int:
    scratch = Path(tempfile.mkdtemp(prefix="asqem-fixtures-"))
    try:
        generate_all(scratch)
        failures = 0
        for man_path in sorted(committed.glob("*/manifest.json")):
            name = man_path.parent.name
            manifest = json.loads(man_path.read_text())
            for fname, digest in manifest["checksums"].items():
                regen = scratch / name / fname
                if not regen.exists():
                    print(f"MISSING {name}/{fname}")
                    failures += 1
                elif sha256(regen) != digest:
                    print(f"DRIFT   {name}/{fname}")
                    failures += 1
                else:
                    print(f"ok      {name}/{fname}")
        return 1 if failures else 0
    finally:
        shutil.rmtree(scratch, ignore_errors=True)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument(
        "--out", type=Path, default=Path(__file__).parent.parent / "tests" / "fixtures"
    )
    ap.add_argument("--verify", action="store_true",
                    help="regenerate into scratch and compare checksums")
    args = ap.parse_args()
    if args.verify:
        return verify(args.out)
    args.out.mkdir(parents=True, exist_ok=True)
    generate_all(args.out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
