"""Fixture emission: FCIDUMP (restricted and IUHF=1 unrestricted), LR
sidecars, ASQEM-GRID files, and reference manifests."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np


def _fmt(value: float) -> str:
    return f"{value: .16E}"


def _two_body_lines(g: np.ndarray, lines: list[str]) -> None:
    n = g.shape[0]
    for i in range(n):
        for j in range(i + 1):
            for k in range(i + 1):
                lmax = j if k == i else k
                for l in range(lmax + 1):
                    lines.append(
                        f"{_fmt(g[i, j, k, l])} {i+1:4d} {j+1:4d} {k+1:4d} {l+1:4d}"
                    )


def _pair_block_lines(g: np.ndarray, lines: list[str]) -> None:
    """alpha-beta block: only per-pair symmetry, so both triangles are free."""
    n = g.shape[0]
    for i in range(n):
        for j in range(i + 1):
            for k in range(n):
                for l in range(k + 1):
                    lines.append(
                        f"{_fmt(g[i, j, k, l])} {i+1:4d} {j+1:4d} {k+1:4d} {l+1:4d}"
                    )


def _one_body_lines(h: np.ndarray, lines: list[str]) -> None:
    n = h.shape[0]
    for i in range(n):
        for j in range(i + 1):
            lines.append(f"{_fmt(h[i, j])} {i+1:4d} {j+1:4d} {0:4d} {0:4d}")


def write_fcidump_restricted(path: Path, h: np.ndarray, g: np.ndarray,
                             e_core: float, n_elec: int, ms2: int,
                             mu: float | None = None) -> None:
    n = h.shape[0]
    lines = []
    if mu is not None:
        lines.append(f"! MU={mu!r}")
    lines.append(f"&FCI NORB={n},NELEC={n_elec},MS2={ms2},")
    lines.append(" ORBSYM=" + ",".join(["1"] * n) + ",")
    lines.append(" ISYM=1,")
    lines.append("&END")
    _two_body_lines(g, lines)
    _one_body_lines(h, lines)
    lines.append(f"{_fmt(e_core)} {0:4d} {0:4d} {0:4d} {0:4d}")
    path.write_text("\n".join(lines) + "\n")


def write_fcidump_unrestricted(path: Path, h_a, h_b, g_aa, g_bb, g_ab,
                               e_core: float, n_elec: int, ms2: int) -> None:
    """Molpro IUHF=1 layout: aa / bb / ab two-body blocks, then the alpha and
    beta one-body blocks, then the core energy, each terminated by a
    0.0 0 0 0 0 separator record."""
    n = h_a.shape[0]
    sep = f"{_fmt(0.0)} {0:4d} {0:4d} {0:4d} {0:4d}"
    lines = [
        f"&FCI NORB={n},NELEC={n_elec},MS2={ms2},IUHF=1,",
        " ORBSYM=" + ",".join(["1"] * n) + ",",
        " ISYM=1,",
        "&END",
    ]
    _two_body_lines(g_aa, lines)
    lines.append(sep)
    _two_body_lines(g_bb, lines)
    lines.append(sep)
    _pair_block_lines(g_ab, lines)
    lines.append(sep)
    _one_body_lines(h_a, lines)
    lines.append(sep)
    _one_body_lines(h_b, lines)
    lines.append(sep)
    lines.append(f"{_fmt(e_core)} {0:4d} {0:4d} {0:4d} {0:4d}")
    path.write_text("\n".join(lines) + "\n")


def write_grid_file(path: Path, weights: np.ndarray, mo_values: np.ndarray) -> None:
    n_points, n_orb = mo_values.shape
    with open(path, "wb") as fh:
        fh.write(f"ASQEM-GRID 1 {n_points} {n_orb}\n".encode("ascii"))
        fh.write(np.ascontiguousarray(weights, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(mo_values, dtype="<f8").tobytes())


def sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_manifest(directory: Path, manifest: dict) -> None:
    files = sorted(
        p.name for p in directory.iterdir() if p.name != "manifest.json"
    )
    manifest["checksums"] = {name: sha256(directory / name) for name in files}
    (directory / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n"
    )
