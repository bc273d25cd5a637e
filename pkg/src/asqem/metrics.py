"""Energy-correction quality measures.

epsilon quantifies the fraction of the mean-field -> CCSD energy gap an
embedded calculation recovers:

    epsilon = (E_emb - E_ref) / (E_ccsd - E_ref) * 100   [percent]

with E_ref the HF energy for the HF scheme and the pure-DFT energy for the
DFT scheme.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["ReferenceEnergies", "epsilon_hf", "epsilon_dft"]

DENOMINATOR_FLOOR = 1e-8


@dataclass(frozen=True)
class ReferenceEnergies:
    """Literature / fixture reference energies with provenance strings."""

    e_hf: float | None = None
    e_dft: float | None = None
    e_ccsd: float | None = None
    provenance: dict | None = None

    def __post_init__(self):
        for name in ("e_hf", "e_dft", "e_ccsd"):
            v = getattr(self, name)
            if v is not None and not np.isfinite(v):
                raise ValueError(f"{name} is not finite")

    @classmethod
    def from_manifest(cls, manifest: dict) -> "ReferenceEnergies":
        refs = manifest.get("references", {})

        def get(key):
            entry = refs.get(key)
            return None if entry is None else float(entry["value"])

        provenance = {
            k: v.get("provenance") for k, v in refs.items() if isinstance(v, dict)
        }
        # generator manifests store the driver SCF energy under e_scf as well
        e_hf = get("e_hf")
        e_dft = get("e_dft")
        return cls(e_hf=e_hf, e_dft=e_dft, e_ccsd=get("e_ccsd"), provenance=provenance)


def _epsilon(e_emb: float, e_ref: float | None, e_ccsd: float | None, label: str) -> float:
    if e_ref is None or e_ccsd is None:
        raise ValueError(f"epsilon_{label} needs both {label} and CCSD references")
    denom = e_ccsd - e_ref
    if abs(denom) <= DENOMINATOR_FLOOR:
        raise ZeroDivisionError(
            f"degenerate reference pair: |E_ccsd - E_{label}| <= {DENOMINATOR_FLOOR}"
        )
    return (e_emb - e_ref) / denom * 100.0


def epsilon_hf(e_embedded: float, refs: ReferenceEnergies) -> float:
    """Percentage of the HF -> CCSD correlation gap recovered."""
    return _epsilon(e_embedded, refs.e_hf, refs.e_ccsd, "hf")


def epsilon_dft(e_embedded: float, refs: ReferenceEnergies) -> float:
    """Percentage of the DFT -> CCSD gap recovered (KS-orbital scheme)."""
    return _epsilon(e_embedded, refs.e_dft, refs.e_ccsd, "dft")
