"""Fermion-to-qubit mappings: Jordan-Wigner and parity, with the parity
two-qubit reduction.

With block-ordered spin orbitals (alpha block then beta block), the parity
basis stores cumulative occupation parities, so qubit m-1 (m spin orbitals
per block boundary) carries the total alpha parity and qubit n-1 the total
particle parity.  Both are conserved by particle- and spin-conserving
operators and can be projected onto their sector eigenvalues and removed,
leaving n-2 qubits.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .fermion import FermionOperator
from .pauli import PauliOperator

__all__ = [
    "MappingConfig",
    "map_jordan_wigner",
    "map_parity",
    "map_operator",
    "encode_occupation",
    "hartree_fock_occupation",
    "sector_basis",
]


@dataclass(frozen=True)
class MappingConfig:
    """How fermionic operators become qubit operators for one active space."""

    scheme: str  # "jw" | "parity"
    n_modes: int
    reduce_two_qubits: bool = False
    n_alpha: int | None = None
    n_beta: int | None = None

    def __post_init__(self):
        if self.scheme not in ("jw", "parity"):
            raise ValueError(f"unknown mapping scheme {self.scheme!r}")
        if self.reduce_two_qubits:
            if self.scheme != "parity":
                raise ValueError("two-qubit reduction applies to the parity mapping")
            if self.n_alpha is None or self.n_beta is None:
                raise ValueError("two-qubit reduction needs declared n_alpha, n_beta")
            if self.n_modes % 2 != 0:
                raise ValueError("block-ordered spin orbitals imply even mode count")

    @property
    def n_qubits(self) -> int:
        return self.n_modes - 2 if self.reduce_two_qubits else self.n_modes


@lru_cache(maxsize=4096)
def _jw_factor(mode: int, dag: bool, n_modes: int) -> PauliOperator:
    chain = (1 << mode) - 1  # Z string below the mode
    x = 1 << mode
    sign = -0.5j if dag else 0.5j
    return PauliOperator(n_modes, {(x, chain): 0.5, (x, chain | x): sign})


@lru_cache(maxsize=4096)
def _parity_factor(mode: int, dag: bool, n_modes: int) -> PauliOperator:
    # a+_j = 1/2 (Z_{j-1} X_j - i Y_j) X_{j+1} ... X_{n-1}
    x_tail = ((1 << n_modes) - 1) & ~((1 << mode) - 1)  # X on mode..n-1
    z_prev = (1 << (mode - 1)) if mode > 0 else 0
    sign = -0.5j if dag else 0.5j
    return PauliOperator(
        n_modes, {(x_tail, z_prev): 0.5, (x_tail, 1 << mode): sign}
    )


def map_operator(op: FermionOperator, config: MappingConfig) -> PauliOperator:
    """Map a fermionic operator to qubits per ``config``."""
    if op.n_modes != config.n_modes:
        raise ValueError("operator and mapping mode counts differ")
    factor = _jw_factor if config.scheme == "jw" else _parity_factor
    out = PauliOperator.zero(config.n_modes)
    acc = out._terms
    for ops, coeff in op.terms.items():
        prod = PauliOperator.identity(config.n_modes, coeff)
        for mode, dag in ops:
            prod = prod * factor(mode, bool(dag), config.n_modes)
        for key, c in prod._terms.items():
            acc[key] = acc.get(key, 0.0) + c
    out.prune()
    if config.reduce_two_qubits:
        out = _reduce_two_qubits(out, config)
    return out


def map_jordan_wigner(op: FermionOperator) -> PauliOperator:
    return map_operator(op, MappingConfig("jw", op.n_modes))


def map_parity(
    op: FermionOperator,
    reduce_two_qubits: bool = False,
    n_alpha: int | None = None,
    n_beta: int | None = None,
) -> PauliOperator:
    cfg = MappingConfig("parity", op.n_modes, reduce_two_qubits, n_alpha, n_beta)
    return map_operator(op, cfg)


def _drop_bits(mask: int, positions: tuple[int, ...]) -> int:
    out, shift = 0, 0
    for q in range(64):
        if q in positions:
            continue
        out |= ((mask >> q) & 1) << shift
        shift += 1
    return out


def _reduce_two_qubits(op: PauliOperator, config: MappingConfig) -> PauliOperator:
    n = config.n_modes
    pos_alpha, pos_last = n // 2 - 1, n - 1
    eig_alpha = -1.0 if config.n_alpha % 2 else 1.0
    eig_total = -1.0 if (config.n_alpha + config.n_beta) % 2 else 1.0
    drop = (pos_alpha, pos_last)
    terms: dict[tuple[int, int], complex] = {}
    for x, z, c in op.terms():
        for pos, eig in ((pos_alpha, eig_alpha), (pos_last, eig_total)):
            if (x >> pos) & 1:
                raise ValueError(
                    "operator does not conserve the parity sector; cannot reduce"
                )
            if (z >> pos) & 1:
                c = c * eig
        key = (_drop_bits(x, drop), _drop_bits(z, drop))
        terms[key] = terms.get(key, 0.0) + c
    return PauliOperator(n - 2, terms).prune()


# ---------------------------------------------------------------------------
# basis-state encodings

def encode_occupation(occ_mask: int, config: MappingConfig) -> int:
    """Computational-basis index of an occupation-number state under the mapping."""
    n = config.n_modes
    if config.scheme == "jw":
        return occ_mask
    bits = 0
    parity = 0
    for j in range(n):
        parity ^= (occ_mask >> j) & 1
        bits |= parity << j
    if not config.reduce_two_qubits:
        return bits
    pos_alpha, pos_last = n // 2 - 1, n - 1
    exp_alpha = config.n_alpha % 2
    exp_total = (config.n_alpha + config.n_beta) % 2
    if ((bits >> pos_alpha) & 1) != exp_alpha or ((bits >> pos_last) & 1) != exp_total:
        raise ValueError("occupation lies outside the declared parity sector")
    return _drop_bits(bits, (pos_alpha, pos_last))


def hartree_fock_occupation(n_modes: int, n_alpha: int, n_beta: int) -> int:
    """Occupation bitmask of the lowest-orbital reference determinant."""
    m = n_modes // 2
    occ = 0
    for i in range(n_alpha):
        occ |= 1 << i
    for i in range(n_beta):
        occ |= 1 << (m + i)
    return occ


def sector_basis(config: MappingConfig, n_alpha: int, n_beta: int) -> np.ndarray:
    """Sorted basis indices of the (n_alpha, n_beta) particle sector."""
    m = config.n_modes // 2
    out = []
    for occ_a in combinations(range(m), n_alpha):
        mask_a = sum(1 << i for i in occ_a)
        for occ_b in combinations(range(m), n_beta):
            mask = mask_a + sum(1 << (m + i) for i in occ_b)
            out.append(encode_occupation(mask, config))
    basis = np.array(sorted(out), dtype=np.uint64)
    if len(set(out)) != len(out):
        raise RuntimeError("sector encoding collision")
    return basis
