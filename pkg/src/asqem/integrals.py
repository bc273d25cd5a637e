"""Molecular integral containers, active-space partitions, and density matrices.

All quantities are in Hartree atomic units.  Two-electron integrals use the
chemist (Mulliken) convention ``g[p,q,r,s] = (pq|rs)`` over real spatial
molecular orbitals, with the full 8-fold permutational symmetry

    (pq|rs) = (qp|rs) = (pq|sr) = (qp|sr) = (rs|pq) = (sr|pq) = (rs|qp) = (sr|qp).

Orbital indices are 0-based and ordered by ascending orbital energy.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "OneBodyIntegrals",
    "TwoBodyIntegrals",
    "MolecularSystem",
    "ActiveSpace",
    "DensityMatrix",
    "TwoParticleDensityMatrix",
]

SYMMETRY_TOL = 1e-10


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(a, dtype=float)
    out.setflags(write=False)
    return out


class OneBodyIntegrals:
    """Symmetric one-electron integral matrix h[p,q]."""

    def __init__(self, matrix: np.ndarray):
        matrix = np.asarray(matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError(f"one-body integrals must be square, got {matrix.shape}")
        if not np.all(np.isfinite(matrix)):
            raise ValueError("one-body integrals contain non-finite values")
        if np.max(np.abs(matrix - matrix.T), initial=0.0) > SYMMETRY_TOL:
            raise ValueError("one-body integrals are not symmetric")
        self._m = _frozen(0.5 * (matrix + matrix.T))

    @property
    def n_orbitals(self) -> int:
        return self._m.shape[0]

    @property
    def array(self) -> np.ndarray:
        return self._m

    def h(self, p: int, q: int) -> float:
        return float(self._m[p, q])


class TwoBodyIntegrals:
    """Two-electron integrals (pq|rs) with 8-fold permutational symmetry.

    Stored as a dense rank-4 array; construction symmetrizes the input so
    the accessor is exactly invariant under all eight index permutations.
    With ``pair_symmetric_only`` (used for the alpha-beta block of
    spin-unrestricted orbitals) only the p<->q and r<->s exchanges hold.
    """

    def __init__(self, tensor: np.ndarray, symmetrize: bool = True,
                 pair_symmetric_only: bool = False):
        t = np.asarray(tensor, dtype=float)
        if t.ndim != 4 or len(set(t.shape)) != 1:
            raise ValueError(f"two-body integrals must be rank-4 cubic, got {t.shape}")
        if not np.all(np.isfinite(t)):
            raise ValueError("two-body integrals contain non-finite values")
        self.pair_symmetric_only = pair_symmetric_only
        if symmetrize and pair_symmetric_only:
            t = (
                t
                + t.transpose(1, 0, 2, 3)
                + t.transpose(0, 1, 3, 2)
                + t.transpose(1, 0, 3, 2)
            ) / 4.0
            n = t.shape[0]
            p, q, r, s = np.meshgrid(*([np.arange(n)] * 4), indexing="ij")
            t = t[np.maximum(p, q), np.minimum(p, q),
                  np.maximum(r, s), np.minimum(r, s)]
        elif symmetrize:
            t = (
                t
                + t.transpose(1, 0, 2, 3)
                + t.transpose(0, 1, 3, 2)
                + t.transpose(1, 0, 3, 2)
                + t.transpose(2, 3, 0, 1)
                + t.transpose(3, 2, 0, 1)
                + t.transpose(2, 3, 1, 0)
                + t.transpose(3, 2, 1, 0)
            ) / 8.0
            # gather every element from its canonical slot so the eight
            # permutation images are bitwise identical
            n = t.shape[0]
            p, q, r, s = np.meshgrid(*([np.arange(n)] * 4), indexing="ij")
            a, b = np.maximum(p, q), np.minimum(p, q)
            c, d = np.maximum(r, s), np.minimum(r, s)
            swap = a * (a + 1) // 2 + b < c * (c + 1) // 2 + d
            hi_a = np.where(swap, c, a)
            hi_b = np.where(swap, d, b)
            lo_c = np.where(swap, a, c)
            lo_d = np.where(swap, b, d)
            t = t[hi_a, hi_b, lo_c, lo_d]
        self._t = _frozen(t)

    @property
    def n_orbitals(self) -> int:
        return self._t.shape[0]

    @property
    def array(self) -> np.ndarray:
        return self._t

    def g(self, p: int, q: int, r: int, s: int) -> float:
        return float(self._t[p, q, r, s])

    def __sub__(self, other: "TwoBodyIntegrals") -> "TwoBodyIntegrals":
        return TwoBodyIntegrals(
            self._t - other._t, symmetrize=False,
            pair_symmetric_only=self.pair_symmetric_only,
        )

    def max_symmetry_defect(self) -> float:
        """Largest deviation from 8-fold symmetry (zero after construction)."""
        t = self._t
        perms = [(1, 0, 2, 3), (0, 1, 3, 2), (2, 3, 0, 1), (3, 2, 1, 0)]
        return max(float(np.max(np.abs(t - t.transpose(*p)))) for p in perms)


@dataclass(frozen=True)
class MolecularSystem:
    """An ingested molecular problem: integrals plus electron bookkeeping.

    ``two_body_lr`` holds the long-range (erf-kernel) two-electron integrals
    for a range-separation parameter ``mu``; the short-range complement is
    ``two_body_sr() = two_body - two_body_lr``.
    """

    n_orbitals: int
    n_electrons: int
    n_alpha: int
    n_beta: int
    e_nuclear: float
    one_body: OneBodyIntegrals
    two_body: TwoBodyIntegrals
    two_body_lr: TwoBodyIntegrals | None = None
    mu: float | None = None
    mo_energies: tuple[float, ...] | None = None
    mo_occupations: tuple[float, ...] | None = None
    # spin-unrestricted spatial orbitals: one_body/two_body act as the alpha
    # (alpha-alpha) blocks and the beta and cross blocks live here
    one_body_beta: OneBodyIntegrals | None = None
    two_body_bb: TwoBodyIntegrals | None = None
    two_body_ab: TwoBodyIntegrals | None = None

    def __post_init__(self):
        if self.n_alpha + self.n_beta != self.n_electrons:
            raise ValueError("n_alpha + n_beta must equal n_electrons")
        if not (self.n_alpha >= self.n_beta >= 0):
            raise ValueError("require n_alpha >= n_beta >= 0")
        if self.one_body.n_orbitals != self.n_orbitals:
            raise ValueError("one-body dimension mismatch")
        if self.two_body.n_orbitals != self.n_orbitals:
            raise ValueError("two-body dimension mismatch")
        if self.two_body_lr is not None and self.two_body_lr.n_orbitals != self.n_orbitals:
            raise ValueError("long-range two-body dimension mismatch")
        spin_fields = (self.one_body_beta, self.two_body_bb, self.two_body_ab)
        if any(f is not None for f in spin_fields):
            if any(f is None for f in spin_fields):
                raise ValueError(
                    "spin-resolved integrals need one_body_beta, two_body_bb "
                    "and two_body_ab together"
                )
            for f in spin_fields:
                if f.n_orbitals != self.n_orbitals:
                    raise ValueError("spin-resolved integral dimension mismatch")
        for name in ("mo_energies", "mo_occupations"):
            v = getattr(self, name)
            if v is not None and len(v) != self.n_orbitals:
                raise ValueError(f"{name} must have one entry per orbital")

    @property
    def spin_resolved_integrals(self) -> bool:
        return self.one_body_beta is not None

    def two_body_sr(self) -> TwoBodyIntegrals:
        """Short-range integrals g - g_lr (requires attached LR integrals)."""
        if self.two_body_lr is None:
            raise ValueError("no long-range integrals attached")
        return self.two_body - self.two_body_lr

    def with_lr(self, two_body_lr: TwoBodyIntegrals, mu: float) -> "MolecularSystem":
        from dataclasses import replace

        if two_body_lr.n_orbitals != self.n_orbitals:
            raise ValueError("long-range two-body dimension mismatch")
        return replace(self, two_body_lr=two_body_lr, mu=mu)


def _as_index_tuple(idx: Iterable[int]) -> tuple[int, ...]:
    return tuple(int(i) for i in idx)


@dataclass(frozen=True)
class ActiveSpace:
    """Partition of the spatial orbitals into inactive / active / virtual sets.

    Index conventions follow i,j,k,l for inactive, u,v,x,y for active and
    p,q,r,s for general orbitals.  Inactive orbitals are doubly occupied.
    """

    inactive: tuple[int, ...]
    active: tuple[int, ...]
    virtual_: tuple[int, ...]
    n_active_electrons: int
    n_active_alpha: int

    def __post_init__(self):
        object.__setattr__(self, "inactive", _as_index_tuple(self.inactive))
        object.__setattr__(self, "active", _as_index_tuple(self.active))
        object.__setattr__(self, "virtual_", _as_index_tuple(self.virtual_))
        sets = [set(self.inactive), set(self.active), set(self.virtual_)]
        n_total = sum(len(s) for s in sets)
        union = set().union(*sets)
        if len(union) != n_total:
            raise ValueError("inactive/active/virtual sets must be disjoint")
        if union != set(range(len(union))):
            raise ValueError("index sets must cover 0..n_orbitals-1 without gaps")
        if self.n_active_electrons < 0:
            raise ValueError("negative active electron count")
        n_beta = self.n_active_electrons - self.n_active_alpha
        if self.n_active_alpha > len(self.active) or n_beta > len(self.active):
            raise ValueError("active electrons exceed active orbital capacity")
        if n_beta < 0 or self.n_active_alpha < 0:
            raise ValueError("invalid per-spin active electron split")

    @property
    def n_orbitals(self) -> int:
        return len(self.inactive) + len(self.active) + len(self.virtual_)

    @property
    def n_active_beta(self) -> int:
        return self.n_active_electrons - self.n_active_alpha

    @property
    def n_active_orbitals(self) -> int:
        return len(self.active)

    @classmethod
    def from_counts(
        cls,
        n_orbitals: int,
        n_electrons: int,
        n_active_electrons: int,
        n_active_orbitals: int,
        n_active_alpha: int | None = None,
        n_alpha: int | None = None,
    ) -> "ActiveSpace":
        """Canonical CAS(N_el, N_mo) selection around the Fermi level.

        Inactive orbitals are the lowest-energy MOs; the active window is
        contiguous above them.  ``n_active_alpha`` defaults to the closed-shell
        split, or is inferred from the total spin when ``n_alpha`` is given.
        """
        n_in2 = n_electrons - n_active_electrons
        if n_in2 < 0 or n_in2 % 2 != 0:
            raise ValueError(
                "n_electrons - n_active_electrons must be an even, non-negative "
                "number of inactive electrons"
            )
        n_inactive = n_in2 // 2
        if n_inactive + n_active_orbitals > n_orbitals:
            raise ValueError("active window exceeds orbital space")
        if n_active_alpha is None:
            if n_alpha is not None:
                n_active_alpha = n_alpha - n_inactive
            else:
                if n_active_electrons % 2 != 0:
                    raise ValueError("odd active electron count needs n_active_alpha")
                n_active_alpha = n_active_electrons // 2
        return cls(
            inactive=tuple(range(n_inactive)),
            active=tuple(range(n_inactive, n_inactive + n_active_orbitals)),
            virtual_=tuple(range(n_inactive + n_active_orbitals, n_orbitals)),
            n_active_electrons=n_active_electrons,
            n_active_alpha=n_active_alpha,
        )

    @classmethod
    def from_index_lists(
        cls,
        n_orbitals: int,
        inactive: Sequence[int],
        active: Sequence[int],
        n_active_electrons: int,
        n_active_alpha: int | None = None,
    ) -> "ActiveSpace":
        """Explicit index-list override for non-contiguous active windows."""
        inactive = _as_index_tuple(inactive)
        active = _as_index_tuple(active)
        rest = tuple(sorted(set(range(n_orbitals)) - set(inactive) - set(active)))
        if n_active_alpha is None:
            if n_active_electrons % 2 != 0:
                raise ValueError("odd active electron count needs n_active_alpha")
            n_active_alpha = n_active_electrons // 2
        return cls(inactive, active, rest, n_active_electrons, n_active_alpha)


TRACE_TOL = 1e-8


@dataclass(frozen=True)
class DensityMatrix:
    """One-particle density matrix in the MO basis.

    Either spin-summed (``matrix``) or spin-resolved (``alpha``/``beta``); the
    spin-summed view is always available through ``total``.
    """

    matrix: np.ndarray | None = None
    alpha: np.ndarray | None = None
    beta: np.ndarray | None = None

    def __post_init__(self):
        if self.matrix is None and (self.alpha is None or self.beta is None):
            raise ValueError("need either a spin-summed matrix or both spin blocks")
        for name in ("matrix", "alpha", "beta"):
            m = getattr(self, name)
            if m is None:
                continue
            m = np.asarray(m, dtype=float)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise ValueError(f"{name} block must be square")
            object.__setattr__(self, name, _frozen(m))

    @property
    def spin_resolved(self) -> bool:
        return self.alpha is not None

    @property
    def total(self) -> np.ndarray:
        if self.matrix is not None:
            return self.matrix
        return self.alpha + self.beta

    @property
    def n_orbitals(self) -> int:
        return self.total.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.total))

    def validate(self, n_electrons: float, tol: float = TRACE_TOL) -> None:
        t = self.total
        if np.max(np.abs(t - t.T), initial=0.0) > tol:
            raise ValueError("density matrix is not symmetric")
        if abs(self.trace() - n_electrons) > tol:
            raise ValueError(
                f"density trace {self.trace():.10f} != electron count {n_electrons}"
            )


@dataclass(frozen=True)
class TwoParticleDensityMatrix:
    """Two-particle density matrix d[u,v,x,y] in chemist ordering.

    Normalized so that the electronic energy reads
    ``sum(h*D) + 0.5*sum(g*d)`` and ``sum_x d[u,v,x,x] = (N-1) D[u,v]``.
    Either spin-summed (``tensor``) or per-spin-pair blocks (aa, ab, bb) with
    ``d_ab[u,v,x,y] = <a+_ua a+_xb a_yb a_va>``; the spin-summed view is then
    aa + bb + ab + ba with ``d_ba[u,v,x,y] = d_ab[x,y,u,v]``.
    """

    tensor: np.ndarray | None = None
    aa: np.ndarray | None = None
    ab: np.ndarray | None = None
    bb: np.ndarray | None = None

    def __post_init__(self):
        if self.tensor is None and (self.aa is None or self.ab is None or self.bb is None):
            raise ValueError("need a spin-summed tensor or all three spin blocks")
        for name in ("tensor", "aa", "ab", "bb"):
            t = getattr(self, name)
            if t is None:
                continue
            t = np.asarray(t, dtype=float)
            if t.ndim != 4 or len(set(t.shape)) != 1:
                raise ValueError("2-RDM must be a rank-4 cubic tensor")
            object.__setattr__(self, name, _frozen(t))
        if self.tensor is None:
            total = self.aa + self.bb + self.ab + self.ab.transpose(2, 3, 0, 1)
            object.__setattr__(self, "tensor", _frozen(total))

    @property
    def spin_resolved(self) -> bool:
        return self.aa is not None

    @property
    def n_orbitals(self) -> int:
        return self.tensor.shape[0]

    def pair_exchange_defect(self) -> float:
        t = self.tensor
        return float(np.max(np.abs(t - t.transpose(2, 3, 0, 1))))

    def contraction_defect(self, d1: DensityMatrix, n_electrons: int) -> float:
        """Max deviation of sum_x d[u,v,x,x] from (N-1) D[u,v]."""
        contracted = np.einsum("uvxx->uv", self.tensor)
        return float(np.max(np.abs(contracted - (n_electrons - 1) * d1.total)))

    def validate(self, d1: DensityMatrix, n_electrons: int, tol: float = TRACE_TOL) -> None:
        if self.pair_exchange_defect() > tol:
            raise ValueError("2-RDM is not symmetric under pair exchange")
        if self.contraction_defect(d1, n_electrons) > tol:
            raise ValueError("2-RDM does not contract to the 1-RDM")
