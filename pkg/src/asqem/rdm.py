"""Active-space 1- and 2-RDM extraction from statevectors.

Expectation values of mapped excitation operators; the mapped operators are
cached per (active width, mapping) since the self-consistent loop extracts
RDMs with identical structure every iteration.
"""

from __future__ import annotations

import numpy as np

from .fermion import FermionOperator
from .integrals import DensityMatrix, TwoParticleDensityMatrix
from .mappings import MappingConfig, map_operator
from .statevector import apply_operator

__all__ = ["extract_rdms", "extract_rdms_unrestricted"]

IMAG_TOL = 1e-8

_one_body_cache: dict = {}
_two_body_cache: dict = {}


class _Expectation:
    """Expectation evaluator; uses the particle-sector restriction when the
    state is supported on a known sector basis (excitation operators
    conserve the sector, so the restriction is exact)."""

    def __init__(self, state: np.ndarray, sector: np.ndarray | None):
        self.state = state
        self.sector = sector
        if sector is not None:
            self.psi = state[sector.astype(np.int64)]

    def __call__(self, op) -> complex:
        if self.sector is None:
            return complex(np.vdot(self.state, apply_operator(op, self.state)))
        from .exact import operator_matrix

        mat = operator_matrix(op, self.sector)
        return complex(np.vdot(self.psi, mat @ self.psi))


def _pair_index(u: int, v: int, m: int) -> int:
    return u * m + v


def _one_body_ops(m: int, config: MappingConfig):
    key = (m, config)
    ops = _one_body_cache.get(key)
    if ops is None:
        ops = {}
        for u in range(m):
            for v in range(u, m):
                fop = FermionOperator(2 * m)
                fop.add_term(((u, True), (v, False)), 1.0)
                fop.add_term(((u + m, True), (v + m, False)), 1.0)
                ops[(u, v)] = map_operator(fop, config)
        _one_body_cache[key] = ops
    return ops


def _two_body_ops(m: int, config: MappingConfig):
    key = (m, config)
    ops = _two_body_cache.get(key)
    if ops is None:
        ops = {}
        for u in range(m):
            for v in range(m):
                p1 = _pair_index(u, v, m)
                for x in range(m):
                    for y in range(m):
                        if _pair_index(x, y, m) < p1:
                            continue
                        fop = FermionOperator(2 * m)
                        for su in (0, m):
                            for sx in (0, m):
                                fop.add_term(
                                    (
                                        (u + su, True),
                                        (x + sx, True),
                                        (y + sx, False),
                                        (v + su, False),
                                    ),
                                    1.0,
                                )
                        ops[(u, v, x, y)] = map_operator(fop, config)
        _two_body_cache[key] = ops
    return ops


def extract_rdms(
    state: np.ndarray, n_active: int, config: MappingConfig,
    sector: np.ndarray | None = None,
) -> tuple[DensityMatrix, TwoParticleDensityMatrix]:
    """Spin-summed active-space RDMs of a mapped statevector.

    d[u,v,x,y] = <sum_st a+_us a+_xt a_yt a_vs> in chemist pair ordering,
    exploiting hermiticity and the (uv)<->(xy) pair exchange.
    """
    if state.shape[0] != 1 << config.n_qubits:
        raise ValueError("state does not match the mapping register")
    expval = _Expectation(state, sector)
    m = n_active
    d1 = np.zeros((m, m))
    for (u, v), op in _one_body_ops(m, config).items():
        val = expval(op)
        if abs(val.imag) > IMAG_TOL:
            raise ValueError("1-RDM expectation has a large imaginary part")
        d1[u, v] = d1[v, u] = val.real

    d2 = np.zeros((m, m, m, m))
    for (u, v, x, y), op in _two_body_ops(m, config).items():
        val = expval(op)
        if abs(val.imag) > IMAG_TOL:
            raise ValueError("2-RDM expectation has a large imaginary part")
        d2[u, v, x, y] = val.real
        d2[x, y, u, v] = val.real
    return DensityMatrix(matrix=d1), TwoParticleDensityMatrix(tensor=d2)


def extract_rdms_unrestricted(
    state: np.ndarray, n_active: int, config: MappingConfig,
    sector: np.ndarray | None = None,
) -> tuple[DensityMatrix, TwoParticleDensityMatrix]:
    """Per-spin 1-RDMs and spin-pair-blocked 2-RDM (aa, ab, bb)."""
    if state.shape[0] != 1 << config.n_qubits:
        raise ValueError("state does not match the mapping register")
    expval = _Expectation(state, sector)
    m = n_active

    def spin_d1(offset):
        d = np.zeros((m, m))
        for u in range(m):
            for v in range(u, m):
                fop = FermionOperator(2 * m)
                fop.add_term(((u + offset, True), (v + offset, False)), 1.0)
                val = expval(map_operator(fop, config))
                d[u, v] = d[v, u] = val.real
        return d

    d1a, d1b = spin_d1(0), spin_d1(m)

    def block(su, sx, pair_sym):
        d = np.zeros((m, m, m, m))
        for u in range(m):
            for v in range(m):
                p1 = _pair_index(u, v, m)
                for x in range(m):
                    for y in range(m):
                        if pair_sym and _pair_index(x, y, m) < p1:
                            continue
                        fop = FermionOperator(2 * m)
                        fop.add_term(
                            (
                                (u + su, True),
                                (x + sx, True),
                                (y + sx, False),
                                (v + su, False),
                            ),
                            1.0,
                        )
                        val = expval(map_operator(fop, config)).real
                        d[u, v, x, y] = val
                        if pair_sym:
                            d[x, y, u, v] = val
        return d

    d2aa = block(0, 0, True)
    d2bb = block(m, m, True)
    d2ab = block(0, m, False)
    return (
        DensityMatrix(alpha=d1a, beta=d1b),
        TwoParticleDensityMatrix(aa=d2aa, ab=d2ab, bb=d2bb),
    )
