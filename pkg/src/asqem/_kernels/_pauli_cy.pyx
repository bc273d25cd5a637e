# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled statevector kernels: single-pass Pauli-sum application,
expectation values, and sector-restricted matrix assembly.

Same contracts as ``_pauli_np``; selected at import when built.
"""

import numpy as np

cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t

cnp.import_array()

BACKEND = "cython"

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef inline double _sign(uint64_t bits) noexcept nogil:
    return -1.0 if (__builtin_popcountll(bits) & 1) else 1.0


cdef inline double complex _iphase(int k) noexcept nogil:
    k &= 3
    if k == 0:
        return 1.0
    if k == 1:
        return 1.0j
    if k == 2:
        return -1.0
    return -1.0j


def apply_pauli_sum(xs, zs, coeffs, state, indices=None):
    """out = (sum_t c_t P_t) |state> over the full register."""
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] xv = np.ascontiguousarray(xs, dtype=np.uint64)
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] zv = np.ascontiguousarray(zs, dtype=np.uint64)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] cv = np.ascontiguousarray(coeffs, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] sv = np.ascontiguousarray(state, dtype=np.complex128)
    cdef Py_ssize_t dim = sv.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.zeros(dim, dtype=np.complex128)
    cdef Py_ssize_t nterms = xv.shape[0]
    cdef Py_ssize_t t, i
    cdef uint64_t x, z
    cdef double complex phase
    with nogil:
        for t in range(nterms):
            x = xv[t]
            z = zv[t]
            phase = cv[t] * _iphase(__builtin_popcountll(x & z))
            if x == 0:
                for i in range(dim):
                    out[i] += phase * _sign((<uint64_t>i) & z) * sv[i]
            else:
                for i in range(dim):
                    out[(<uint64_t>i) ^ x] += phase * _sign((<uint64_t>i) & z) * sv[i]
    return out


def expectation(xs, zs, coeffs, state, indices=None):
    """<state| sum_t c_t P_t |state> in one pass, no temporaries."""
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] xv = np.ascontiguousarray(xs, dtype=np.uint64)
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] zv = np.ascontiguousarray(zs, dtype=np.uint64)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] cv = np.ascontiguousarray(coeffs, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] sv = np.ascontiguousarray(state, dtype=np.complex128)
    cdef Py_ssize_t dim = sv.shape[0]
    cdef Py_ssize_t nterms = xv.shape[0]
    cdef Py_ssize_t t, i
    cdef uint64_t x, z
    cdef double complex phase, acc, term_acc
    acc = 0.0
    with nogil:
        for t in range(nterms):
            x = xv[t]
            z = zv[t]
            phase = cv[t] * _iphase(__builtin_popcountll(x & z))
            term_acc = 0.0
            for i in range(dim):
                term_acc += (
                    sv[(<uint64_t>i) ^ x].conjugate()
                    * _sign((<uint64_t>i) & z)
                    * sv[i]
                )
            acc += phase * term_acc
    return complex(acc)


def sector_matrix_entries(xs, zs, coeffs, sector):
    """COO entries of the operator restricted to a sorted sector basis."""
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] sec = np.ascontiguousarray(sector, dtype=np.uint64)
    cdef Py_ssize_t dim = sec.shape[0]

    groups = {}
    for x, z, c in zip(
        np.asarray(xs, dtype=np.uint64),
        np.asarray(zs, dtype=np.uint64),
        np.asarray(coeffs, dtype=np.complex128),
    ):
        phase = complex(c) * complex(_iphase(__builtin_popcountll(int(x) & int(z))))
        groups.setdefault(int(x), []).append((int(z), phase))

    rows_out, cols_out, data_out = [], [], []
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] gz
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] gp
    cdef cnp.ndarray[cnp.int64_t, ndim=1] rows
    cdef cnp.ndarray[cnp.int64_t, ndim=1] cols
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] data
    cdef Py_ssize_t i, k, nz, count, lo, hi, mid
    cdef uint64_t x_mask, target, b
    cdef double complex val

    for x_key, zl in groups.items():
        x_mask = <uint64_t>x_key
        nz = len(zl)
        gz = np.array([z for z, _ in zl], dtype=np.uint64)
        gp = np.array([p for _, p in zl], dtype=np.complex128)
        rows = np.empty(dim, dtype=np.int64)
        cols = np.empty(dim, dtype=np.int64)
        data = np.empty(dim, dtype=np.complex128)
        count = 0
        with nogil:
            for i in range(dim):
                b = sec[i]
                target = b ^ x_mask
                # binary search for target in the sorted sector
                lo = 0
                hi = dim - 1
                while lo < hi:
                    mid = (lo + hi) >> 1
                    if sec[mid] < target:
                        lo = mid + 1
                    else:
                        hi = mid
                if sec[lo] != target:
                    continue
                val = 0.0
                for k in range(nz):
                    val += gp[k] * _sign(b & gz[k])
                rows[count] = lo
                cols[count] = i
                data[count] = val
                count += 1
        if count:
            rows_out.append(rows[:count].copy())
            cols_out.append(cols[:count].copy())
            data_out.append(data[:count].copy())
    return rows_out, cols_out, data_out
