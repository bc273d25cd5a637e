"""Sparse Pauli-string algebra.

A term is keyed by two integer bit masks (x, z): bit q of ``x`` set means X
or Y on qubit q, bit q of ``z`` set means Z or Y; Y is x&z.  The stored
coefficient refers to the Hermitian string with Y factors included, i.e.
the operator is ``coeff * i^popcount(x&z) * X^x Z^z``.  Hermitian operators
therefore carry real coefficients.

Qubit 0 is the rightmost bit of the masks and the leftmost character of a
textual label.
"""

from __future__ import annotations

import numpy as np

__all__ = ["PauliOperator"]

PRUNE_TOL = 1e-12
HERMITICITY_TOL = 1e-12


def _popcount(v: int) -> int:
    return bin(v).count("1")


def _term_phase(x1: int, z1: int, x2: int, z2: int) -> complex:
    """Phase of P(x1,z1) * P(x2,z2) relative to the canonical product string."""
    c1 = _popcount(x1 & z1)
    c2 = _popcount(x2 & z2)
    c3 = _popcount((x1 ^ x2) & (z1 ^ z2))
    sign = -1.0 if _popcount(z1 & x2) % 2 else 1.0
    return sign * (1j) ** ((c1 + c2 - c3) % 4)


class PauliOperator:
    """Weighted sum of Pauli strings on a fixed-width qubit register."""

    __slots__ = ("n_qubits", "_terms")

    def __init__(self, n_qubits: int, terms: dict | None = None):
        if n_qubits < 0:
            raise ValueError("negative qubit count")
        self.n_qubits = n_qubits
        self._terms: dict[tuple[int, int], complex] = dict(terms or {})

    # -- construction -----------------------------------------------------
    @classmethod
    def identity(cls, n_qubits: int, coeff: complex = 1.0) -> "PauliOperator":
        return cls(n_qubits, {(0, 0): coeff})

    @classmethod
    def zero(cls, n_qubits: int) -> "PauliOperator":
        return cls(n_qubits, {})

    @classmethod
    def from_label(cls, label: str, coeff: complex = 1.0) -> "PauliOperator":
        x = z = 0
        for q, ch in enumerate(label.upper()):
            if ch == "X":
                x |= 1 << q
            elif ch == "Y":
                x |= 1 << q
                z |= 1 << q
            elif ch == "Z":
                z |= 1 << q
            elif ch != "I":
                raise ValueError(f"invalid Pauli character {ch!r}")
        return cls(len(label), {(x, z): coeff})

    def label(self, x: int, z: int) -> str:
        out = []
        for q in range(self.n_qubits):
            xb, zb = (x >> q) & 1, (z >> q) & 1
            out.append("IXZY"[xb + 2 * zb])
        return "".join(out)

    # -- bookkeeping -------------------------------------------------------
    @property
    def n_terms(self) -> int:
        return len(self._terms)

    def terms(self):
        """Iterate (x_mask, z_mask, coeff)."""
        for (x, z), c in self._terms.items():
            yield x, z, c

    def coefficient(self, x: int, z: int) -> complex:
        return self._terms.get((x, z), 0.0)

    def copy(self) -> "PauliOperator":
        return PauliOperator(self.n_qubits, dict(self._terms))

    def prune(self, tol: float = PRUNE_TOL) -> "PauliOperator":
        self._terms = {k: c for k, c in self._terms.items() if abs(c) > tol}
        return self

    # -- algebra -----------------------------------------------------------
    def _check_width(self, other: "PauliOperator"):
        if other.n_qubits != self.n_qubits:
            raise ValueError("qubit-width mismatch")

    def __add__(self, other: "PauliOperator") -> "PauliOperator":
        self._check_width(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0.0) + c
        return PauliOperator(self.n_qubits, out).prune(0.0)

    def __sub__(self, other: "PauliOperator") -> "PauliOperator":
        return self + (other * -1.0)

    def __mul__(self, other) -> "PauliOperator":
        if isinstance(other, PauliOperator):
            self._check_width(other)
            out: dict[tuple[int, int], complex] = {}
            for (x1, z1), c1 in self._terms.items():
                for (x2, z2), c2 in other._terms.items():
                    key = (x1 ^ x2, z1 ^ z2)
                    val = c1 * c2 * _term_phase(x1, z1, x2, z2)
                    acc = out.get(key, 0.0) + val
                    out[key] = acc
            op = PauliOperator(self.n_qubits, out)
            return op.prune()
        return PauliOperator(
            self.n_qubits, {k: other * c for k, c in self._terms.items()}
        )

    def __rmul__(self, scalar) -> "PauliOperator":
        return self * scalar

    def adjoint(self) -> "PauliOperator":
        return PauliOperator(
            self.n_qubits, {k: np.conj(c) for k, c in self._terms.items()}
        )

    def hermiticity_defect(self) -> float:
        """Largest imaginary part over coefficients (strings are Hermitian)."""
        if not self._terms:
            return 0.0
        return max(abs(c.imag) if isinstance(c, complex) else 0.0
                   for c in self._terms.values())

    def is_hermitian(self, tol: float = HERMITICITY_TOL) -> bool:
        return self.hermiticity_defect() <= tol

    # -- dense form ---------------------------------------------------------
    def to_matrix(self, max_qubits: int = 16) -> np.ndarray:
        if self.n_qubits > max_qubits:
            raise ValueError(
                f"dense construction limited to {max_qubits} qubits "
                f"(operator has {self.n_qubits})"
            )
        dim = 1 << self.n_qubits
        mat = np.zeros((dim, dim), dtype=complex)
        idx = np.arange(dim, dtype=np.uint64)
        for (x, z), c in self._terms.items():
            phase = c * (1j) ** (_popcount(x & z) % 4)
            if z:
                par = np.bitwise_count(idx & np.uint64(z)).astype(np.int64) & 1
                signs = 1.0 - 2.0 * par
            else:
                signs = np.ones(dim)
            rows = (idx ^ np.uint64(x)).astype(np.int64)
            mat[rows, idx.astype(np.int64)] += phase * signs
        return mat

    # -- arrays for the kernels ---------------------------------------------
    def mask_arrays(self):
        """(xs, zs, coeffs) as NumPy arrays for kernel consumption."""
        n = len(self._terms)
        xs = np.empty(n, dtype=np.uint64)
        zs = np.empty(n, dtype=np.uint64)
        cs = np.empty(n, dtype=complex)
        for i, ((x, z), c) in enumerate(sorted(self._terms.items())):
            xs[i], zs[i], cs[i] = x, z, c
        return xs, zs, cs

    # -- text dump -----------------------------------------------------------
    def dump(self) -> str:
        """One term per line: ``<coeff_real> <coeff_imag> <pauli-string>``."""
        lines = []
        for (x, z), c in sorted(self._terms.items()):
            c = complex(c)
            lines.append(f"{c.real:+.16e} {c.imag:+.16e} {self.label(x, z)}")
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def parse(cls, text: str, n_qubits: int | None = None) -> "PauliOperator":
        terms = {}
        width = n_qubits
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            re_, im_, label = line.split()
            if width is None:
                width = len(label)
            elif len(label) != width:
                raise ValueError("inconsistent Pauli-string widths")
            op = cls.from_label(label)
            ((x, z),) = op._terms.keys()
            terms[(x, z)] = terms.get((x, z), 0.0) + complex(float(re_), float(im_))
        return cls(width or 0, terms)

    def __repr__(self) -> str:
        return f"PauliOperator(n_qubits={self.n_qubits}, n_terms={self.n_terms})"
