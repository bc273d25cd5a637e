"""Hot statevector kernels: compiled (Cython) core with NumPy fallback.

The compiled module is optional; import-time selection keeps the public
surface identical.  ``ASQEM_KERNELS=numpy`` forces the fallback (used by the
benchmark to compare both).
"""

import os

if os.environ.get("ASQEM_KERNELS", "").lower() == "numpy":
    from ._pauli_np import BACKEND, apply_pauli_sum, expectation, sector_matrix_entries
else:
    try:
        from ._pauli_cy import (  # type: ignore[attr-defined]
            BACKEND,
            apply_pauli_sum,
            expectation,
            sector_matrix_entries,
        )
    except ImportError:
        from ._pauli_np import (
            BACKEND,
            apply_pauli_sum,
            expectation,
            sector_matrix_entries,
        )

__all__ = ["BACKEND", "apply_pauli_sum", "expectation", "sector_matrix_entries"]
