"""Offline fixture generation tooling (maintainer-only, never run in CI).

Self-contained Gaussian-integral + SCF driver used once to emit the
committed test fixtures: FCIDUMP files over HF or KS orbitals, erf-kernel
long-range sidecars, ASQEM-GRID quadrature files, and reference-energy
manifests.
"""
