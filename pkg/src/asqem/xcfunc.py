"""Local-density exchange-correlation functionals, full-range and
short-range (complement of the erf long-range interaction).

All evaluators take a density array (bohr^-3) and return the pair
``(e_xc, v_xc)`` where e_xc is the energy density (Hartree/bohr^3, so the
energy is ``sum_k w_k e_xc_k``) and v_xc = d(e_xc)/d(rho) the potential.

Full-range pieces: Slater exchange and VWN5 correlation.  The short-range
exchange for the erf split has the closed form

    eps_x^sr(rho, mu) = eps_x^lda(rho) * F(u),   u = k_F^2 / mu^2

with F the attenuation profile evaluated by a factorially convergent series
for small u and the explicit erf/exp expression for large u (both branches
overlap around u ~ 10).  Short-range correlation follows the
Paziani-Moroni-Gori-Giorgi-Bachelet parametrization of the long-range
uniform-gas correlation energy, taken as the complement of the full-range
correlation; spin-unpolarized form only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import erf

__all__ = [
    "slater_exchange",
    "vwn5_correlation",
    "sr_exchange_erf",
    "sr_correlation_erf",
    "LdaVwn",
    "SrLdaErf",
    "TabulatedXc",
]

RHO_FLOOR = 1e-12
_CX = 0.75 * (3.0 / np.pi) ** (1.0 / 3.0)          # Slater coefficient
_KF = (3.0 * np.pi ** 2) ** (1.0 / 3.0)            # k_F = _KF * rho^(1/3)


# ---------------------------------------------------------------------------
# full-range LDA

def slater_exchange(rho: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    rho = np.asarray(rho, dtype=float)
    r13 = np.cbrt(rho)
    eps = -_CX * r13
    return eps * rho, (4.0 / 3.0) * eps


VWN_A, VWN_B, VWN_C, VWN_X0 = 0.0310907, 3.72744, 12.9352, -0.10498


def _vwn5_eps(rs: np.ndarray) -> np.ndarray:
    x = np.sqrt(rs)
    b, c, x0 = VWN_B, VWN_C, VWN_X0
    q = np.sqrt(4.0 * c - b * b)
    xx = x * x + b * x + c
    xx0 = x0 * x0 + b * x0 + c
    at = np.arctan(q / (2.0 * x + b))
    return VWN_A * (
        np.log(x * x / xx)
        + 2.0 * b / q * at
        - b * x0 / xx0 * (np.log((x - x0) ** 2 / xx) + 2.0 * (b + 2.0 * x0) / q * at)
    )


def vwn5_correlation(rho: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    rho = np.maximum(np.asarray(rho, dtype=float), RHO_FLOOR)
    rs = (3.0 / (4.0 * np.pi * rho)) ** (1.0 / 3.0)
    x = np.sqrt(rs)
    b, c, x0 = VWN_B, VWN_C, VWN_X0
    xx = x * x + b * x + c
    xx0 = x0 * x0 + b * x0 + c
    eps = _vwn5_eps(rs)
    dxdx = 2.0 * x + b
    deps_dx = VWN_A * (
        2.0 / x - dxdx / xx - b / xx
        - b * x0 / xx0 * (2.0 / (x - x0) - dxdx / xx - (b + 2.0 * x0) / xx)
    )
    v = eps - x / 6.0 * deps_dx
    return eps * rho, v


# ---------------------------------------------------------------------------
# short-range exchange (erf complement)

_SERIES_N = 40


def _attenuation_series(u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """F(u) = sum_{n>=1} (-1)^{n+1} 2 u^n / ((n+2)! (2n+1)) and dF/du."""
    f = np.zeros_like(u)
    fu = np.zeros_like(u)
    term = np.ones_like(u)       # u^(n-1) running power
    fact = 2.0                   # (n+2)! starts at 3! = 6 for n=1
    for n in range(1, _SERIES_N + 1):
        fact = fact * (n + 2)
        coeff = 2.0 / (fact * (2 * n + 1))
        sign = 1.0 if n % 2 == 1 else -1.0
        fu += sign * coeff * n * term
        term = term * u
        f += sign * coeff * term
    return f, fu


def _attenuation_direct(u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form F(u) and dF/du, stable for u >~ 1."""
    su = np.sqrt(u)
    eu = np.exp(-u)
    erf_term = erf(su) / su
    bracket = (2.0 * u - 1.0) * eu + 1.0
    f = 1.0 + 2.0 / u - (4.0 * np.sqrt(np.pi) / 3.0) * erf_term \
        - (2.0 / (3.0 * u * u)) * bracket
    d_erf = eu / (np.sqrt(np.pi) * u) - erf(su) / (2.0 * u ** 1.5)
    d_last = (-4.0 / (3.0 * u ** 3)) * bracket + (2.0 / (3.0 * u * u)) * (3.0 - 2.0 * u) * eu
    fu = -2.0 / (u * u) - (4.0 * np.sqrt(np.pi) / 3.0) * d_erf - d_last
    return f, fu


def _attenuation(u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    u = np.asarray(u, dtype=float)
    f = np.empty_like(u)
    fu = np.empty_like(u)
    small = u <= 10.0
    if np.any(small):
        f[small], fu[small] = _attenuation_series(u[small])
    if np.any(~small):
        f[~small], fu[~small] = _attenuation_direct(u[~small])
    return f, fu


def sr_exchange_erf(rho: np.ndarray, mu: float) -> tuple[np.ndarray, np.ndarray]:
    """Short-range LDA exchange energy density and potential."""
    rho = np.asarray(rho, dtype=float)
    if mu == 0.0:
        return slater_exchange(rho)
    safe = np.maximum(rho, RHO_FLOOR)
    kf = _KF * np.cbrt(safe)
    u = (kf / mu) ** 2
    f, fu = _attenuation(u)
    eps_lda = -_CX * np.cbrt(safe)
    eps = eps_lda * f
    # v = eps_lda * (4/3 F + 2u/3 F'(u));   u' contributes through rho^(2/3)
    v = eps_lda * ((4.0 / 3.0) * f + (2.0 / 3.0) * u * fu)
    zero = rho < RHO_FLOOR
    e_dens = eps * rho
    e_dens[zero] = 0.0
    v = np.where(zero, 0.0, v)
    return e_dens, v


# ---------------------------------------------------------------------------
# short-range correlation (Paziani et al. parametrization, zeta = 0)

_ADIB = 0.784949
_Q1A, _Q2A, _Q3A = -0.388, 0.676, 0.547
_T1A, _T2A, _T3A = -4.95, 1.0, 0.31
_C0F, _D0F, _E0F, _F0F = 0.0819306, 0.752411, -0.0127713, 0.00185898
_ACOUL = 2.0 * (np.log(2.0) - 1.0) / np.pi ** 2
_A2Q, _C2Q, _D2Q = 5.84605, 3.91744, 3.44851
_B2Q = _D2Q - 3.0 / (2.0 * np.pi * _ACOUL) * (4.0 / (9.0 * np.pi)) ** (1.0 / 3.0)
_CF = (9.0 * np.pi / 4.0) ** (1.0 / 3.0)


def _on_top_g0(rs: np.ndarray) -> np.ndarray:
    poly = (
        1.0
        - (0.7317 - _D0F) * rs
        + _C0F * rs ** 2
        + _E0F * rs ** 3
        + _F0F * rs ** 4
    )
    return 0.5 * poly * np.exp(-_D0F * rs)


def _dpol(rs: np.ndarray) -> np.ndarray:
    return (
        (2.0 ** (5.0 / 3.0) / 5.0)
        * (_CF ** 2 / rs ** 2)
        * (1.0 + 0.4319 * rs)
        / (1.0 + 0.4319 * rs + 0.04 * rs ** 2)
    )


def _q_rpa(x: np.ndarray) -> np.ndarray:
    num = 1.0 + _A2Q * x + _B2Q * x ** 2 + _C2Q * x ** 3
    den = 1.0 + _A2Q * x + _D2Q * x ** 2
    return _ACOUL * np.log(num / den)


def _eps_c_lr(rs: np.ndarray, mu: float, ec_full: np.ndarray) -> np.ndarray:
    """Long-range correlation energy per particle of the uniform gas."""
    b0 = _ADIB * rs
    g0 = _on_top_g0(rs)
    d2anti = (_Q1A * rs + _Q2A * rs ** 2) * np.exp(-_Q3A * rs) / rs ** 2
    d3anti = (_T1A * rs + _T2A * rs ** 2) * np.exp(-_T3A * rs) / rs ** 3
    coe2 = -3.0 / (8.0 * rs ** 3) * (g0 - 0.5)
    coe3 = -g0 / (np.sqrt(2.0 * np.pi) * rs ** 3)
    dpol_term = 0.5 * _dpol(2.0 ** (1.0 / 3.0) * rs)
    coe4 = -9.0 / (64.0 * rs ** 3) * (
        dpol_term + d2anti - _CF ** 2 / 10.0 * 2.0 / rs ** 2
    )
    coe5 = -9.0 / (40.0 * np.sqrt(2.0 * np.pi) * rs ** 3) * (dpol_term + d3anti)
    a1 = 4.0 * b0 ** 6 * coe3 + b0 ** 8 * coe5
    a2 = 4.0 * b0 ** 6 * coe2 + b0 ** 8 * coe4 + 6.0 * b0 ** 4 * ec_full
    a3 = b0 ** 8 * coe3
    a4 = b0 ** 6 * (b0 ** 2 * coe2 + 4.0 * ec_full)
    a5 = b0 ** 8 * ec_full
    q = _q_rpa(mu * np.sqrt(rs))
    return (
        q + a1 * mu ** 3 + a2 * mu ** 4 + a3 * mu ** 5 + a4 * mu ** 6 + a5 * mu ** 8
    ) / (1.0 + b0 ** 2 * mu ** 2) ** 4


def _eps_c_sr(rho: np.ndarray, mu: float) -> np.ndarray:
    rs = (3.0 / (4.0 * np.pi * rho)) ** (1.0 / 3.0)
    ec = _vwn5_eps(rs)
    if mu == 0.0:
        return ec
    return ec - _eps_c_lr(rs, mu, ec)


def sr_correlation_erf(rho: np.ndarray, mu: float) -> tuple[np.ndarray, np.ndarray]:
    """Short-range correlation energy density and potential.

    The potential comes from a central difference of eps(rho) (the
    parametrization's rs-derivative has no tidy closed form).
    """
    rho = np.asarray(rho, dtype=float)
    safe = np.maximum(rho, RHO_FLOOR)
    eps = _eps_c_sr(safe, mu)
    h = 1e-6
    eps_p = _eps_c_sr(safe * (1.0 + h), mu)
    eps_m = _eps_c_sr(safe * (1.0 - h), mu)
    deps_drho = (eps_p - eps_m) / (2.0 * h * safe)
    v = eps + safe * deps_drho
    zero = rho < RHO_FLOOR
    e_dens = np.where(zero, 0.0, eps * rho)
    v = np.where(zero, 0.0, v)
    return e_dens, v


# ---------------------------------------------------------------------------
# functional objects

@dataclass(frozen=True)
class LdaVwn:
    """Full-range Slater exchange + VWN5 correlation (mu-independent)."""

    name: str = "lda_vwn"
    mu: float = 0.0

    def evaluate(self, rho: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        rho = np.asarray(rho, dtype=float)
        ex, vx = slater_exchange(np.maximum(rho, 0.0))
        ec, vc = vwn5_correlation(rho)
        zero = rho < RHO_FLOOR
        e = np.where(zero, 0.0, ex + ec)
        v = np.where(zero, 0.0, vx + vc)
        return e, v


@dataclass(frozen=True)
class SrLdaErf:
    """Short-range erf-complement LDA (Toulouse exchange, Paziani correlation)."""

    mu: float
    name: str = "sr_lda_erf"

    def evaluate(self, rho: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        ex, vx = sr_exchange_erf(rho, self.mu)
        ec, vc = sr_correlation_erf(rho, self.mu)
        e = ex + ec
        v = vx + vc
        if not (np.all(np.isfinite(e)) and np.all(np.isfinite(v))):
            raise FloatingPointError(
                "short-range functional produced non-finite values "
                "(density outside the parametrization domain)"
            )
        return e, v


class TabulatedXc:
    """Interpolating functional from a table of (rho, e_xc, v_xc) samples.

    Cross-validation hook: lets an externally tabulated short-range
    functional stand in for the built-in parametrization.  Interpolation is
    linear in log(rho).
    """

    def __init__(self, rho: np.ndarray, e_xc: np.ndarray, v_xc: np.ndarray,
                 mu: float = 0.0, name: str = "tabulated"):
        rho = np.asarray(rho, dtype=float)
        if np.any(rho <= 0) or np.any(np.diff(rho) <= 0):
            raise ValueError("table densities must be positive and increasing")
        self._log_rho = np.log(rho)
        self._e = np.asarray(e_xc, dtype=float)
        self._v = np.asarray(v_xc, dtype=float)
        self.mu = mu
        self.name = name

    @classmethod
    def from_json(cls, path) -> "TabulatedXc":
        import json

        data = json.loads(open(path).read())
        return cls(
            np.array(data["rho"]), np.array(data["e_xc"]), np.array(data["v_xc"]),
            mu=float(data.get("mu", 0.0)), name=data.get("name", "tabulated"),
        )

    def evaluate(self, rho: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        rho = np.asarray(rho, dtype=float)
        safe = np.log(np.maximum(rho, RHO_FLOOR))
        e = np.interp(safe, self._log_rho, self._e)
        v = np.interp(safe, self._log_rho, self._v)
        zero = rho < RHO_FLOOR
        return np.where(zero, 0.0, e), np.where(zero, 0.0, v)
