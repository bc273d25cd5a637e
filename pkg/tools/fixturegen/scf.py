"""Self-consistent field solvers (RHF, ROHF, RKS/LDA-VWN) and the Becke grid.

Just enough machinery to emit reference fixtures; converges tightly with
DIIS and canonicalizes MO signs so regeneration is bit-stable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import NUCLEAR_CHARGE
from .integrals import AOBasis, Molecule, ao_values, build_ao_basis, compute_integrals

BRAGG_BOHR = {"H": 0.661, "C": 1.323, "N": 1.228, "O": 1.133}


# ---------------------------------------------------------------------------
# LDA exchange-correlation (Slater + VWN5), restricted densities

def slater_exchange(rho):
    c = (3.0 / np.pi) ** (1.0 / 3.0)
    vx = -c * np.cbrt(rho)
    ex = 0.75 * vx * rho
    return ex, vx


VWN_A, VWN_B, VWN_C, VWN_X0 = 0.0310907, 3.72744, 12.9352, -0.10498


def vwn5_correlation(rho):
    rho = np.maximum(rho, 1e-250)
    rs = (3.0 / (4.0 * np.pi * rho)) ** (1.0 / 3.0)
    x = np.sqrt(rs)
    b, c, x0 = VWN_B, VWN_C, VWN_X0
    q = np.sqrt(4.0 * c - b * b)
    xx = x * x + b * x + c
    xx0 = x0 * x0 + b * x0 + c
    atan_term = np.arctan(q / (2.0 * x + b))
    ec = VWN_A * (
        np.log(x * x / xx)
        + 2.0 * b / q * atan_term
        - b * x0 / xx0 * (np.log((x - x0) ** 2 / xx) + 2.0 * (b + 2.0 * x0) / q * atan_term)
    )
    dx = 2.0 * x + b
    de_dx = VWN_A * (
        2.0 / x - dx / xx - b / xx
        - b * x0 / xx0 * (2.0 / (x - x0) - dx / xx - (b + 2.0 * x0) / xx)
    )
    vc = ec - x / 6.0 * de_dx
    return ec * rho, vc


def lda_vwn(rho):
    ex, vx = slater_exchange(rho)
    ec, vc = vwn5_correlation(rho)
    return ex + ec, vx + vc


# ---------------------------------------------------------------------------
# Becke molecular quadrature grid

def _becke_partition(points, coords, i_atom, k_iter=3):
    n_atoms = len(coords)
    if n_atoms == 1:
        return np.ones(points.shape[0])
    dists = np.stack([np.linalg.norm(points - c[None, :], axis=1) for c in coords])
    cell = np.ones((n_atoms, points.shape[0]))
    for a in range(n_atoms):
        for b in range(n_atoms):
            if a == b:
                continue
            r_ab = np.linalg.norm(coords[a] - coords[b])
            mu = (dists[a] - dists[b]) / r_ab
            f = mu
            for _ in range(k_iter):
                f = 1.5 * f - 0.5 * f ** 3
            cell[a] *= 0.5 * (1.0 - f)
    total = cell.sum(axis=0)
    return cell[i_atom] / np.where(total > 0, total, 1.0)


def becke_grid(molecule: Molecule, n_radial=50, n_theta=14, n_phi=28):
    """Molecular integration grid: mapped Gauss-Legendre radial shells times
    a Gauss-Legendre (cos theta) x uniform (phi) product sphere."""
    xs, wx = np.polynomial.legendre.leggauss(n_radial)
    ct, wt = np.polynomial.legendre.leggauss(n_theta)
    phis = 2.0 * np.pi * np.arange(n_phi) / n_phi
    wp = 2.0 * np.pi / n_phi
    st = np.sqrt(1.0 - ct * ct)
    # unit-sphere points and weights
    su = np.stack(
        [
            np.outer(st, np.cos(phis)).ravel(),
            np.outer(st, np.sin(phis)).ravel(),
            np.outer(ct, np.ones(n_phi)).ravel(),
        ],
        axis=1,
    )
    sw = np.outer(wt, np.full(n_phi, wp)).ravel()

    all_pts, all_w = [], []
    for i, (sym, center) in enumerate(zip(molecule.symbols, molecule.coords)):
        rm = BRAGG_BOHR[sym]
        r = rm * (1.0 + xs) / (1.0 - xs)
        jac = 2.0 * rm / (1.0 - xs) ** 2
        w_rad = wx * jac * r * r
        pts = center[None, None, :] + r[:, None, None] * su[None, :, :]
        pts = pts.reshape(-1, 3)
        w = (w_rad[:, None] * sw[None, :]).ravel()
        w *= _becke_partition(pts, molecule.coords, i)
        all_pts.append(pts)
        all_w.append(w)
    points = np.concatenate(all_pts)
    weights = np.concatenate(all_w)
    keep = weights > 1e-16
    return points[keep], weights[keep]


# ---------------------------------------------------------------------------
# SCF drivers

@dataclass
class ScfResult:
    e_total: float
    mo_coeff: np.ndarray      # AO x MO
    mo_energy: np.ndarray
    mo_occ: np.ndarray
    converged: bool
    basis: AOBasis
    scales: np.ndarray
    s: np.ndarray
    h_core: np.ndarray
    eri: np.ndarray


class _Diis:
    def __init__(self, max_vec=8):
        self.f, self.e = [], []
        self.max_vec = max_vec

    def update(self, f, err):
        self.f.append(f.copy())
        self.e.append(err.ravel().copy())
        if len(self.f) > self.max_vec:
            self.f.pop(0)
            self.e.pop(0)
        n = len(self.f)
        if n < 2:
            return f
        b = -np.ones((n + 1, n + 1))
        b[n, n] = 0.0
        for i in range(n):
            for j in range(n):
                b[i, j] = self.e[i] @ self.e[j]
        rhs = np.zeros(n + 1)
        rhs[n] = -1.0
        try:
            c = np.linalg.solve(b, rhs)[:n]
        except np.linalg.LinAlgError:
            return f
        return sum(ci * fi for ci, fi in zip(c, self.f))


def _canonical_signs(c):
    c = c.copy()
    for j in range(c.shape[1]):
        k = int(np.argmax(np.abs(c[:, j])))
        if c[k, j] < 0:
            c[:, j] *= -1.0
    return c


def _prepare(molecule: Molecule, basis_name: str):
    basis = build_ao_basis(molecule, basis_name)
    s, t, v, eri = compute_integrals(basis)
    scales = 1.0 / np.sqrt(np.diag(s))
    s = s * scales[:, None] * scales[None, :]
    t = t * scales[:, None] * scales[None, :]
    v = v * scales[:, None] * scales[None, :]
    eri = np.einsum(
        "pqrs,p,q,r,s->pqrs", eri, scales, scales, scales, scales, optimize=True
    )
    return basis, scales, s, t + v, eri


def _coulomb_exchange(eri, d):
    j = np.einsum("pqrs,rs->pq", eri, d, optimize=True)
    k = np.einsum("prqs,rs->pq", eri, d, optimize=True)
    return j, k


def run_rhf(molecule: Molecule, basis_name: str, max_iter=100, tol=1e-11) -> ScfResult:
    basis, scales, s, h, eri = _prepare(molecule, basis_name)
    n_occ = molecule.n_electrons // 2
    if molecule.n_electrons % 2:
        raise ValueError("RHF needs an even electron count")
    w, xs = np.linalg.eigh(s)
    x = xs @ np.diag(w ** -0.5) @ xs.T
    f = h
    e_old, converged = 0.0, False
    diis = _Diis()
    for _ in range(max_iter):
        e_mo, c_p = np.linalg.eigh(x.T @ f @ x)
        c = x @ c_p
        d = 2.0 * c[:, :n_occ] @ c[:, :n_occ].T
        j, k = _coulomb_exchange(eri, d)
        f_new = h + j - 0.5 * k
        e_elec = 0.5 * np.sum(d * (h + f_new))
        err = x.T @ (f_new @ d @ s - s @ d @ f_new) @ x
        f = diis.update(f_new, err)
        if abs(e_elec - e_old) < tol and np.max(np.abs(err)) < 1e-7:
            converged = True
            break
        e_old = e_elec
    e_mo, c_p = np.linalg.eigh(x.T @ f @ x)
    c = _canonical_signs(x @ c_p)
    occ = np.zeros(len(e_mo))
    occ[:n_occ] = 2.0
    d = 2.0 * c[:, :n_occ] @ c[:, :n_occ].T
    j, k = _coulomb_exchange(eri, d)
    e_elec = np.sum(d * h) + 0.5 * np.sum(d * (j - 0.5 * k))
    return ScfResult(
        e_total=e_elec + molecule.nuclear_repulsion(),
        mo_coeff=c, mo_energy=e_mo, mo_occ=occ, converged=converged,
        basis=basis, scales=scales, s=s, h_core=h, eri=eri,
    )


def run_rohf(molecule: Molecule, basis_name: str, max_iter=200, tol=1e-11) -> ScfResult:
    basis, scales, s, h, eri = _prepare(molecule, basis_name)
    n_unpaired = molecule.multiplicity - 1
    n_a = (molecule.n_electrons + n_unpaired) // 2
    n_b = molecule.n_electrons - n_a
    w, xs = np.linalg.eigh(s)
    x = xs @ np.diag(w ** -0.5) @ xs.T
    e_mo, c_p = np.linalg.eigh(x.T @ h @ x)
    c = x @ c_p
    e_old, converged = 0.0, False
    diis = _Diis()
    for _ in range(max_iter):
        da = c[:, :n_a] @ c[:, :n_a].T
        db = c[:, :n_b] @ c[:, :n_b].T
        j, _ = _coulomb_exchange(eri, da + db)
        ka = np.einsum("prqs,rs->pq", eri, da, optimize=True)
        kb = np.einsum("prqs,rs->pq", eri, db, optimize=True)
        fa = h + j - ka
        fb = h + j - kb
        e_elec = 0.5 * (np.sum(da * (h + fa)) + np.sum(db * (h + fb)))
        # Roothaan effective Fock in the current MO basis
        fa_mo = c.T @ fa @ c
        fb_mo = c.T @ fb @ c
        fc = 0.5 * (fa_mo + fb_mo)
        r = fc.copy()
        co, op, vi = slice(0, n_b), slice(n_b, n_a), slice(n_a, None)
        r[co, op] = fb_mo[co, op]
        r[op, co] = fb_mo[op, co]
        r[op, vi] = fa_mo[op, vi]
        r[vi, op] = fa_mo[vi, op]
        f_eff = np.linalg.solve(c.T, r) @ np.linalg.inv(c)
        err = x.T @ (f_eff @ (da + db) @ s - s @ (da + db) @ f_eff) @ x
        f_eff = diis.update(f_eff, err)
        e_mo, c_p = np.linalg.eigh(x.T @ f_eff @ x)
        c = x @ c_p
        if abs(e_elec - e_old) < tol and np.max(np.abs(err)) < 1e-7:
            converged = True
            break
        e_old = e_elec
    c = _canonical_signs(c)
    occ = np.zeros(c.shape[1])
    occ[:n_b] = 2.0
    occ[n_b:n_a] = 1.0
    return ScfResult(
        e_total=e_old + molecule.nuclear_repulsion(),
        mo_coeff=c, mo_energy=e_mo, mo_occ=occ, converged=converged,
        basis=basis, scales=scales, s=s, h_core=h, eri=eri,
    )


@dataclass
class UhfResult:
    e_total: float
    mo_coeff: tuple[np.ndarray, np.ndarray]
    mo_energy: tuple[np.ndarray, np.ndarray]
    mo_occ: tuple[np.ndarray, np.ndarray]
    converged: bool
    basis: AOBasis
    scales: np.ndarray
    s: np.ndarray
    h_core: np.ndarray
    eri: np.ndarray


def run_uhf(molecule: Molecule, basis_name: str, max_iter=300, tol=1e-11) -> UhfResult:
    """Unrestricted HF, started from the ROHF solution for stability."""
    rohf = run_rohf(molecule, basis_name)
    basis, scales, s, h, eri = (
        rohf.basis, rohf.scales, rohf.s, rohf.h_core, rohf.eri,
    )
    n_unpaired = molecule.multiplicity - 1
    n_a = (molecule.n_electrons + n_unpaired) // 2
    n_b = molecule.n_electrons - n_a
    w, xs = np.linalg.eigh(s)
    x = xs @ np.diag(w ** -0.5) @ xs.T
    ca = cb = rohf.mo_coeff
    e_old, converged = 0.0, False
    diis = _Diis(max_vec=10)
    fa = fb = h
    for _ in range(max_iter):
        da = ca[:, :n_a] @ ca[:, :n_a].T
        db = cb[:, :n_b] @ cb[:, :n_b].T
        j = np.einsum("pqrs,rs->pq", eri, da + db, optimize=True)
        ka = np.einsum("prqs,rs->pq", eri, da, optimize=True)
        kb = np.einsum("prqs,rs->pq", eri, db, optimize=True)
        fa_new, fb_new = h + j - ka, h + j - kb
        e_elec = 0.5 * (np.sum(da * (h + fa_new)) + np.sum(db * (h + fb_new)))
        err = np.concatenate(
            [
                (x.T @ (fa_new @ da @ s - s @ da @ fa_new) @ x).ravel(),
                (x.T @ (fb_new @ db @ s - s @ db @ fb_new) @ x).ravel(),
            ]
        )
        packed = diis.update(
            np.concatenate([fa_new.ravel(), fb_new.ravel()]), err
        )
        fa = packed[: h.size].reshape(h.shape)
        fb = packed[h.size:].reshape(h.shape)
        ea, ua = np.linalg.eigh(x.T @ fa @ x)
        eb, ub = np.linalg.eigh(x.T @ fb @ x)
        ca, cb = x @ ua, x @ ub
        if abs(e_elec - e_old) < tol and np.max(np.abs(err)) < 1e-7:
            converged = True
            break
        e_old = e_elec
    ca, cb = _canonical_signs(ca), _canonical_signs(cb)
    occ_a = np.zeros(ca.shape[1])
    occ_b = np.zeros(cb.shape[1])
    occ_a[:n_a] = 1.0
    occ_b[:n_b] = 1.0
    da = ca[:, :n_a] @ ca[:, :n_a].T
    db = cb[:, :n_b] @ cb[:, :n_b].T
    j = np.einsum("pqrs,rs->pq", eri, da + db, optimize=True)
    ka = np.einsum("prqs,rs->pq", eri, da, optimize=True)
    kb = np.einsum("prqs,rs->pq", eri, db, optimize=True)
    e_elec = 0.5 * (np.sum(da * (h + h + j - ka)) + np.sum(db * (h + h + j - kb)))
    return UhfResult(
        e_total=e_elec + molecule.nuclear_repulsion(),
        mo_coeff=(ca, cb), mo_energy=(ea, eb), mo_occ=(occ_a, occ_b),
        converged=converged, basis=basis, scales=scales, s=s, h_core=h, eri=eri,
    )


def uhf_mo_integrals(res: UhfResult):
    """Per-spin MO integrals (h_a, h_b, g_aa, g_bb, g_ab) for UHF orbitals."""
    ca, cb = res.mo_coeff
    h_a = ca.T @ res.h_core @ ca
    h_b = cb.T @ res.h_core @ cb
    g_aa = np.einsum("pi,qj,rk,sl,pqrs->ijkl", ca, ca, ca, ca, res.eri, optimize=True)
    g_bb = np.einsum("pi,qj,rk,sl,pqrs->ijkl", cb, cb, cb, cb, res.eri, optimize=True)
    g_ab = np.einsum("pi,qj,rk,sl,pqrs->ijkl", ca, ca, cb, cb, res.eri, optimize=True)
    return h_a, h_b, g_aa, g_bb, g_ab


def run_rks_lda(
    molecule: Molecule,
    basis_name: str,
    grid_points=None,
    grid_weights=None,
    max_iter=200,
    tol=1e-10,
) -> tuple[ScfResult, np.ndarray, np.ndarray, np.ndarray]:
    """Restricted Kohn-Sham with the Slater+VWN5 functional.

    Returns (result, grid points, grid weights, AO values on grid).
    """
    basis, scales, s, h, eri = _prepare(molecule, basis_name)
    if grid_points is None:
        grid_points, grid_weights = becke_grid(molecule)
    ao = ao_values(basis, grid_points, scales)
    wao = grid_weights[:, None] * ao
    n_occ = molecule.n_electrons // 2
    w, xs = np.linalg.eigh(s)
    x = xs @ np.diag(w ** -0.5) @ xs.T
    f = h
    e_old, converged = 0.0, False
    diis = _Diis()
    for _ in range(max_iter):
        e_mo, c_p = np.linalg.eigh(x.T @ f @ x)
        c = x @ c_p
        d = 2.0 * c[:, :n_occ] @ c[:, :n_occ].T
        rho = np.einsum("kp,pq,kq->k", ao, d, ao, optimize=True)
        rho = np.maximum(rho, 0.0)
        exc_dens, vxc = lda_vwn(rho)
        e_xc = grid_weights @ exc_dens
        v_mat = ao.T @ (vxc[:, None] * wao)
        v_mat = 0.5 * (v_mat + v_mat.T)
        j = np.einsum("pqrs,rs->pq", eri, d, optimize=True)
        f_new = h + j + v_mat
        e_elec = np.sum(d * h) + 0.5 * np.sum(d * j) + e_xc
        err = x.T @ (f_new @ d @ s - s @ d @ f_new) @ x
        f = diis.update(f_new, err)
        if abs(e_elec - e_old) < tol and np.max(np.abs(err)) < 1e-6:
            converged = True
            break
        e_old = e_elec
    e_mo, c_p = np.linalg.eigh(x.T @ f @ x)
    c = _canonical_signs(x @ c_p)
    occ = np.zeros(len(e_mo))
    occ[:n_occ] = 2.0
    d = 2.0 * c[:, :n_occ] @ c[:, :n_occ].T
    rho = np.maximum(np.einsum("kp,pq,kq->k", ao, d, ao, optimize=True), 0.0)
    exc_dens, _ = lda_vwn(rho)
    j = np.einsum("pqrs,rs->pq", eri, d, optimize=True)
    e_elec = np.sum(d * h) + 0.5 * np.sum(d * j) + grid_weights @ exc_dens
    result = ScfResult(
        e_total=e_elec + molecule.nuclear_repulsion(),
        mo_coeff=c, mo_energy=e_mo, mo_occ=occ, converged=converged,
        basis=basis, scales=scales, s=s, h_core=h, eri=eri,
    )
    return result, grid_points, grid_weights, ao


def mo_integrals(res: ScfResult, eri_ao: np.ndarray | None = None):
    """Transform core Hamiltonian and ERI to the MO basis."""
    c = res.mo_coeff
    h_mo = c.T @ res.h_core @ c
    eri = res.eri if eri_ao is None else eri_ao
    eri_mo = np.einsum("pi,qj,rk,sl,pqrs->ijkl", c, c, c, c, eri, optimize=True)
    return h_mo, eri_mo
