"""McMurchie-Davidson Gaussian integrals: S, T, V_ne, ERI, and erf-ERI.

Works in a cartesian primitive basis; d shells are transformed to the five
real spherical components and every contracted AO is normalized numerically
(orbital energies are invariant under such diagonal rescaling).  The
long-range two-electron integrals use the erf(mu*r12)/r12 kernel via the
attenuated-Boys substitution rho -> rho*mu^2/(rho+mu^2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammainc, gammaln

from .basis import ANGSTROM_TO_BOHR, NUCLEAR_CHARGE, get_shells

__all__ = ["Molecule", "AOBasis", "build_ao_basis", "compute_integrals"]


# ---------------------------------------------------------------------------
# molecule / basis bookkeeping

CART_COMPONENTS = {
    0: [(0, 0, 0)],
    1: [(1, 0, 0), (0, 1, 0), (0, 0, 1)],
    2: [(2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2)],
}

# real spherical d components in terms of cartesian (xx,xy,xz,yy,yz,zz);
# rows: m = -2,-1,0,+1,+2.  Scales are fixed by the numeric normalization.
SPHERICAL_D = np.array(
    [
        [0.0, 1.0, 0.0, 0.0, 0.0, 0.0],   # xy
        [0.0, 0.0, 0.0, 0.0, 1.0, 0.0],   # yz
        [-1.0, 0.0, 0.0, -1.0, 0.0, 2.0],  # 3z^2 - r^2
        [0.0, 0.0, 1.0, 0.0, 0.0, 0.0],   # xz
        [1.0, 0.0, 0.0, -1.0, 0.0, 0.0],  # x^2 - y^2
    ]
)


@dataclass
class Molecule:
    symbols: list[str]
    coords: np.ndarray  # (n_atoms, 3) in bohr
    charge: int = 0
    multiplicity: int = 1

    @classmethod
    def from_angstrom(cls, atoms: list[tuple[str, tuple[float, float, float]]],
                      charge: int = 0, multiplicity: int = 1) -> "Molecule":
        symbols = [a[0] for a in atoms]
        coords = np.array([a[1] for a in atoms], dtype=float) * ANGSTROM_TO_BOHR
        return cls(symbols, coords, charge, multiplicity)

    @property
    def nuclear_charges(self) -> np.ndarray:
        return np.array([NUCLEAR_CHARGE[s] for s in self.symbols], dtype=float)

    @property
    def n_electrons(self) -> int:
        return int(self.nuclear_charges.sum()) - self.charge

    def nuclear_repulsion(self) -> float:
        z = self.nuclear_charges
        e = 0.0
        for i in range(len(z)):
            for j in range(i):
                e += z[i] * z[j] / np.linalg.norm(self.coords[i] - self.coords[j])
        return e


@dataclass
class Shell:
    l: int
    center: np.ndarray
    exps: np.ndarray
    coeffs: np.ndarray  # includes primitive axial normalization


def _primitive_norm(l: int, alpha: np.ndarray) -> np.ndarray:
    """Normalization of the axial cartesian primitive (l,0,0)."""
    dfact = 1.0
    for k in range(2 * l - 1, 0, -2):
        dfact *= k
    return (2.0 * alpha / np.pi) ** 0.75 * (4.0 * alpha) ** (l / 2.0) / np.sqrt(dfact)


@dataclass
class AOBasis:
    molecule: Molecule
    shells: list[Shell]
    cart_slices: list[slice]           # cartesian-component slice per shell
    transform: np.ndarray              # (n_cart, n_ao) cart -> spherical AOs

    @property
    def n_ao(self) -> int:
        return self.transform.shape[1]


def build_ao_basis(molecule: Molecule, basis: str) -> AOBasis:
    shells: list[Shell] = []
    for sym, xyz in zip(molecule.symbols, molecule.coords):
        for l, exps, coeffs in get_shells(sym, basis):
            exps = np.asarray(exps, dtype=float)
            coeffs = np.asarray(coeffs, dtype=float) * _primitive_norm(l, exps)
            shells.append(Shell(l, np.asarray(xyz, dtype=float), exps, coeffs))

    cart_slices = []
    blocks = []
    offset = 0
    n_sph = 0
    for sh in shells:
        ncart = len(CART_COMPONENTS[sh.l])
        cart_slices.append(slice(offset, offset + ncart))
        block = np.eye(ncart) if sh.l < 2 else SPHERICAL_D.T
        blocks.append(block)
        offset += ncart
        n_sph += block.shape[1]

    transform = np.zeros((offset, n_sph))
    r0 = c0 = 0
    for block in blocks:
        transform[r0:r0 + block.shape[0], c0:c0 + block.shape[1]] = block
        r0 += block.shape[0]
        c0 += block.shape[1]
    return AOBasis(molecule, shells, cart_slices, transform)


# ---------------------------------------------------------------------------
# primitive machinery

def boys(n_max: int, t: np.ndarray) -> np.ndarray:
    """Boys functions F_0..F_n_max(t) for an array t; shape (n_max+1, len(t))."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty((n_max + 1, t.size))
    small = t < 1e-12
    ts = np.where(small, 1.0, t)
    n = n_max
    # top order via the regularized incomplete gamma, then downward recursion
    top = np.exp(
        gammaln(n + 0.5) - (n + 0.5) * np.log(ts)
    ) * gammainc(n + 0.5, ts) / 2.0
    out[n] = np.where(small, 1.0 / (2 * n + 1) - t / (2 * n + 3), top)
    emt = np.exp(-t)
    for m in range(n_max - 1, -1, -1):
        val = (2.0 * t * out[m + 1] + emt) / (2 * m + 1)
        out[m] = np.where(small, 1.0 / (2 * m + 1) - t / (2 * m + 3), val)
    return out


def hermite_expansion(la: int, lb: int, a: float, b: float, ab_dist: np.ndarray):
    """E_t^{ij} tables for the three dimensions; returns array (3, la+1, lb+1, la+lb+1)."""
    p = a + b
    q = a * b / p
    e = np.zeros((3, la + 1, lb + 1, la + lb + 1))
    pa = -b * ab_dist / p   # P - A
    pb = a * ab_dist / p    # P - B
    for d in range(3):
        e[d, 0, 0, 0] = np.exp(-q * ab_dist[d] * ab_dist[d])
        for i in range(1, la + 1):
            for t in range(i + 1):
                val = pa[d] * e[d, i - 1, 0, t]
                if t > 0:
                    val += e[d, i - 1, 0, t - 1] / (2 * p)
                if t + 1 <= i - 1:
                    val += (t + 1) * e[d, i - 1, 0, t + 1]
                e[d, i, 0, t] = val
        for j in range(1, lb + 1):
            for i in range(la + 1):
                for t in range(i + j + 1):
                    val = pb[d] * e[d, i, j - 1, t]
                    if t > 0:
                        val += e[d, i, j - 1, t - 1] / (2 * p)
                    if t + 1 <= i + j - 1:
                        val += (t + 1) * e[d, i, j - 1, t + 1]
                    e[d, i, j, t] = val
    return e


def hermite_coulomb(l_total: int, p: float, pc: np.ndarray, t_arg: float,
                    scale: float = 1.0) -> np.ndarray:
    """R_{tuv} tensor (t+u+v <= l_total) for the given Boys argument."""
    f = boys(l_total, np.array([t_arg]))[:, 0] * scale
    size = l_total + 1
    r_n = [np.zeros((size, size, size)) for _ in range(l_total + 1)]
    for n in range(l_total + 1):
        r_n[n][0, 0, 0] = (-2.0 * p) ** n * f[n]
    for order in range(1, l_total + 1):
        for n in range(l_total - order + 1):
            src = r_n[n + 1]
            dst = r_n[n]
            for t in range(order + 1):
                for u in range(order - t + 1):
                    v = order - t - u
                    if t >= 1:
                        val = pc[0] * src[t - 1, u, v]
                        if t >= 2:
                            val += (t - 1) * src[t - 2, u, v]
                    elif u >= 1:
                        val = pc[1] * src[t, u - 1, v]
                        if u >= 2:
                            val += (u - 1) * src[t, u - 2, v]
                    else:
                        val = pc[2] * src[t, u, v - 1]
                        if v >= 2:
                            val += (v - 1) * src[t, u, v - 2]
                    dst[t, u, v] = val
    return r_n[0]


def _pair_e_matrix(sh_a: Shell, sh_b: Shell, ca: int, cb: int,
                   e_tab: np.ndarray, lab: int) -> np.ndarray:
    """Row of E products for one cartesian component pair, flattened (lab+1)^3."""
    ax, ay, az = CART_COMPONENTS[sh_a.l][ca]
    bx, by, bz = CART_COMPONENTS[sh_b.l][cb]
    ex = e_tab[0, ax, bx, : lab + 1]
    ey = e_tab[1, ay, by, : lab + 1]
    ez = e_tab[2, az, bz, : lab + 1]
    return np.einsum("t,u,v->tuv", ex, ey, ez).ravel()


class _ShellPair:
    """Precomputed primitive-pair data for one shell pair."""

    def __init__(self, sh_a: Shell, sh_b: Shell):
        self.sh_a, self.sh_b = sh_a, sh_b
        self.lab = sh_a.l + sh_b.l
        ab = sh_a.center - sh_b.center
        self.prims = []
        na, nb = len(CART_COMPONENTS[sh_a.l]), len(CART_COMPONENTS[sh_b.l])
        for a, cca in zip(sh_a.exps, sh_a.coeffs):
            for b, ccb in zip(sh_b.exps, sh_b.coeffs):
                p = a + b
                center = (a * sh_a.center + b * sh_b.center) / p
                e_tab = hermite_expansion(sh_a.l, sh_b.l, a, b, ab)
                em = np.empty((na * nb, (self.lab + 1) ** 3))
                for ca in range(na):
                    for cb in range(nb):
                        em[ca * nb + cb] = _pair_e_matrix(
                            sh_a, sh_b, ca, cb, e_tab, self.lab
                        )
                self.prims.append((p, center, cca * ccb, em))


def _eri_shell_quartet(bra: _ShellPair, ket: _ShellPair, omega: float | None):
    lab, lcd = bra.lab, ket.lab
    l_tot = lab + lcd
    na = len(CART_COMPONENTS[bra.sh_a.l]) * len(CART_COMPONENTS[bra.sh_b.l])
    nb = len(CART_COMPONENTS[ket.sh_a.l]) * len(CART_COMPONENTS[ket.sh_b.l])
    out = np.zeros((na, nb))

    # sign and gather indices mapping R_{t+tau,...} into a bra x ket matrix
    dim_b, dim_k = lab + 1, lcd + 1
    tb, ub, vb = np.unravel_index(np.arange(dim_b ** 3), (dim_b,) * 3)
    tk, uk, vk = np.unravel_index(np.arange(dim_k ** 3), (dim_k,) * 3)
    signs = np.where((tk + uk + vk) % 2 == 0, 1.0, -1.0)

    for p, pp, cp, em_b in bra.prims:
        for q, qq, cq, em_k in ket.prims:
            alpha = p * q / (p + q)
            pq = pp - qq
            r2 = float(pq @ pq)
            if omega is None:
                rho, scale = alpha, 1.0
            else:
                # erf(omega r)/r kernel: attenuated Boys substitution
                rho = alpha * omega * omega / (alpha + omega * omega)
                scale = np.sqrt(rho / alpha)
            r_tens = hermite_coulomb(l_tot, rho, pq, rho * r2, scale)
            r2mat = r_tens[
                tb[:, None] + tk[None, :],
                ub[:, None] + uk[None, :],
                vb[:, None] + vk[None, :],
            ] * signs[None, :]
            pref = 2.0 * np.pi ** 2.5 / (p * q * np.sqrt(p + q)) * cp * cq
            out += pref * (em_b @ r2mat @ em_k.T)
    return out


def compute_integrals(basis: AOBasis, omega: float | None = None):
    """Return (S, T, V, ERI) in the normalized spherical AO basis.

    With ``omega`` set, only the ERI tensor is computed (erf-attenuated) and
    S, T, V are None.
    """
    mol = basis.molecule
    shells = basis.shells
    n_shell = len(shells)
    pairs: dict[tuple[int, int], _ShellPair] = {}
    for i in range(n_shell):
        for j in range(i + 1):
            pairs[(i, j)] = _ShellPair(shells[i], shells[j])

    n_cart = basis.cart_slices[-1].stop
    eri_c = np.zeros((n_cart,) * 4)
    quartets = []
    for i in range(n_shell):
        for j in range(i + 1):
            ij = i * (i + 1) // 2 + j
            for k in range(i + 1):
                for l in range(k + 1):
                    kl = k * (k + 1) // 2 + l
                    if ij >= kl:
                        quartets.append((i, j, k, l))
    for i, j, k, l in quartets:
        block = _eri_shell_quartet(pairs[(i, j)], pairs[(k, l)], omega)
        si, sj, sk, sl = (basis.cart_slices[x] for x in (i, j, k, l))
        na, nb2 = len(CART_COMPONENTS[shells[i].l]), len(CART_COMPONENTS[shells[j].l])
        nc, nd = len(CART_COMPONENTS[shells[k].l]), len(CART_COMPONENTS[shells[l].l])
        blk = block.reshape(na, nb2, nc, nd)
        for (a, b, c, d), v in np.ndenumerate(blk):
            pa, pb = si.start + a, sj.start + b
            pc, pd = sk.start + c, sl.start + d
            for t in {(pa, pb, pc, pd), (pb, pa, pc, pd), (pa, pb, pd, pc),
                      (pb, pa, pd, pc), (pc, pd, pa, pb), (pd, pc, pa, pb),
                      (pc, pd, pb, pa), (pd, pc, pb, pa)}:
                eri_c[t] = v

    if omega is not None:
        t_mat = basis.transform
        eri = np.einsum("pi,qj,rk,sl,pqrs->ijkl", t_mat, t_mat, t_mat, t_mat,
                        eri_c, optimize=True)
        return None, None, None, eri

    s_c = np.zeros((n_cart, n_cart))
    t_c = np.zeros((n_cart, n_cart))
    v_c = np.zeros((n_cart, n_cart))
    charges = mol.nuclear_charges
    for i in range(n_shell):
        for j in range(i + 1):
            sh_a, sh_b = shells[i], shells[j]
            la, lb = sh_a.l, sh_b.l
            comps_a, comps_b = CART_COMPONENTS[la], CART_COMPONENTS[lb]
            na, nb2 = len(comps_a), len(comps_b)
            s_blk = np.zeros((na, nb2))
            t_blk = np.zeros((na, nb2))
            v_blk = np.zeros((na, nb2))
            ab = sh_a.center - sh_b.center
            for a, cca in zip(sh_a.exps, sh_a.coeffs):
                for b, ccb in zip(sh_b.exps, sh_b.coeffs):
                    p = a + b
                    cc = cca * ccb
                    center = (a * sh_a.center + b * sh_b.center) / p
                    e_tab = hermite_expansion(la, lb + 2, a, b, ab)
                    sqrt_fac = (np.pi / p) ** 0.5
                    # nuclear attraction needs the full hermite expansion
                    lab = la + lb
                    r_sum = np.zeros(((lab + 1),) * 3)
                    for zc, ccoord in zip(charges, mol.coords):
                        pc = center - ccoord
                        r_sum += zc * hermite_coulomb(
                            lab, p, pc, p * float(pc @ pc)
                        )[: lab + 1, : lab + 1, : lab + 1]
                    for ca, (ax, ay, az) in enumerate(comps_a):
                        for cb, (bx, by, bz) in enumerate(comps_b):
                            s1 = [e_tab[0, ax, bx, 0], e_tab[1, ay, by, 0],
                                  e_tab[2, az, bz, 0]]
                            s_val = s1[0] * s1[1] * s1[2] * sqrt_fac ** 3
                            # 1D kinetic pieces via shifted angular momenta
                            t1 = []
                            for d, (ia, ib) in enumerate(
                                ((ax, bx), (ay, by), (az, bz))
                            ):
                                tt = -2.0 * b * b * e_tab[d, ia, ib + 2, 0]
                                tt += b * (2 * ib + 1) * e_tab[d, ia, ib, 0]
                                if ib >= 2:
                                    tt -= 0.5 * ib * (ib - 1) * e_tab[d, ia, ib - 2, 0]
                                t1.append(tt * sqrt_fac)
                            s1 = [x * sqrt_fac for x in s1]
                            t_val = (t1[0] * s1[1] * s1[2]
                                     + s1[0] * t1[1] * s1[2]
                                     + s1[0] * s1[1] * t1[2])
                            ex = e_tab[0, ax, bx, : lab + 1]
                            ey = e_tab[1, ay, by, : lab + 1]
                            ez = e_tab[2, az, bz, : lab + 1]
                            v_val = np.einsum("t,u,v,tuv->", ex, ey, ez, r_sum)
                            v_val *= 2.0 * np.pi / p
                            s_blk[ca, cb] += cc * s_val
                            t_blk[ca, cb] += cc * t_val
                            v_blk[ca, cb] += cc * v_val
            si, sj = basis.cart_slices[i], basis.cart_slices[j]
            s_c[si, sj] = s_blk
            t_c[si, sj] = t_blk
            v_c[si, sj] = -v_blk
            if i != j:
                s_c[sj, si] = s_blk.T
                t_c[sj, si] = t_blk.T
                v_c[sj, si] = -v_blk.T

    t_mat = basis.transform
    s = t_mat.T @ s_c @ t_mat
    t = t_mat.T @ t_c @ t_mat
    v = t_mat.T @ v_c @ t_mat
    eri = np.einsum("pi,qj,rk,sl,pqrs->ijkl", t_mat, t_mat, t_mat, t_mat,
                    eri_c, optimize=True)
    return s, t, v, eri


def normalize_basis(basis: AOBasis, s: np.ndarray):
    """Diagonal rescaling making every AO unit-normalized; returns scales."""
    scales = 1.0 / np.sqrt(np.diag(s))
    return scales


def ao_values(basis: AOBasis, points: np.ndarray, scales: np.ndarray) -> np.ndarray:
    """Spherical-AO amplitudes on grid points; shape (n_points, n_ao)."""
    n_pts = points.shape[0]
    n_cart = basis.cart_slices[-1].stop
    vals_c = np.zeros((n_pts, n_cart))
    for sh, sl in zip(basis.shells, basis.cart_slices):
        rel = points - sh.center[None, :]
        r2 = np.einsum("pd,pd->p", rel, rel)
        radial = np.zeros(n_pts)
        for a, c in zip(sh.exps, sh.coeffs):
            radial += c * np.exp(-a * r2)
        for idx, (lx, ly, lz) in enumerate(CART_COMPONENTS[sh.l]):
            ang = rel[:, 0] ** lx * rel[:, 1] ** ly * rel[:, 2] ** lz
            vals_c[:, sl.start + idx] = ang * radial
    return (vals_c @ basis.transform) * scales[None, :]
