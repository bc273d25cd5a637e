"""FCIDUMP reading and writing, plus the long-range sidecar convention.

The accepted format is the Molpro convention: a Fortran namelist header
``&FCI NORB=..., NELEC=..., MS2=...`` terminated by ``&END`` or ``/``,
followed by whitespace-separated records ``value i j k l`` with 1-based
indices.  Records with ``k = l = 0`` are one-body integrals, the
``0 0 0 0`` record is the core (nuclear-repulsion) energy.  Keys are
case-insensitive and both ``E`` and Fortran ``D`` exponent markers are
accepted.  ORBSYM is parsed and ignored.

A long-range sidecar is a second FCIDUMP carrying the erf-attenuated
two-electron integrals for one value of the range-separation parameter,
announced by a comment line ``! MU=<float>`` before the namelist.
"""

from __future__ import annotations

import re
import warnings
from pathlib import Path

import numpy as np

from .integrals import MolecularSystem, OneBodyIntegrals, TwoBodyIntegrals

__all__ = [
    "FcidumpError",
    "FcidumpWarning",
    "load_fcidump",
    "write_fcidump",
    "attach_lr_integrals",
    "load_lr_fcidump",
]

DUPLICATE_TOL = 1e-12


class FcidumpError(ValueError):
    """Malformed or inconsistent FCIDUMP content."""


class FcidumpWarning(UserWarning):
    """Recoverable FCIDUMP irregularity (e.g. missing core-energy record)."""


_NAMELIST_KEY = re.compile(r"([A-Za-z0-9_]+)\s*=\s*([^=]*?)(?=(?:,?\s*[A-Za-z0-9_]+\s*=)|$)")


def _parse_header(text: str) -> tuple[dict, int, float | None]:
    """Return (namelist dict, offset of first record line, mu annotation)."""
    lines = text.splitlines()
    mu = None
    i = 0
    # leading comment lines: allow "! MU=<float>" annotations before &FCI
    while i < len(lines) and not lines[i].lstrip().upper().startswith("&FCI"):
        stripped = lines[i].strip()
        if stripped.startswith("!"):
            m = re.search(r"MU\s*=\s*([0-9.EeDd+\-]+)", stripped, re.IGNORECASE)
            if m:
                mu = float(m.group(1).replace("D", "E").replace("d", "e"))
        elif stripped:
            raise FcidumpError(f"unexpected content before &FCI header: {stripped!r}")
        i += 1
    if i == len(lines):
        raise FcidumpError("no &FCI namelist header found")

    header_lines = []
    end = None
    for j in range(i, len(lines)):
        line = lines[j]
        upper = line.upper()
        if "&END" in upper or re.search(r"(^|\s)/(\s|$)", line):
            cut = upper.find("&END")
            if cut < 0:
                cut = line.find("/")
            header_lines.append(line[:cut])
            end = j
            break
        header_lines.append(line)
    if end is None:
        raise FcidumpError("unterminated &FCI namelist (missing &END or /)")

    blob = " ".join(header_lines)
    blob = re.sub(r"^\s*&FCI", "", blob, flags=re.IGNORECASE).strip()
    fields: dict[str, str] = {}
    for key, value in _NAMELIST_KEY.findall(blob):
        fields[key.upper()] = value.strip().rstrip(",").strip()
    return fields, end + 1, mu


def _int_field(fields: dict, key: str) -> int:
    if key not in fields:
        raise FcidumpError(f"header is missing {key}")
    try:
        return int(fields[key].split(",")[0])
    except ValueError as exc:
        raise FcidumpError(f"cannot parse {key}={fields[key]!r}") from exc


def _parse_records(lines: list[str], n_orb: int, path: str):
    """Accumulate records into (h, g, e_core, core_seen)."""
    h = np.zeros((n_orb, n_orb))
    h_seen = np.zeros((n_orb, n_orb), dtype=bool)
    g = np.zeros((n_orb,) * 4)
    g_seen = np.zeros((n_orb,) * 4, dtype=bool)
    e_core = 0.0
    core_seen = False

    for lineno, raw in enumerate(lines):
        line = raw.strip()
        if not line or line.startswith("!"):
            continue
        parts = line.split()
        if len(parts) != 5:
            raise FcidumpError(f"{path}:{lineno}: expected 'value i j k l', got {line!r}")
        try:
            value = float(parts[0].replace("D", "E").replace("d", "e"))
            p, q, r, s = (int(x) for x in parts[1:])
        except ValueError as exc:
            raise FcidumpError(f"{path}:{lineno}: unparsable record {line!r}") from exc
        if not np.isfinite(value):
            raise FcidumpError(f"{path}:{lineno}: non-finite value")
        for idx in (p, q, r, s):
            if idx < 0 or idx > n_orb:
                raise FcidumpError(f"{path}:{lineno}: orbital index {idx} out of range")

        if p == q == r == s == 0:
            if core_seen and abs(value - e_core) > DUPLICATE_TOL:
                raise FcidumpError(f"{path}:{lineno}: conflicting core-energy records")
            e_core = value
            core_seen = True
        elif r == 0 and s == 0:
            if p == 0 or q == 0:
                raise FcidumpError(f"{path}:{lineno}: malformed one-body record")
            i, j = p - 1, q - 1
            if h_seen[i, j] and abs(h[i, j] - value) > DUPLICATE_TOL:
                raise FcidumpError(f"{path}:{lineno}: conflicting one-body records")
            h[i, j] = h[j, i] = value
            h_seen[i, j] = h_seen[j, i] = True
        elif 0 in (p, q, r, s):
            raise FcidumpError(f"{path}:{lineno}: malformed record with zero index")
        else:
            i, j, k, l = p - 1, q - 1, r - 1, s - 1
            perms = (
                (i, j, k, l), (j, i, k, l), (i, j, l, k), (j, i, l, k),
                (k, l, i, j), (l, k, i, j), (k, l, j, i), (l, k, j, i),
            )
            if g_seen[i, j, k, l] and abs(g[i, j, k, l] - value) > DUPLICATE_TOL:
                raise FcidumpError(f"{path}:{lineno}: conflicting two-body records")
            for t in perms:
                g[t] = value
                g_seen[t] = True
    return h, g, e_core, core_seen


def _split_records(lines: list[str], path: str):
    """Tokenize records, returning (value, i, j, k, l) tuples."""
    out = []
    for lineno, raw in enumerate(lines):
        line = raw.strip()
        if not line or line.startswith("!"):
            continue
        parts = line.split()
        if len(parts) != 5:
            raise FcidumpError(f"{path}:{lineno}: expected 'value i j k l', got {line!r}")
        try:
            value = float(parts[0].replace("D", "E").replace("d", "e"))
            idx = tuple(int(x) for x in parts[1:])
        except ValueError as exc:
            raise FcidumpError(f"{path}:{lineno}: unparsable record {line!r}") from exc
        if not np.isfinite(value):
            raise FcidumpError(f"{path}:{lineno}: non-finite value")
        out.append((value, *idx))
    return out


def _fill_two_body(records, n_orb, path, pair_only=False):
    g = np.zeros((n_orb,) * 4)
    seen = np.zeros((n_orb,) * 4, dtype=bool)
    for value, p, q, r, s in records:
        for idx in (p, q, r, s):
            if idx < 1 or idx > n_orb:
                raise FcidumpError(f"{path}: orbital index {idx} out of range")
        i, j, k, l = p - 1, q - 1, r - 1, s - 1
        if pair_only:
            perms = ((i, j, k, l), (j, i, k, l), (i, j, l, k), (j, i, l, k))
        else:
            perms = (
                (i, j, k, l), (j, i, k, l), (i, j, l, k), (j, i, l, k),
                (k, l, i, j), (l, k, i, j), (k, l, j, i), (l, k, j, i),
            )
        if seen[i, j, k, l] and abs(g[i, j, k, l] - value) > DUPLICATE_TOL:
            raise FcidumpError(f"{path}: conflicting two-body records")
        for t in perms:
            g[t] = value
            seen[t] = True
    return g


def _fill_one_body(records, n_orb, path):
    h = np.zeros((n_orb, n_orb))
    seen = np.zeros((n_orb, n_orb), dtype=bool)
    for value, p, q, r, s in records:
        if r != 0 or s != 0 or p == 0 or q == 0:
            raise FcidumpError(f"{path}: malformed one-body record {(p, q, r, s)}")
        if p > n_orb or q > n_orb:
            raise FcidumpError(f"{path}: orbital index out of range")
        i, j = p - 1, q - 1
        if seen[i, j] and abs(h[i, j] - value) > DUPLICATE_TOL:
            raise FcidumpError(f"{path}: conflicting one-body records")
        h[i, j] = h[j, i] = value
        seen[i, j] = seen[j, i] = True
    return h


def _load_unrestricted(lines, n_orb, path):
    """IUHF=1 blocks: g_aa / g_bb / g_ab / h_a / h_b / core energy, each
    terminated by an all-zero-index separator record."""
    records = _split_records(lines, path)
    blocks: list[list] = [[]]
    e_core, core_seen = 0.0, False
    for rec in records:
        value, p, q, r, s = rec
        if p == q == r == s == 0:
            if len(blocks) <= 5:
                blocks.append([])
            else:
                e_core, core_seen = value, True
            continue
        blocks[-1].append(rec)
    if len(blocks) < 6:
        raise FcidumpError(f"{path}: IUHF=1 file is missing integral blocks")
    g_aa = _fill_two_body(blocks[0], n_orb, path)
    g_bb = _fill_two_body(blocks[1], n_orb, path)
    g_ab = _fill_two_body(blocks[2], n_orb, path, pair_only=True)
    h_a = _fill_one_body(blocks[3], n_orb, path)
    h_b = _fill_one_body(blocks[4], n_orb, path)
    return h_a, h_b, g_aa, g_bb, g_ab, e_core, core_seen


def load_fcidump(path: str | Path) -> MolecularSystem:
    """Load a full-range FCIDUMP into a :class:`MolecularSystem`.

    Handles both the plain (restricted spatial orbitals) layout and the
    Molpro IUHF=1 unrestricted block layout.
    """
    path = Path(path)
    text = path.read_text()
    fields, first_record, _mu = _parse_header(text)
    n_orb = _int_field(fields, "NORB")
    n_elec = _int_field(fields, "NELEC")
    ms2 = _int_field(fields, "MS2") if "MS2" in fields else 0
    iuhf = _int_field(fields, "IUHF") if "IUHF" in fields else 0
    if n_orb <= 0:
        raise FcidumpError("NORB must be positive")
    if (n_elec + ms2) % 2 != 0:
        raise FcidumpError(f"NELEC={n_elec} and MS2={ms2} have incompatible parity")
    n_alpha = (n_elec + ms2) // 2
    n_beta = n_elec - n_alpha

    lines = text.splitlines()[first_record:]
    if iuhf:
        h_a, h_b, g_aa, g_bb, g_ab, e_core, core_seen = _load_unrestricted(
            lines, n_orb, str(path)
        )
        if not core_seen:
            warnings.warn(
                f"{path}: no core-energy record; assuming e_nuclear = 0",
                FcidumpWarning,
            )
        return MolecularSystem(
            n_orbitals=n_orb,
            n_electrons=n_elec,
            n_alpha=n_alpha,
            n_beta=n_beta,
            e_nuclear=e_core,
            one_body=OneBodyIntegrals(h_a),
            two_body=TwoBodyIntegrals(g_aa, symmetrize=False),
            one_body_beta=OneBodyIntegrals(h_b),
            two_body_bb=TwoBodyIntegrals(g_bb, symmetrize=False),
            two_body_ab=TwoBodyIntegrals(
                g_ab, symmetrize=False, pair_symmetric_only=True
            ),
        )

    h, g, e_core, core_seen = _parse_records(lines, n_orb, str(path))
    if not core_seen:
        warnings.warn(
            f"{path}: no core-energy record; assuming e_nuclear = 0", FcidumpWarning
        )
    return MolecularSystem(
        n_orbitals=n_orb,
        n_electrons=n_elec,
        n_alpha=n_alpha,
        n_beta=n_beta,
        e_nuclear=e_core,
        one_body=OneBodyIntegrals(h),
        two_body=TwoBodyIntegrals(g, symmetrize=False),
    )


def load_lr_fcidump(path: str | Path) -> tuple[TwoBodyIntegrals, float, int]:
    """Load a long-range sidecar; returns (g_lr, mu, n_orb)."""
    path = Path(path)
    text = path.read_text()
    fields, first_record, mu = _parse_header(text)
    if mu is None:
        raise FcidumpError(f"{path}: sidecar is missing the '! MU=<float>' annotation")
    n_orb = _int_field(fields, "NORB")
    lines = text.splitlines()[first_record:]
    _h, g, _e, _seen = _parse_records(lines, n_orb, str(path))
    return TwoBodyIntegrals(g, symmetrize=False), mu, n_orb


def attach_lr_integrals(system: MolecularSystem, path: str | Path) -> MolecularSystem:
    """Attach the long-range integrals of a sidecar FCIDUMP to ``system``."""
    g_lr, mu, n_orb = load_lr_fcidump(path)
    if n_orb != system.n_orbitals:
        raise FcidumpError(
            f"sidecar NORB={n_orb} does not match system NORB={system.n_orbitals}"
        )
    return system.with_lr(g_lr, mu)


def _fmt(value: float) -> str:
    return f"{value: .16E}"


def write_fcidump(
    system: MolecularSystem,
    path: str | Path,
    *,
    mu: float | None = None,
    two_body: TwoBodyIntegrals | None = None,
    tol: float = 0.0,
) -> None:
    """Write ``system`` (or an alternative two-body tensor) as FCIDUMP.

    With ``mu`` set, the file is emitted as a long-range sidecar including the
    ``! MU=`` annotation.  ``tol`` drops records with |value| <= tol; the
    default keeps everything so a round trip is bitwise exact.
    """
    path = Path(path)
    n = system.n_orbitals
    ms2 = system.n_alpha - system.n_beta

    def two_body_block(g, lines, pair_only=False):
        for i in range(n):
            for j in range(i + 1):
                k_range = range(n) if pair_only else range(i + 1)
                for k in k_range:
                    lmax = k if pair_only else (j if k == i else k)
                    for l in range(lmax + 1):
                        v = g[i, j, k, l]
                        if abs(v) > tol or tol == 0.0:
                            lines.append(
                                f"{_fmt(v)} {i+1:4d} {j+1:4d} {k+1:4d} {l+1:4d}"
                            )

    def one_body_block(h, lines):
        for i in range(n):
            for j in range(i + 1):
                v = h[i, j]
                if abs(v) > tol or tol == 0.0:
                    lines.append(f"{_fmt(v)} {i+1:4d} {j+1:4d} {0:4d} {0:4d}")

    lines: list[str] = []
    if mu is not None:
        lines.append(f"! MU={mu!r}")
    iuhf = ",IUHF=1" if (system.spin_resolved_integrals and two_body is None) else ""
    lines.append(f"&FCI NORB={n},NELEC={system.n_electrons},MS2={ms2}{iuhf},")
    lines.append(" ORBSYM=" + ",".join(["1"] * n) + ",")
    lines.append(" ISYM=1,")
    lines.append("&END")
    if iuhf:
        sep = f"{_fmt(0.0)} {0:4d} {0:4d} {0:4d} {0:4d}"
        two_body_block(system.two_body.array, lines)
        lines.append(sep)
        two_body_block(system.two_body_bb.array, lines)
        lines.append(sep)
        two_body_block(system.two_body_ab.array, lines, pair_only=True)
        lines.append(sep)
        one_body_block(system.one_body.array, lines)
        lines.append(sep)
        one_body_block(system.one_body_beta.array, lines)
        lines.append(sep)
    else:
        g = (two_body if two_body is not None else system.two_body).array
        two_body_block(g, lines)
        one_body_block(system.one_body.array, lines)
    lines.append(f"{_fmt(system.e_nuclear)} {0:4d} {0:4d} {0:4d} {0:4d}")
    path.write_text("\n".join(lines) + "\n")
