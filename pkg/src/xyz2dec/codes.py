"""Construction of the YZZY surface code and the XYZ^2 code.

Geometry conventions (fixed by fiat; any consistent choice gives an
equivalent code):

* YZZY qubits sit on a d x d grid, qubit index ``u = r*d + c``.
* Faces are indexed by their top-left corner ``(fr, fc)``; the four corners
  are NW=(fr,fc), NE=(fr,fc+1), SW=(fr+1,fc), SE=(fr+1,fc+1).  Every face
  acts as Y on NW/SE and Z on NE/SW.  Boundary faces are truncations of the
  same pattern, on alternating positions along each side.
* XYZ^2 physical qubits: upper qubit ``u`` maps to the pair
  ``top(u) = 2u``, ``bottom(u) = 2u + 1``; each pair carries an XX link
  stabilizer.  Upper-level Paulis lift site-wise through the canonical
  representatives I->II, X->ZZ, Y->ZY, Z->XI (top qubit first).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _gf2
from .errors import ContractViolation, UsageError
from .pauli import PauliString, commutes, multiply

# Canonical lift representatives, (top, bottom) single-qubit Pauli labels.
LIFT_REPRESENTATIVES = {"I": "II", "X": "ZZ", "Y": "ZY", "Z": "XI"}


@dataclass(frozen=True)
class StabilizerCode:
    """A stabilizer code with one logical qubit and geometric metadata."""

    kind: str  # "YZZY" or "XYZ2"
    d: int
    n: int
    generators: tuple[PauliString, ...]
    logical_x: PauliString
    logical_y: PauliString
    logical_z: PauliString
    # Stacked generator bits, shape (num_generators, n) each.
    gen_x: np.ndarray = field(repr=False)
    gen_z: np.ndarray = field(repr=False)

    @property
    def num_generators(self) -> int:
        return len(self.generators)

    def to_json_dict(self, cmap: "ConcatenationMap | None" = None) -> dict:
        """Code description for fixtures and plot annotations."""
        out = {
            "kind": self.kind,
            "d": self.d,
            "n": self.n,
            "generators": [g.to_label() for g in self.generators],
            "logical_x": self.logical_x.to_label(),
            "logical_y": self.logical_y.to_label(),
            "logical_z": self.logical_z.to_label(),
        }
        if cmap is not None:
            out["links"] = [[int(t), int(b)] for t, b in cmap.link_of_upper_qubit]
            out["representatives"] = dict(cmap.representatives)
        return out


@dataclass(frozen=True)
class ConcatenationMap:
    """Mapping between YZZY upper-level qubits and XYZ^2 link pairs."""

    d: int
    # entry u = (top physical qubit, bottom physical qubit)
    link_of_upper_qubit: tuple[tuple[int, int], ...]
    representatives: dict[str, str] = field(default_factory=lambda: dict(LIFT_REPRESENTATIVES))

    @property
    def num_links(self) -> int:
        return len(self.link_of_upper_qubit)


def _faces(d: int) -> list[list[tuple[int, str]]]:
    """All stabilizer faces as lists of (qubit, pauli-char), in fixed order."""
    q = lambda r, c: r * d + c
    if d == 2:
        # Degenerate case kept only for exhaustive oracles: the two weight-2
        # faces sit on adjacent sides so that the all-Z operator stays a
        # nontrivial logical (pure-Z distance 8 on the concatenated code).
        return [
            [(q(0, 0), "Y"), (q(0, 1), "Z"), (q(1, 0), "Z"), (q(1, 1), "Y")],
            [(q(0, 0), "Z"), (q(0, 1), "Y")],   # top
            [(q(0, 0), "Z"), (q(1, 0), "Y")],   # left
        ]
    faces: list[tuple[tuple[int, int], list[tuple[int, str]]]] = []
    for fr in range(d - 1):
        for fc in range(d - 1):
            faces.append(((fr, fc), [
                (q(fr, fc), "Y"), (q(fr, fc + 1), "Z"),
                (q(fr + 1, fc), "Z"), (q(fr + 1, fc + 1), "Y"),
            ]))
    # Boundary faces continue the checkerboard: top/bottom on odd-colored
    # positions, left/right on even-colored ones ((fr + fc) mod 2).
    for fc in range(0, d - 1, 2):  # top, (-1 + fc) odd
        faces.append(((-1, fc), [(q(0, fc), "Z"), (q(0, fc + 1), "Y")]))
    for fc in range(d % 2, d - 1, 2):  # bottom, (d - 1 + fc) odd
        faces.append(((d - 1, fc), [(q(d - 1, fc), "Y"), (q(d - 1, fc + 1), "Z")]))
    for fr in range(1, d - 1, 2):  # left, (fr - 1) even
        faces.append(((fr, -1), [(q(fr, 0), "Z"), (q(fr + 1, 0), "Y")]))
    for fr in range((d + 1) % 2, d - 1, 2):  # right, (fr + d - 1) even
        faces.append(((fr, d - 1), [(q(fr, d - 1), "Y"), (q(fr + 1, d - 1), "Z")]))
    faces.sort(key=lambda t: t[0])
    return [f for _, f in faces]


def _pauli_from_sites(n: int, sites: list[tuple[int, str]]) -> PauliString:
    p = PauliString.identity(n)
    for qubit, c in sites:
        if c in ("X", "Y"):
            p.x[qubit] ^= 1
        if c in ("Z", "Y"):
            p.z[qubit] ^= 1
    return p


def _symplectic_rows(gens: list[PauliString]) -> np.ndarray:
    return np.array([np.concatenate([g.x, g.z]) for g in gens], dtype=np.uint8)


def _is_logical(p: PauliString, gens: list[PauliString], rows: np.ndarray) -> bool:
    """In the normalizer but outside the stabilizer group."""
    if any(not commutes(p, g) for g in gens):
        return False
    return not _gf2.in_row_space(rows, np.concatenate([p.x, p.z]))


def _find_logicals(
    n: int,
    gens: list[PauliString],
    preferred_z: PauliString,
    preferred_x: PauliString | None,
    preferred_y: PauliString | None,
) -> tuple[PauliString, PauliString, PauliString]:
    """Logical representatives via the symplectic kernel, canonicalized to
    the preferred geometric forms when those are valid logicals."""
    rows = _symplectic_rows(gens)
    # Kernel of the commutation map: vectors v = [x|z] commuting with all
    # generators satisfy [gen_z | gen_x] . v = 0.
    comm = np.concatenate([rows[:, n:], rows[:, :n]], axis=1)
    kernel = _gf2.null_space(comm)
    candidates = [PauliString(n, v[:n], v[n:]) for v in kernel]
    candidates = [p for p in candidates if _is_logical(p, gens, rows)]
    if not candidates:
        raise ContractViolation("no logical operators found; generator set is not rank-deficient")

    if _is_logical(preferred_z, gens, rows):
        lz = preferred_z
    else:
        lz = candidates[0]

    lx = None
    for cand in ([preferred_x] if preferred_x is not None else []) + (
        [multiply(preferred_y, lz)] if preferred_y is not None else []
    ):
        if _is_logical(cand, gens, rows) and not commutes(cand, lz):
            lx = cand
            break
    if lx is None:
        for cand in candidates:
            if not commutes(cand, lz):
                lx = cand
                break
    if lx is None:
        # lz may itself commute with everything in the kernel list only if
        # the preferred choice was degenerate; fall back to a generic pair.
        for a in candidates:
            for b in candidates:
                if not commutes(a, b):
                    lz, lx = a, b
                    break
            else:
                continue
            break
    if lx is None:
        raise ContractViolation("could not find an anticommuting logical pair")
    ly = multiply(lx, lz)
    return lx, ly, lz


def build_yzzy(d: int) -> StabilizerCode:
    """Rotated surface code with uniform Y(NW/SE)-Z(NE/SW) plaquettes."""
    if d < 2:
        raise UsageError("distance must be at least 2")
    n = d * d
    gens = [_pauli_from_sites(n, sites) for sites in _faces(d)]

    diag_z = PauliString.identity(n)
    anti_y = PauliString.identity(n)
    for i in range(d):
        diag_z.z[i * d + i] = 1
        u = i * d + (d - 1 - i)
        anti_y.x[u] = 1
        anti_y.z[u] = 1
    lx, ly, lz = _find_logicals(n, gens, preferred_z=diag_z, preferred_x=None, preferred_y=anti_y)

    return StabilizerCode(
        kind="YZZY", d=d, n=n, generators=tuple(gens),
        logical_x=lx, logical_y=ly, logical_z=lz,
        gen_x=np.array([g.x for g in gens], dtype=np.uint8),
        gen_z=np.array([g.z for g in gens], dtype=np.uint8),
    )


def lift(upper: PauliString, cmap: ConcatenationMap) -> PauliString:
    """Site-wise substitution of upper-level Paulis by the canonical
    two-qubit representatives (I->II, X->ZZ, Y->ZY, Z->XI)."""
    n_lower = 2 * cmap.num_links
    x = np.zeros(n_lower, dtype=np.uint8)
    z = np.zeros(n_lower, dtype=np.uint8)
    tops = np.array([t for t, _ in cmap.link_of_upper_qubit])
    bots = np.array([b for _, b in cmap.link_of_upper_qubit])
    ux, uz = upper.x, upper.z
    x[tops] = uz & (ux ^ 1)
    z[tops] = ux
    x[bots] = ux & uz
    z[bots] = ux
    return PauliString(n_lower, x, z)


def build_xyz2(d: int) -> tuple[StabilizerCode, ConcatenationMap]:
    """XYZ^2 code on 2*d^2 qubits with d^2 XX links plus lifted YZZY faces.

    Generator order: links 0..d^2-1 first, then the lifted plaquette and
    boundary generators in YZZY face order.
    """
    if d < 2:
        raise UsageError("distance must be at least 2")
    upper = build_yzzy(d)
    n = 2 * d * d
    cmap = ConcatenationMap(d=d, link_of_upper_qubit=tuple((2 * u, 2 * u + 1) for u in range(d * d)))

    gens: list[PauliString] = []
    for u in range(d * d):
        link = PauliString.identity(n)
        link.x[2 * u] = 1
        link.x[2 * u + 1] = 1
        gens.append(link)
    gens.extend(lift(g, cmap) for g in upper.generators)

    all_z = PauliString(n, np.zeros(n, dtype=np.uint8), np.ones(n, dtype=np.uint8))
    row_x = lift(upper.logical_z, cmap)  # X on the top qubit of d links
    lx, ly, lz = _find_logicals(n, gens, preferred_z=all_z, preferred_x=row_x, preferred_y=None)

    code = StabilizerCode(
        kind="XYZ2", d=d, n=n, generators=tuple(gens),
        logical_x=lx, logical_y=ly, logical_z=lz,
        gen_x=np.array([g.x for g in gens], dtype=np.uint8),
        gen_z=np.array([g.z for g in gens], dtype=np.uint8),
    )
    return code, cmap


def syndrome(code: StabilizerCode, error: PauliString) -> np.ndarray:
    """Bit k = 1 iff ``error`` anticommutes with generator k."""
    if error.n != code.n:
        raise UsageError(f"error acts on {error.n} qubits, code has {code.n}")
    return ((code.gen_x @ error.z + code.gen_z @ error.x) % 2).astype(np.uint8)


def logical_class(code: StabilizerCode, residual: PauliString) -> str:
    """Logical class {I, X, Y, Z} of a zero-syndrome residual operator."""
    if syndrome(code, residual).any():
        raise ContractViolation("residual operator has a nonzero syndrome")
    anti_z = not commutes(residual, code.logical_z)
    anti_x = not commutes(residual, code.logical_x)
    return {(False, False): "I", (True, False): "X", (False, True): "Z", (True, True): "Y"}[(anti_z, anti_x)]
