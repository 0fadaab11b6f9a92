"""Phaseless n-qubit Pauli strings in the symplectic binary representation.

A Pauli string is stored as two length-n bit vectors: qubit k carries an X
factor iff ``x[k]``, a Z factor iff ``z[k]``, and a Y iff both.  Global
phases are discarded everywhere; decoding only distinguishes equivalence
classes modulo phase.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UsageError

_CHAR = np.array(["I", "X", "Z", "Y"])  # index = x + 2*z


@dataclass(frozen=True)
class PauliString:
    """Phaseless Pauli operator on ``n`` qubits.

    ``x`` and ``z`` are uint8 arrays of length ``n`` with values in {0, 1}.
    """

    n: int
    x: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        x = np.ascontiguousarray(np.asarray(self.x, dtype=np.uint8) & 1)
        z = np.ascontiguousarray(np.asarray(self.z, dtype=np.uint8) & 1)
        if x.shape != (self.n,) or z.shape != (self.n,):
            raise UsageError(f"bit vectors must have length {self.n}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, np.zeros(n, dtype=np.uint8), np.zeros(n, dtype=np.uint8))

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse a string of characters in {I, X, Y, Z}."""
        label = label.strip().upper()
        n = len(label)
        x = np.zeros(n, dtype=np.uint8)
        z = np.zeros(n, dtype=np.uint8)
        for k, c in enumerate(label):
            if c == "X":
                x[k] = 1
            elif c == "Z":
                z[k] = 1
            elif c == "Y":
                x[k] = 1
                z[k] = 1
            elif c != "I":
                raise UsageError(f"invalid Pauli character {c!r}")
        return cls(n, x, z)

    @classmethod
    def single(cls, n: int, qubit: int, pauli: str) -> "PauliString":
        """Single-qubit Pauli ``pauli`` on ``qubit``, identity elsewhere."""
        p = cls.identity(n)
        c = pauli.upper()
        if c in ("X", "Y"):
            p.x[qubit] = 1
        if c in ("Z", "Y"):
            p.z[qubit] = 1
        if c not in "IXYZ":
            raise UsageError(f"invalid Pauli character {pauli!r}")
        return p

    def to_label(self) -> str:
        return "".join(_CHAR[self.x + 2 * self.z])

    def __str__(self) -> str:
        return self.to_label()

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliString):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.z, other.z)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.x.tobytes(), self.z.tobytes()))

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)


def _check_lengths(a: PauliString, b: PauliString) -> None:
    if a.n != b.n:
        raise UsageError(f"length mismatch: {a.n} vs {b.n}")


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Group product with the global phase discarded (bitwise XOR)."""
    _check_lengths(a, b)
    return PauliString(a.n, a.x ^ b.x, a.z ^ b.z)


def commutes(a: PauliString, b: PauliString) -> bool:
    """True iff the symplectic form sum_k (a.x*b.z + a.z*b.x) is even."""
    _check_lengths(a, b)
    return bool((int(np.dot(a.x, b.z)) + int(np.dot(a.z, b.x))) % 2 == 0)


def weight(a: PauliString) -> int:
    """Number of qubits with non-identity action."""
    return int(np.count_nonzero(a.x | a.z))
