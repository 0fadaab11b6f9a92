"""Dense GF(2) linear algebra on small matrices (uint8 numpy arrays)."""

from __future__ import annotations

import numpy as np


def row_reduce(m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Row-reduce ``m`` over GF(2). Returns (reduced matrix, pivot columns)."""
    a = (np.asarray(m, dtype=np.uint8) & 1).copy()
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        pivot_rows = np.nonzero(a[r:, c])[0]
        if pivot_rows.size == 0:
            continue
        pr = r + pivot_rows[0]
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        mask = a[:, c].copy()
        mask[r] = 0
        a[mask.astype(bool)] ^= a[r]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: np.ndarray) -> int:
    return len(row_reduce(m)[1])


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """One solution x of a @ x = b over GF(2), or None if infeasible."""
    a = np.asarray(a, dtype=np.uint8) & 1
    b = np.asarray(b, dtype=np.uint8) & 1
    rows, cols = a.shape
    aug = np.concatenate([a, b.reshape(rows, 1)], axis=1)
    red, pivots = row_reduce(aug)
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.uint8)
    for r, c in enumerate(pivots):
        x[c] = red[r, cols]
    return x


def null_space(a: np.ndarray) -> np.ndarray:
    """Basis (rows) of the right null space of ``a`` over GF(2)."""
    a = np.asarray(a, dtype=np.uint8) & 1
    rows, cols = a.shape
    red, pivots = row_reduce(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, c in enumerate(pivots):
            basis[i, c] = red[r, f]
    return basis


def in_row_space(m: np.ndarray, v: np.ndarray) -> bool:
    """True iff ``v`` lies in the GF(2) row space of ``m``."""
    m = np.asarray(m, dtype=np.uint8) & 1
    v = (np.asarray(v, dtype=np.uint8) & 1).reshape(1, -1)
    return rank(m) == rank(np.concatenate([m, v], axis=0))
