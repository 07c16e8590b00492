"""Dense Gaussian elimination over F_p on numpy int64 arrays.

Entries are kept in [0, p); with p < 2**31 every intermediate product fits
in 64 bits.
"""

from __future__ import annotations

import numpy as np


def as_fp(a, p: int) -> np.ndarray:
    return np.asarray(a, dtype=np.int64) % p


def _inverse_table(p: int) -> np.ndarray:
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, -1, p)
    return inv


def rref(a, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns; zero rows are dropped."""
    m = as_fp(a, p).copy()
    if m.ndim != 2:
        raise ValueError("expected a 2-d array")
    rows, cols = m.shape
    inv = _inverse_table(p) if p > 2 else None
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            m[[r, k]] = m[[k, r]]
        if p > 2 and m[r, c] != 1:
            m[r] = m[r] * inv[m[r, c]] % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            if p == 2:
                m[hit] ^= m[r]
            else:
                m[hit] = (m[hit] - np.outer(col[hit], m[r])) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(a, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(a, p: int) -> np.ndarray:
    """Rows form a basis of {v : a v = 0}; shape (k, ncols)."""
    a = np.asarray(a, dtype=np.int64)
    cols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    r, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for row, pc in enumerate(pivots):
            basis[k, pc] = (-r[row, f]) % p
    return basis


def row_space(vectors, p: int, ncols: int | None = None) -> np.ndarray:
    """RREF basis of the span of the given row vectors."""
    v = np.asarray(vectors, dtype=np.int64)
    if v.size == 0:
        return np.zeros((0, ncols or (v.shape[1] if v.ndim == 2 else 0)), dtype=np.int64)
    return rref(v, p)[0]


def in_row_space(basis: np.ndarray, v, p: int) -> bool:
    v = as_fp(v, p)
    if basis.shape[0] == 0:
        return not v.any()
    return rank(np.vstack([basis, v]), p) == basis.shape[0]
