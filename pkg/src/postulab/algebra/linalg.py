"""Dense linear algebra over F_p on int64 numpy arrays."""

from __future__ import annotations

import numpy as np


def as_modp(a, p: int) -> np.ndarray:
    arr = np.array(a, dtype=np.int64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    return arr % p


def rref(a, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; returns the nonzero rows and pivot columns."""
    m = as_modp(a, p)
    nrows, ncols = m.shape
    r = 0
    pivots: list[int] = []
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        m[r] = m[r] * pow(int(m[r, c]), -1, p) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            m[hit] = (m[hit] - np.outer(col[hit], m[r])) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(a, p: int) -> int:
    """Rank by forward elimination (no back substitution)."""
    m = as_modp(a, p)
    nrows, ncols = m.shape
    if nrows == 0 or ncols == 0:
        return 0
    if nrows > ncols:
        # eliminate along the short side
        m = np.ascontiguousarray(m.T)
        nrows, ncols = ncols, nrows
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        inv = pow(int(m[r, c]), -1, p)
        below = m[r + 1:, c]
        hit = np.flatnonzero(below)
        if hit.size:
            f = below[hit] * inv % p
            rows = hit + r + 1
            m[rows, c:] = (m[rows, c:] - np.outer(f, m[r, c:])) % p
        r += 1
    return r


def nullspace(a, p: int, ncols: int | None = None) -> np.ndarray:
    """Basis of the right kernel ``{v : a @ v = 0}`` as rows."""
    m = as_modp(a, p)
    if m.size == 0:
        n = ncols if ncols is not None else m.shape[1]
        return np.eye(n, dtype=np.int64)
    red, pivots = rref(m, p)
    n = m.shape[1]
    free = [c for c in range(n) if c not in set(pivots)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for row, pc in enumerate(pivots):
            basis[k, pc] = -red[row, f] % p
    return basis


def row_space(a, p: int) -> np.ndarray:
    red, _ = rref(a, p)
    return red


def same_row_space(a, b, p: int) -> bool:
    ra, rb = row_space(a, p), row_space(b, p)
    return ra.shape == rb.shape and bool(np.array_equal(ra, rb))
