"""Dense linear algebra over GF(p) on numpy int64 arrays.

All functions take and return arrays with entries in ``[0, p)``. ``p`` must
be small enough that ``p*p`` fits in int64.
"""

from __future__ import annotations

import numpy as np


def as_gf(a, p: int, shape=None) -> np.ndarray:
    arr = np.array(a, dtype=np.int64)
    if shape is not None:
        arr = arr.reshape(shape)
    return arr % p


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; returns the nonzero rows and pivot columns."""
    m = np.array(a, dtype=np.int64) % p
    if m.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        inv = pow(int(m[r, c]), -1, p)
        m[r] = (m[r] * inv) % p
        col = m[:, c].copy()
        col[r] = 0
        if col.any():
            m = (m - np.outer(col, m[r])) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(a: np.ndarray, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of ``{x : a @ x == 0}``."""
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    r, pivots = rref(a, p)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, pc in enumerate(pivots):
            basis[i, pc] = (-r[row, f]) % p
    return basis


def solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """One solution ``x`` of ``a @ x == b`` (free variables zero), or None."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    n = a.shape[1]
    if a.shape[0] == 0:
        return np.zeros(n, dtype=np.int64) if not (b % p).any() else None
    aug = np.concatenate([a, b[:, None]], axis=1)
    r, pivots = rref(aug, p)
    if pivots and pivots[-1] == n:
        return None
    x = np.zeros(n, dtype=np.int64)
    for row, pc in enumerate(pivots):
        x[pc] = r[row, n]
    return x


def inverse(a: np.ndarray, p: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    if n == 0:
        return a.copy()
    r, pivots = rref(np.concatenate([a, np.eye(n, dtype=np.int64)], axis=1), p)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return r[:, n:]


class Subspace:
    """A subspace of ``GF(p)^n`` kept in reduced echelon form.

    Supports membership tests, reduction to normal forms modulo the
    subspace, and incremental extension.
    """

    def __init__(self, p: int, n: int, rows=None):
        self.p = p
        self.n = n
        self.basis = np.zeros((0, n), dtype=np.int64)
        self.pivots: list[int] = []
        if rows is not None and len(rows):
            self.extend(rows)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def extend(self, rows) -> None:
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, self.n)
        stacked = np.concatenate([self.basis, rows]) if self.dim else rows
        self.basis, self.pivots = rref(stacked, self.p)

    def reduce(self, v) -> np.ndarray:
        """Normal form of ``v`` (or of each row of a 2-d ``v``) modulo the subspace."""
        v = np.array(v, dtype=np.int64) % self.p
        if not self.dim:
            return v
        if v.ndim == 1:
            coeffs = v[self.pivots]
            return (v - coeffs @ self.basis) % self.p
        coeffs = v[:, self.pivots]
        return (v - coeffs @ self.basis) % self.p

    def contains(self, v) -> bool:
        return not self.reduce(v).any()

    def add_if_new(self, v) -> bool:
        """Extend by ``v`` when it is not already inside; report whether it was new."""
        if self.contains(v):
            return False
        self.extend(v)
        return True

    def complement_columns(self) -> list[int]:
        """Non-pivot coordinates; their unit vectors span a complement."""
        piv = set(self.pivots)
        return [c for c in range(self.n) if c not in piv]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.p, self.n, self.pivots) == (other.p, other.n, other.pivots) and bool(
            np.array_equal(self.basis, other.basis))


def batch_rank(mats: np.ndarray, p: int) -> np.ndarray:
    """Ranks of a stack of matrices, shape ``(B, r, c)`` -> ``(B,)``."""
    m = np.array(mats, dtype=np.int64) % p
    bsz, rows, cols = m.shape
    ranks = np.zeros(bsz, dtype=np.int64)
    inv_table = np.zeros(p, dtype=np.int64)
    for x in range(1, p):
        inv_table[x] = pow(x, -1, p)
    idx = np.arange(bsz)
    for c in range(cols):
        # pivot row position for each matrix is ranks[b]
        active = ranks < rows
        if not active.any():
            break
        row_ids = np.arange(rows)[None, :]
        cand = (m[:, :, c] != 0) & (row_ids >= ranks[:, None])
        has = cand.any(axis=1) & active
        if not has.any():
            continue
        piv = np.argmax(cand, axis=1)
        b = idx[has]
        r0 = ranks[has]
        pr = piv[has]
        # swap pivot row into position r0
        tmp = m[b, r0].copy()
        m[b, r0] = m[b, pr]
        m[b, pr] = tmp
        scale = inv_table[m[b, r0, c]]
        m[b, r0] = (m[b, r0] * scale[:, None]) % p
        factors = m[b, :, c].copy()
        factors[np.arange(len(b)), r0] = 0
        m[b] = (m[b] - factors[:, :, None] * m[b, r0][:, None, :]) % p
        ranks[has] += 1
    return ranks
