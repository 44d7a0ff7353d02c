"""Brute-force idempotent oracle for finite abelian groups ``Z^v / rowspace(A)``.

Independent of the Smith normal form code: the group is enumerated through a
Hermite normal form of the relation lattice, every endomorphism is listed as
a table on group elements, and summands are counted by repeatedly splitting
along idempotents inside corner rings ``f End f``. Only meant for small
groups (``|G|^v`` up to a few hundred thousand).
"""

from __future__ import annotations

import itertools

import numpy as np

MAX_HOM_CANDIDATES = 1 << 18


def hermite_basis(A) -> np.ndarray | None:
    """Upper triangular ``v×v`` basis of the row lattice of ``A`` with positive diagonal.

    Returns None when the lattice has rank below ``v`` (infinite quotient).
    """
    rows = [list(map(int, r)) for r in A]
    v = len(rows[0]) if rows else 0
    out = []
    for c in range(v):
        live = [r for r in rows if r[c] != 0]
        rest = [r for r in rows if r[c] == 0]
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[c]))
            piv = live[0]
            nxt = [piv]
            for r in live[1:]:
                q = r[c] // piv[c]
                r = [a - q * b for a, b in zip(r, piv)]
                (nxt if r[c] else rest).append(r)
            live = nxt
        if not live:
            return None
        piv = live[0]
        if piv[c] < 0:
            piv = [-a for a in piv]
        out.append(piv)
        rows = rest
    H = np.array(out, dtype=np.int64).reshape(v, v)
    # reduce entries above the diagonal into [0, h_jj)
    for j in range(v):
        for i in range(j):
            q = H[i, j] // H[j, j]
            H[i] -= q * H[j]
    return H


class AbelianGroup:
    """Finite ``Z^v / L`` with elements as canonical vectors ``0 <= x_i < h_ii``."""

    def __init__(self, A):
        A = [list(map(int, r)) for r in A]
        H = hermite_basis(A)
        if H is None:
            raise ValueError("the presented group is infinite")
        self.H = H
        self.v = H.shape[0]
        self.diag = [int(H[i, i]) for i in range(self.v)]
        self.order = int(np.prod(self.diag)) if self.v else 1
        self.elements = np.array(list(itertools.product(*(range(h) for h in self.diag))),
                                 dtype=np.int64).reshape(self.order, self.v)
        self.relations = np.array(A, dtype=np.int64).reshape(len(A), self.v)

    def reduce(self, vecs: np.ndarray) -> np.ndarray:
        x = np.array(vecs, dtype=np.int64)
        for i in range(self.v):
            q = np.floor_divide(x[..., i], self.diag[i])
            x = x - q[..., None] * self.H[i]
        return x

    def index(self, vecs: np.ndarray) -> np.ndarray:
        x = self.reduce(vecs)
        idx = np.zeros(x.shape[:-1], dtype=np.int64)
        for i in range(self.v):
            idx = idx * self.diag[i] + x[..., i]
        return idx

    def endomorphisms(self) -> np.ndarray:
        """All endomorphisms as tables ``E[k, g] = index of phi_k(g)``."""
        n, v = self.order, self.v
        if n ** v > MAX_HOM_CANDIDATES:
            raise ValueError(f"group too large for the oracle: |G|^v = {n ** v}")
        imgs = np.array(list(itertools.product(range(n), repeat=v)), dtype=np.int64).reshape(-1, v)
        vecs = self.elements[imgs]  # (K, v generators, v coords)
        ok = np.ones(len(imgs), dtype=bool)
        for rel in self.relations:
            total = np.einsum("j,kjc->kc", rel, vecs)
            ok &= self.index(total) == 0
        vecs = vecs[ok]
        # phi(g) = sum_j g_j h_j
        full = np.einsum("gj,kjc->kgc", self.elements, vecs)
        return self.index(full)

    def sub_table(self) -> np.ndarray:
        a = self.elements[:, None, :] - self.elements[None, :, :]
        return self.index(a)


def summand_count(A) -> int:
    """Number of indecomposable summands of the finite group presented by ``A``."""
    G = AbelianGroup(A)
    if G.order == 1:
        return 0
    E = G.endomorphisms()
    sub = G.sub_table()
    ident = np.arange(G.order)
    idem_mask = np.all(np.take_along_axis(E, E, axis=1) == E, axis=1)
    idems = E[idem_mask]

    def count(f: np.ndarray) -> int:
        # idempotents e in the corner f End f other than 0 and f
        in_corner = np.all(f[idems] == idems, axis=1) & np.all(idems[:, f] == idems, axis=1)
        cands = idems[in_corner]
        nontrivial = np.any(cands != 0, axis=1) & np.any(cands != f, axis=1)
        hits = np.flatnonzero(nontrivial)
        if not hits.size:
            return 1
        e = cands[hits[0]]
        rest = sub[f, e]
        return count(e) + count(rest)

    return count(ident)
