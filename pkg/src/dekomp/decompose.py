"""Certified direct-sum decomposition, decomposition numbers and isomorphism tests.

Rings are routed to one of two engines:

* ``snf``: ``Z``, ``GF(p)[x]`` and every ``Z/n``, via invariant factors;
* ``idempotent``: finite local ``GF(p)``-algebras (``GF(p)`` and truncated
  polynomial algebras), by splitting along idempotent endomorphisms.

Multivariate polynomial rings are not supported.
"""

from __future__ import annotations

from dataclasses import dataclass

from .matrix import (InvertibleMatrix, RingMatrix, block_diag_invertible, direct_sum,
                     format_matrix_text, minimize_presentation, permutation_matrix)
from .modules import (DEFAULT_BUDGET, MAX_AMBIENT_DIM, FiniteModule, Isomorphism,
                      find_isomorphism, search_idempotent, split_with_transform)
from .report import Certificate, CertificationError, DecompositionReport, Summand
from .rings import Ring
from .snf import decompose_snf, invariant_signature

__all__ = [
    "UnsupportedRing", "engine_for", "decompose", "dn", "dn_relative", "is_isomorphic",
    "CertificationError",
]


class UnsupportedRing(ValueError):
    pass


def engine_for(ring: Ring) -> str:
    if ring.kind in ("Z", "Z/n"):
        return "snf"
    if ring.kind == "poly":
        if ring.nvars == 1:
            return "snf"
        raise UnsupportedRing(f"{ring}: multivariate polynomial rings are not supported")
    if ring.kind in ("GF", "truncated"):
        return "idempotent"
    raise UnsupportedRing(f"no engine for {ring}")


@dataclass
class _Leaf:
    presentation: RingMatrix
    module: FiniteModule


def _split_tree(B: RingMatrix, budget: int, max_dim: int, leaves: list[_Leaf]):
    """Split ``M_B`` recursively; returns ``(P, Q)`` with ``P B Q`` the sum of new leaves."""
    ring = B.ring
    M = FiniteModule(B, max_dim)
    if M.dim == 0:
        return InvertibleMatrix.identity(ring, B.nrows), InvertibleMatrix.identity(ring, B.ncols)
    found = search_idempotent(M, budget).idempotent
    if found is None:
        leaves.append(_Leaf(B, M))
        return InvertibleMatrix.identity(ring, B.nrows), InvertibleMatrix.identity(ring, B.ncols)
    s = split_with_transform(M, found)
    Pe, Qe = _split_tree(s.first, budget, max_dim, leaves)
    Pf, Qf = _split_tree(s.second, budget, max_dim, leaves)
    P = block_diag_invertible(Pe, Pf) @ s.P
    Q = s.Q @ block_diag_invertible(Qe, Qf)
    return P, Q


def _leaf_key(leaf: _Leaf):
    return (leaf.module.size, format_matrix_text(leaf.presentation))


def _decompose_local(A: RingMatrix, budget: int, max_dim: int) -> DecompositionReport:
    ring = A.ring
    Amin, _ = minimize_presentation(A)
    leaves: list[_Leaf] = []
    P, Q = _split_tree(Amin, budget, max_dim, leaves)

    # reorder leaves by (size, text) with permutation matrices
    row_spans, col_spans = [], []
    r0 = c0 = 0
    for leaf in leaves:
        row_spans.append(list(range(r0, r0 + leaf.presentation.nrows)))
        col_spans.append(list(range(c0, c0 + leaf.presentation.ncols)))
        r0 += leaf.presentation.nrows
        c0 += leaf.presentation.ncols
    order = sorted(range(len(leaves)), key=lambda k: _leaf_key(leaves[k]))
    row_perm = [i for k in order for i in row_spans[k]]
    col_perm = [j for k in order for j in col_spans[k]]
    Pr = permutation_matrix(ring, row_perm)
    Pc = permutation_matrix(ring, col_perm).inverted()
    P = Pr @ P
    Q = Q @ Pc
    sorted_leaves = [leaves[k] for k in order]
    W = direct_sum(*(lf.presentation for lf in sorted_leaves)) if sorted_leaves \
        else RingMatrix.zeros(ring, Amin.nrows, 0)
    cert = Certificate(Amin, P, Q, W)
    if not cert.verify():
        raise AssertionError("decomposition certificate failed verification")

    # group isomorphic leaves
    reps: list[_Leaf] = []
    counts: list[int] = []
    for leaf in sorted_leaves:
        for k, rep in enumerate(reps):
            if rep.module.size == leaf.module.size and find_isomorphism(rep.module, leaf.module, budget):
                counts[k] += 1
                break
        else:
            reps.append(leaf)
            counts.append(1)
    summands = tuple(Summand(rep.presentation, c, rep.module.size) for rep, c in zip(reps, counts))
    return DecompositionReport(ring, A, "idempotent", len(sorted_leaves), summands, cert)


def decompose(A: RingMatrix, budget: int = DEFAULT_BUDGET,
              max_dim: int = MAX_AMBIENT_DIM) -> DecompositionReport:
    """Decompose ``M_A`` into indecomposables with a certificate where available.

    Raises ``CertificationError`` when a search budget is exhausted and
    ``UnsupportedRing`` for rings without an engine.
    """
    engine = engine_for(A.ring)
    if engine == "snf":
        return decompose_snf(A)
    return _decompose_local(A, budget, max_dim)


def dn(A: RingMatrix, budget: int = DEFAULT_BUDGET) -> int:
    """Number of indecomposable summands of ``M_A``, counted with multiplicity."""
    return decompose(A, budget).dn


def is_isomorphic(A: RingMatrix, B: RingMatrix, budget: int = DEFAULT_BUDGET,
                  seed: int = 0) -> Isomorphism | None:
    """An isomorphism ``M_A -> M_B`` (truthy) or None.

    Over ``snf`` rings the answer compares invariant factors and the returned
    object carries no explicit map.
    """
    if A.ring != B.ring:
        raise ValueError("matrices over different rings")
    if engine_for(A.ring) == "snf":
        return Isomorphism("invariants") if invariant_signature(A) == invariant_signature(B) else None
    Am, _ = minimize_presentation(A)
    Bm, _ = minimize_presentation(B)
    return find_isomorphism(FiniteModule(Am), FiniteModule(Bm), budget, seed)


def dn_relative(A: RingMatrix, B: RingMatrix, budget: int = DEFAULT_BUDGET, seed: int = 0) -> int:
    """Multiplicity of the indecomposable ``M_B`` as a summand of ``M_A``."""
    if A.ring != B.ring:
        raise ValueError("matrices over different rings")
    rb = decompose(B, budget)
    if rb.dn != 1:
        raise ValueError(f"the reference module must be indecomposable (it has dn = {rb.dn})")
    ra = decompose(A, budget)
    ref = rb.summands[0].presentation
    return sum(s.multiplicity for s in ra.summands if is_isomorphic(s.presentation, ref, budget, seed))
