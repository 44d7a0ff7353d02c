"""The bidiagonal family ``x e_i + y e_{i+1}`` of indecomposable modules.

Over a local ring whose socle has dimension at least two, pick independent
socle elements ``x`` and ``y``. The module generated by ``e_1..e_{n+1}`` with
relations ``x e_i + y e_{i+1}`` (``1 <= i <= n``) is indecomposable for
every ``n``. Two checks are offered:

* :func:`verify_indecomposable` decomposes the module exhaustively (small n);
* :func:`verify_kernel_span` checks the polynomial identity behind the
  general argument: over ``GF(p)[X, Y]`` the bidiagonal matrix has rank
  ``n`` and its kernel is spanned by ``(Y^n, -X Y^(n-1), ..., (-X)^n)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .decompose import decompose
from .matrix import RingMatrix
from .modules import DEFAULT_BUDGET
from .rings import Element, Ring


class ExampleError(ValueError):
    pass


@dataclass(frozen=True)
class ExampleInstance:
    n: int
    ring: Ring
    x: Element
    y: Element
    matrix: RingMatrix


def bidiagonal(ring: Ring, n: int, x: Element, y: Element) -> RingMatrix:
    """``n × (n+1)`` matrix with ``x`` on the diagonal and ``y`` just right of it."""
    rows = []
    for i in range(n):
        row = [ring.zero] * (n + 1)
        row[i] = x
        row[i + 1] = y
        rows.append(tuple(row))
    return RingMatrix(ring, n, n + 1, tuple(rows))


def _in_socle(ring: Ring, a: Element) -> bool:
    return all(ring.is_zero(ring.mul(ring.variable(i), a)) for i in range(ring.nvars))


def build_example(n: int, ring: Ring, x: Element | str | None = None,
                  y: Element | str | None = None) -> ExampleInstance:
    """Instance of chain length ``n``; ``x``, ``y`` default to the first two variables."""
    if n < 1:
        raise ExampleError("chain length must be at least 1")
    if ring.kind != "truncated" or ring.nvars < 2:
        raise ExampleError(f"need a truncated algebra in at least two variables, got {ring}")
    x = ring.variable(0) if x is None else (ring.parse(x) if isinstance(x, str) else x)
    y = ring.variable(1) if y is None else (ring.parse(y) if isinstance(y, str) else y)
    for a in (x, y):
        if ring.is_zero(a) or ring.is_unit(a) or not _in_socle(ring, a):
            raise ExampleError(f"{ring.format(a)} is not a nonzero socle element")
    cx = np.array(ring.coords(x), dtype=np.int64)
    cy = np.array(ring.coords(y), dtype=np.int64)
    p = ring.prime
    if any(np.array_equal((c * cx) % p, cy) for c in range(p)):
        raise ExampleError("x and y must be linearly independent over the residue field")
    return ExampleInstance(n, ring, x, y, bidiagonal(ring, n, x, y))


def verify_indecomposable(inst: ExampleInstance, budget: int = DEFAULT_BUDGET) -> bool:
    """True iff the exhaustive decomposition finds exactly one summand.

    Raises ``CertificationError`` when the search budget runs out.
    """
    return decompose(inst.matrix, budget).dn == 1


def kernel_vector(n: int, p: int) -> tuple:
    """``w_k = (-X)^k Y^(n-k)`` over ``GF(p)[X, Y]``, signs through ring negation."""
    R = Ring.poly(p, ("X", "Y"))
    X, Y = R.variable(0), R.variable(1)
    return tuple(R.mul(R.pow(R.neg(X), k), R.pow(Y, n - k)) for k in range(n + 1))


def determinant(M: RingMatrix) -> Element:
    """Exact determinant over a commutative ring by cofactor expansion with memoisation."""
    ring = M.ring
    n = M.nrows
    if M.shape != (n, n):
        raise ValueError("determinant of a non-square matrix")

    @lru_cache(maxsize=None)
    def minor(row: int, cols: tuple) -> Element:
        if row == n:
            return ring.one
        total = ring.zero
        for k, c in enumerate(cols):
            a = M.rows[row][c]
            if ring.is_zero(a):
                continue
            term = ring.mul(a, minor(row + 1, cols[:k] + cols[k + 1:]))
            total = ring.sub(total, term) if k % 2 else ring.add(total, term)
        return total

    return minor(0, tuple(range(n)))


def verify_kernel_span(n: int, p: int) -> bool:
    """Check that ``A(X, Y) · w == 0`` and that the leading ``n×n`` minor is ``X^n``.

    A nonzero minor of size ``n`` gives rank ``n`` over the fraction field,
    so the kernel is one-dimensional and spanned by ``w``.
    """
    R = Ring.poly(p, ("X", "Y"))
    X, Y = R.variable(0), R.variable(1)
    A = bidiagonal(R, n, X, Y)
    w = kernel_vector(n, p)
    col = RingMatrix(R, n + 1, 1, tuple((a,) for a in w))
    if not (A @ col).is_zero() or all(R.is_zero(a) for a in w):
        return False
    lead = A.submatrix(range(n), range(n))
    return determinant(lead) == R.pow(X, n)
