"""Smith normal form over Z and GF(p)[x], and decomposition numbers from it.

Over a principal ideal domain the invariant factors determine the module:
``M = R/(d_1) + ... + R/(d_r) + R^f``. Splitting each ``d_i`` into prime
(or irreducible) powers gives the indecomposable summands. Modules over
``Z/n`` are handled by lifting the presentation to ``Z`` and adding the
relations ``n e_j``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .matrix import (InvertibleMatrix, RingMatrix, minimize_presentation)
from .report import Certificate, DecompositionReport, Summand
from .rings import Element, Ring, prime_power

FACTOR_BOUND_Z = 10**9
FACTOR_BOUND_DEGREE = 12


class FactorizationBoundError(ValueError):
    pass


# -- Euclidean structure ------------------------------------------------------


class _IntOps:
    def __init__(self, ring: Ring):
        self.ring = ring

    def norm(self, a: int) -> int:
        return abs(a)

    def divmod(self, a: int, b: int):
        q, r = divmod(a, b)
        return q, r

    def normalizer(self, a: int) -> int:
        """Unit ``u`` with ``u*a`` normalized (positive)."""
        return -1 if a < 0 else 1


class _PolyOps:
    """Univariate polynomials over GF(p) in the ring's canonical tuple form."""

    def __init__(self, ring: Ring):
        if ring.kind != "poly" or ring.nvars != 1:
            raise ValueError(f"Smith normal form needs Z or GF(p)[x], got {ring}")
        self.ring = ring
        self.p = ring.modulus

    def deg(self, a) -> int:
        return a[-1][0][0] if a else -1

    def lc(self, a) -> int:
        return a[-1][1] if a else 0

    def norm(self, a) -> int:
        return self.deg(a)

    def divmod(self, a, b):
        ring, p = self.ring, self.p
        db, inv = self.deg(b), pow(self.lc(b), -1, p)
        q = ring.zero
        r = a
        while r and self.deg(r) >= db:
            shift = self.deg(r) - db
            t = ring.monomial((shift,), self.lc(r) * inv)
            q = ring.add(q, t)
            r = ring.sub(r, ring.mul(t, b))
        return q, r

    def normalizer(self, a):
        return self.ring.from_int(pow(self.lc(a), -1, self.p))


def _ops(ring: Ring):
    if ring.kind == "Z":
        return _IntOps(ring)
    return _PolyOps(ring)


# -- Smith normal form --------------------------------------------------------


@dataclass(frozen=True)
class SnfResult:
    A: RingMatrix
    P: InvertibleMatrix
    Q: InvertibleMatrix
    D: RingMatrix
    rank: int

    @property
    def diagonal(self) -> list[Element]:
        return [self.D.rows[i][i] for i in range(self.rank)]

    @property
    def invariant_factors(self) -> list[Element]:
        """Nonzero non-unit diagonal entries, in divisibility order."""
        ring = self.D.ring
        return [d for d in self.diagonal if not ring.is_unit(d)]

    @property
    def free_rank(self) -> int:
        return self.A.ncols - self.rank

    def verify(self) -> bool:
        if self.P.matrix @ self.A @ self.Q.matrix != self.D:
            return False
        ops = _ops(self.D.ring)
        zero = self.D.ring.zero
        diag = self.diagonal
        for i in range(self.D.nrows):
            for j in range(self.D.ncols):
                if (i != j or i >= self.rank) and self.D.rows[i][j] != zero:
                    return False
        for a, b in zip(diag, diag[1:]):
            if ops.divmod(b, a)[1] != zero:
                return False
        return all(ops.normalizer(d) == self.D.ring.one for d in diag)


def smith_normal_form(A: RingMatrix) -> SnfResult:
    """Diagonalize ``A`` by invertible row and column operations.

    Pivots are chosen by smallest absolute value (Z) or lowest degree
    (GF(p)[x]). Returns ``P, Q`` with ``P·A·Q == D`` checked exactly.
    """
    ring = A.ring
    ops = _ops(ring)
    u, v = A.shape
    zero, one = ring.zero, ring.one
    add, sub, mul = ring.add, ring.sub, ring.mul
    D = [list(r) for r in A.rows]
    P = [list(r) for r in RingMatrix.identity(ring, u).rows]
    Pi = [list(r) for r in RingMatrix.identity(ring, u).rows]
    Q = [list(r) for r in RingMatrix.identity(ring, v).rows]
    Qi = [list(r) for r in RingMatrix.identity(ring, v).rows]

    def row_add(i, k, c):  # row_i += c row_k
        D[i] = [add(x, mul(c, y)) for x, y in zip(D[i], D[k])]
        P[i] = [add(x, mul(c, y)) for x, y in zip(P[i], P[k])]
        for r in Pi:
            r[k] = sub(r[k], mul(r[i], c))

    def row_swap(i, k):
        if i != k:
            D[i], D[k] = D[k], D[i]
            P[i], P[k] = P[k], P[i]
            for r in Pi:
                r[i], r[k] = r[k], r[i]

    def row_scale(i, c, cinv):
        D[i] = [mul(c, x) for x in D[i]]
        P[i] = [mul(c, x) for x in P[i]]
        for r in Pi:
            r[i] = mul(r[i], cinv)

    def col_add(j, k, c):  # col_j += c col_k
        for r in D:
            r[j] = add(r[j], mul(c, r[k]))
        for r in Q:
            r[j] = add(r[j], mul(c, r[k]))
        Qi[k] = [sub(x, mul(c, y)) for x, y in zip(Qi[k], Qi[j])]

    def col_swap(j, k):
        if j != k:
            for r in D:
                r[j], r[k] = r[k], r[j]
            for r in Q:
                r[j], r[k] = r[k], r[j]
            Qi[j], Qi[k] = Qi[k], Qi[j]

    def smallest(cells):
        best = None
        for i, j in cells:
            a = D[i][j]
            if a != zero and (best is None or ops.norm(a) < ops.norm(D[best[0]][best[1]])):
                best = (i, j)
        return best

    t = 0
    while t < min(u, v):
        piv = smallest((i, j) for i in range(t, u) for j in range(t, v))
        if piv is None:
            break
        row_swap(t, piv[0])
        col_swap(t, piv[1])
        while True:
            clean = True
            for i in range(t + 1, u):
                if D[i][t] != zero:
                    q, r = ops.divmod(D[i][t], D[t][t])
                    row_add(i, t, ring.neg(q))
                    if r != zero:
                        clean = False
            for j in range(t + 1, v):
                if D[t][j] != zero:
                    q, r = ops.divmod(D[t][j], D[t][t])
                    col_add(j, t, ring.neg(q))
                    if r != zero:
                        clean = False
            if not clean:
                cells = [(i, t) for i in range(t, u)] + [(t, j) for j in range(t + 1, v)]
                piv = smallest(cells)
                row_swap(t, piv[0])
                col_swap(t, piv[1])
                continue
            bad = next(((i, j) for i in range(t + 1, u) for j in range(t + 1, v)
                        if ops.divmod(D[i][j], D[t][t])[1] != zero), None)
            if bad is None:
                break
            row_add(t, bad[0], one)
        c = ops.normalizer(D[t][t])
        if c != one:
            row_scale(t, c, ring.try_invert(c))
        t += 1

    def mat(rows, n, m):
        return RingMatrix(ring, n, m, tuple(tuple(r) for r in rows))

    res = SnfResult(A, InvertibleMatrix(mat(P, u, u), mat(Pi, u, u)),
                    InvertibleMatrix(mat(Q, v, v), mat(Qi, v, v)), mat(D, u, v), t)
    if not res.verify():
        raise AssertionError("Smith normal form failed verification")
    return res


# -- factorization --------------------------------------------------------------


def factor_integer(n: int) -> list[tuple[int, int]]:
    """Prime factorization of ``|n|`` by trial division, ``|n| <= 10^9``."""
    n = abs(n)
    if n > FACTOR_BOUND_Z:
        raise FactorizationBoundError(f"{n} exceeds the trial-division bound {FACTOR_BOUND_Z}")
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            k = 0
            while n % f == 0:
                n //= f
                k += 1
            out.append((f, k))
        f += 1 if f == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def _monic_polys(ring: Ring, degree: int):
    p = ring.modulus
    for coeffs in itertools.product(range(p), repeat=degree):
        terms = {(i,): c for i, c in enumerate(coeffs) if c}
        terms[(degree,)] = 1
        yield ring._canon(terms)


def factor_polynomial(ring: Ring, a) -> list[tuple[Element, int]]:
    """Monic irreducible factorization over GF(p) by trial division, degree <= 12."""
    ops = _PolyOps(ring)
    deg = ops.deg(a)
    if deg > FACTOR_BOUND_DEGREE:
        raise FactorizationBoundError(f"degree {deg} exceeds the factorization bound {FACTOR_BOUND_DEGREE}")
    a = ring.mul(ops.normalizer(a), a)
    out = []
    d = 1
    while ops.deg(a) > 0:
        if 2 * d > ops.deg(a):
            out.append((a, 1))
            break
        for f in _monic_polys(ring, d):
            q, r = ops.divmod(a, f)
            if r:
                continue
            k = 0
            while True:
                q, r = ops.divmod(a, f)
                if r:
                    break
                a = q
                k += 1
            out.append((f, k))
        d += 1
    merged: dict = {}
    for f, k in out:
        merged[f] = merged.get(f, 0) + k
    return sorted(merged.items(), key=lambda t: (ops.deg(t[0]), t[0]))


def prime_power_parts(ring: Ring, d: Element) -> list[Element]:
    """The maximal prime-power (irreducible-power) divisors of ``d``."""
    if ring.kind == "Z":
        return [f ** k for f, k in factor_integer(d)]
    return [ring.pow(f, k) for f, k in factor_polynomial(ring, d)]


# -- decomposition numbers ------------------------------------------------------


def dn_from_snf(res: SnfResult) -> DecompositionReport:
    """Indecomposable summands ``R/(q)`` (q prime powers) and ``R`` from a Smith form."""
    ring = res.D.ring
    parts = []
    for d in res.invariant_factors:
        parts.extend(prime_power_parts(ring, d))
    summands = _cyclic_summands(ring, parts, res.free_rank, ring)
    dn = sum(s.multiplicity for s in summands)
    return DecompositionReport(ring, res.A, "snf", dn, tuple(summands))


def _cyclic_summands(ring: Ring, parts, free: int, out_ring: Ring) -> list[Summand]:
    counts: dict = {}
    for q in parts:
        counts[q] = counts.get(q, 0) + 1
    summands = []
    for q, m in counts.items():
        if out_ring.kind == "Z/n":
            n = out_ring.modulus
            pres = (RingMatrix.from_rows(out_ring, [[q % n]]) if q % n
                    else RingMatrix.zeros(out_ring, 0, 1))
        else:
            pres = RingMatrix(out_ring, 1, 1, ((q,),))
        summands.append(Summand(pres, m, _cyclic_size(ring, q)))
    if free:
        size = out_ring.modulus if out_ring.kind == "Z/n" else None
        summands.append(Summand(RingMatrix.zeros(out_ring, 0, 1), free, size))
    summands.sort(key=Summand.sort_key)
    return summands


def _cyclic_size(ring: Ring, q) -> int:
    if ring.kind == "Z":
        return abs(q)
    return ring.modulus ** _PolyOps(ring).deg(q)


def lift_to_integers(A: RingMatrix, with_modulus: bool = True) -> RingMatrix:
    """Presentation over Z of the same abelian group as ``A`` over ``Z/n``."""
    Z = Ring.integers()
    n = A.ring.modulus
    rows = [list(r) for r in A.rows]
    if with_modulus:
        rows += [[n if i == j else 0 for j in range(A.ncols)] for i in range(A.ncols)]
    return RingMatrix(Z, len(rows), A.ncols, tuple(tuple(r) for r in rows))


def reduce_mod(A: RingMatrix, ring: Ring) -> RingMatrix:
    return RingMatrix(ring, A.nrows, A.ncols, tuple(tuple(a % ring.modulus for a in r) for r in A.rows))


def decompose_snf(A: RingMatrix) -> DecompositionReport:
    """Decomposition over Z, GF(p)[x] or Z/n via invariant factors."""
    ring = A.ring
    if ring.kind in ("Z", "poly"):
        return dn_from_snf(smith_normal_form(A))
    if ring.kind != "Z/n":
        raise ValueError(f"the Smith normal form engine does not handle {ring}")
    res = smith_normal_form(lift_to_integers(A))
    Z = Ring.integers()
    parts = []
    for d in res.invariant_factors:
        parts.extend(prime_power_parts(Z, d))
    summands = _cyclic_summands(Z, parts, 0, ring)
    dn = sum(s.multiplicity for s in summands)
    cert = None
    if prime_power(ring.modulus) is not None:
        cert = _local_certificate(A)
    return DecompositionReport(ring, A, "snf", dn, tuple(summands), cert)


def _local_certificate(A: RingMatrix) -> Certificate:
    """Over ``Z/p^k``: a Smith form of the minimized presentation, reduced mod ``p^k``."""
    ring = A.ring
    Amin, _ = minimize_presentation(A)
    res = smith_normal_form(lift_to_integers(Amin, with_modulus=False))

    def down(m: InvertibleMatrix) -> InvertibleMatrix:
        return InvertibleMatrix(reduce_mod(m.matrix, ring), reduce_mod(m.inverse, ring))

    cert = Certificate(Amin, down(res.P), down(res.Q), reduce_mod(res.D, ring))
    if not cert.verify():
        raise AssertionError("local certificate failed verification")
    return cert


def invariant_signature(A: RingMatrix) -> tuple:
    """Multiset of prime-power summands plus free rank; equal iff modules isomorphic."""
    ring = A.ring
    if ring.kind == "Z/n":
        res = smith_normal_form(lift_to_integers(A))
        base = Ring.integers()
    else:
        res = smith_normal_form(A)
        base = ring
    parts = []
    for d in res.invariant_factors:
        parts.extend(prime_power_parts(base, d))
    return (tuple(sorted(parts)), res.free_rank)
