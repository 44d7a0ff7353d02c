"""Relationship matrices over the supported rings.

A :class:`RingMatrix` with ``u`` rows and ``v`` columns presents the module
``R^v / (row space)``: row ``i`` is the relation ``sum_j a_ij e_j = 0``.
This module holds the matrix type, the block structure of a fixed matrix,
equivalence transforms ``P·A·Q``, presentation minimization and the text
file format.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import gf
from .rings import Element, Ring, RingParseError, parse_ring


@dataclass(frozen=True, repr=False)
class RingMatrix:
    ring: Ring
    nrows: int
    ncols: int
    rows: tuple[tuple[Element, ...], ...]

    def __post_init__(self):
        if len(self.rows) != self.nrows or any(len(r) != self.ncols for r in self.rows):
            raise ValueError(f"entries do not match shape {self.nrows}x{self.ncols}")

    @classmethod
    def from_rows(cls, ring: Ring, rows: Sequence[Sequence], ncols: int | None = None) -> RingMatrix:
        """Build from nested lists; entries may be canonical elements, ints or strings."""
        conv = []
        for row in rows:
            conv.append(tuple(_coerce(ring, a) for a in row))
        if ncols is None:
            if not conv:
                raise ValueError("ncols is required for a matrix without rows")
            ncols = len(conv[0])
        return cls(ring, len(conv), ncols, tuple(conv))

    @classmethod
    def zeros(cls, ring: Ring, u: int, v: int) -> RingMatrix:
        return cls(ring, u, v, tuple((ring.zero,) * v for _ in range(u)))

    @classmethod
    def identity(cls, ring: Ring, n: int) -> RingMatrix:
        z, o = ring.zero, ring.one
        return cls(ring, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def transpose(self) -> RingMatrix:
        return RingMatrix(self.ring, self.ncols, self.nrows,
                          tuple(self.column(j) for j in range(self.ncols)))

    def __matmul__(self, other: RingMatrix) -> RingMatrix:
        if self.ring != other.ring:
            raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
        if self.ncols != other.nrows:
            raise ValueError(f"dimension mismatch: {self.shape} @ {other.shape}")
        ring = self.ring
        zero = ring.zero
        add, mul = ring.add, ring.mul
        cols = [other.column(j) for j in range(other.ncols)]
        out = []
        for row in self.rows:
            nz = [(k, a) for k, a in enumerate(row) if a != zero]
            new = []
            for col in cols:
                acc = zero
                for k, a in nz:
                    b = col[k]
                    if b != zero:
                        acc = add(acc, mul(a, b))
                new.append(acc)
            out.append(tuple(new))
        return RingMatrix(ring, self.nrows, other.ncols, tuple(out))

    def __add__(self, other: RingMatrix) -> RingMatrix:
        if self.shape != other.shape or self.ring != other.ring:
            raise ValueError("shape or ring mismatch in addition")
        add = self.ring.add
        return RingMatrix(self.ring, self.nrows, self.ncols, tuple(
            tuple(add(a, b) for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def is_zero(self) -> bool:
        z = self.ring.zero
        return all(a == z for r in self.rows for a in r)

    def is_identity(self) -> bool:
        return self.nrows == self.ncols and self == RingMatrix.identity(self.ring, self.nrows)

    def has_unit_entry(self) -> bool:
        return any(self.ring.is_unit(a) for r in self.rows for a in r)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> RingMatrix:
        return RingMatrix(self.ring, len(rows), len(cols),
                          tuple(tuple(self.rows[i][j] for j in cols) for i in rows))

    def entries_text(self) -> list[list[str]]:
        return [[self.ring.format(a) for a in r] for r in self.rows]

    def __str__(self) -> str:
        if not self.nrows:
            return f"[] ({self.nrows}x{self.ncols})"
        return "[" + ", ".join("[" + ", ".join(r) + "]" for r in self.entries_text()) + "]"

    def __repr__(self) -> str:
        return f"RingMatrix({self.ring}, {self})"


def _coerce(ring: Ring, a) -> Element:
    if isinstance(a, str):
        return ring.parse(a)
    if isinstance(a, (int, np.integer)) and not isinstance(a, bool):
        return ring.from_int(int(a))
    return ring.check(a)


# -- invertible matrices and transform pairs ---------------------------------


@dataclass(frozen=True)
class InvertibleMatrix:
    """A square matrix stored together with a verified two-sided inverse."""

    matrix: RingMatrix
    inverse: RingMatrix

    def __post_init__(self):
        n = self.matrix.nrows
        if self.matrix.shape != (n, n) or self.inverse.shape != (n, n):
            raise ValueError("invertible matrices must be square")
        if not (self.matrix @ self.inverse).is_identity() or not (self.inverse @ self.matrix).is_identity():
            raise ValueError("stored inverse does not invert the matrix")

    @classmethod
    def identity(cls, ring: Ring, n: int) -> InvertibleMatrix:
        eye = RingMatrix.identity(ring, n)
        return cls(eye, eye)

    @classmethod
    def from_matrix(cls, m: RingMatrix) -> InvertibleMatrix:
        return cls(m, invert(m))

    @property
    def n(self) -> int:
        return self.matrix.nrows

    def __matmul__(self, other: InvertibleMatrix) -> InvertibleMatrix:
        return InvertibleMatrix(self.matrix @ other.matrix, other.inverse @ self.inverse)

    def inverted(self) -> InvertibleMatrix:
        return InvertibleMatrix(self.inverse, self.matrix)


@dataclass(frozen=True)
class TransformPair:
    """Invertible ``P`` (u×u) and ``Q`` (v×v) acting as ``A -> P·A·Q``."""

    P: InvertibleMatrix
    Q: InvertibleMatrix


def apply_transform(A: RingMatrix, t: TransformPair) -> RingMatrix:
    if t.P.n != A.nrows or t.Q.n != A.ncols:
        raise ValueError(f"transform sizes ({t.P.n}, {t.Q.n}) do not fit a {A.nrows}x{A.ncols} matrix")
    return t.P.matrix @ A @ t.Q.matrix


def invert(m: RingMatrix) -> RingMatrix:
    """Inverse by Gauss-Jordan elimination with unit pivots.

    Always succeeds for invertible matrices over fields and local rings.
    Over ``Z`` or non-local ``Z/n`` an invertible matrix may have no unit
    pivot in some column, in which case ``ValueError`` is raised.
    """
    ring = m.ring
    n = m.nrows
    if m.shape != (n, n):
        raise ValueError("cannot invert a non-square matrix")
    a = [list(r) for r in m.rows]
    inv = [list(r) for r in RingMatrix.identity(ring, n).rows]
    for c in range(n):
        piv = None
        for r in range(c, n):
            u = ring.try_invert(a[r][c])
            if u is not None:
                piv = (r, u)
                break
        if piv is None:
            raise ValueError("matrix is not invertible (no unit pivot)")
        r, u = piv
        a[c], a[r] = a[r], a[c]
        inv[c], inv[r] = inv[r], inv[c]
        a[c] = [ring.mul(u, x) for x in a[c]]
        inv[c] = [ring.mul(u, x) for x in inv[c]]
        for k in range(n):
            f = a[k][c]
            if k != c and f != ring.zero:
                a[k] = [ring.sub(x, ring.mul(f, y)) for x, y in zip(a[k], a[c])]
                inv[k] = [ring.sub(x, ring.mul(f, y)) for x, y in zip(inv[k], inv[c])]
    return RingMatrix(ring, n, n, tuple(tuple(r) for r in inv))


# -- block structure ---------------------------------------------------------


@dataclass(frozen=True)
class BlockPartition:
    """Column classes of a matrix; ``classes`` hold 0-based column indices."""

    classes: tuple[tuple[int, ...], ...]

    @property
    def bn(self) -> int:
        return len(self.classes)

    def __str__(self) -> str:
        return " ".join("{" + ",".join(str(c + 1) for c in cls) + "}" for cls in self.classes)


def detect_blocks(A: RingMatrix) -> BlockPartition:
    """Connected components of columns linked by a shared nonzero row.

    All-zero columns come out as singleton classes; all-zero rows link
    nothing. Classes are ordered by their smallest column.
    """
    parent = list(range(A.ncols))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    zero = A.ring.zero
    for row in A.rows:
        nz = [j for j, a in enumerate(row) if a != zero]
        for j in nz[1:]:
            ri, rj = find(nz[0]), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for j in range(A.ncols):
        groups.setdefault(find(j), []).append(j)
    return BlockPartition(tuple(tuple(g) for g in sorted(groups.values())))


def block_number(A: RingMatrix) -> int:
    return detect_blocks(A).bn


# -- direct sums -------------------------------------------------------------


def direct_sum(*mats: RingMatrix) -> RingMatrix:
    """Block-diagonal matrix ``diag(A, B, ...)``."""
    if not mats:
        raise ValueError("direct_sum needs at least one matrix")
    ring = mats[0].ring
    for m in mats[1:]:
        if m.ring != ring:
            raise ValueError(f"ring mismatch: {ring} vs {m.ring}")
    v = sum(m.ncols for m in mats)
    zero = ring.zero
    rows = []
    offset = 0
    for m in mats:
        for r in m.rows:
            rows.append((zero,) * offset + tuple(r) + (zero,) * (v - offset - m.ncols))
        offset += m.ncols
    return RingMatrix(ring, len(rows), v, tuple(rows))


def block_diag_invertible(*mats: InvertibleMatrix) -> InvertibleMatrix:
    return InvertibleMatrix(direct_sum(*(m.matrix for m in mats)),
                            direct_sum(*(m.inverse for m in mats)))


def permutation_matrix(ring: Ring, perm: Sequence[int]) -> InvertibleMatrix:
    """``P`` with ``(P @ A)[i] == A[perm[i]]``."""
    n = len(perm)
    z, o = ring.zero, ring.one
    rows = tuple(tuple(o if j == perm[i] else z for j in range(n)) for i in range(n))
    m = RingMatrix(ring, n, n, rows)
    return InvertibleMatrix(m, m.transpose())


# -- random equivalence transforms -------------------------------------------


def _random_element(ring: Ring, rng: random.Random, nonzero: bool = False) -> Element:
    if ring.is_finite:
        pool = ring.element_list[1:] if nonzero else ring.element_list
        return rng.choice(pool)
    if ring.kind == "Z":
        vals = [-3, -2, -1, 1, 2, 3] if nonzero else list(range(-3, 4))
        return rng.choice(vals)
    raise ValueError(f"no random elements for {ring}")


def _random_unit(ring: Ring, rng: random.Random) -> Element:
    if ring.is_finite:
        return rng.choice(ring.unit_list)
    if ring.kind == "Z":
        return rng.choice([1, -1])
    raise ValueError(f"no random units for {ring}")


def random_invertible(ring: Ring, n: int, seed=0, factors: int | None = None) -> InvertibleMatrix:
    """Product of random elementary matrices, with its inverse.

    ``seed`` may be an int or a ``random.Random`` instance. The factor count
    defaults to ``3n``; each factor is a row swap, a unit scaling or a
    transvection.
    """
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    if n == 0:
        return InvertibleMatrix.identity(ring, 0)
    if factors is None:
        factors = 3 * n
    mat = [list(r) for r in RingMatrix.identity(ring, n).rows]
    inv = [list(r) for r in RingMatrix.identity(ring, n).rows]
    add, sub, mul = ring.add, ring.sub, ring.mul
    for _ in range(factors):
        kinds = ["scale"] if n == 1 else ["swap", "scale", "add", "add"]
        kind = rng.choice(kinds)
        if kind == "swap":
            i, j = rng.sample(range(n), 2)
            mat[i], mat[j] = mat[j], mat[i]
            for r in inv:
                r[i], r[j] = r[j], r[i]
        elif kind == "scale":
            i = rng.randrange(n)
            u = _random_unit(ring, rng)
            uinv = ring.try_invert(u)
            mat[i] = [mul(u, x) for x in mat[i]]
            for r in inv:
                r[i] = mul(r[i], uinv)
        else:
            i, j = rng.sample(range(n), 2)
            c = _random_element(ring, rng, nonzero=True)
            # row_j += c row_i; inverse gets col_i -= c col_j
            mat[j] = [add(x, mul(c, y)) for x, y in zip(mat[j], mat[i])]
            for r in inv:
                r[i] = sub(r[i], mul(r[j], c))
    return InvertibleMatrix(RingMatrix(ring, n, n, tuple(map(tuple, mat))),
                            RingMatrix(ring, n, n, tuple(map(tuple, inv))))


def random_transform(ring: Ring, u: int, v: int, seed=0, factors: int | None = None) -> TransformPair:
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    return TransformPair(random_invertible(ring, u, rng, factors), random_invertible(ring, v, rng, factors))


def random_matrix(ring: Ring, u: int, v: int, seed=0, zero_prob: float = 0.3) -> RingMatrix:
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    rows = []
    for _ in range(u):
        rows.append(tuple(ring.zero if rng.random() < zero_prob else _random_element(ring, rng)
                          for _ in range(v)))
    return RingMatrix(ring, u, v, tuple(rows))


# -- GF(p) coordinates of rows ------------------------------------------------


def ambient_vector(ring: Ring, row: Sequence[Element]) -> np.ndarray:
    """Concatenated ``GF(p)`` coordinates of a vector in ``R^v``."""
    if not row:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate([np.array(ring.coords(a), dtype=np.int64) for a in row])


def from_ambient(ring: Ring, vec, v: int) -> tuple[Element, ...]:
    r = ring.dim
    return tuple(ring.from_coords(vec[j * r:(j + 1) * r]) for j in range(v))


def scalar_action(ring: Ring, a: Element, v: int) -> np.ndarray:
    """Matrix of multiplication by ``a`` on ``R^v`` in ambient coordinates."""
    return np.kron(np.eye(v, dtype=np.int64), ring.mult_matrix(a))


def ideal_generators(ring: Ring) -> list[Element]:
    """Generators of the maximal ideal (the variables; nothing for a field)."""
    return [ring.variable(i) for i in range(ring.nvars)] if ring.kind == "truncated" else []


def submodule_span(ring: Ring, vectors: np.ndarray, v: int) -> gf.Subspace:
    """``GF(p)``-subspace of ``R^v`` equal to the R-span of ``vectors``."""
    p = ring.prime
    sub = gf.Subspace(p, v * ring.dim)
    if v == 0:
        return sub
    vectors = np.asarray(vectors, dtype=np.int64).reshape(-1, v * ring.dim)
    if len(vectors):
        mats = [scalar_action(ring, ring.monomial(b), v) for b in ring.basis] if ring.is_polynomial \
            else [np.eye(v * ring.dim, dtype=np.int64)]
        sub.extend(np.concatenate([vectors @ m.T for m in mats]) % p)
    return sub


# -- presentation minimization ------------------------------------------------


@dataclass(frozen=True)
class Reduction:
    """One step of :func:`minimize_presentation`; indices refer to the matrix at that step."""

    kind: str  # "zero_row", "duplicate_row", "redundant_row" or "unit_pivot"
    row: int
    col: int | None = None

    def __str__(self) -> str:
        if self.kind == "unit_pivot":
            return f"unit_pivot({self.row + 1},{self.col + 1})"
        return f"{self.kind}({self.row + 1})"


def minimize_presentation(A: RingMatrix) -> tuple[RingMatrix, list[Reduction]]:
    """Strip redundant relations and generators; return the matrix and an audit trail.

    Over local rings (``GF(p)``, truncated algebras, ``Z/p^k``) every unit
    entry is used as a pivot: its row and column are cleared and deleted.
    Zero rows and duplicate rows are dropped for every ring. Over rings that
    are ``GF(p)``-algebras, rows lying in the R-span of the others modulo
    ``m`` times the relation module are dropped too, so the output is a
    minimal presentation. Over ``Z`` and non-local ``Z/n`` only zero and
    duplicate rows are removed.
    """
    ring = A.ring
    rows = [list(r) for r in A.rows]
    v = A.ncols
    trail: list[Reduction] = []
    zero = ring.zero
    pivoting = ring.is_local

    while True:
        changed = False
        for i in range(len(rows)):
            if all(a == zero for a in rows[i]):
                del rows[i]
                trail.append(Reduction("zero_row", i))
                changed = True
                break
        if changed:
            continue
        seen: dict = {}
        for i, r in enumerate(rows):
            key = tuple(r)
            if key in seen:
                del rows[i]
                trail.append(Reduction("duplicate_row", i))
                changed = True
                break
            seen[key] = i
        if changed:
            continue
        if pivoting:
            pivot = next(((i, j) for i, r in enumerate(rows) for j, a in enumerate(r)
                          if ring.is_unit(a)), None)
            if pivot is not None:
                i, j = pivot
                inv = ring.try_invert(rows[i][j])
                for k in range(len(rows)):
                    if k != i and rows[k][j] != zero:
                        f = ring.mul(rows[k][j], inv)
                        rows[k] = [ring.sub(x, ring.mul(f, y)) for x, y in zip(rows[k], rows[i])]
                del rows[i]
                for r in rows:
                    del r[j]
                v -= 1
                trail.append(Reduction("unit_pivot", i, j))
                continue
        break

    if ring.prime is not None and ring.is_local and rows:
        keep = _minimal_row_subset(ring, rows, v)
        for i in reversed(range(len(rows))):
            if i not in keep:
                trail.append(Reduction("redundant_row", i))
                del rows[i]
    return RingMatrix(ring, len(rows), v, tuple(tuple(r) for r in rows)), trail


def _minimal_row_subset(ring: Ring, rows, v: int) -> set[int]:
    """Indices of the earliest rows whose images form a basis of ``K / mK``."""
    p = ring.prime
    vecs = np.array([ambient_vector(ring, r) for r in rows], dtype=np.int64).reshape(len(rows), -1)
    module = submodule_span(ring, vecs, v)
    acc = gf.Subspace(p, v * ring.dim)
    for x in ideal_generators(ring):
        act = scalar_action(ring, x, v)
        acc.extend((module.basis @ act.T) % p)
    keep = set()
    for i, vec in enumerate(vecs):
        if acc.add_if_new(vec):
            keep.add(i)
    return keep


# -- text format ---------------------------------------------------------------


class MatrixParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


def parse_matrix_text(text: str) -> RingMatrix:
    """Parse the ``ring``/``matrix`` text format."""
    lines = []
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if body.strip():
            lines.append((no, body))
    if not lines:
        raise MatrixParseError("empty input", 1)
    no, body = lines[0]
    head, _, rest = body.strip().partition(" ")
    if head != "ring" or not rest.strip():
        raise MatrixParseError("expected 'ring <descriptor>'", no, 1)
    try:
        ring = parse_ring(rest)
    except RingParseError as exc:
        col = body.index(rest.strip()) + exc.position + 1
        raise MatrixParseError(str(exc), no, col) from exc
    if len(lines) < 2:
        raise MatrixParseError("expected 'matrix <u> <v>'", no + 1, 1)
    no, body = lines[1]
    parts = body.split()
    if len(parts) != 3 or parts[0] != "matrix" or not parts[1].isdigit() or not parts[2].isdigit():
        raise MatrixParseError("expected 'matrix <u> <v>'", no, 1)
    u, v = int(parts[1]), int(parts[2])
    body_lines = lines[2:]
    if len(body_lines) != u:
        where = body_lines[u][0] if len(body_lines) > u else (lines[-1][0] + 1)
        raise MatrixParseError(f"expected {u} rows, found {len(body_lines)}", where, 1)
    rows = []
    for no, body in body_lines:
        entries = body.split()
        if len(entries) != v:
            raise MatrixParseError(f"expected {v} entries, found {len(entries)}", no, 1)
        row = []
        search = 0
        for tok in entries:
            col = body.index(tok, search)
            search = col + len(tok)
            try:
                row.append(ring.parse(tok))
            except RingParseError as exc:
                raise MatrixParseError(str(exc), no, col + exc.position + 1) from exc
        rows.append(tuple(row))
    return RingMatrix(ring, u, v, tuple(rows))


def format_matrix_text(A: RingMatrix) -> str:
    lines = [f"ring {A.ring}", f"matrix {A.nrows} {A.ncols}"]
    lines += [" ".join(r) for r in A.entries_text()]
    return "\n".join(lines) + "\n"


def read_matrix(path) -> RingMatrix:
    with open(path, encoding="utf-8") as fh:
        return parse_matrix_text(fh.read())
