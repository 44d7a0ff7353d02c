"""Finite modules over finite GF(p)-algebras, their homomorphisms and splittings.

A module ``M_A = R^v / (rows of A)`` over a finite ring ``R`` that is an
algebra over ``GF(p)`` (``GF(p)``, ``Z/p``, truncated polynomial algebras)
is modelled as the ``GF(p)``-vector space ``R^v / K`` where ``K`` is the
``GF(p)``-span of ``b·row_i`` over the monomial basis ``b`` of ``R``.
Elements are coordinate vectors on the complement basis given by the
non-pivot coordinates of ``K`` in reduced echelon form.

Homomorphisms ``M_A -> N`` are determined by the images of the generators
``e_j``; those images must kill every relation row, which is one linear
system over ``GF(p)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import gf
from .matrix import (InvertibleMatrix, RingMatrix, ambient_vector, direct_sum, from_ambient,
                     ideal_generators, invert, scalar_action, submodule_span)
from .report import CertificationError
from .rings import Ring

MAX_AMBIENT_DIM = 64
DEFAULT_BUDGET = 20  # log2 of the largest search space enumerated exhaustively


class ModuleTooLarge(CertificationError):
    """The ambient coordinate space exceeds the configured bound."""


class FiniteModule:
    """Concrete ``GF(p)``-linear model of ``M_A`` for a finite ring."""

    def __init__(self, presentation: RingMatrix, max_dim: int = MAX_AMBIENT_DIM):
        ring = presentation.ring
        if not ring.is_finite or ring.prime is None:
            raise ValueError(f"finite modules need a finite GF(p)-algebra, got {ring}")
        self.ring = ring
        self.presentation = presentation
        self.p = ring.prime
        self.r = ring.dim
        self.v = presentation.ncols
        self.ambient_dim = self.v * self.r
        if self.ambient_dim > max_dim:
            raise ModuleTooLarge(f"ambient dimension {self.ambient_dim} exceeds the bound {max_dim}")
        rows = np.array([ambient_vector(ring, row) for row in presentation.rows],
                        dtype=np.int64).reshape(presentation.nrows, self.ambient_dim)
        self.relations = submodule_span(ring, rows, self.v)
        self.coset_coords = self.relations.complement_columns()
        self.dim = len(self.coset_coords)
        for row in rows:
            if self.normal_form(row).any():
                raise AssertionError("relation row does not vanish in the quotient")

    def __repr__(self) -> str:
        return f"FiniteModule({self.ring}, {self.presentation}, size={self.size})"

    @property
    def size(self) -> int:
        return self.p ** self.dim

    @property
    def relation_dim(self) -> int:
        return self.relations.dim

    # -- coordinates ---------------------------------------------------------

    def normal_form(self, ambient) -> np.ndarray:
        """Coordinates in ``M`` of ambient vector(s) of ``R^v``."""
        red = self.relations.reduce(ambient)
        return red[..., self.coset_coords]

    def lift(self, coords) -> np.ndarray:
        coords = np.asarray(coords, dtype=np.int64)
        out = np.zeros(coords.shape[:-1] + (self.ambient_dim,), dtype=np.int64)
        out[..., self.coset_coords] = coords
        return out

    def element(self, row) -> np.ndarray:
        """Coordinates of ``sum_j row[j] e_j``."""
        return self.normal_form(ambient_vector(self.ring, row))

    def lift_row(self, coords) -> tuple:
        """A vector of ``R^v`` mapping to the element with these coordinates."""
        return from_ambient(self.ring, self.lift(coords), self.v)

    @cached_property
    def generators(self) -> np.ndarray:
        """Coordinates of the images of ``e_1..e_v`` (rows)."""
        amb = np.zeros((self.v, self.ambient_dim), dtype=np.int64)
        one = self.ring.coords(self.ring.one)
        for j in range(self.v):
            amb[j, j * self.r:(j + 1) * self.r] = one
        return self.normal_form(amb)

    @cached_property
    def _lift_tensor(self) -> np.ndarray:
        """``L[k, j, b]``: coefficient of ``b e_j`` in the lift of coset basis vector ``k``."""
        eye = np.eye(self.dim, dtype=np.int64)
        return self.lift(eye).reshape(self.dim, self.v, self.r)

    @cached_property
    def basis_actions(self) -> np.ndarray:
        """Action matrices of the monomial basis of ``R``, shape ``(r, dim, dim)``."""
        out = np.zeros((self.r, self.dim, self.dim), dtype=np.int64)
        lifted = self.lift(np.eye(self.dim, dtype=np.int64))
        for i, mono in enumerate(self.ring.basis):
            b = self.ring.monomial(mono) if self.ring.is_polynomial else self.ring.one
            act = scalar_action(self.ring, b, self.v)
            out[i] = self.normal_form((lifted @ act.T) % self.p).T
        return out

    def action(self, a) -> np.ndarray:
        """Matrix of multiplication by ``a`` on coordinates (column convention)."""
        c = np.array(self.ring.coords(a), dtype=np.int64)
        return np.tensordot(c, self.basis_actions, axes=1) % self.p

    @cached_property
    def generator_actions(self) -> list[np.ndarray]:
        return [self.action(x) for x in ideal_generators(self.ring)]

    # -- radical layer -------------------------------------------------------

    @cached_property
    def radical(self) -> gf.Subspace:
        """``mM`` as a subspace of coordinates."""
        sub = gf.Subspace(self.p, self.dim)
        for act in self.generator_actions:
            if self.dim:
                sub.extend(act.T)
        return sub

    @cached_property
    def top_coords(self) -> list[int]:
        return self.radical.complement_columns()

    @property
    def top_dim(self) -> int:
        """``dim M/mM``: the minimal number of generators."""
        return len(self.top_coords)

    def top_project(self, vecs) -> np.ndarray:
        """Top coordinates of coordinate vector(s) (rows)."""
        return self.radical.reduce(vecs)[..., self.top_coords]

    @cached_property
    def is_minimal(self) -> bool:
        """Whether the presentation has minimal generator and relation counts."""
        if self.top_dim != self.v:
            return False
        A = self.presentation
        if not A.nrows:
            return True
        rows = np.array([ambient_vector(self.ring, r) for r in A.rows], dtype=np.int64)
        acc = gf.Subspace(self.p, self.ambient_dim)
        for x in ideal_generators(self.ring):
            acc.extend((self.relations.basis @ scalar_action(self.ring, x, self.v).T) % self.p)
        return all(acc.add_if_new(r) for r in rows)

    @cached_property
    def annihilator(self) -> gf.Subspace:
        """``ann(M)`` as a subspace of ``R`` in basis coordinates."""
        if not self.dim:
            return gf.Subspace(self.p, self.r, np.eye(self.r, dtype=np.int64))
        mat = self.basis_actions.reshape(self.r, -1).T
        return gf.Subspace(self.p, self.r, gf.nullspace(mat, self.p))


def build_module(A: RingMatrix, max_dim: int = MAX_AMBIENT_DIM) -> FiniteModule:
    return FiniteModule(A, max_dim)


# -- homomorphisms ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ModuleMap:
    """An R-linear map ``source -> target`` as a ``GF(p)`` matrix on coordinates."""

    source: FiniteModule
    target: FiniteModule
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.int64) % self.source.p
        object.__setattr__(self, "matrix", m)
        if m.shape != (self.target.dim, self.source.dim):
            raise ValueError(f"map of shape {m.shape} does not fit {self.target.dim}x{self.source.dim}")

    def is_r_linear(self) -> bool:
        p = self.source.p
        for a_src, a_tgt in zip(self.source.generator_actions, self.target.generator_actions):
            if ((self.matrix @ a_src - a_tgt @ self.matrix) % p).any():
                return False
        return True

    def then(self, other: ModuleMap) -> ModuleMap:
        """``other ∘ self``."""
        return ModuleMap(self.source, other.target, (other.matrix @ self.matrix) % self.source.p)

    def is_idempotent(self) -> bool:
        return self.source is self.target and bool(
            np.array_equal((self.matrix @ self.matrix) % self.source.p, self.matrix))

    def is_invertible(self) -> bool:
        return self.source.dim == self.target.dim and gf.rank(self.matrix, self.source.p) == self.source.dim

    def generator_images(self) -> np.ndarray:
        return (self.source.generators @ self.matrix.T) % self.source.p

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModuleMap):
            return NotImplemented
        return (self.source is other.source and self.target is other.target
                and np.array_equal(self.matrix, other.matrix))

    __hash__ = None


Endomorphism = ModuleMap


def identity_map(M: FiniteModule) -> ModuleMap:
    return ModuleMap(M, M, np.eye(M.dim, dtype=np.int64))


def hom_basis(M: FiniteModule, N: FiniteModule) -> np.ndarray:
    """Basis of ``Hom_R(M, N)`` over ``GF(p)``, shape ``(k, N.dim, M.dim)``."""
    if M.ring != N.ring:
        raise ValueError("modules over different rings")
    p = M.p
    A = M.presentation
    u, v, dn = A.nrows, A.ncols, N.dim
    if dn == 0 or M.dim == 0:
        return np.zeros((0, dn, M.dim), dtype=np.int64)
    big = np.zeros((u * dn, v * dn), dtype=np.int64)
    for i, row in enumerate(A.rows):
        for j, a in enumerate(row):
            if a != A.ring.zero:
                big[i * dn:(i + 1) * dn, j * dn:(j + 1) * dn] = N.action(a)
    sols = gf.nullspace(big, p)  # (k, v*dn): images of generators
    images = sols.reshape(-1, v, dn)
    # phi(coset vector k) = sum_{j,b} L[k,j,b] * act_N(b) @ m_j
    Y = np.einsum("bxy,njy->njbx", N.basis_actions, images) % p  # (n, v, r, dn)
    maps = np.einsum("kjb,njbx->nxk", M._lift_tensor, Y) % p
    return maps


def hom_space(M: FiniteModule, N: FiniteModule) -> list[ModuleMap]:
    return [ModuleMap(M, N, m) for m in hom_basis(M, N)]


def endomorphism_space(M: FiniteModule) -> list[ModuleMap]:
    return hom_space(M, M)


def top_maps(M: FiniteModule, N: FiniteModule, maps: np.ndarray) -> np.ndarray:
    """Induced maps ``M/mM -> N/mN`` of a stack of maps, shape ``(k, tN, tM)``."""
    if not len(maps):
        return np.zeros((0, N.top_dim, M.top_dim), dtype=np.int64)
    cols = maps[:, :, M.top_coords]  # images of top basis vectors, (k, dN, tM)
    imgs = np.swapaxes(cols, 1, 2).reshape(-1, N.dim)
    proj = N.top_project(imgs).reshape(len(maps), M.top_dim, N.top_dim)
    return np.swapaxes(proj, 1, 2)


def _independent_subset(p: int, flat: np.ndarray) -> list[int]:
    """Indices of the earliest rows forming a basis of the row span."""
    if not len(flat):
        return []
    return gf.rref(flat.T, p)[1]


def graded_coefficients(d: int, p: int, chunk: int = 1 << 15):
    """All nonzero coefficient vectors in ``GF(p)^d``, by support size then position.

    Yields arrays of shape ``(k, d)``.
    """
    nonzero = np.arange(1, p, dtype=np.int64)
    pending: list[np.ndarray] = []
    count = 0
    for s in range(1, d + 1):
        coeffs = np.array(list(itertools.product(nonzero, repeat=s)), dtype=np.int64).reshape(-1, s)
        step = max(1, chunk // len(coeffs))
        combos_iter = itertools.combinations(range(d), s)
        while True:
            combos = list(itertools.islice(combos_iter, step))
            if not combos:
                break
            pos = np.array(combos, dtype=np.int64)
            block = np.zeros((len(pos), len(coeffs), d), dtype=np.int64)
            rows = np.arange(len(pos))[:, None, None]
            cidx = np.arange(len(coeffs))[None, :, None]
            block[rows, cidx, pos[:, None, :]] = coeffs[None, :, :]
            pending.append(block.reshape(-1, d))
            count += len(pending[-1])
            if count >= chunk:
                yield np.concatenate(pending)
                pending, count = [], 0
        if pending:  # flush at the end of each support size
            yield np.concatenate(pending)
            pending, count = [], 0


# -- idempotents -----------------------------------------------------------------


@dataclass
class IdempotentSearch:
    """Outcome of :func:`search_idempotent`.

    ``idempotent`` is None when the whole top endomorphism algebra was
    enumerated without finding a nontrivial idempotent, which certifies
    that the module is indecomposable.
    """

    idempotent: ModuleMap | None
    top_algebra_dim: int
    candidates_checked: int
    exhaustive: bool


def lift_idempotent(phi: np.ndarray, p: int, max_rounds: int = 64) -> np.ndarray:
    """Newton iteration ``e <- 3e^2 - 2e^3``; converges when ``e^2 - e`` is nilpotent."""
    e = phi % p
    for _ in range(max_rounds):
        e2 = (e @ e) % p
        if np.array_equal(e2, e):
            return e
        e = (3 * e2 - 2 * ((e2 @ e) % p)) % p
    raise AssertionError("idempotent lifting did not converge")


def search_idempotent(M: FiniteModule, budget: int = DEFAULT_BUDGET) -> IdempotentSearch:
    """Look for a nontrivial idempotent endomorphism of ``M`` (ring must be local).

    The search runs over the image ``Ē`` of ``End(M)`` in ``End(M/mM)``.
    Endomorphisms inducing zero on the top map ``M`` into ``mM`` and form a
    nilpotent ideal, so idempotents of ``End(M)`` correspond to idempotents
    of ``Ē``: a hit is lifted by Newton iteration, and a full enumeration of
    ``Ē`` without a hit certifies that ``End(M)`` is local. Candidates are
    visited by support size in the chosen basis. At most ``2**budget``
    candidates are examined; running out before ``Ē`` is exhausted raises
    ``CertificationError``.
    """
    if not M.ring.is_local:
        raise ValueError(f"idempotent search needs a local ring, got {M.ring}")
    p = M.p
    if M.dim == 0:
        return IdempotentSearch(None, 0, 0, True)
    E = hom_basis(M, M)
    tops = top_maps(M, M, E)
    t = M.top_dim
    idx = _independent_subset(p, tops.reshape(len(tops), -1))
    d = len(idx)
    tb = tops[idx]
    eye = np.eye(t, dtype=np.int64)
    checked = 0
    cap = 1 << budget
    for coeffs in graded_coefficients(d, p):
        coeffs = coeffs[:cap - checked]
        cand = np.tensordot(coeffs, tb, axes=1) % p  # (k, t, t)
        sq = np.matmul(cand, cand) % p
        ok = np.all(sq == cand, axis=(1, 2)) & np.any(cand != 0, axis=(1, 2)) & \
            np.any(cand != eye, axis=(1, 2))
        hits = np.flatnonzero(ok)
        if hits.size:
            checked += int(hits[0]) + 1
            phi = np.tensordot(coeffs[hits[0]], E[idx], axes=1) % p
            e = lift_idempotent(phi, p)
            return IdempotentSearch(ModuleMap(M, M, e), d, checked, True)
        checked += len(coeffs)
        if checked >= cap and checked < p ** d - 1:
            raise CertificationError(
                f"no idempotent among {checked} candidates; the top endomorphism algebra has "
                f"{p}^{d} elements, beyond the budget 2^{budget}")
    return IdempotentSearch(None, d, checked, True)


def find_nontrivial_idempotent(M: FiniteModule, budget: int = DEFAULT_BUDGET) -> ModuleMap | None:
    """A nontrivial idempotent endomorphism, or None when ``M`` is indecomposable."""
    return search_idempotent(M, budget).idempotent


# -- presentations of submodules -----------------------------------------------


def _as_rows(x, n: int) -> np.ndarray:
    """``x`` as an int64 array of shape ``(k, n)``; also valid when ``n == 0``."""
    x = np.asarray(x, dtype=np.int64)
    if n == 0:
        return x.reshape(x.shape[0] if x.ndim > 1 else 0, 0)
    return x.reshape(-1, n)


def submodule(M: FiniteModule, elems: np.ndarray) -> gf.Subspace:
    """R-span of the given coordinate vectors."""
    elems = _as_rows(elems, M.dim)
    sub = gf.Subspace(M.p, M.dim)
    if len(elems):
        sub.extend(np.concatenate([elems @ act.T for act in M.basis_actions]) % M.p)
    return sub


def minimal_generators(M: FiniteModule, elems: np.ndarray) -> list[int]:
    """Indices of the earliest ``elems`` that minimally generate their R-span."""
    elems = _as_rows(elems, M.dim)
    span = submodule(M, elems)
    acc = gf.Subspace(M.p, M.dim)
    if span.dim:
        for act in M.generator_actions:
            acc.extend((span.basis @ act.T) % M.p)
    return [i for i, x in enumerate(elems) if acc.add_if_new(x)]


def presentation_from_generators(M: FiniteModule, gens: np.ndarray) -> RingMatrix:
    """Minimal relation matrix of the submodule generated by ``gens``.

    ``gens`` should already be a minimal generating set; the relation rows
    are chosen as a basis of ``K/mK`` where ``K`` is the kernel of
    ``R^a -> M``.
    """
    ring, p, r = M.ring, M.p, M.r
    gens = _as_rows(gens, M.dim)
    a = len(gens)
    if a == 0:
        return RingMatrix.zeros(ring, 0, 0)
    # column (i, b) = b * g_i
    cols = np.einsum("bxy,iy->ibx", M.basis_actions, gens).reshape(a * r, M.dim) % p
    kernel = gf.nullspace(cols.T, p)
    K = gf.Subspace(p, a * r, kernel) if len(kernel) else gf.Subspace(p, a * r)
    acc = gf.Subspace(p, a * r)
    if K.dim:
        for x in ideal_generators(ring):
            acc.extend((K.basis @ scalar_action(ring, x, a).T) % p)
    rows = [from_ambient(ring, vec, a) for vec in K.basis if acc.add_if_new(vec)]
    return RingMatrix(ring, len(rows), a, tuple(rows))


def express_in_relations(B: RingMatrix, targets: RingMatrix) -> RingMatrix | None:
    """``S`` with ``S · B == targets``, or None if some row is outside the R-span of ``B``'s rows."""
    ring = B.ring
    p = ring.prime
    if B.ncols == 0:
        return RingMatrix.zeros(ring, targets.nrows, B.nrows)
    basis_elems = [ring.monomial(b) for b in ring.basis] if ring.is_polynomial else [ring.one]
    cols = [ambient_vector(ring, tuple(ring.mul(b, x) for x in row))
            for row in B.rows for b in basis_elems]
    amb = B.ncols * ring.dim
    psi = np.array(cols, dtype=np.int64).reshape(-1, amb).T
    rows = []
    for target in targets.rows:
        x = gf.solve(psi, ambient_vector(ring, target), p)
        if x is None:
            return None
        rows.append(from_ambient(ring, x, B.nrows))
    return RingMatrix(ring, targets.nrows, B.nrows, tuple(rows))


@dataclass(frozen=True)
class Splitting:
    """``M ≅ eM ⊕ (1-e)M`` with presentations and, for minimal input, a transform.

    When present, ``P · A · Q == direct_sum(first, second)`` where ``A`` is the
    presentation of the split module.
    """

    first: RingMatrix
    second: RingMatrix
    P: InvertibleMatrix | None
    Q: InvertibleMatrix | None


def split(M: FiniteModule, e: ModuleMap) -> tuple[RingMatrix, RingMatrix]:
    """Presentations of ``eM`` and ``(1-e)M`` for a nontrivial idempotent ``e``."""
    s = split_with_transform(M, e)
    return s.first, s.second


def split_with_transform(M: FiniteModule, e: ModuleMap) -> Splitting:
    p = M.p
    if e.source is not M or not e.is_idempotent():
        raise ValueError("split needs an idempotent endomorphism of the module")
    eye = np.eye(M.dim, dtype=np.int64)
    if not e.matrix.any() or np.array_equal(e.matrix, eye):
        raise ValueError("split needs a nontrivial idempotent")
    f = (eye - e.matrix) % p
    a_el = (M.generators @ e.matrix.T) % p
    b_el = (M.generators @ f.T) % p
    ia = minimal_generators(M, a_el)
    ib = minimal_generators(M, b_el)
    first = presentation_from_generators(M, a_el[ia])
    second = presentation_from_generators(M, b_el[ib])
    dim_e = gf.rank(e.matrix, p)
    dim_f = gf.rank(f, p)
    if dim_e + dim_f != M.dim or gf.rank(np.concatenate([e.matrix, f], axis=1), p) != M.dim:
        raise AssertionError("images of e and 1-e are not complementary")
    if not M.is_minimal:
        return Splitting(first, second, None, None)

    ring = M.ring
    A = M.presentation
    new_gens = np.concatenate([a_el[ia], b_el[ib]])
    if len(new_gens) != M.v:
        raise AssertionError("summand generators do not match the generator count")
    T = RingMatrix(ring, M.v, M.v, tuple(M.lift_row(g) for g in new_gens))
    W = direct_sum(first, second)
    if W.nrows != A.nrows:
        raise AssertionError("summand relation counts do not add up")
    S = express_in_relations(A, W @ T)
    if S is None:
        raise AssertionError("summand relation is not a relation of the module")
    P = InvertibleMatrix(S, invert(S))
    Q = InvertibleMatrix(invert(T), T)
    if P.matrix @ A @ Q.matrix != W:
        raise AssertionError("splitting transform failed verification")
    return Splitting(first, second, P, Q)


# -- isomorphisms ------------------------------------------------------------------


@dataclass(frozen=True)
class Isomorphism:
    """An invertible R-linear map between two modules, or an invariant match."""

    method: str
    map: ModuleMap | None = None

    def __bool__(self) -> bool:
        return True


DEFAULT_SAMPLES = 1 << 14


def find_isomorphism(M: FiniteModule, N: FiniteModule, budget: int = DEFAULT_BUDGET,
                     seed: int = 0, samples: int = DEFAULT_SAMPLES) -> Isomorphism | None:
    """Search ``Hom(M, N)`` for an invertible map.

    Quick rejections compare sizes, generator counts and annihilators. A map
    is invertible iff it is surjective on tops (Nakayama) and ``|M| == |N|``,
    so the search runs over the image of ``Hom(M, N)`` in ``Hom(M/mM, N/mN)``:
    exhaustively in graded order when that image has at most ``2**budget``
    nonzero elements, otherwise by ``samples`` seeded random draws. A failed
    sampling run raises ``CertificationError`` (inconclusive), never None.
    """
    if M.ring != N.ring:
        raise ValueError("modules over different rings")
    p = M.p
    if M.dim != N.dim or M.top_dim != N.top_dim or M.annihilator != N.annihilator:
        return None
    if M.dim == 0:
        return Isomorphism("zero", ModuleMap(M, N, np.zeros((0, 0), dtype=np.int64)))
    H = hom_basis(M, N)
    tops = top_maps(M, N, H)
    t = M.top_dim
    idx = _independent_subset(p, tops.reshape(len(tops), -1))
    d = len(idx)
    tb = tops[idx]

    def first_hit(coeffs):
        cand = np.tensordot(coeffs, tb, axes=1) % p
        hits = np.flatnonzero(gf.batch_rank(cand, p) == t)
        if not hits.size:
            return None
        m = ModuleMap(M, N, np.tensordot(coeffs[hits[0]], H[idx], axes=1) % p)
        if not m.is_invertible():
            raise AssertionError("top-surjective map is not invertible")
        return Isomorphism("hom-search", m)

    if p ** d - 1 <= 1 << budget:
        for coeffs in graded_coefficients(d, p):
            found = first_hit(coeffs)
            if found:
                return found
        return None
    rng = np.random.default_rng(seed)
    drawn = 0
    while drawn < samples:
        k = min(4096, samples - drawn)
        found = first_hit(rng.integers(0, p, size=(k, d)))
        if found:
            return found
        drawn += k
    raise CertificationError(f"isomorphism search inconclusive after {samples} random samples")
