"""Matrices as objects of a category, pairs ``{S, T}`` as morphisms.

A morphism from ``A`` (u×v) to ``B`` (s×t) is a pair ``S`` (u×s), ``T``
(v×t) with ``A·T == S·B``. It induces the module map ``M_A -> M_B`` sending
generator ``e_j`` to row ``j`` of ``T``. Two pairs are identified when they
induce the same module map, which is what makes the passage between
matrices and finite modules an isomorphism of categories.

Everything beyond object reduction needs a finite ``GF(p)``-algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .matrix import RingMatrix, ambient_vector, minimize_presentation
from .modules import (FiniteModule, ModuleMap, express_in_relations, find_isomorphism, hom_basis,
                      minimal_generators, presentation_from_generators)
from .rings import Ring


@dataclass(frozen=True, eq=False)
class MatObject:
    """A matrix up to equivalence, stored through a minimized representative."""

    representative: RingMatrix
    fully_reduced: bool = True  # False over non-local rings, where only zero rows are stripped

    @property
    def ring(self) -> Ring:
        return self.representative.ring

    @cached_property
    def module(self) -> FiniteModule:
        return FiniteModule(self.representative)

    def is_isomorphic(self, other: MatObject) -> bool:
        return find_isomorphism(self.module, other.module) is not None

    def __str__(self) -> str:
        return str(self.representative)


def reduce_object(A: RingMatrix) -> MatObject:
    Amin, _ = minimize_presentation(A)
    return MatObject(Amin, A.ring.is_local)


def to_module(obj: MatObject) -> FiniteModule:
    return obj.module


def from_module(M: FiniteModule | RingMatrix) -> MatObject:
    """Object presenting ``M``, read back from minimal generators of the module."""
    if isinstance(M, RingMatrix):
        M = FiniteModule(M)
    gens = M.generators
    idx = minimal_generators(M, gens)
    return MatObject(presentation_from_generators(M, gens[idx]))


@dataclass(frozen=True, eq=False)
class MatMorphism:
    source: MatObject
    target: MatObject
    S: RingMatrix
    T: RingMatrix

    def __post_init__(self):
        A, B = self.source.representative, self.target.representative
        if self.S.shape != (A.nrows, B.nrows) or self.T.shape != (A.ncols, B.ncols):
            raise ValueError(f"pair shapes {self.S.shape}, {self.T.shape} do not fit {A.shape} -> {B.shape}")
        if A @ self.T != self.S @ B:
            raise ValueError("pair does not satisfy A·T = S·B")

    @cached_property
    def module_map(self) -> ModuleMap:
        """The induced map on coset normal forms."""
        Msrc, Mtgt = self.source.module, self.target.module
        ring = self.source.ring
        cols = []
        for k in range(Msrc.dim):
            unit = np.zeros(Msrc.dim, dtype=np.int64)
            unit[k] = 1
            row = RingMatrix(ring, 1, Msrc.v, (Msrc.lift_row(unit),))
            image = (row @ self.T).rows[0]
            cols.append(Mtgt.normal_form(ambient_vector(ring, image)))
        mat = np.array(cols, dtype=np.int64).reshape(Msrc.dim, Mtgt.dim).T
        return ModuleMap(Msrc, Mtgt, mat)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatMorphism):
            return NotImplemented
        return (self.source is other.source and self.target is other.target
                and np.array_equal(self.module_map.matrix, other.module_map.matrix))

    __hash__ = None


def identity_morphism(obj: MatObject) -> MatMorphism:
    A = obj.representative
    return MatMorphism(obj, obj, RingMatrix.identity(A.ring, A.nrows), RingMatrix.identity(A.ring, A.ncols))


def compose(f: MatMorphism, g: MatMorphism) -> MatMorphism:
    """``g ∘ f`` as the pair ``{S_f S_g, T_f T_g}``; ``f`` is applied first."""
    if f.target is not g.source:
        raise ValueError("morphisms are not composable: target of the first is not the source of the second")
    return MatMorphism(f.source, g.target, f.S @ g.S, f.T @ g.T)


def morphism_from_module_map(phi: ModuleMap, source: MatObject, target: MatObject) -> MatMorphism:
    """The pair ``{S, T}`` inducing ``phi: M_source -> M_target``."""
    if phi.source is not source.module or phi.target is not target.module:
        raise ValueError("map does not run between the modules of the given objects")
    if not phi.is_r_linear():
        raise ValueError("map is not R-linear")
    Msrc, Mtgt = source.module, target.module
    ring = source.ring
    images = phi.generator_images()
    T = RingMatrix(ring, Msrc.v, Mtgt.v, tuple(Mtgt.lift_row(g) for g in images))
    A, B = source.representative, target.representative
    S = express_in_relations(B, A @ T)
    if S is None:
        raise ValueError("map does not preserve the relations")
    return MatMorphism(source, target, S, T)


def random_module_map(M: FiniteModule, N: FiniteModule, rng: np.random.Generator) -> ModuleMap:
    H = hom_basis(M, N)
    if not len(H):
        return ModuleMap(M, N, np.zeros((N.dim, M.dim), dtype=np.int64))
    coeffs = rng.integers(0, M.p, size=len(H))
    return ModuleMap(M, N, np.tensordot(coeffs, H, axes=1) % M.p)
