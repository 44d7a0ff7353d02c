from __future__ import annotations

import itertools

import numpy as np
import pytest

from dekomp.matrix import RingMatrix, ambient_vector, direct_sum, minimize_presentation
from dekomp.modules import (CertificationError, FiniteModule, ModuleTooLarge, build_module,
                            endomorphism_space, find_isomorphism, find_nontrivial_idempotent,
                            hom_basis, lift_idempotent, search_idempotent, split,
                            split_with_transform)
from dekomp.rings import parse_ring

from conftest import ALGEBRA_RINGS, population

R = parse_ring("GF(2)[x,y]/m^2")
F2 = parse_ring("GF(2)")


def mat(ring, *rows):
    return RingMatrix.from_rows(ring, [r.split() for r in rows])


def brute_size(A: RingMatrix) -> int:
    """|R^v| / |R-span of rows| by enumerating all combinations of rows."""
    ring = A.ring
    span = set()
    for coeffs in itertools.product(ring.element_list, repeat=A.nrows):
        vec = [ring.zero] * A.ncols
        for c, row in zip(coeffs, A.rows):
            vec = [ring.add(a, ring.mul(c, b)) for a, b in zip(vec, row)]
        span.add(tuple(vec))
    return ring.size ** A.ncols // len(span)


def brute_hom_count(M: FiniteModule, N: FiniteModule) -> int:
    ring = M.ring
    elems = [np.array(c) for c in itertools.product(range(N.p), repeat=N.dim)]

    def times(a, c):
        row = N.lift_row(c)
        return N.normal_form(ambient_vector(ring, [ring.mul(a, x) for x in row]))

    count = 0
    for imgs in itertools.product(elems, repeat=M.v):
        ok = True
        for rel in M.presentation.rows:
            total = np.zeros(N.dim, dtype=np.int64)
            for a, m in zip(rel, imgs):
                total = total + times(a, m)
            if (total % N.p).any():
                ok = False
                break
        count += ok
    return count


def test_build_module_examples():
    M = build_module(mat(R, "x y"))
    assert M.size == 32 and M.ambient_dim == 6 and M.relation_dim == 1
    assert build_module(RingMatrix.zeros(F2, 0, 1)).size == 2
    for ring in ("GF(2)", "GF(2)[x,y]/m^2", "GF(3)[x]/m^2"):
        assert build_module(RingMatrix.from_rows(parse_ring(ring), [["1"]])).size == 1


def test_sizes_match_enumeration():
    for A in population(40, seed=3, rings=["GF(2)[x,y]/m^2", "GF(2)[x]/m^3", "GF(3)[x]/m^2", "GF(5)"]):
        if A.nrows <= 2:
            assert build_module(A).size == brute_size(A)


def test_relations_vanish_and_actions_close():
    for A in population(30, seed=4, rings=ALGEBRA_RINGS):
        M = build_module(A)
        for row in A.rows:
            assert not M.element(row).any()
        for act in M.basis_actions:
            assert act.shape == (M.dim, M.dim)


def test_module_too_large():
    with pytest.raises(ModuleTooLarge):
        build_module(RingMatrix.zeros(R, 0, 30))


def test_endomorphism_examples():
    assert len(endomorphism_space(build_module(RingMatrix.zeros(F2, 0, 2)))) == 4
    M = build_module(mat(R, "x y"))
    E = hom_basis(M, M)
    assert len(E) >= 1
    M2 = build_module(mat(R, "x 0", "0 y"))
    idem = find_nontrivial_idempotent(M2)
    assert idem is not None and idem.is_idempotent() and idem.is_r_linear()


def test_hom_dimension_matches_enumeration():
    mats = [mat(R, "x"), mat(R, "y"), mat(R, "x y"), RingMatrix.zeros(R, 0, 1),
            mat(parse_ring("GF(2)[x]/m^3"), "x^2"), mat(parse_ring("GF(3)[x]/m^2"), "x")]
    for A in mats:
        for B in mats:
            if A.ring != B.ring:
                continue
            M, N = build_module(A), build_module(B)
            if N.size ** M.v > 5000:
                continue
            assert M.p ** len(hom_basis(M, N)) == brute_hom_count(M, N)


def test_hom_maps_are_r_linear():
    for A in population(20, seed=8, rings=ALGEBRA_RINGS):
        M = build_module(A)
        for phi in endomorphism_space(M):
            assert phi.is_r_linear()


def test_idempotent_examples():
    assert find_nontrivial_idempotent(build_module(mat(R, "x y"))) is None
    assert find_nontrivial_idempotent(build_module(mat(R, "1"))) is None
    s = search_idempotent(build_module(mat(R, "x y")))
    assert s.exhaustive and s.top_algebra_dim == 1


def test_budget_exhaustion():
    # GF(2)^5 has a 25-dimensional top algebra, but the first candidate splits it
    M = build_module(RingMatrix.zeros(F2, 0, 5))
    assert find_nontrivial_idempotent(M, budget=4) is not None
    # certifying (x y) over GF(3)[x,y]/m^2 needs both nonzero scalars of the top algebra
    M = build_module(mat(parse_ring("GF(3)[x,y]/m^2"), "x y"))
    with pytest.raises(CertificationError):
        search_idempotent(M, budget=0)
    assert search_idempotent(M, budget=1).idempotent is None


def test_lift_idempotent():
    phi = np.array([[1, 1], [0, 0]])
    e = lift_idempotent(phi, 2)
    assert np.array_equal((e @ e) % 2, e)


def test_split_examples():
    M = build_module(mat(R, "x 0", "0 y"))
    e = find_nontrivial_idempotent(M)
    first, second = split(M, e)
    got = sorted([str(first), str(second)])
    assert got == ["[[x]]", "[[y]]"]
    with pytest.raises(ValueError):
        split(M, type(e)(M, M, np.eye(M.dim, dtype=np.int64)))


def test_split_double_copy():
    A = direct_sum(mat(R, "x y"), mat(R, "x y"))
    M = build_module(A)
    proj = np.zeros((M.dim, M.dim), dtype=np.int64)
    half = M.dim // 2
    proj[:half, :half] = np.eye(half, dtype=np.int64)
    e = type(find_nontrivial_idempotent(M))(M, M, proj)
    assert e.is_idempotent() and e.is_r_linear()
    s = split_with_transform(M, e)
    for part in (s.first, s.second):
        assert find_isomorphism(build_module(part), build_module(mat(R, "x y")))
    assert s.P.matrix @ A @ s.Q.matrix == direct_sum(s.first, s.second)


def test_split_complementary_sizes():
    for A in population(60, seed=9, rings=ALGEBRA_RINGS):
        Amin, _ = minimize_presentation(A)
        M = build_module(Amin)
        e = find_nontrivial_idempotent(M)
        if e is None:
            continue
        s = split_with_transform(M, e)
        assert build_module(s.first).size * build_module(s.second).size == M.size
        assert s.P.matrix @ Amin @ s.Q.matrix == direct_sum(s.first, s.second)


def test_isomorphism_examples():
    xy, yx = build_module(mat(R, "x y")), build_module(mat(R, "y x"))
    iso = find_isomorphism(xy, yx)
    assert iso and iso.map.is_invertible() and iso.map.is_r_linear()
    # R/(x) and R/(y) have different annihilators
    assert find_isomorphism(build_module(mat(R, "x")), build_module(mat(R, "y"))) is None
    assert find_isomorphism(build_module(mat(R, "x")), xy) is None


def test_annihilator():
    ann = build_module(mat(R, "x")).annihilator
    assert ann.contains(R.coords(R.parse("x"))) and not ann.contains(R.coords(R.parse("y")))
