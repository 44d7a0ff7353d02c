from __future__ import annotations

import itertools
import math
import random

import pytest
from hypothesis import given, strategies as st

from dekomp.abelian import hermite_basis, summand_count
from dekomp.matrix import RingMatrix, apply_transform, random_transform
from dekomp.rings import Ring, parse_ring
from dekomp.snf import (decompose_snf, factor_integer, factor_polynomial, invariant_signature,
                        smith_normal_form)

Z = Ring.integers()


def zmat(rows):
    return RingMatrix.from_rows(Z, rows)


def det(m):
    n = len(m)
    total = 0
    for perm in itertools.permutations(range(n)):
        sign = (-1) ** sum(1 for i, j in itertools.combinations(range(n), 2) if perm[i] > perm[j])
        total += sign * math.prod(m[i][perm[i]] for i in range(n))
    return total


def determinantal_invariants(rows):
    """Invariant factors d_k / d_(k-1) from gcds of k×k minors."""
    u, v = len(rows), len(rows[0])
    prev, out = 1, []
    for k in range(1, min(u, v) + 1):
        g = 0
        for rs in itertools.combinations(range(u), k):
            for cs in itertools.combinations(range(v), k):
                g = math.gcd(g, det([[rows[i][j] for j in cs] for i in rs]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def test_examples():
    res = smith_normal_form(zmat([[2, 4], [-2, 2]]))
    assert res.diagonal == [2, 6]
    assert smith_normal_form(zmat([[2, 0], [0, 4]])).diagonal == [2, 4]
    assert smith_normal_form(zmat([[6]])).diagonal == [6]


def test_decompose_examples():
    rep = decompose_snf(zmat([[2, 0], [0, 6]]))
    assert rep.dn == 3
    assert [(str(s.presentation), s.multiplicity) for s in rep.summands] == [("[[2]]", 2), ("[[3]]", 1)]
    assert decompose_snf(zmat([[2, 0], [0, 4]])).dn == 2
    rep = decompose_snf(zmat([[2, 0]]))
    assert rep.dn == 2 and [s.size for s in rep.summands] == [2, None]


def test_fixed_cases_against_abelian_oracle():
    assert summand_count([[2, 0], [0, 6]]) == 3
    assert summand_count([[2, 0], [0, 4]]) == 2


@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=1, max_size=3),
       st.integers(1, 3))
def test_invariant_factors_match_minors(rows, v):
    rows = [r[:v] for r in rows]
    res = smith_normal_form(zmat(rows))
    assert res.verify()
    assert res.diagonal == determinantal_invariants(rows)


@given(st.integers(0, 10 ** 6))
def test_invariant_under_random_transforms(seed):
    rng = random.Random(seed)
    u, v = rng.randint(1, 3), rng.randint(1, 3)
    A = zmat([[rng.randint(-9, 9) for _ in range(v)] for _ in range(u)])
    B = apply_transform(A, random_transform(Z, u, v, seed=rng))
    assert smith_normal_form(A).D == smith_normal_form(B).D


def test_polynomial_snf():
    P = parse_ring("GF(2)[x]")
    A = RingMatrix.from_rows(P, [["x^2+x", "0"], ["0", "x"]])
    res = smith_normal_form(A)
    assert [P.format(d) for d in res.diagonal] == ["x", "x^2+x"]
    assert decompose_snf(A).dn == 3


def test_integers_mod_prime_power_certificate():
    R = parse_ring("Z/8")
    A = RingMatrix.from_rows(R, [["2", "4"], ["4", "0"], ["1", "3"]])
    rep = decompose_snf(A)
    assert rep.dn == 1
    assert rep.certificate.verify() and rep.certificate.bn == rep.dn


def test_integers_mod_composite():
    R = parse_ring("Z/12")
    rep = decompose_snf(RingMatrix.from_rows(R, [["0"]]))
    assert rep.dn == 2 and rep.certificate is None  # Z/12 = Z/4 + Z/3


def test_factorization():
    assert factor_integer(360) == [(2, 3), (3, 2), (5, 1)]
    P = parse_ring("GF(2)[x]")
    parts = factor_polynomial(P, P.parse("x^3+x^2+x"))
    assert sorted(P.format(f) for f, _ in parts) == ["x", "x^2+x+1"]


def test_signature_matches_group_structure():
    assert invariant_signature(zmat([[6]])) == invariant_signature(zmat([[2, 0], [0, 3]]))
    assert invariant_signature(zmat([[4]])) != invariant_signature(zmat([[2, 0], [0, 2]]))


def test_hermite_basis_detects_infinite_groups():
    assert hermite_basis([[2, 4]]) is None
    H = hermite_basis([[2, 4], [-2, 2]])
    assert abs(int(H[0, 0] * H[1, 1])) == 12
