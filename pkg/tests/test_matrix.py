from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from dekomp.decompose import dn, is_isomorphic
from dekomp.matrix import (InvertibleMatrix, MatrixParseError, RingMatrix, TransformPair,
                           apply_transform, block_number, detect_blocks, direct_sum,
                           format_matrix_text, minimize_presentation, parse_matrix_text,
                           permutation_matrix, random_invertible, random_matrix, random_transform)
from dekomp.rings import Ring, parse_ring

from conftest import LOCAL_RINGS, population

R = parse_ring("GF(2)[x,y]/m^2")
R3 = parse_ring("GF(2)[x,y,z]/m^2")
Z = Ring.integers()


def mat(ring, *rows):
    return RingMatrix.from_rows(ring, [r.split() for r in rows])


def test_detect_blocks_examples():
    part = detect_blocks(mat(R3, "x y 0", "0 0 z"))
    assert part.classes == ((0, 1), (2,)) and part.bn == 2
    assert str(part) == "{1,2} {3}"
    assert block_number(RingMatrix.zeros(R, 1, 3)) == 3
    assert block_number(mat(R, "x y 0", "0 x y")) == 1


def test_zero_rows_belong_to_no_block():
    assert detect_blocks(mat(R, "x 0", "0 0", "0 y")).classes == ((0,), (1,))


def test_apply_transform_examples():
    A = mat(R, "x y")
    ident = TransformPair(InvertibleMatrix.identity(R, 1), InvertibleMatrix.identity(R, 2))
    assert apply_transform(A, ident) == A
    swap = TransformPair(InvertibleMatrix.identity(R, 1), permutation_matrix(R, [1, 0]))
    assert apply_transform(A, swap) == mat(R, "y x")
    B = mat(Z, "2 4", "-2 2")
    P = InvertibleMatrix.from_matrix(mat(Z, "1 0", "1 1"))
    assert apply_transform(B, TransformPair(P, InvertibleMatrix.identity(Z, 2))) == mat(Z, "2 4", "0 6")


def test_minimize_examples():
    assert minimize_presentation(mat(R, "1 y", "0 x"))[0] == mat(R, "x")
    assert minimize_presentation(mat(R, "x y", "x y"))[0] == mat(R, "x y")
    empty, trail = minimize_presentation(mat(R, "1"))
    assert empty.shape == (0, 0) and [str(s) for s in trail] == ["unit_pivot(1,1)"]


def test_minimize_drops_rows_redundant_mod_m():
    # second row is x times the first
    assert minimize_presentation(mat(R, "x y", "0 0"))[0] == mat(R, "x y")
    A = mat(parse_ring("GF(2)[x]/m^3"), "x", "x^2")
    assert minimize_presentation(A)[0].shape == (1, 1)


def test_direct_sum_examples():
    D = direct_sum(mat(R, "x"), mat(R, "y"))
    assert D == mat(R, "x 0", "0 y") and block_number(D) == 2
    assert direct_sum(mat(R, "x y"), RingMatrix.zeros(R, 0, 0)) == mat(R, "x y")
    D2 = direct_sum(mat(R, "x y"), mat(R, "x y"))
    assert D2.shape == (2, 4) and block_number(D2) == 2


def test_random_invertible():
    assert random_invertible(Z, 1, seed=3).matrix.rows[0][0] in (1, -1)
    a, b = random_invertible(R, 3, seed=7), random_invertible(R, 3, seed=7)
    assert a.matrix == b.matrix and a.inverse == b.inverse
    assert (a.matrix @ a.inverse).is_identity()


def test_invertible_matrix_rejects_wrong_inverse():
    with pytest.raises(ValueError):
        InvertibleMatrix(mat(Z, "1 1", "0 1"), mat(Z, "1 0", "0 1"))


def test_text_format_round_trip():
    A = mat(R3, "x y 0", "0 1+x z")
    assert parse_matrix_text(format_matrix_text(A)) == A
    text = "# comment\nring Z\n\nmatrix 2 2\n2 4  # first row\n-2 2\n"
    assert parse_matrix_text(text) == mat(Z, "2 4", "-2 2")


@pytest.mark.parametrize("text,line,col", [
    ("ring GF(4)\nmatrix 1 1\n1\n", 1, 9),
    ("ring Z\nmatrix 1 2\n1\n", 3, 1),
    ("ring GF(2)[x]/m^2\nmatrix 1 1\nx+*x\n", 3, 3),
    ("ring Z\nmatrix 2 1\n1\n", 4, 1),
    ("ring Z\nmatrx 1 1\n1\n", 2, 1),
])
def test_parse_errors_report_position(text, line, col):
    with pytest.raises(MatrixParseError) as err:
        parse_matrix_text(text)
    assert (err.value.line, err.value.column) == (line, col)


def _permute(A, rows, cols):
    return RingMatrix(A.ring, A.nrows, A.ncols,
                      tuple(tuple(A.rows[i][j] for j in cols) for i in rows))


@given(st.integers(0, 10 ** 6))
def test_blocks_invariant_under_permutation_and_unit_scaling(seed):
    rng = random.Random(seed)
    ring = parse_ring(rng.choice(LOCAL_RINGS))
    A = random_matrix(ring, rng.randint(1, 3), rng.randint(1, 3), rng, zero_prob=0.5)
    rows, cols = list(range(A.nrows)), list(range(A.ncols))
    rng.shuffle(rows)
    rng.shuffle(cols)
    B = _permute(A, rows, cols)
    u = rng.choice(ring.unit_list)
    i = rng.randrange(B.nrows)
    B = RingMatrix(ring, B.nrows, B.ncols, tuple(
        tuple(ring.mul(u, a) for a in r) if k == i else r for k, r in enumerate(B.rows)))
    relabel = sorted(tuple(sorted(cols.index(c) for c in cls)) for cls in detect_blocks(A).classes)
    assert sorted(detect_blocks(B).classes) == relabel


def test_bn_after_transform_bounded_by_dn():
    for k, A in enumerate(population(48, seed=11)):
        d = dn(A)
        for s in range(5):
            B = apply_transform(A, random_transform(A.ring, A.nrows, A.ncols, seed=1000 * k + s))
            Bmin, _ = minimize_presentation(B)
            assert block_number(Bmin) <= max(d, 0) or Bmin.ncols == 0


def test_minimize_output_normal_and_isomorphic():
    for A in population(64, seed=5):
        Amin, _ = minimize_presentation(A)
        assert not Amin.has_unit_entry()
        assert all(any(not A.ring.is_zero(a) for a in r) for r in Amin.rows)
        assert is_isomorphic(A, Amin)


def test_direct_sum_associative():
    a, b, c = population(3, seed=2, rings=["GF(2)[x,y]/m^2"])
    assert direct_sum(direct_sum(a, b), c) == direct_sum(a, direct_sum(b, c))
