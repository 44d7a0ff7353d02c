from __future__ import annotations

import pytest

from dekomp.family import (ExampleError, build_example, determinant, kernel_vector,
                           verify_indecomposable, verify_kernel_span)
from dekomp.matrix import RingMatrix, apply_transform, block_number, random_transform
from dekomp.rings import Ring, parse_ring

R = parse_ring("GF(2)[x,y]/m^2")


def test_build_examples():
    assert str(build_example(1, R).matrix) == "[[x, y]]"
    assert str(build_example(2, R).matrix) == "[[x, y, 0], [0, x, y]]"
    with pytest.raises(ExampleError):
        build_example(1, R, "x", "x")
    with pytest.raises(ExampleError):
        build_example(1, R, "1+x", "y")
    with pytest.raises(ExampleError):
        build_example(1, parse_ring("GF(2)[x]/m^2"))


def test_socle_elements_beyond_variables():
    S = parse_ring("GF(3)[x,y,z]/m^2")
    inst = build_example(2, S, "x+z", "2*y")
    assert verify_indecomposable(inst)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_indecomposable(n):
    assert verify_indecomposable(build_example(n, R))


def test_control_is_decomposable():
    from dekomp.family import ExampleInstance

    ctrl = ExampleInstance(1, R, R.parse("x"), R.parse("y"),
                           RingMatrix.from_rows(R, [["x", "0"], ["0", "y"]]))
    assert not verify_indecomposable(ctrl)


def test_kernel_vector_examples():
    P2 = Ring.poly(2, ("X", "Y"))
    assert kernel_vector(1, 2) == (P2.parse("Y"), P2.parse("X"))
    P3 = Ring.poly(3, ("X", "Y"))
    assert kernel_vector(2, 3) == (P3.parse("Y^2"), P3.parse("-X*Y"), P3.parse("X^2"))


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_kernel_span(n, p):
    assert verify_kernel_span(n, p)


def test_determinant():
    Z = Ring.integers()
    M = RingMatrix.from_rows(Z, [[2, 1, 0], [1, 3, 1], [0, 1, 4]])
    assert determinant(M) == 2 * 11 - 1 * 4
    P = Ring.poly(3, ("X", "Y"))
    M = RingMatrix.from_rows(P, [["X", "Y"], ["Y", "X"]])
    assert determinant(M) == P.parse("X^2-Y^2")


@pytest.mark.parametrize("n", [1, 2, 3])
def test_instances_stay_inblockable_under_transforms(n):
    A = build_example(n, R).matrix
    assert block_number(A) == 1
    for s in range(1000):
        assert block_number(apply_transform(A, random_transform(R, A.nrows, A.ncols, seed=s))) == 1
