from __future__ import annotations

import itertools

import numpy as np
from hypothesis import given, strategies as st

from dekomp import gf


def matrices(p, max_rows=4, max_cols=5):
    return st.tuples(st.integers(1, max_rows), st.integers(1, max_cols)).flatmap(
        lambda s: st.lists(st.integers(0, p - 1), min_size=s[0] * s[1], max_size=s[0] * s[1]).map(
            lambda xs: np.array(xs, dtype=np.int64).reshape(s)))


def brute_rank(a, p):
    """Size of the row span by enumeration, as a power of p."""
    span = {tuple((np.array(c) @ a) % p) for c in itertools.product(range(p), repeat=a.shape[0])}
    return round(np.log(len(span)) / np.log(p))


@given(matrices(3))
def test_rank_matches_enumeration(a):
    assert gf.rank(a, 3) == brute_rank(a, 3)


@given(matrices(2))
def test_nullspace(a):
    ns = gf.nullspace(a, 2)
    assert not ((a @ ns.T) % 2).any()
    assert len(ns) == a.shape[1] - gf.rank(a, 2)


@given(matrices(5), st.data())
def test_solve(a, data):
    x0 = np.array(data.draw(st.lists(st.integers(0, 4), min_size=a.shape[1], max_size=a.shape[1])))
    b = (a @ x0) % 5
    x = gf.solve(a, b, 5)
    assert x is not None and np.array_equal((a @ x) % 5, b)


def test_solve_inconsistent():
    assert gf.solve(np.array([[1, 0], [1, 0]]), np.array([0, 1]), 2) is None


def test_inverse():
    a = np.array([[1, 2], [3, 4]])
    inv = gf.inverse(a, 7)
    assert np.array_equal((a @ inv) % 7, np.eye(2, dtype=np.int64))


@given(st.lists(matrices(3, 3, 3), min_size=1, max_size=6))
def test_batch_rank(mats):
    shape = mats[0].shape
    same = [m for m in mats if m.shape == shape]
    ranks = gf.batch_rank(np.stack(same), 3)
    assert list(ranks) == [gf.rank(m, 3) for m in same]


def test_subspace_reduce_and_complement():
    S = gf.Subspace(2, 3, np.array([[1, 1, 0]]))
    assert S.contains([1, 1, 0]) and not S.contains([1, 0, 0])
    assert S.complement_columns() == [1, 2]
    assert list(S.reduce([1, 0, 1])) == [0, 1, 1]
    assert S.add_if_new([0, 0, 1]) and not S.add_if_new([1, 1, 1])
    assert S.dim == 2
