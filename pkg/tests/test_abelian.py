from __future__ import annotations

import pytest

from dekomp.abelian import AbelianGroup, hermite_basis, summand_count


def test_orders():
    assert AbelianGroup([[2, 0], [0, 6]]).order == 12
    assert AbelianGroup([[4]]).order == 4
    with pytest.raises(ValueError):
        AbelianGroup([[1, 1]])


@pytest.mark.parametrize("rows,expected", [
    ([[2, 0], [0, 6]], 3), ([[2, 0], [0, 4]], 2), ([[6]], 2), ([[4]], 1),
    ([[1, 0], [0, 1]], 0), ([[2, 0, 0], [0, 2, 0], [0, 0, 2]], 3), ([[30]], 3), ([[8, 4], [0, 8]], 2),
])
def test_summand_counts(rows, expected):
    assert summand_count(rows) == expected


def test_hermite_basis_is_triangular():
    H = hermite_basis([[3, 6, 9], [0, 2, 4], [1, 1, 5]])
    assert all(H[i, j] == 0 for i in range(3) for j in range(i))
    assert all(H[i, i] > 0 for i in range(3))
