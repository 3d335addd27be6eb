import pytest
from hypothesis import given, strategies as st

from psqec import gf2


def test_identity_solve():
    m = gf2.BinaryMatrix.from_rows(4, [1, 2, 4, 8])
    assert gf2.rank_and_solve(m, 0b0001) == 0b0001
    assert gf2.rank_and_solve(m, 0b1010) == 0b1010


def test_zero_matrix_inconsistent():
    m = gf2.BinaryMatrix.from_rows(4, [0, 0, 0])
    assert gf2.rank_and_solve(m, 0b010) is None
    assert gf2.rank_and_solve(m, 0) == 0


@given(st.lists(st.integers(0, (1 << 16) - 1), min_size=1, max_size=10), st.integers(0, (1 << 16) - 1))
def test_solve_multiplies_back(rows, x):
    m = gf2.BinaryMatrix.from_rows(16, rows)
    rhs = 0
    for i, r in enumerate(rows):
        rhs |= gf2.dot_bits(r, x) << i
    sol = gf2.rank_and_solve(m, rhs)
    assert sol is not None
    for i, r in enumerate(rows):
        assert gf2.dot_bits(r, sol) == (rhs >> i) & 1


@given(st.lists(st.integers(0, (1 << 12) - 1), min_size=1, max_size=8))
def test_row_reduce_idempotent(rows):
    reduced, _ = gf2.row_reduce(rows, 12)
    again, _ = gf2.row_reduce(reduced, 12)
    assert reduced == again


@given(st.lists(st.integers(0, (1 << 12) - 1), min_size=1, max_size=8))
def test_nullspace_annihilates(rows):
    for v in gf2.nullspace(rows, 12):
        for r in rows:
            assert gf2.dot_bits(r, v) == 0


def test_rank_bounds():
    m = gf2.BinaryMatrix.from_rows(5, [0b10011, 0b01100, 0b11110])
    assert gf2.rank(m) <= min(3, 5)
    assert gf2.rank(m) == 3
    dependent = gf2.BinaryMatrix.from_rows(5, [0b10011, 0b01100, 0b11111])
    assert gf2.rank(dependent) == 2


def test_rhs_out_of_range():
    m = gf2.BinaryMatrix.from_rows(3, [1, 2])
    with pytest.raises(ValueError):
        gf2.rank_and_solve(m, 0b100)
