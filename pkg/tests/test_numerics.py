from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from sqso.errors import DimensionError, RationalParseError
from sqso.fixtures import B_FAMILY_A, y_family_matrices, b_family_factor
from sqso.numerics import (RationalMatrix, mat_det, mat_inverse, mat_rank, mat_solve,
                           primitive, rat_format, rat_parse, rows_identical)

from oracles import cofactor_det


@pytest.mark.parametrize("text, expected", [
    ("1/3", F(1, 3)),
    ("0.25", F(1, 4)),
    ("8/6", F(4, 3)),
    ("-7", F(-7)),
    ("0.1", F(1, 10)),
    (" 2/4 ", F(1, 2)),
    ("1e-3", F(1, 1000)),
])
def test_rat_parse(text, expected):
    q = rat_parse(text)
    assert q == expected
    assert q.denominator > 0


@pytest.mark.parametrize("bad", ["1/0", "abc", "1/-3", "", "1/3/4", "nan", "inf", "0x10", "1.5/2"])
def test_rat_parse_rejects(bad):
    with pytest.raises(RationalParseError):
        rat_parse(bad)


def test_rat_parse_rejects_float_objects():
    # binary floats are not exact literals
    with pytest.raises(RationalParseError):
        rat_parse(0.5)


rationals = st.fractions(min_value=-50, max_value=50, max_denominator=40)


@given(rationals)
def test_rat_roundtrip(q):
    assert rat_parse(rat_format(q)) == q


def test_det_examples():
    assert mat_det(B_FAMILY_A) == 0
    assert cofactor_det(B_FAMILY_A.entries) == 0
    assert mat_det(RationalMatrix.identity(3)) == 1
    assert mat_det(RationalMatrix.from_rows([[0, 1], [1, 0]])) == -1


def test_det_nonsquare():
    with pytest.raises(DimensionError):
        mat_det(RationalMatrix.from_rows([[1, 2, 3], [4, 5, 6]]))


def square(n):
    return st.lists(st.lists(rationals, min_size=n, max_size=n), min_size=n, max_size=n)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(square(n), square(n))))
def test_det_multiplicative(mats):
    M, N = (RationalMatrix.from_rows(x) for x in mats)
    assert mat_det(M @ N) == mat_det(M) * mat_det(N)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(square))
def test_det_matches_cofactor_oracle(rows):
    M = RationalMatrix.from_rows(rows)
    assert mat_det(M) == cofactor_det(rows)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.sampled_from([F(0), F(1), F(-1), F(1, 2)]),
                                min_size=n, max_size=n), min_size=n, max_size=n)))
def test_full_rank_iff_nonzero_det(rows):
    M = RationalMatrix.from_rows(rows)
    assert (mat_rank(M) == M.rows) == (mat_det(M) != 0)


def test_rank_examples():
    assert mat_rank(RationalMatrix.zeros(3)) == 0
    assert mat_rank(RationalMatrix.from_rows([[0, 7, 2], [0, 1, 2], [9, 11, 10]])) == 3
    assert mat_rank(b_family_factor(["2/3", "5/6", "1"])) == 2
    assert mat_rank(RationalMatrix.from_rows([[1, 2, 3], [2, 4, 6]])) == 1
    assert mat_rank(RationalMatrix.from_rows([[0, 0, 1], [0, 0, 2], [0, 1, 0]])) == 2


def test_rows_identical_examples():
    _, B = y_family_matrices("1", ["0", "1/2", "1"])
    assert not rows_identical(B)
    assert rows_identical(RationalMatrix.ones(3))
    assert rows_identical(b_family_factor(["2/3", "2/3", "2/3"]))


def test_solve_and_inverse():
    M = RationalMatrix.from_rows([[2, 1], [1, 3]])
    assert mat_solve(M, [3, 5]) == (F(4, 5), F(7, 5))
    assert mat_inverse(M) @ M == RationalMatrix.identity(2)
    with pytest.raises(ZeroDivisionError):
        mat_solve(RationalMatrix.from_rows([[1, 2], [2, 4]]), [1, 1])


def test_primitive():
    assert primitive([F(3, 2), F(9, 4), 0]) == (2, 3, 0)
    assert primitive([0, -4, 6]) == (0, -2, 3)
    assert primitive([0, 0]) == (0, 0)


def test_matrix_ops():
    A = RationalMatrix.from_rows([["1/2", 1], [0, "3/4"]])
    assert A.T.entries == ((F(1, 2), F(0)), (F(1), F(3, 4)))
    assert (A - A) == RationalMatrix.zeros(2)
    assert A.apply([2, 4]) == (F(5), F(3))
    with pytest.raises(DimensionError):
        RationalMatrix.from_rows([[1, 2], [3]])
    with pytest.raises(DimensionError):
        A @ RationalMatrix.ones(3)
