import math
from fractions import Fraction
from typing import List

import pytest
from hypothesis import given, strategies as st

from lieh1tools.linalg.exact import (
    INFEASIBLE,
    Echelon,
    SparseMatrix,
    SparseVector,
    as_scalar,
    format_scalar,
    kernel,
    kernel_rows,
    parse_scalar,
    solve_affine,
)


def dense_rank(rows: List[List[Fraction]]) -> int:
    """ Plain Gauss-Jordan elimination over Fraction. """
    matrix = [list(map(Fraction, row)) for row in rows]
    rank = 0
    num_cols = len(matrix[0]) if matrix else 0
    for col in range(num_cols):
        pivot = next((r for r in range(rank, len(matrix)) if matrix[r][col] != 0), None)
        if pivot is None:
            continue
        matrix[rank], matrix[pivot] = matrix[pivot], matrix[rank]
        lead = matrix[rank][col]
        matrix[rank] = [v / lead for v in matrix[rank]]
        for r in range(len(matrix)):
            if r != rank and matrix[r][col] != 0:
                factor = matrix[r][col]
                matrix[r] = [a - factor * b for a, b in zip(matrix[r], matrix[rank])]
        rank += 1
    return rank


rational_entries = st.fractions(min_value=-3, max_value=3, max_denominator=4)

dense_matrices = st.integers(min_value=1, max_value=8).flatmap(
    lambda cols: st.lists(st.lists(rational_entries, min_size=cols, max_size=cols), min_size=0, max_size=8)
    .map(lambda rows: (cols, rows)))


def test_parse_scalar():
    assert parse_scalar("1/2") == Fraction(1, 2)
    assert parse_scalar("-4") == Fraction(-4)
    assert parse_scalar("6/4") == Fraction(3, 2)


@pytest.mark.parametrize("text", ["0.5", "1/0", "abc", "", "1/-2", "1e3"])
def test_parse_scalar_rejects(text):
    with pytest.raises(ValueError):
        parse_scalar(text)


def test_format_scalar():
    assert format_scalar(Fraction(-3, 6)) == "-1/2"
    assert format_scalar(Fraction(4)) == "4"


@given(st.fractions())
def test_scalar_text_roundtrip(x):
    text = format_scalar(x)
    assert parse_scalar(text) == x
    numerator, _, denominator = text.lstrip("-").partition("/")
    assert denominator != "1"
    assert math.gcd(int(numerator), int(denominator or 1)) == 1


@pytest.mark.parametrize("value", [0.5, True])
def test_as_scalar_rejects_inexact(value):
    with pytest.raises(ValueError):
        as_scalar(value)


def test_sparse_vector_validation():
    with pytest.raises(ValueError):
        SparseVector(size=3, entries=((2, Fraction(1)), (1, Fraction(1))))
    with pytest.raises(ValueError):
        SparseVector(size=3, entries=((0, Fraction(0)),))
    with pytest.raises(ValueError):
        SparseVector(size=2, entries=((2, Fraction(1)),))
    v = SparseVector.from_mapping(4, {3: 2, 1: 0, 0: Fraction(1, 3)})
    assert v.entries == ((0, Fraction(1, 3)), (3, Fraction(2)))
    assert v[1] == 0
    assert v.to_json() == [[0, "1/3"], [3, "2"]]


def test_kernel_example():
    matrix = SparseMatrix.from_dense([[1, 2, 3], [2, 4, 6]])
    result = kernel(matrix)
    assert result.rank == 1
    assert result.nullity == 2
    assert result.pivots == (0,)
    for vec in result.kernel:
        assert matrix.apply(vec).is_zero()


def test_kernel_of_identity_and_zero():
    assert kernel(SparseMatrix.identity(4)).nullity == 0
    assert kernel(SparseMatrix.from_rows(3, [])).nullity == 3


@given(dense_matrices)
def test_kernel_matches_dense_oracle(data):
    num_cols, rows = data
    matrix = SparseMatrix.from_dense(rows, num_cols=num_cols)
    result = kernel(matrix)
    assert result.rank == dense_rank(rows)
    assert result.rank + result.nullity == num_cols
    for vec in result.kernel:
        assert matrix.apply(vec).is_zero()
    if result.kernel:
        assert dense_rank([v.to_dense() for v in result.kernel]) == result.nullity


@given(dense_matrices, st.randoms(use_true_random=False))
def test_rref_does_not_depend_on_row_order(data, rnd):
    _, rows = data
    rows = [dict(enumerate(row)) for row in rows]
    shuffled = list(rows)
    rnd.shuffle(shuffled)
    assert Echelon(rows).rref() == Echelon(shuffled).rref()


def test_kernel_rows_rejects_out_of_range_columns():
    with pytest.raises(ValueError):
        kernel_rows([{0: 1, 5: 1}], 3)


def test_solve_affine_feasible():
    matrix = SparseMatrix.from_dense([[1, 1, 0], [0, 1, 1]])
    rhs = SparseVector.from_dense([2, 3])
    solution, homogeneous = solve_affine(matrix, rhs)
    assert solution is not INFEASIBLE
    assert matrix.apply(solution) == rhs
    assert len(homogeneous) == 1


def test_solve_affine_infeasible():
    matrix = SparseMatrix.from_dense([[1, 1], [2, 2]])
    solution, _ = solve_affine(matrix, SparseVector.from_dense([1, 3]))
    assert solution is INFEASIBLE


def test_solve_affine_length_mismatch():
    with pytest.raises(ValueError):
        solve_affine(SparseMatrix.from_dense([[1, 0]]), SparseVector.from_dense([1, 2]))


@given(dense_matrices, st.data())
def test_solve_affine_consistent_rhs(data, draw):
    num_cols, rows = data
    matrix = SparseMatrix.from_dense(rows, num_cols=num_cols)
    x = SparseVector.from_dense(draw.draw(st.lists(st.integers(-3, 3), min_size=num_cols, max_size=num_cols)))
    rhs = matrix.apply(x)
    solution, _ = solve_affine(matrix, rhs)
    assert solution is not INFEASIBLE
    assert matrix.apply(solution) == rhs


def test_kernel_spans():
    (vec,) = kernel(SparseMatrix.from_dense([[1, -1]])).kernel
    assert vec.to_dense() == [1, 1]
    (vec,) = kernel(SparseMatrix.from_dense([[2, 4], [1, 2]])).kernel
    assert vec.to_dense() == [-2, 1]


def test_solve_affine_examples():
    solution, homogeneous = solve_affine(SparseMatrix.identity(2), SparseVector.from_dense([3, 5]))
    assert solution.to_dense() == [3, 5]
    assert homogeneous == ()
    solution, homogeneous = solve_affine(SparseMatrix.from_dense([[1, 1]]), SparseVector.from_dense([0]))
    assert solution.is_zero()
    assert [v.to_dense() for v in homogeneous] == [[-1, 1]]
    solution, _ = solve_affine(SparseMatrix.from_dense([[1], [1]]), SparseVector.from_dense([1, 2]))
    assert solution is INFEASIBLE
