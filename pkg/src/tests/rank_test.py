"""Test sparse F_p matrices and the rank backends."""

import numpy as np
import pytest

from src.engine.oracle.rank import connected_blocks, dense_rank, is_consistent, rank_fp
from src.engine.oracle.sparse import SparseFpMatrix


def test_duplicates_are_summed_mod_p() -> None:
    """Repeated positions add up and zeros are dropped."""
    # Act
    matrix = SparseFpMatrix(2, 2, 3, [0, 0, 1], [0, 0, 1], [1, 2, 5])

    # Assert
    assert matrix.nnz == 1
    assert matrix.get(1, 1) == 2
    assert matrix.get(0, 0) == 0


def test_out_of_range_index() -> None:
    """Indices outside the shape are rejected."""
    with pytest.raises(ValueError):
        SparseFpMatrix(2, 2, 2, [2], [0], [1])


@pytest.mark.parametrize(
    ("dense", "p", "expected"),
    [
        (np.zeros((4, 4), dtype=np.int64), 2, 0),
        (np.eye(5, dtype=np.int64), 2, 5),
        (np.array([[1, 1], [1, 1]]), 2, 1),
        (np.array([[1, 2], [2, 1]]), 3, 1),
        (np.array([[1, 2], [2, 1]]), 5, 2),
    ],
    ids=["zero", "identity", "rank-one-gf2", "singular-mod-3", "regular-mod-5"],
)
def test_rank_small(dense: np.ndarray, p: int, expected: int) -> None:
    """Hand-checked ranks."""
    # Arrange
    matrix = SparseFpMatrix.from_dense(dense, p)

    # Act & Assert
    assert rank_fp(matrix) == expected
    assert dense_rank(dense, p) == expected


@pytest.mark.parametrize("p", [2, 3, 5, 7], ids=lambda p: f"p{p}")
def test_rank_matches_dense_reference(p: int) -> None:
    """500 random sparse matrices up to 200x200 agree with dense elimination."""
    rng = np.random.default_rng(p)
    for trial in range(500):
        # Arrange
        high = 201 if trial % 25 == 0 else 41
        nrows, ncols = rng.integers(1, high, size=2)
        dense = rng.integers(0, p, size=(nrows, ncols))
        dense[rng.random((nrows, ncols)) >= min(1.0, 3 / nrows)] = 0
        matrix = SparseFpMatrix.from_dense(dense, p)

        # Act & Assert
        assert rank_fp(matrix) == dense_rank(dense, p)


def test_gf2_sparse_fallback_agrees() -> None:
    """A zero dense-bit limit forces the generic eliminator over F_2."""
    # Arrange
    rng = np.random.default_rng(11)
    dense = (rng.random((30, 30)) < 0.2).astype(np.int64)
    matrix = SparseFpMatrix.from_dense(dense, 2)

    # Act & Assert
    assert rank_fp(matrix, dense_bit_limit=0) == rank_fp(matrix)


def test_rank_rejects_other_characteristic() -> None:
    """The matrix remembers its p."""
    with pytest.raises(ValueError):
        rank_fp(SparseFpMatrix.from_dense(np.eye(2, dtype=np.int64), 2), p=3)


def test_connected_blocks_split_diagonal() -> None:
    """A block-diagonal matrix splits into its blocks."""
    # Arrange
    dense = np.array([[1, 1, 0], [0, 1, 0], [0, 0, 1]])

    # Act
    blocks = connected_blocks(SparseFpMatrix.from_dense(dense, 2))

    # Assert
    assert sorted(sorted(int(c) for c in cols) for _, cols in blocks) == [[0, 1], [2]]


@pytest.mark.parametrize(
    ("rhs", "expected"),
    [([1, 1, 0], True), ([0, 0, 1], False), ([0, 0, 0], True)],
    ids=["in-span", "zero-row", "homogeneous"],
)
def test_is_consistent(rhs: list[int], expected: bool) -> None:
    """Rank test against the augmented matrix."""
    # Arrange
    matrix = SparseFpMatrix.from_dense(np.array([[1, 0], [0, 1], [0, 0]]), 3)

    # Act & Assert
    assert is_consistent(matrix, rhs) is expected
