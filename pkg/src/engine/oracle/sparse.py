"""Sparse F_p matrix module.

A thin wrapper over a scipy CSC matrix whose stored values are the
nonzero residues in [1, p). Used for multiplication maps as well as for
the assembled and reduced linear systems.
"""

import logging
from collections.abc import Iterable, Iterator

import numpy as np
import numpy.typing as npt
from scipy import sparse

logger = logging.getLogger(__name__)


class SparseFpMatrix:
    """Row/column indexed sparse matrix with entries in F_p.

    Duplicate (row, col) entries passed to the constructor are summed mod p
    and zero results are dropped, so the stored entry list never repeats a
    position and never holds a zero.
    """

    def __init__(
        self,
        nrows: int,
        ncols: int,
        p: int,
        rows: npt.ArrayLike = (),
        cols: npt.ArrayLike = (),
        values: npt.ArrayLike = (),
    ) -> None:
        """Initialize the matrix from coordinate arrays.

        Args:
            nrows: Number of rows.
            ncols: Number of columns.
            p: Field characteristic.
            rows: Row indices of the entries.
            cols: Column indices of the entries.
            values: Integer entry values, reduced mod p here.

        Raises:
            ValueError: If an index is out of range.
        """
        row_arr = np.asarray(rows, dtype=np.int64)
        col_arr = np.asarray(cols, dtype=np.int64)
        val_arr = np.mod(np.asarray(values, dtype=np.int64), p)
        if row_arr.size and (row_arr.min() < 0 or row_arr.max() >= nrows):
            raise ValueError(f"row index out of range for {nrows} rows")
        if col_arr.size and (col_arr.min() < 0 or col_arr.max() >= ncols):
            raise ValueError(f"column index out of range for {ncols} columns")
        self.nrows = nrows
        self.ncols = ncols
        self.p = p
        matrix = sparse.coo_matrix(
            (val_arr, (row_arr, col_arr)), shape=(nrows, ncols), dtype=np.int64
        ).tocsc()
        matrix.sum_duplicates()
        matrix.data %= p
        matrix.eliminate_zeros()
        self.csc: sparse.csc_matrix = matrix

    @classmethod
    def from_entries(
        cls, nrows: int, ncols: int, p: int, entries: Iterable[tuple[int, int, int]]
    ) -> "SparseFpMatrix":
        """Build from (row, col, value) triples."""
        triples = list(entries)
        if not triples:
            return cls(nrows, ncols, p)
        rows, cols, values = zip(*triples, strict=True)
        return cls(nrows, ncols, p, rows, cols, values)

    @classmethod
    def from_dense(cls, dense: npt.ArrayLike, p: int) -> "SparseFpMatrix":
        """Build from a 2-D array of integers."""
        array = np.atleast_2d(np.asarray(dense, dtype=np.int64))
        rows, cols = np.nonzero(array % p)
        return cls(array.shape[0], array.shape[1], p, rows, cols, array[rows, cols])

    @property
    def nnz(self) -> int:
        """Number of stored nonzero entries."""
        return int(self.csc.nnz)

    @property
    def shape(self) -> tuple[int, int]:
        """(nrows, ncols)."""
        return (self.nrows, self.ncols)

    def entries(self) -> Iterator[tuple[int, int, int]]:
        """Yield (row, col, value) in column-major order."""
        coo = self.csc.tocoo()
        order = np.lexsort((coo.row, coo.col))
        for index in order:
            yield int(coo.row[index]), int(coo.col[index]), int(coo.data[index])

    def get(self, row: int, col: int) -> int:
        """Entry at (row, col), 0 when nothing is stored."""
        return int(self.csc[row, col])

    def submatrix(
        self, rows: npt.ArrayLike, cols: npt.ArrayLike
    ) -> "SparseFpMatrix":
        """Restriction to the given row and column index lists, in that order."""
        row_arr = np.asarray(rows, dtype=np.int64)
        col_arr = np.asarray(cols, dtype=np.int64)
        block = self.csc[row_arr, :][:, col_arr].tocoo()
        return SparseFpMatrix(
            len(row_arr), len(col_arr), self.p, block.row, block.col, block.data
        )

    def augmented(self, rhs: npt.ArrayLike) -> "SparseFpMatrix":
        """The matrix [M | rhs] with rhs appended as a last column."""
        vector = np.mod(np.asarray(rhs, dtype=np.int64), self.p)
        if vector.shape != (self.nrows,):
            raise ValueError(f"rhs has shape {vector.shape}, expected ({self.nrows},)")
        coo = self.csc.tocoo()
        extra_rows = np.nonzero(vector)[0]
        return SparseFpMatrix(
            self.nrows,
            self.ncols + 1,
            self.p,
            np.concatenate([coo.row, extra_rows]),
            np.concatenate([coo.col, np.full(extra_rows.size, self.ncols)]),
            np.concatenate([coo.data, vector[extra_rows]]),
        )

    def __eq__(self, other: object) -> bool:
        """Structural equality: same shape, characteristic and entries."""
        if not isinstance(other, SparseFpMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and self.p == other.p
            and list(self.entries()) == list(other.entries())
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        """Short summary with shape and fill."""
        return f"SparseFpMatrix({self.nrows}x{self.ncols}, p={self.p}, nnz={self.nnz})"
