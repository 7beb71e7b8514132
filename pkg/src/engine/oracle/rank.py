"""Rank Module.

Exact rank over F_p. The matrix is first split into the connected
components of its row/column incidence graph; each block is then
eliminated by the backend that suits the characteristic:

- p = 2: rows packed into uint64 words and reduced with XOR, pivoting on
  the least-filled columns first.
- p > 2: sparse dictionary rows with a Markowitz-style pivot choice that
  keeps fill low.

``dense_rank`` is the textbook reference both backends are checked
against.
"""

import heapq
import logging

import numpy as np
import numpy.typing as npt
from scipy import sparse
from scipy.sparse import csgraph

from src.engine.oracle.sparse import SparseFpMatrix

logger = logging.getLogger(__name__)

DEFAULT_DENSE_BIT_LIMIT = 1 << 26
_WORD = 64


def dense_rank(matrix: npt.ArrayLike, p: int) -> int:
    """Rank over F_p by plain Gaussian elimination on a dense copy.

    Args:
        matrix: 2-D integer array.
        p: A prime.

    Returns:
        The rank of matrix mod p.
    """
    work = np.mod(np.atleast_2d(np.asarray(matrix, dtype=np.int64)), p)
    nrows, ncols = work.shape
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        candidates = np.nonzero(work[rank:, col])[0]
        if candidates.size == 0:
            continue
        pivot = rank + int(candidates[0])
        if pivot != rank:
            work[[rank, pivot]] = work[[pivot, rank]]
        inverse = pow(int(work[rank, col]), -1, p)
        work[rank] = (work[rank] * inverse) % p
        below = work[rank + 1 :, col].copy()
        work[rank + 1 :] = (work[rank + 1 :] - below[:, None] * work[rank]) % p
        rank += 1
    return rank


Block = tuple[npt.NDArray[np.int64], npt.NDArray[np.int64]]


def connected_blocks(matrix: SparseFpMatrix) -> list[Block]:
    """Split a matrix into independent diagonal blocks.

    Rows and columns are vertices of a bipartite graph with an edge per
    nonzero entry. Isolated rows and columns carry no rank and are left
    out.

    Returns:
        List of (row indices, column indices) per nontrivial component,
        ordered by the smallest column they contain.
    """
    if matrix.nnz == 0:
        return []
    nrows, ncols = matrix.shape
    incidence = (matrix.csc != 0).astype(np.int8)
    graph = sparse.bmat([[None, incidence], [incidence.T, None]], format="csr")
    _, labels = csgraph.connected_components(graph, directed=False)
    row_labels = labels[:nrows]
    col_labels = labels[nrows:]
    col_fill = np.diff(matrix.csc.indptr)
    live_labels = np.unique(col_labels[col_fill > 0])
    blocks = []
    for label in live_labels:
        rows = np.nonzero(row_labels == label)[0].astype(np.int64)
        cols = np.nonzero((col_labels == label) & (col_fill > 0))[0].astype(np.int64)
        blocks.append((rows, cols))
    blocks.sort(key=lambda block: int(block[1][0]))
    return blocks


def _gf2_block_rank(block: SparseFpMatrix) -> int:
    """Rank of a 0/1 block by XOR elimination on bit-packed rows."""
    nrows, ncols = block.shape
    words = (ncols + _WORD - 1) // _WORD
    packed = np.zeros((nrows, words), dtype=np.uint64)
    coo = block.csc.tocoo()
    word_idx = coo.col // _WORD
    bits = np.left_shift(np.uint64(1), (coo.col % _WORD).astype(np.uint64))
    np.bitwise_or.at(packed, (coo.row, word_idx), bits)

    # Least-filled columns first keeps the XOR updates narrow.
    col_order = np.argsort(np.diff(block.csc.indptr), kind="stable")
    active = np.ones(nrows, dtype=bool)
    rank = 0
    for col in col_order:
        word, bit = divmod(int(col), _WORD)
        has_bit = ((packed[:, word] >> np.uint64(bit)) & np.uint64(1)).astype(bool)
        hits = np.nonzero(has_bit & active)[0]
        if hits.size == 0:
            continue
        pivot = hits[0]
        active[pivot] = False
        others = hits[1:]
        if others.size:
            packed[others] ^= packed[pivot]
        rank += 1
        if rank == nrows:
            break
    return rank


def _sparse_block_rank(block: SparseFpMatrix) -> int:
    """Rank by sparse elimination with a lowest-count pivot column."""
    p = block.p
    rows: list[dict[int, int]] = [{} for _ in range(block.nrows)]
    col_rows: dict[int, set[int]] = {}
    for row, col, value in block.entries():
        rows[row][col] = value
        col_rows.setdefault(col, set()).add(row)

    heap = [(len(members), col) for col, members in col_rows.items()]
    heapq.heapify(heap)
    rank = 0
    while heap:
        count, col = heapq.heappop(heap)
        members = col_rows.get(col)
        if not members:
            continue
        if count != len(members):
            # stale heap entry
            heapq.heappush(heap, (len(members), col))
            continue
        pivot = min(members, key=lambda r: (len(rows[r]), r))
        pivot_row = rows[pivot]
        inverse = pow(pivot_row[col], -1, p)
        for row in sorted(members - {pivot}):
            target = rows[row]
            factor = target[col] * inverse % p
            for c, v in pivot_row.items():
                updated = (target.get(c, 0) - factor * v) % p
                if updated:
                    if c not in target:
                        col_rows.setdefault(c, set()).add(row)
                        heapq.heappush(heap, (len(col_rows[c]), c))
                    target[c] = updated
                elif c in target:
                    del target[c]
                    col_rows[c].discard(row)
        for c in pivot_row:
            col_rows[c].discard(pivot)
        del col_rows[col]
        rows[pivot] = {}
        rank += 1
    return rank


def rank_fp(
    matrix: SparseFpMatrix,
    p: int | None = None,
    dense_bit_limit: int = DEFAULT_DENSE_BIT_LIMIT,
) -> int:
    """Exact rank of a sparse matrix over F_p.

    Args:
        matrix: The matrix; its values are taken mod p.
        p: Characteristic. Defaults to ``matrix.p``.
        dense_bit_limit: Largest rows*cols for which a p = 2 block is
            bit-packed; larger blocks use the sparse eliminator.

    Returns:
        The rank.
    """
    prime = matrix.p if p is None else p
    if prime != matrix.p:
        raise ValueError(f"matrix is stored mod {matrix.p}, not mod {prime}")
    total = 0
    blocks = connected_blocks(matrix)
    by_row = matrix.csc.tocsr()
    for rows, cols in blocks:
        piece = by_row[rows][:, cols].tocoo()
        block = SparseFpMatrix(
            len(rows), len(cols), prime, piece.row, piece.col, piece.data
        )
        if prime == 2 and block.nrows * block.ncols <= dense_bit_limit:
            total += _gf2_block_rank(block)
        else:
            total += _sparse_block_rank(block)
    logger.debug(
        "rank %d for %dx%d matrix over F_%d in %d blocks",
        total,
        matrix.nrows,
        matrix.ncols,
        prime,
        len(blocks),
    )
    return total


def is_consistent(matrix: SparseFpMatrix, rhs: npt.ArrayLike) -> bool:
    """True when M x = rhs has a solution over F_p (rank test)."""
    return rank_fp(matrix) == rank_fp(matrix.augmented(rhs))
