"""Bit-packed GF(2) linear algebra.

Matrix rows are Python ints used as bitsets (bit j = column j), so XOR is
one machine operation per word and n <= 256 systems solve in microseconds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["Gf2Solution", "gf2_solve", "pack_rows", "unpack_row", "gf2_rank", "null_space"]


def pack_rows(matrix: np.ndarray) -> list[int]:
    """Pack a 0/1 matrix into one int bitset per row (bit j = column j)."""
    matrix = np.asarray(matrix)
    return [int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little")
            for row in matrix]


def unpack_row(row: int, n_cols: int) -> np.ndarray:
    """Expand an int bitset back to a length-n_cols uint8 vector."""
    return np.array([(row >> j) & 1 for j in range(n_cols)], dtype=np.uint8)


def gf2_rank(rows: list[int], n_cols: int) -> int:
    """Rank over GF(2) by elimination on a copy."""
    work = list(rows)
    rank = 0
    for col in range(n_cols):
        pivot = next((r for r in range(rank, len(work)) if (work[r] >> col) & 1), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        for r in range(len(work)):
            if r != rank and (work[r] >> col) & 1:
                work[r] ^= work[rank]
        rank += 1
        if rank == len(work):
            break
    return rank


def null_space(rows: list[int], n_cols: int) -> list[int]:
    """Basis (as row bitsets) of {h : row . h = 0 for every row}."""
    work = list(rows)
    pivot_col_of_row: list[int] = []
    rank = 0
    for col in range(n_cols):
        pivot = next((r for r in range(rank, len(work)) if (work[r] >> col) & 1), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        for r in range(len(work)):
            if r != rank and (work[r] >> col) & 1:
                work[r] ^= work[rank]
        pivot_col_of_row.append(col)
        rank += 1
    pivot_cols = set(pivot_col_of_row)
    basis = []
    for free in range(n_cols):
        if free in pivot_cols:
            continue
        vec = 1 << free
        for r, pc in enumerate(pivot_col_of_row):
            if (work[r] >> free) & 1:
                vec |= 1 << pc
        basis.append(vec)
    return basis


@dataclass
class Gf2Solution:
    """Outcome of solving A x = b over GF(2).

    status is "unique", "inconsistent" or "underdetermined"; `assignment`
    (a 0/1 vector) is present only when unique; `free_rank` counts free
    variables when underdetermined.
    """

    status: str
    assignment: np.ndarray | None = None
    free_rank: int = 0


def gf2_solve(a_rows, b, n_cols: int | None = None) -> Gf2Solution:
    """Row-reduce [A|b] over GF(2) and classify the system.

    `a_rows` is either a 0/1 matrix or a list of pre-packed row ints (then
    `n_cols` is required).  `b` is a 0/1 vector with one entry per row.
    """
    if isinstance(a_rows, (list, tuple)) and (not a_rows or isinstance(a_rows[0], int)):
        rows = list(a_rows)
        if n_cols is None:
            raise ValueError("n_cols is required with pre-packed rows")
    else:
        mat = np.asarray(a_rows)
        rows = pack_rows(mat)
        n_cols = mat.shape[1]
    b = np.asarray(b).astype(np.uint8)
    if len(b) != len(rows):
        raise ValueError(f"b has {len(b)} entries for {len(rows)} rows")

    # Augment: bit n_cols holds b.
    aug = [r | (int(bit) << n_cols) for r, bit in zip(rows, b)]
    pivot_col_of_row: list[int] = []
    rank = 0
    for col in range(n_cols):
        pivot = next((r for r in range(rank, len(aug)) if (aug[r] >> col) & 1), None)
        if pivot is None:
            continue
        aug[rank], aug[pivot] = aug[pivot], aug[rank]
        for r in range(len(aug)):
            if r != rank and (aug[r] >> col) & 1:
                aug[r] ^= aug[rank]
        pivot_col_of_row.append(col)
        rank += 1

    mask = (1 << n_cols) - 1
    for r in range(rank, len(aug)):
        if aug[r] & mask == 0 and aug[r] >> n_cols:
            return Gf2Solution(status="inconsistent")
    if rank < n_cols:
        return Gf2Solution(status="underdetermined", free_rank=n_cols - rank)

    x = np.zeros(n_cols, dtype=np.uint8)
    for r, col in enumerate(pivot_col_of_row):
        x[col] = (aug[r] >> n_cols) & 1
    return Gf2Solution(status="unique", assignment=x)
