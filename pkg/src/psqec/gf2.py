"""GF(2) linear algebra on int-bitset rows (bit i = column i)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, Optional


@dataclass
class BinaryMatrix:
    """Bit-packed GF(2) matrix; each row is a python int."""

    cols: int
    rows: List[int] = field(default_factory=list)

    def append(self, row: int) -> None:
        if row >> self.cols:
            raise ValueError("row extends past column count")
        self.rows.append(row)

    @classmethod
    def from_rows(cls, cols: int, rows: Iterable[int]) -> "BinaryMatrix":
        m = cls(cols)
        for r in rows:
            m.append(r)
        return m

    def copy(self) -> "BinaryMatrix":
        return BinaryMatrix(self.cols, list(self.rows))


def row_reduce(rows: List[int], cols: int) -> tuple[List[int], List[int]]:
    """RREF over GF(2); returns (reduced nonzero rows, pivot columns)."""
    work = list(rows)
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, len(work)) if (work[i] >> c) & 1), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        for i in range(len(work)):
            if i != r and (work[i] >> c) & 1:
                work[i] ^= work[r]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return work[:r], pivots


def rank(m: BinaryMatrix) -> int:
    return len(row_reduce(m.rows, m.cols)[0])


def rank_and_solve(m: BinaryMatrix, rhs: int) -> Optional[int]:
    """Gaussian elimination for m @ x = rhs; any solution, or None if inconsistent.

    rhs packs one bit per matrix row (bit i = row i).
    """
    if rhs >> len(m.rows):
        raise ValueError("rhs extends past row count")
    n = m.cols
    # Augment each row with its rhs bit at column n.
    aug = [m.rows[i] | (((rhs >> i) & 1) << n) for i in range(len(m.rows))]
    reduced, pivots = row_reduce(aug, n + 1)
    x = 0
    for row, c in zip(reduced, pivots):
        if c == n:
            return None  # 0 = 1 row
        if (row >> n) & 1:
            x |= 1 << c
    return x


def in_span(rows: List[int], cols: int, vec: int) -> bool:
    """True iff vec lies in the GF(2) row span."""
    base, _ = row_reduce(rows, cols)
    ext, _ = row_reduce(base + [vec], cols)
    return len(ext) == len(base)


def nullspace(rows: List[int], cols: int) -> List[int]:
    """Basis of {x : row . x = 0 for all rows}, as bitset vectors."""
    reduced, pivots = row_reduce(rows, cols)
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    basis = []
    for f in free:
        v = 1 << f
        for row, c in zip(reduced, pivots):
            if (row >> f) & 1:
                v |= 1 << c
        basis.append(v)
    return basis


def span_iter(basis: List[int]):
    """Yield all 2^k combinations of the basis rows (Gray-code order not needed)."""
    k = len(basis)
    if k > 24:
        raise ValueError(f"span too large to enumerate: 2^{k}")
    for mask in range(1 << k):
        v = 0
        m = mask
        i = 0
        while m:
            if m & 1:
                v ^= basis[i]
            m >>= 1
            i += 1
        yield v


def dot_bits(a: int, b: int) -> int:
    """GF(2) inner product of two bitset vectors."""
    return (a & b).bit_count() & 1
