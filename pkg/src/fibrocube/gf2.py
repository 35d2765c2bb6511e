"""Bit-packed n-by-n linear algebra over GF(2).

Row i (1-based in the API) is stored as rows[i-1]; bit j-1 of a row holds
the entry in column j.  All operations are pure functions on immutable
values.  The reversal matrix C is defined by C_{i,j} = 1 iff i + j = n + 1,
so that C applied to a vector reverses the coordinate string.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from ._bits import bits_to_string, string_to_bits
from .errors import DimensionError, DimensionMismatchError, InvalidCoordinatesError


@dataclass(frozen=True, order=True)
class BinMatrix:
    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise DimensionError("matrix dimension must be >= 1")
        if len(self.rows) != self.n or any(
            not 0 <= r < (1 << self.n) for r in self.rows
        ):
            raise DimensionError("need exactly n rows, each < 2**n")

    def row_strings(self) -> list[str]:
        return [bits_to_string(r, self.n) for r in self.rows]


def identity(n: int) -> BinMatrix:
    return BinMatrix(n, tuple(1 << i for i in range(n)))


def zero(n: int) -> BinMatrix:
    return BinMatrix(n, (0,) * n)


def reversal(n: int) -> BinMatrix:
    """The matrix C: single 1 per row on the anti-diagonal."""
    return BinMatrix(n, tuple(1 << (n - 1 - i) for i in range(n)))


def unit(n: int, i: int, j: int) -> BinMatrix:
    """E_{i,j}: single 1 at row i, column j (1-based)."""
    if not (1 <= i <= n and 1 <= j <= n):
        raise InvalidCoordinatesError(f"unit index ({i},{j}) outside 1..{n}")
    return BinMatrix(n, tuple((1 << (j - 1)) if r == i - 1 else 0 for r in range(n)))


def _check_dims(a: BinMatrix, b: BinMatrix) -> None:
    if a.n != b.n:
        raise DimensionMismatchError(f"dimension mismatch: {a.n} vs {b.n}")


def add(a: BinMatrix, b: BinMatrix) -> BinMatrix:
    _check_dims(a, b)
    return BinMatrix(a.n, tuple(x ^ y for x, y in zip(a.rows, b.rows)))


def mul(a: BinMatrix, b: BinMatrix) -> BinMatrix:
    """GF(2) product: row i of the result XORs the rows of b selected by
    the set bits of row i of a."""
    _check_dims(a, b)
    out = []
    for r in a.rows:
        acc = 0
        while r:
            low = r & -r
            acc ^= b.rows[low.bit_length() - 1]
            r ^= low
        out.append(acc)
    return BinMatrix(a.n, tuple(out))


def matvec(a: BinMatrix, x: int) -> int:
    """Product with the column vector packed into ``x``."""
    if not 0 <= x < (1 << a.n):
        raise DimensionMismatchError(f"vector {x} does not fit dimension {a.n}")
    out = 0
    for i, r in enumerate(a.rows):
        out |= ((r & x).bit_count() & 1) << i
    return out


def is_invertible(a: BinMatrix) -> bool:
    """Gaussian elimination over GF(2); pivots take the lowest-index row
    with a set bit in the pivot column."""
    work = list(a.rows)
    rank = 0
    for col in range(a.n):
        pivot = None
        for r in range(rank, a.n):
            if (work[r] >> col) & 1:
                pivot = r
                break
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        for r in range(a.n):
            if r != rank and (work[r] >> col) & 1:
                work[r] ^= work[rank]
        rank += 1
    return rank == a.n


def cyclic_row_shift(a: BinMatrix, k: int) -> BinMatrix:
    """Row i of the result is row ((i-1+k) mod n)+1 of ``a``."""
    if not 0 <= k < a.n:
        raise InvalidCoordinatesError(f"shift {k} outside 0..{a.n - 1}")
    return BinMatrix(a.n, tuple(a.rows[(i + k) % a.n] for i in range(a.n)))


def to_text(a: BinMatrix) -> str:
    """n lines of n characters, row 1 first, column 1 leftmost."""
    return "\n".join(a.row_strings()) + "\n"


def from_text(text: str) -> BinMatrix:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    n = len(lines)
    if n == 0 or any(len(ln) != n for ln in lines):
        raise DimensionError("matrix text must be n non-empty lines of n characters")
    return BinMatrix(n, tuple(string_to_bits(ln) for ln in lines))


def to_json_obj(a: BinMatrix) -> dict:
    return {"n": a.n, "rows": a.row_strings()}


def from_json_obj(obj: dict) -> BinMatrix:
    n = int(obj["n"])
    rows = obj["rows"]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise DimensionError("matrix JSON rows do not match n")
    return BinMatrix(n, tuple(string_to_bits(r) for r in rows))


def to_json(a: BinMatrix) -> str:
    return json.dumps(to_json_obj(a), separators=(",", ":"))
