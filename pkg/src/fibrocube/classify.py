"""Goodness of matrices, exhaustive and analytic enumeration, group analysis.

A matrix A is good for a cube when it is invertible and maps every vertex
to a vertex.  The brute-force oracle scans all 2**(n*n) candidates (numpy
vectorized, optionally across worker processes); the analytic generator
produces the classified families directly.  For Lucas dimensions n >= 5
the good set is the 2n dihedral row permutations of the identity: the n
cyclic shifts together with the n shifted reversals.  (The reversal C is
good for every L_n and is not a cyclic shift, so the group is dihedral of
order 2n; the brute-force oracle confirms this at n = 5.)
"""
from __future__ import annotations

import multiprocessing
from dataclasses import dataclass

import numpy as np

from .cube import CubeGraph, CubeKind, build_cube
from .errors import (
    DimensionError,
    DimensionMismatchError,
    GroupNotClosedError,
)
from .gf2 import (
    BinMatrix,
    add,
    cyclic_row_shift,
    identity,
    is_invertible,
    matvec,
    mul,
    reversal,
    unit,
)

BRUTE_MAX_N = 5


@dataclass(frozen=True)
class GoodnessVerdict:
    good: bool
    invertible: bool
    witness: int | None  # vertex whose image leaves the cube, if A is invertible


@dataclass(frozen=True)
class GoodMatrixGroup:
    kind: CubeKind | None
    n: int
    elements: tuple[BinMatrix, ...]
    cayley: tuple[tuple[int, ...], ...]
    structure: str


def is_good(a: BinMatrix, g: CubeGraph) -> GoodnessVerdict:
    """Invertibility plus closure of the vertex set under x -> Ax.

    The witness is the first vertex (ascending bit value) whose image is
    not a vertex; it is reported only for invertible matrices.
    """
    if a.n != g.n:
        raise DimensionMismatchError(f"matrix is {a.n}x{a.n}, cube has n={g.n}")
    if not is_invertible(a):
        return GoodnessVerdict(good=False, invertible=False, witness=None)
    for x in g.vertices:
        if matvec(a, x) not in g.index_of:
            return GoodnessVerdict(good=False, invertible=True, witness=x)
    return GoodnessVerdict(good=True, invertible=True, witness=None)


# ---------------------------------------------------------------------------
# brute-force oracle

def _invertible_rows(rows: list[int], n: int) -> bool:
    work = list(rows)
    rank = 0
    for col in range(n):
        pivot = None
        for r in range(rank, n):
            if (work[r] >> col) & 1:
                pivot = r
                break
        if pivot is None:
            return False
        work[rank], work[pivot] = work[pivot], work[rank]
        for r in range(n):
            if r != rank and (work[r] >> col) & 1:
                work[r] ^= work[rank]
        rank += 1
    return True


def _scan_range(n: int, start: int, stop: int, vertices: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Scan candidate signatures [start, stop); bit i*n+j of a signature
    holds entry (i+1, j+1).  Returns row tuples of the good matrices."""
    lut = np.zeros(1 << n, dtype=bool)
    lut[list(vertices)] = True
    vset = set(vertices)
    heavy = [v for v in vertices if v.bit_count() >= 2]
    found: list[tuple[int, ...]] = []
    chunk = 1 << 21
    for lo in range(start, stop, chunk):
        hi = min(stop, lo + chunk)
        sigs = np.arange(lo, hi, dtype=np.uint64)
        cols = []
        ok = np.ones(len(sigs), dtype=bool)
        for j in range(n):
            col = np.zeros(len(sigs), dtype=np.uint16)
            for i in range(n):
                col |= ((sigs >> np.uint64(i * n + j)) & np.uint64(1)).astype(np.uint16) << np.uint16(i)
            cols.append(col)
            if (1 << j) in vset:
                ok &= lut[col]  # column j = A e_j must be a vertex
        if not ok.any():
            continue
        sigs = sigs[ok]
        cols = [c[ok] for c in cols]
        good = np.ones(len(sigs), dtype=bool)
        for v in heavy:
            img = np.zeros(len(sigs), dtype=np.uint16)
            j = 0
            vv = v
            while vv:
                if vv & 1:
                    img ^= cols[j]
                vv >>= 1
                j += 1
            good &= lut[img]
        for sig in sigs[good].tolist():
            rows = [(sig >> (i * n)) & ((1 << n) - 1) for i in range(n)]
            if _invertible_rows(rows, n):
                found.append(tuple(rows))
    return found


def enumerate_brute(kind: CubeKind, n: int, jobs: int = 1) -> list[BinMatrix]:
    """All good matrices by exhaustive scan, canonically ordered
    (lexicographic on row tuples).  Hard-capped at n <= 5."""
    if not 1 <= n <= BRUTE_MAX_N:
        raise DimensionError(f"brute-force enumeration supports 1 <= n <= {BRUTE_MAX_N}")
    g = build_cube(kind, n)
    total = 1 << (n * n)
    if jobs <= 1 or total < (1 << 16):
        rows_list = _scan_range(n, 0, total, g.vertices)
    else:
        bounds = [total * i // jobs for i in range(jobs + 1)]
        args = [(n, bounds[i], bounds[i + 1], g.vertices) for i in range(jobs)]
        with multiprocessing.get_context("fork").Pool(jobs) as pool:
            parts = pool.starmap(_scan_range, args)
        rows_list = [rows for part in parts for rows in part]
    rows_list.sort()
    return [BinMatrix(n, rows) for rows in rows_list]


# ---------------------------------------------------------------------------
# analytic generators

def _fibonacci_family(n: int) -> list[BinMatrix]:
    i_mat = identity(n)
    c_mat = reversal(n)
    e13 = unit(n, 1, 3)
    en_n2 = unit(n, n, n - 2)
    en3 = unit(n, n, 3)
    e1_n2 = unit(n, 1, n - 2)
    return [
        i_mat,
        add(i_mat, e13),
        add(i_mat, en_n2),
        add(add(i_mat, e13), en_n2),
        c_mat,
        add(c_mat, en3),
        add(c_mat, e1_n2),
        add(add(c_mat, en3), e1_n2),
    ]


def _rows_from_strings(strings: list[str]) -> BinMatrix:
    from ._bits import string_to_bits

    return BinMatrix(len(strings), tuple(string_to_bits(s) for s in strings))


def _lucas4_family() -> list[BinMatrix]:
    # dihedral permutation matrices, then the weight-2-row cases of the
    # order-72 classification, each closed under cyclic row shifts
    mats: set[BinMatrix] = set()
    for k in range(4):
        mats.add(cyclic_row_shift(identity(4), k))
        mats.add(cyclic_row_shift(reversal(4), k))
    singles = {
        "1010": (("0100", "0001"), ("1000", "0010")),  # rows 2/4 pool, row 3 pool
        "0101": (("1000", "0010"), ("0100", "0001")),
    }
    for w2, (pool24, pool3) in singles.items():
        for r2, r4 in (pool24, pool24[::-1]):
            for r3 in pool3:
                base = _rows_from_strings([w2, r2, r3, r4])
                for k in range(4):
                    mats.add(cyclic_row_shift(base, k))
    for first, second, pool3, pool4 in (
        ("1010", "0101", ("1000", "0010"), ("0100", "0001")),
        ("0101", "1010", ("0100", "0001"), ("1000", "0010")),
    ):
        for r3 in pool3:
            for r4 in pool4:
                base = _rows_from_strings([first, second, r3, r4])
                for k in range(4):
                    mats.add(cyclic_row_shift(base, k))
    return sorted(mats)


def _lucas_dihedral(n: int) -> list[BinMatrix]:
    mats: set[BinMatrix] = set()
    for k in range(n):
        mats.add(cyclic_row_shift(identity(n), k))
        mats.add(cyclic_row_shift(reversal(n), k))
    return sorted(mats)


def generate_analytic(kind: CubeKind, n: int) -> list[BinMatrix]:
    """The classified good set, without scanning.

    Fibonacci n >= 4: eight matrices built from I, C and the corner units;
    n = 3: the six invertible members of that family.  Lucas n in {2, 3}:
    the dihedral permutation matrices; n = 4: the order-72 family; n >= 5:
    the 2n dihedral row permutations of I.
    """
    kind = CubeKind(kind)
    if kind is CubeKind.FIBONACCI:
        if n < 3:
            raise DimensionError("analytic Fibonacci family needs n >= 3")
        fam = _fibonacci_family(n)
        if n == 3:
            fam = [m for m in fam if is_invertible(m)]
        return sorted(set(fam))
    if n < 2:
        raise DimensionError("analytic Lucas family needs n >= 2")
    if n == 4:
        return _lucas4_family()
    return _lucas_dihedral(n)


# ---------------------------------------------------------------------------
# group analysis

def _element_order(cayley: tuple[tuple[int, ...], ...], idx: int, identity_idx: int) -> int:
    order = 1
    cur = idx
    while cur != identity_idx:
        cur = cayley[cur][idx]
        order += 1
    return order


def _detect_structure(elements: tuple[BinMatrix, ...], cayley, identity_idx: int) -> str:
    k = len(elements)
    n = elements[0].n
    if k == 1:
        return "trivial"
    if k == 2:
        return "Z2"
    abelian = all(
        cayley[i][j] == cayley[j][i] for i in range(k) for j in range(i + 1, k)
    )
    if k == 6 and not abelian:
        return "S3"
    if k == 8:
        by_mat = {m: i for i, m in enumerate(elements)}
        a = add(reversal(n), unit(n, 1, n - 2))
        b = add(identity(n), unit(n, 1, 3))
        if a in by_mat and b in by_mat:
            a2 = mul(a, a)
            if (
                mul(a2, a2) == identity(n)
                and a2 != identity(n)
                and mul(b, b) == identity(n)
                and mul(b, mul(a, b)) == mul(a2, a)
            ):
                return "D4"
    if k == n and any(
        _element_order(cayley, i, identity_idx) == k for i in range(k)
    ):
        return f"Z{n}"
    if k == 72:
        return "L4Order72"
    if k == 2 * n:
        rotations = [i for i in range(k) if _element_order(cayley, i, identity_idx) == n]
        if rotations:
            r = rotations[0]
            r_inv = next(j for j in range(k) if cayley[r][j] == identity_idx)
            powers = {identity_idx}
            cur = r
            while cur != identity_idx:
                powers.add(cur)
                cur = cayley[cur][r]
            for s in range(k):
                if s in powers:
                    continue
                if _element_order(cayley, s, identity_idx) == 2:
                    if cayley[s][cayley[r][s]] == r_inv:
                        return f"D{n}"
    return "unknown"


def analyze_group(
    elements: list[BinMatrix], kind: CubeKind | None = None
) -> GoodMatrixGroup:
    """Verify closure, build the Cayley table, and tag the structure.

    cayley[a][b] is the index of elements[a] * elements[b] in the
    canonical (row-lexicographic) element order.
    """
    if not elements:
        raise GroupNotClosedError("empty element list")
    n = elements[0].n
    if any(m.n != n for m in elements):
        raise DimensionMismatchError("elements have mixed dimensions")
    ordered = tuple(sorted(set(elements)))
    if len(ordered) != len(elements):
        raise GroupNotClosedError("duplicate elements")
    if any(not is_invertible(m) for m in ordered):
        raise GroupNotClosedError("non-invertible element")
    index = {m: i for i, m in enumerate(ordered)}
    k = len(ordered)
    table = []
    for i in range(k):
        row = []
        for j in range(k):
            prod = mul(ordered[i], ordered[j])
            if prod not in index:
                raise GroupNotClosedError(
                    f"product of elements {i} and {j} is not in the set",
                    witness=(i, j),
                )
            row.append(index[prod])
        table.append(tuple(row))
    cayley = tuple(table)
    ident = identity(n)
    if ident not in index:
        raise GroupNotClosedError("identity not in the set")
    identity_idx = index[ident]
    for i in range(k):
        if identity_idx not in cayley[i]:
            raise GroupNotClosedError(f"element {i} has no inverse in the set")
    structure = _detect_structure(ordered, cayley, identity_idx)
    return GoodMatrixGroup(
        kind=CubeKind(kind) if kind is not None else None,
        n=n,
        elements=ordered,
        cayley=cayley,
        structure=structure,
    )


def check_cyclic_shift_closure(a: BinMatrix, g: CubeGraph) -> bool:
    """True iff every cyclic row shift of ``a`` is good for ``g``."""
    if a.n != g.n:
        raise DimensionMismatchError(f"matrix is {a.n}x{a.n}, cube has n={g.n}")
    return all(
        is_good(cyclic_row_shift(a, k), g).good for k in range(a.n)
    )


def group_to_json_obj(group: GoodMatrixGroup) -> dict:
    from .gf2 import to_json_obj

    return {
        "kind": group.kind.value if group.kind is not None else None,
        "n": group.n,
        "order": len(group.elements),
        "structure": group.structure,
        "elements": [to_json_obj(m) for m in group.elements],
        "cayley": [list(row) for row in group.cayley],
    }
