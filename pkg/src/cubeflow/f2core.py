"""Exact linear algebra over F2 and over Q, plus exterior algebra over F2.

F2 vectors are Python ints used as bitsets: bit ``j`` is coordinate ``j``.
A matrix is a list of such row ints together with a column count.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


@dataclass(frozen=True)
class F2Matrix:
    nrows: int
    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != self.nrows:
            raise ValueError("row count mismatch")
        limit = 1 << self.ncols
        for r in self.rows:
            if r < 0 or r >= limit:
                raise ValueError("row has bits outside the column range")

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]], ncols: int | None = None) -> "F2Matrix":
        if ncols is None:
            ncols = len(dense[0]) if dense else 0
        rows = []
        for row in dense:
            if len(row) != ncols:
                raise ValueError("ragged matrix")
            v = 0
            for j, x in enumerate(row):
                if x & 1:
                    v |= 1 << j
            rows.append(v)
        return cls(len(rows), ncols, tuple(rows))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "F2Matrix":
        return cls(nrows, ncols, (0,) * nrows)

    @classmethod
    def identity(cls, n: int) -> "F2Matrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    def entry(self, i: int, j: int) -> int:
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError((i, j))
        return (self.rows[i] >> j) & 1

    def to_dense(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.ncols)] for r in self.rows]

    def apply(self, v: int) -> int:
        """Matrix times column vector ``v`` (a bitset over the columns)."""
        out = 0
        for i, r in enumerate(self.rows):
            if bin(r & v).count("1") & 1:
                out |= 1 << i
        return out

    def transpose(self) -> "F2Matrix":
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            while r:
                low = r & -r
                j = low.bit_length() - 1
                cols[j] |= 1 << i
                r ^= low
        return F2Matrix(self.ncols, self.nrows, tuple(cols))

    def __matmul__(self, other: "F2Matrix") -> "F2Matrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        out = []
        for r in self.rows:
            acc = 0
            while r:
                low = r & -r
                acc ^= other.rows[low.bit_length() - 1]
                r ^= low
            out.append(acc)
        return F2Matrix(self.nrows, other.ncols, tuple(out))

    def is_zero(self) -> bool:
        return not any(self.rows)


def rank_of_rows(rows: Iterable[int]) -> int:
    """Rank of a collection of bitset rows (xor basis keyed by leading bit)."""
    basis: dict[int, int] = {}
    for r in rows:
        while r:
            top = r.bit_length() - 1
            b = basis.get(top)
            if b is None:
                basis[top] = r
                break
            r ^= b
    return len(basis)


def rank(m: F2Matrix) -> int:
    return rank_of_rows(m.rows)


def row_reduce(rows: Sequence[int]) -> tuple[list[int], list[int]]:
    """Reduced row echelon form. Returns (pivot rows, pivot columns), pivots by lowest bit."""
    pivots: list[int] = []
    pcols: list[int] = []
    for r in rows:
        for p, c in zip(pivots, pcols):
            if (r >> c) & 1:
                r ^= p
        if not r:
            continue
        c = (r & -r).bit_length() - 1
        for k in range(len(pivots)):
            if (pivots[k] >> c) & 1:
                pivots[k] ^= r
        pivots.append(r)
        pcols.append(c)
    return pivots, pcols


def kernel_basis(m: F2Matrix) -> list[int]:
    """Basis of {v : m v = 0} as column bitsets."""
    pivots, pcols = row_reduce(m.rows)
    pset = set(pcols)
    basis = []
    for free in range(m.ncols):
        if free in pset:
            continue
        v = 1 << free
        for p, c in zip(pivots, pcols):
            if (p >> free) & 1:
                v |= 1 << c
        basis.append(v)
    return basis


def in_span(v: int, rows: Sequence[int]) -> bool:
    return rank_of_rows(list(rows) + [v]) == rank_of_rows(rows)


# exterior algebra over F2 ------------------------------------------------------

@dataclass(frozen=True)
class ExtElement:
    """Element of the exterior algebra on F2^n; monomials are bitmasks."""

    dim: int
    terms: frozenset

    @classmethod
    def make(cls, dim: int, monomials: Iterable[int]) -> "ExtElement":
        acc: set[int] = set()
        for m in monomials:
            if m >> dim:
                raise ValueError("monomial outside ambient dimension")
            acc ^= {m}
        return cls(dim, frozenset(acc))

    @classmethod
    def basis(cls, dim: int, i: int) -> "ExtElement":
        return cls.make(dim, [1 << i])

    @classmethod
    def one(cls, dim: int) -> "ExtElement":
        return cls.make(dim, [0])

    @classmethod
    def vector(cls, dim: int, v: int) -> "ExtElement":
        """Degree-one element from a bitset vector."""
        return cls.make(dim, [1 << j for j in range(dim) if (v >> j) & 1])

    def __add__(self, other: "ExtElement") -> "ExtElement":
        _same_dim(self, other)
        return ExtElement(self.dim, self.terms ^ other.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degrees(self) -> set[int]:
        return {bin(m).count("1") for m in self.terms}


def _same_dim(a: ExtElement, b: ExtElement) -> None:
    if a.dim != b.dim:
        raise ValueError(f"ambient dimension mismatch: {a.dim} vs {b.dim}")


def wedge(a: ExtElement, b: ExtElement) -> ExtElement:
    _same_dim(a, b)
    acc: set[int] = set()
    for x in a.terms:
        for y in b.terms:
            if x & y:
                continue
            acc ^= {x | y}
    return ExtElement(a.dim, frozenset(acc))


def wedge_monomial_list(vectors: Sequence[int]) -> set[int]:
    """Expand v_1 ∧ ... ∧ v_k for bitset vectors into a set of monomials."""
    acc = {0}
    for v in vectors:
        nxt: set[int] = set()
        bits = [1 << j for j in range(v.bit_length()) if (v >> j) & 1]
        for m in acc:
            for b in bits:
                if not m & b:
                    nxt ^= {m | b}
        acc = nxt
        if not acc:
            break
    return acc


# symmetric integer forms -------------------------------------------------------

@dataclass(frozen=True)
class SymIntMatrix:
    n: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.n or any(len(r) != self.n for r in self.entries):
            raise ValueError("matrix is not n x n")
        for i in range(self.n):
            for j in range(i):
                if self.entries[i][j] != self.entries[j][i]:
                    raise ValueError("matrix is not symmetric")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "SymIntMatrix":
        return cls(len(rows), tuple(tuple(int(x) for x in r) for r in rows))

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def signature_det_nullity(a: SymIntMatrix) -> tuple[int, int, int]:
    """Exact (signature, determinant, nullity) via congruence diagonalization over Q."""
    n = a.n
    m = [[Fraction(x) for x in row] for row in a.entries]
    det = Fraction(1)
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if m[i][i] != 0), None)
        if piv is not None:
            d = m[piv][piv]
            active.remove(piv)
            for i in active:
                f = m[i][piv] / d
                if f:
                    for j in active:
                        m[i][j] -= f * m[piv][j]
            det *= d
            if d > 0:
                pos += 1
            else:
                neg += 1
            continue
        pair = next(((i, j) for i in active for j in active if i < j and m[i][j] != 0), None)
        if pair is None:
            # remaining block is zero
            return pos - neg, 0, len(active)
        i, j = pair
        # the block [[0,b],[b,0]] has determinant -b^2 and one eigenvalue of each sign
        b = m[i][j]
        active.remove(i)
        active.remove(j)
        inv = 1 / (b * b)
        rest = list(active)
        # Schur complement of the hyperbolic block: M - C B^{-1} C^T with B^{-1} = [[0,1/b],[1/b,0]]
        for p in rest:
            for q in rest:
                corr = (m[p][i] * m[j][q] + m[p][j] * m[i][q]) * b * inv
                if corr:
                    m[p][q] -= corr
        det *= -(b * b)
        pos += 1
        neg += 1
    assert det.denominator == 1
    return pos - neg, int(det), 0


def integer_det(rows: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant; used as an independent cross-check."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(map(int, r)) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]
