"""Exact linear algebra over small prime fields and over the integers.

F_2 matrices are eliminated as packed row words (Python ints used as
bitsets, bit j = column j); other primes go through a plain list path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .arith import is_prime
from .errors import DimensionMismatch, InputError, ValueOutOfRange

MAX_P = 251


@dataclass(frozen=True)
class MatrixFp:
    """Dense matrix over F_p with row and column labels."""

    p: int
    rows: tuple[tuple[int, ...], ...]
    ncols: int
    row_labels: tuple[str, ...] = ()
    col_labels: tuple[str, ...] = ()

    def __post_init__(self):
        if not (2 <= self.p <= MAX_P and is_prime(self.p)):
            raise InputError(f"matrix modulus must be a prime <= {MAX_P}, got {self.p}")
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        for r in rows:
            if len(r) != self.ncols:
                raise DimensionMismatch(f"DimensionMismatch: row of length {len(r)} in a {self.ncols}-column matrix")
            if any(not 0 <= x < self.p for x in r):
                raise InputError(f"entry out of range for F_{self.p}: {r}")
        object.__setattr__(self, "rows", rows)
        if not self.row_labels:
            object.__setattr__(self, "row_labels", tuple(f"r{i}" for i in range(len(rows))))
        if not self.col_labels:
            object.__setattr__(self, "col_labels", tuple(f"c{j}" for j in range(self.ncols)))
        object.__setattr__(self, "row_labels", tuple(self.row_labels))
        object.__setattr__(self, "col_labels", tuple(self.col_labels))
        if len(self.row_labels) != len(rows) or len(self.col_labels) != self.ncols:
            raise DimensionMismatch("DimensionMismatch: label counts do not match the matrix shape")

    @classmethod
    def from_rows(cls, p, rows, ncols=None, row_labels=(), col_labels=()):
        rows = [[x % p for x in r] for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else len(col_labels)
        return cls(p, tuple(map(tuple, rows)), ncols, tuple(row_labels), tuple(col_labels))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def transpose(self) -> "MatrixFp":
        cols = tuple(tuple(r[j] for r in self.rows) for j in range(self.ncols))
        return MatrixFp(self.p, cols, self.nrows, self.col_labels, self.row_labels)

    def apply(self, x: Sequence[int]) -> tuple[int, ...]:
        if len(x) != self.ncols:
            raise DimensionMismatch("DimensionMismatch: vector length")
        return tuple(sum(a * b for a, b in zip(r, x)) % self.p for r in self.rows)

    def packed_rows(self) -> list[int]:
        if self.p != 2:
            raise InputError("packed rows exist only over F_2")
        return [sum(1 << j for j, x in enumerate(r) if x) for r in self.rows]


@dataclass(frozen=True)
class SubspaceFp:
    """Subspace of F_p^ambient_dim given by an independent basis."""

    p: int
    ambient_dim: int
    basis: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        basis = tuple(tuple(x % self.p for x in v) for v in self.basis)
        if any(len(v) != self.ambient_dim for v in basis):
            raise DimensionMismatch("DimensionMismatch: basis vector length")
        object.__setattr__(self, "basis", basis)
        if basis and _rank_rows(self.p, [list(v) for v in basis], self.ambient_dim) != len(basis):
            raise InputError("subspace basis vectors are not independent")

    @property
    def dim(self) -> int:
        return len(self.basis)


def _rank_f2(words: list[int]) -> int:
    words = [w for w in words if w]
    rank = 0
    while words:
        pivot = words.pop()
        if not pivot:
            continue
        rank += 1
        low = pivot & -pivot
        words = [w ^ pivot if w & low else w for w in words]
        words = [w for w in words if w]
    return rank


def _rref(p: int, rows: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form over F_p; returns (nonzero rows, pivot columns)."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] % p), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def _rank_rows(p: int, rows: list[list[int]], ncols: int) -> int:
    if p == 2:
        return _rank_f2([sum(1 << j for j, x in enumerate(r) if x % 2) for r in rows])
    return len(_rref(p, rows, ncols)[1])


def rank_fp(m: MatrixFp) -> int:
    """Rank of m over F_p."""
    if m.p == 2:
        return _rank_f2(m.packed_rows())
    return _rank_rows(m.p, [list(r) for r in m.rows], m.ncols)


def kernel_dim_fp(m: MatrixFp) -> int:
    """Dimension of {x in F_p^ncols : m x = 0}."""
    return m.ncols - rank_fp(m)


def kernel_basis_fp(m: MatrixFp) -> list[tuple[int, ...]]:
    """Basis of the right kernel, one vector per free column in ascending order.

    Each vector has a 1 at its free column and is supported on that column
    plus pivot columns, so the output is canonical for a given matrix.
    """
    p = m.p
    red, pivots = _rref(p, [list(r) for r in m.rows], m.ncols)
    free = [c for c in range(m.ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * m.ncols
        v[f] = 1
        for row, pc in zip(red, pivots):
            v[pc] = (-row[f]) % p
        basis.append(tuple(v))
    for v in basis:
        assert not any(m.apply(v)), "kernel vector does not annihilate"
    return basis


def preimage_count_exp(a: MatrixFp, b: SubspaceFp) -> int:
    """Exponent e with #{x : a x in span(b)} = p**e."""
    if a.p != b.p or a.nrows != b.ambient_dim:
        raise DimensionMismatch("DimensionMismatch: matrix and subspace disagree on p or row dimension")
    p = a.p
    stacked = [list(r) + [v[i] for v in b.basis] for i, r in enumerate(a.rows)]
    rank_ab = _rank_rows(p, stacked, a.ncols + b.dim)
    rank_b = _rank_rows(p, [list(v) for v in b.basis], b.ambient_dim)
    return a.ncols - rank_ab + rank_b


# -- integer lattices ----------------------------------------------------------


def hermite_normal_form(basis: list[list[int]]) -> list[list[int]]:
    """Row-style HNF of a full-rank square integer basis.

    Upper triangular, positive diagonal, entries above each pivot reduced
    into [0, pivot).
    """
    m = [list(r) for r in basis]
    n = len(m)
    for c in range(n):
        # gcd-reduce column c among rows c..n-1
        while True:
            nz = [i for i in range(c, n) if m[i][c]]
            if not nz:
                raise InputError("lattice basis is not full rank")
            i0 = min(nz, key=lambda i: abs(m[i][c]))
            m[c], m[i0] = m[i0], m[c]
            done = True
            for i in range(c + 1, n):
                if m[i][c]:
                    q = m[i][c] // m[c][c]
                    m[i] = [x - q * y for x, y in zip(m[i], m[c])]
                    if m[i][c]:
                        done = False
            if done:
                break
        if m[c][c] < 0:
            m[c] = [-x for x in m[c]]
    for c in range(n):
        for i in range(c):
            q = m[i][c] // m[c][c]
            if q:
                m[i] = [x - q * y for x, y in zip(m[i], m[c])]
    return m


def congruence_kernel(dlogs: Sequence[Sequence[int]], orders: Sequence[int], ngens: int | None = None) -> list[list[int]]:
    """Kernel lattice of Z^n -> prod_i Z/orders[i], x -> (sum_j dlogs[i][j] x_j).

    Row i of ``dlogs`` holds the discrete logarithms of every generator in
    the i-th cyclic factor.  Returns the kernel basis as rows in Hermite
    normal form (exponent vectors over the input generators).
    """
    if len(dlogs) != len(orders):
        raise DimensionMismatch("DimensionMismatch: one dlog row per cyclic order")
    if ngens is None:
        if not dlogs:
            raise DimensionMismatch("DimensionMismatch: number of generators unknown")
        ngens = len(dlogs[0])
    for o in orders:
        if not 1 <= o <= 1 << 63:
            raise ValueOutOfRange(f"ValueOutOfRange: cyclic order {o}")
    basis = [[int(i == j) for j in range(ngens)] for i in range(ngens)]
    for row, o in zip(dlogs, orders):
        if len(row) != ngens:
            raise DimensionMismatch("DimensionMismatch: dlog row length")
        # values of the current basis under this character
        vals = [sum(c * x for c, x in zip(row, b)) % o for b in basis]
        # unimodular reduction: push gcd into the first slot, zero the rest
        for j in range(1, ngens):
            while vals[j]:
                q = vals[0] // vals[j]
                basis[0] = [x - q * y for x, y in zip(basis[0], basis[j])]
                vals[0] -= q * vals[j]
                basis[0], basis[j] = basis[j], basis[0]
                vals[0], vals[j] = vals[j], vals[0]
        if ngens:
            g = vals[0] % o
            scale = o // math.gcd(g, o)
            basis[0] = [scale * x for x in basis[0]]
    if not ngens:
        return []
    out = hermite_normal_form(basis)
    for b in out:
        for row, o in zip(dlogs, orders):
            assert sum(c * x for c, x in zip(row, b)) % o == 0
    return out


def f2_row_reduce_tracked(vectors: list[list[int]], integer: list[list[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Reduce F_2 images of integer vectors to RREF, mirroring every row
    operation on the integer lifts (XOR becomes integer addition)."""
    n = len(vectors[0]) if vectors else 0
    bits = [[x % 2 for x in v] for v in vectors]
    ints = [list(v) for v in integer]
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(bits)) if bits[i][c]), None)
        if piv is None:
            continue
        bits[r], bits[piv] = bits[piv], bits[r]
        ints[r], ints[piv] = ints[piv], ints[r]
        for i in range(len(bits)):
            if i != r and bits[i][c]:
                bits[i] = [x ^ y for x, y in zip(bits[i], bits[r])]
                ints[i] = [x + y for x, y in zip(ints[i], ints[r])]
        r += 1
    return bits[:r], ints[:r]
