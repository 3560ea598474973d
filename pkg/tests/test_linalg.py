from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from stgenus.errors import DimensionMismatch, InputError
from stgenus.linalg import (
    MatrixFp,
    SubspaceFp,
    congruence_kernel,
    f2_row_reduce_tracked,
    hermite_normal_form,
    kernel_basis_fp,
    kernel_dim_fp,
    preimage_count_exp,
    rank_fp,
)


def mat(p, rows, ncols=None):
    return MatrixFp.from_rows(p, rows, ncols)


@st.composite
def matrices(draw, primes=(2, 3), max_dim=4):
    p = draw(st.sampled_from(primes))
    nr = draw(st.integers(0, max_dim))
    nc = draw(st.integers(1, max_dim))
    rows = draw(st.lists(st.lists(st.integers(0, p - 1), min_size=nc, max_size=nc), min_size=nr, max_size=nr))
    return MatrixFp.from_rows(p, rows, nc)


def span_size(p, rows, n):
    seen = set()
    for coeffs in itertools.product(range(p), repeat=len(rows)):
        seen.add(tuple(sum(c * r[j] for c, r in zip(coeffs, rows)) % p for j in range(n)))
    return len(seen)


def test_rank_examples():
    assert rank_fp(mat(2, [[1, 0], [0, 1]])) == 2
    assert rank_fp(mat(2, [[1, 1, 1, 1]])) == 1
    rng = random.Random(4)
    for _ in range(20):
        rows = [[rng.randrange(3) for _ in range(4)] for _ in range(4)]
        assert 3 ** rank_fp(mat(3, rows)) == span_size(3, rows, 4)


def test_kernel_examples():
    assert kernel_dim_fp(mat(2, [[0, 0]])) == 2
    assert kernel_dim_fp(mat(2, [[1, 0], [0, 1]])) == 0
    assert kernel_dim_fp(mat(2, [[1, 1]])) == 1
    assert kernel_basis_fp(mat(2, [[1, 0], [0, 1]])) == []
    assert kernel_basis_fp(mat(2, [[0, 0]])) == [(1, 0), (0, 1)]
    assert kernel_basis_fp(mat(2, [[1, 1]])) == [(1, 1)]


def test_preimage_examples():
    assert preimage_count_exp(mat(2, [[1, 0], [0, 1]]), SubspaceFp(2, 2)) == 0
    assert preimage_count_exp(mat(2, [[0, 0]]), SubspaceFp(2, 1)) == 2
    assert preimage_count_exp(mat(2, [[1, 1]]), SubspaceFp(2, 1, ((1,),))) == 2


def test_matrix_validation():
    with pytest.raises(DimensionMismatch):
        MatrixFp(2, ((1, 0), (1,)), 2)
    with pytest.raises(InputError):
        MatrixFp(2, ((2, 0),), 2)
    with pytest.raises(InputError):
        MatrixFp(4, ((1,),), 1)
    with pytest.raises(InputError):
        SubspaceFp(2, 2, ((1, 1), (1, 1)))


@given(matrices())
@settings(max_examples=300, deadline=None)
def test_kernel_size_by_enumeration(m):
    count = sum(1 for x in itertools.product(range(m.p), repeat=m.ncols) if not any(m.apply(x)))
    assert count == m.p ** kernel_dim_fp(m)


@given(matrices(primes=(2, 3, 5), max_dim=6))
@settings(max_examples=200, deadline=None)
def test_rank_transpose_and_kernel_basis(m):
    assert rank_fp(m) == rank_fp(m.transpose())
    basis = kernel_basis_fp(m)
    assert len(basis) == kernel_dim_fp(m)
    for v in basis:
        assert not any(m.apply(v))
    if basis:
        assert rank_fp(MatrixFp.from_rows(m.p, basis, m.ncols)) == len(basis)
    assert preimage_count_exp(m, SubspaceFp(m.p, m.nrows)) == kernel_dim_fp(m)


@given(matrices(max_dim=3), st.data())
@settings(max_examples=150, deadline=None)
def test_preimage_count_by_enumeration(m, data):
    p, nr = m.p, m.nrows
    vecs = data.draw(st.lists(st.lists(st.integers(0, p - 1), min_size=nr, max_size=nr), max_size=3))
    # keep an independent subset
    basis = []
    for v in vecs:
        if any(v) and (not basis or rank_fp(MatrixFp.from_rows(p, basis + [v], nr)) == len(basis) + 1):
            basis.append(v)
    sub = SubspaceFp(p, nr, tuple(map(tuple, basis)))
    span = set()
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        span.add(tuple(sum(c * b[i] for c, b in zip(coeffs, basis)) % p for i in range(nr)))
    count = sum(1 for x in itertools.product(range(p), repeat=m.ncols) if m.apply(x) in span)
    assert count == p ** preimage_count_exp(m, sub)


def test_congruence_kernel_examples():
    assert congruence_kernel([], [], 2) == [[1, 0], [0, 1]]
    assert congruence_kernel([[1]], [4]) == [[4]]
    # -1 and 2 in (Z/5)^x = <2>: dlog(-1) = 2, dlog(2) = 1
    lattice = congruence_kernel([[2, 1]], [4])
    assert lattice == [[1, 2], [0, 4]]
    assert (-1) ** 1 * 2**2 % 5 == 1


def _in_lattice(v, rows):
    # HNF rows are upper triangular: solve greedily
    v = list(v)
    for i, r in enumerate(rows):
        if v[i] % r[i]:
            return False
        q = v[i] // r[i]
        v = [a - q * b for a, b in zip(v, r)]
    return not any(v)


@given(
    st.integers(1, 3).flatmap(
        lambda n: st.tuples(
            st.just(n),
            st.lists(st.integers(1, 12), min_size=1, max_size=2).flatmap(
                lambda orders: st.tuples(
                    st.just(orders),
                    st.lists(st.lists(st.integers(0, 40), min_size=n, max_size=n), min_size=len(orders), max_size=len(orders)),
                )
            ),
        )
    )
)
@settings(max_examples=150, deadline=None)
def test_congruence_kernel_is_exact(case):
    n, (orders, dlogs) = case
    lattice = congruence_kernel(dlogs, orders, n)
    assert len(lattice) == n
    for b in lattice:
        for row, o in zip(dlogs, orders):
            assert sum(c * x for c, x in zip(row, b)) % o == 0
    # every kernel vector in a box is generated by the lattice
    bound = max(orders)
    for x in itertools.product(range(-bound, bound + 1), repeat=n):
        in_kernel = all(sum(c * y for c, y in zip(row, x)) % o == 0 for row, o in zip(dlogs, orders))
        assert in_kernel == _in_lattice(x, lattice)


def test_hermite_normal_form_shape():
    h = hermite_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    for i in range(3):
        assert h[i][i] > 0
        for j in range(i):
            assert h[i][j] == 0
            assert 0 <= h[j][i] < h[i][i]
    # |det| = 144 is preserved by unimodular row operations
    assert h == [[2, 4, 4], [0, 6, 0], [0, 0, 12]]


def test_f2_row_reduce_tracked_keeps_parity():
    ints = [[3, 2, 5], [1, 1, 1], [2, 1, 6]]
    bits, lifts = f2_row_reduce_tracked(ints, ints)
    for b, v in zip(bits, lifts):
        assert [x % 2 for x in v] == b
    assert bits == [[1, 0, 1], [0, 1, 0]]
