from __future__ import annotations

import itertools

import pytest

from stgenus.arith import kronecker
from stgenus.errors import BudgetExhausted, InvalidRange
from stgenus.genus import ramification_set
from stgenus.governing import GoverningBasis, PlaceSets, frobenius_vector, governing_basis
from stgenus.search import SearchSpec, find_primes, plan_targets, search


def spec(m, k, s0=(), budget=10**5):
    return SearchSpec(PlaceSets(tuple(s0), True), m, k, budget)


def test_plan_examples():
    assert plan_targets(spec(2, 2)) == [(0,), (0,)]
    assert plan_targets(spec(2, 1)) == [(1,), (1,)]
    assert plan_targets(spec(3, 1, (3,))) == [(1, 1), (1, 0), (0, 1)]


def test_find_primes_examples():
    b = GoverningBasis((-1,))
    assert find_primes([(1,), (1,)], b) == [3, 7]
    assert find_primes([(0,), (0,)], b) == [5, 13]
    assert find_primes([(0,)], b) == [5]


@pytest.mark.parametrize("m, k, sigma, d, g", [(2, 1, (3, 7), 21, 2), (2, 2, (5, 13), 65, 4), (1, 1, (5,), 5, 2)])
def test_search_examples(m, k, sigma, d, g):
    res = search(spec(m, k))
    assert (res.sigma, res.d, res.report.g) == (sigma, d, g)
    assert res.max_prime == max(sigma)


def test_invalid_ranges():
    with pytest.raises(InvalidRange):
        spec(1, 5)
    with pytest.raises(InvalidRange):
        spec(3, 1)  # r_S = 1 needs k >= 2
    with pytest.raises(InvalidRange):
        spec(1, 0)  # g >= 2 always, so k = 0 is never realised
    with pytest.raises(InvalidRange):
        SearchSpec(PlaceSets((), False), 2, 2)
    with pytest.raises(InvalidRange):
        SearchSpec(PlaceSets((), True, (5,)), 2, 2)
    with pytest.raises(InvalidRange):
        spec(0, 0)


def test_budget_exhausted():
    with pytest.raises(BudgetExhausted):
        search(spec(3, 3, budget=10))


@pytest.mark.parametrize("s0", [(), (3,), (5,), (7,), (3, 5), (3, 7), (5, 7), (2,), (2, 3)])
def test_results_satisfy_invariants(s0):
    basis = governing_basis(PlaceSets(s0, True))
    r_s = basis.dim
    for m in range(1, 5):
        for k in range(max(1, m - r_s), m + 1):
            res = search(spec(m, k, s0))
            total = [0] * r_s
            for p in res.sigma:
                total = [(a + b) % 2 for a, b in zip(total, frobenius_vector(p, basis))]
            assert not any(total)
            assert res.report.g == 2**k
            assert ramification_set(res.d) == list(res.sigma)
            assert res.d > 0
            assert all(kronecker(res.d, q) == 1 for q in s0)
            # deterministic
            assert search(spec(m, k, s0)) == res
