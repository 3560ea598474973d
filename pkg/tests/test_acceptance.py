"""Acceptance gate: nine exact checks, one PASS/FAIL line each."""

from __future__ import annotations

import itertools
import random
import time

import pytest

from stgenus.arith import TWO, hilbert_add, is_prime
from stgenus.errors import InputError
from stgenus.genus import ProblemInstance, build_matrix_caserule, discriminant, genus_number, ramification_set
from stgenus.governing import IndependenceFailure, PlaceSets, gamma_dim_quotient, governing_basis, wt_subgroup
from stgenus.linalg import kernel_dim_fp
from stgenus.oracle import bqf_class_data, build_matrix_hilbert, genus_via_formula, hilbert_bruteforce
from stgenus.search import SearchSpec, search
from stgenus.selftest import GRID, grid_places, negative_fundamental_ds, random_instances, random_matrix

SEED = 20240601
N_INSTANCES = 500


@pytest.fixture(scope="module")
def instances():
    return random_instances(N_INSTANCES, SEED)


@pytest.fixture(scope="module")
def reports(instances):
    return [genus_number(i) for i in instances]


@pytest.fixture
def report(capsys):
    def emit(n, title, ok, detail, started):
        status = "PASS" if ok else "FAIL"
        with capsys.disabled():
            print(f"\n[criterion {n}] {status}: {title} ({detail}, {time.perf_counter() - started:.1f}s)")
        assert ok, detail

    return emit


def test_criterion_1_genus_equals_norm_index_formula(instances, reports, report):
    started = time.perf_counter()
    bad = [(i.d, i.places) for i, r in zip(instances, reports) if r.g != genus_via_formula(i)]
    report(1, "matrix genus number equals the norm-index formula", not bad, f"{N_INSTANCES} instances, mismatches {bad[:3]}", started)


def test_criterion_2_case_rules_equal_hilbert_matrix(instances, reports, report):
    started = time.perf_counter()
    bad = []
    for inst, r in zip(instances, reports):
        h = build_matrix_hilbert(inst)
        if (r.matrix.rows, r.matrix.row_labels, r.matrix.col_labels) != (h.rows, h.row_labels, h.col_labels):
            bad.append(inst.d)
    report(2, "case-rule matrix equals the Hilbert-symbol matrix entrywise", not bad, f"{N_INSTANCES} instances, mismatches {bad[:3]}", started)


def test_criterion_3_gauss_ambiguous_classes(report):
    started = time.perf_counter()
    bad, n = [], 0
    for d in negative_fundamental_ds(10**4):
        n += 1
        g = genus_number(ProblemInstance(d, PlaceSets())).g
        _, ambiguous = bqf_class_data(discriminant(d))
        if g != 2 ** len(ramification_set(d)) or ambiguous != g // 2 or g % 2:
            bad.append(d)
    report(3, "imaginary fields: g = 2^#Sigma = 2 * ambiguous forms", not bad and n > 3000, f"{n} discriminants, failures {bad[:3]}", started)


def test_criterion_4_congruence_fixture(report):
    started = time.perf_counter()
    places = PlaceSets((), True, (5,))
    basis = governing_basis(places)
    ok = wt_subgroup(basis, (5,)).dim == 0
    ok &= isinstance(gamma_dim_quotient(basis, (5,)), IndependenceFailure)
    n = 0
    for d in range(-300, 300):
        try:
            inst = ProblemInstance(d, places)
        except InputError:
            continue
        r = genus_number(inst)
        ok &= r.matrix.nrows == 0 and r.g == 2**r.matrix.ncols
        n += 1
    report(4, "S = {inf}, T = {5}: trivial subgroup, quotient path refuses, zero rows", bool(ok), f"{n} values of d", started)


def test_criterion_5_rank_bounds(reports, report):
    started = time.perf_counter()
    bad = [
        r.instance.d
        for r in reports
        if not (r.matrix.ncols - r.wt_dim <= r.log2_g <= r.matrix.ncols)
    ]
    report(5, "#cols - dim W_T <= log2 g <= #cols", not bad, f"{len(reports)} instances, failures {bad[:3]}", started)


def test_criterion_6_hilbert_symbol_integrity(report):
    started = time.perf_counter()
    bad = []
    places = grid_places(50)
    for a, b in itertools.product(GRID, GRID):
        for v in places:
            if hilbert_add(a, b, v) != hilbert_bruteforce(a, b, v):
                bad.append((a, b, v.label))
        odd = sorted({p for p in range(3, 16) if is_prime(p) and (a * b) % p == 0})
        if sum(hilbert_add(a, b, v) for v in [places[0], TWO] + [p for p in places if p.prime in odd]) % 2:
            bad.append((a, b, "product"))
    n = len(GRID) ** 2 * len(places)
    report(6, "closed-form Hilbert symbol equals brute force; product formula holds", not bad, f"{n} symbols, failures {bad[:3]}", started)


def test_criterion_7_real_place_subgroup(report):
    started = time.perf_counter()
    rng = random.Random(SEED + 7)
    primes = [q for q in range(2, 100) if is_prime(q)]
    bad = []
    for _ in range(100):
        s0 = tuple(rng.sample(primes, rng.randint(0, 3)))
        t = tuple(rng.sample([q for q in primes if q != 2 and q not in s0], rng.randint(0, 2)))
        with_inf = wt_subgroup(governing_basis(PlaceSets(s0, True, t)), t)
        without = wt_subgroup(governing_basis(PlaceSets(s0, False, t)), t)
        n = len(with_inf.gens)

        def span(vs, dim):
            return {
                tuple(sum(c * v[j] for c, v in zip(cs, vs)) % 2 for j in range(dim))
                for cs in itertools.product((0, 1), repeat=len(vs))
            }

        positive = {v[1:] for v in span(with_inf.basis, n) if v[0] == 0}
        if span(without.basis, n - 1) != positive or with_inf.dim - without.dim not in (0, 1):
            bad.append((s0, t))
        if any(w <= 0 for w in without.witnesses):
            bad.append((s0, t, "sign"))
    report(7, "positive congruence classes form the subgroup without the real place", not bad, f"100 place sets, failures {bad[:3]}", started)


def test_criterion_8_constructor_sweep(report):
    started = time.perf_counter()
    bad, n = [], 0
    for size in (0, 1, 2):
        for s0 in itertools.combinations((3, 5, 7), size):
            r_s = size + 1
            for m in range(1, 6):
                for k in range(max(1, m - r_s), m + 1):
                    n += 1
                    try:
                        res = search(SearchSpec(PlaceSets(s0, True), m, k, 10**5))
                        if res.report.g != 2**k or len(res.sigma) != m:
                            bad.append((s0, m, k))
                    except Exception as e:  # record, never hide
                        bad.append((s0, m, k, repr(e)))
    a = search(SearchSpec(PlaceSets((), True), 2, 1))
    b = search(SearchSpec(PlaceSets((), True), 2, 2))
    canonical = (a.sigma, a.d, b.sigma, b.d) == ((3, 7), 21, (5, 13), 65)
    report(8, "search realises every valid (S0, m, k); canonical d = 21 and 65", not bad and canonical, f"{n} specs, failures {bad[:3]}", started)


def test_criterion_9_kernel_enumeration(report):
    started = time.perf_counter()
    rng = random.Random(SEED + 9)
    bad = []
    for _ in range(1000):
        m = random_matrix(rng, rng.choice((2, 3)))
        count = sum(1 for x in itertools.product(range(m.p), repeat=m.ncols) if not any(m.apply(x)))
        if count != m.p ** kernel_dim_fp(m):
            bad.append(m.rows)
    report(9, "kernel sizes by enumeration equal p^kernel_dim", not bad, f"1000 matrices, failures {bad[:2]}", started)
