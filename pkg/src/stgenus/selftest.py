"""Invariant suites run by ``stgenus selftest``.

Each suite returns a ``SuiteResult``; a suite never raises on a failed
check, it records the first counterexample instead.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable

from .arith import INF, TWO, Place, factor_squarefree, hilbert_add, is_prime, is_squarefree, legendre_add
from .errors import InputError
from .genus import ProblemInstance, build_matrix_caserule, discriminant, genus_number, ramification_set
from .governing import PlaceSets, gamma_dim_quotient, governing_basis, wt_subgroup, IndependenceFailure
from .linalg import MatrixFp, kernel_dim_fp
from .oracle import bqf_class_data, build_matrix_hilbert, genus_via_formula, hilbert_bruteforce

GRID = (1, -1, 2, -2, 3, -3, 5, -5, 6, -6, 7, -7, 10, -10, 15, -15)
SMALL_PRIMES = [q for q in range(3, 100) if is_prime(q)]


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checked: int
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tail = f" ({self.detail})" if self.detail else ""
        return f"[{status}] {self.name}: {self.checked} checks{tail}"


def grid_places(limit: int = 50) -> list[Place]:
    return [INF, TWO] + [Place(q) for q in range(3, limit + 1) if is_prime(q)]


def suite_legendre(qmax: int = 1000) -> SuiteResult:
    n = 0
    for q in range(3, qmax):
        if not is_prime(q):
            continue
        squares = {x * x % q for x in range(1, q)}
        for a in range(1, q):
            n += 1
            if legendre_add(a, q) != (0 if a in squares else 1):
                return SuiteResult("legendre vs enumeration", False, n, f"a={a}, q={q}")
    return SuiteResult("legendre vs enumeration", True, n)


def suite_hilbert_grid(hilbert: Callable = hilbert_add) -> SuiteResult:
    n = 0
    for a, b in itertools.product(GRID, GRID):
        for v in grid_places():
            n += 1
            if hilbert(a, b, v) != hilbert_bruteforce(a, b, v):
                return SuiteResult("hilbert formula vs brute force", False, n, f"({a},{b})_{v}")
    return SuiteResult("hilbert formula vs brute force", True, n)


def suite_product_formula(hilbert: Callable = hilbert_add) -> SuiteResult:
    n = 0
    for a, b in itertools.product(GRID, GRID):
        odd = set()
        for x in (a, b):
            if abs(x) > 1:
                odd |= {p for p in factor_squarefree(x)[1] if p != 2}
        places = [INF, TWO] + [Place(p) for p in sorted(odd)]
        n += 1
        if sum(hilbert(a, b, v) for v in places) % 2:
            return SuiteResult("product formula", False, n, f"a={a}, b={b}")
    return SuiteResult("product formula", True, n)


def _enumerated_kernel_size(m: MatrixFp) -> int:
    return sum(1 for x in itertools.product(range(m.p), repeat=m.ncols) if not any(m.apply(x)))


def random_matrix(rng: random.Random, p: int, max_dim: int = 4) -> MatrixFp:
    nr, nc = rng.randint(0, max_dim), rng.randint(1, max_dim)
    rows = [[rng.randrange(p) for _ in range(nc)] for _ in range(nr)]
    return MatrixFp.from_rows(p, rows, nc)


def suite_kernel_enumeration(count: int = 1000, seed: int = 9) -> SuiteResult:
    rng = random.Random(seed)
    for i in range(count):
        p = rng.choice((2, 3))
        m = random_matrix(rng, p)
        if _enumerated_kernel_size(m) != p ** kernel_dim_fp(m):
            return SuiteResult("kernel size vs enumeration", False, i + 1, repr(m.rows))
    return SuiteResult("kernel size vs enumeration", True, count)


def suite_congruence_fixture() -> SuiteResult:
    """S = {inf}, T = {5}: the exact congruence subgroup is trivial while the
    Frobenius of 5 is zero, so the quotient formula is unavailable."""
    places = PlaceSets((), True, (5,))
    basis = governing_basis(places)
    ok = wt_subgroup(basis, places.t).dim == 0
    ok &= isinstance(gamma_dim_quotient(basis, places.t), IndependenceFailure)
    for d in (3, -3, 21, -21, 13, -7):
        ok &= genus_number(ProblemInstance(d, places)).matrix.nrows == 0
    return SuiteResult("congruence subgroup fixture (T = {5})", bool(ok), 8)


def negative_fundamental_ds(max_disc: int):
    for d in range(-1, -max_disc - 1, -1):
        if is_squarefree(d) and abs(discriminant(d)) <= max_disc:
            yield d


def suite_gauss(max_disc: int = 10**4) -> SuiteResult:
    n = 0
    for d in negative_fundamental_ds(max_disc):
        n += 1
        report = genus_number(ProblemInstance(d, PlaceSets()))
        _, ambiguous = bqf_class_data(discriminant(d))
        if report.g != 2 ** len(ramification_set(d)) or 2 * ambiguous != report.g:
            return SuiteResult("Gauss ambiguous classes", False, n, f"d={d}")
    return SuiteResult("Gauss ambiguous classes", True, n)


def random_instance(rng: random.Random, dmax: int = 10**5) -> ProblemInstance:
    """A valid instance: squarefree d, S0 of <= 3 primes < 100, T of <= 2 odd primes < 100."""
    while True:
        d = rng.randint(-dmax, dmax)
        if d in (0, 1) or not is_squarefree(d):
            continue
        sigma = set(ramification_set(d))
        free = [q for q in [2] + SMALL_PRIMES if q not in sigma]
        s0 = rng.sample(free, rng.randint(0, 3))
        t_pool = [q for q in free if q != 2 and q not in s0]
        t = rng.sample(t_pool, rng.randint(0, 2))
        try:
            return ProblemInstance(d, PlaceSets(tuple(s0), rng.random() < 0.5, tuple(t)))
        except InputError:
            continue


def random_instances(count: int, seed: int = 20240601) -> list[ProblemInstance]:
    rng = random.Random(seed)
    return [random_instance(rng) for _ in range(count)]


def suite_main_equivalence(count: int = 100, seed: int = 20240601) -> SuiteResult:
    for i, inst in enumerate(random_instances(count, seed)):
        report = genus_number(inst)
        if build_matrix_caserule(inst).rows != build_matrix_hilbert(inst).rows:
            return SuiteResult("case rules vs local norms", False, i + 1, f"{inst}")
        if report.g != genus_via_formula(inst):
            return SuiteResult("case rules vs local norms", False, i + 1, f"genus mismatch {inst}")
    return SuiteResult("case rules vs local norms", True, count)


def run_all(inject_fault: str | None = None) -> list[SuiteResult]:
    hilbert = hilbert_add
    if inject_fault == "hilbert":
        def hilbert(a, b, v):
            flip = int(v == TWO and a == -1 and b == -1)
            return hilbert_add(a, b, v) ^ flip

    return [
        suite_legendre(),
        suite_hilbert_grid(hilbert),
        suite_product_formula(hilbert),
        suite_kernel_enumeration(),
        suite_congruence_fixture(),
        suite_gauss(),
        suite_main_equivalence(),
    ]
