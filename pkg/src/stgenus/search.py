"""Constructing quadratic fields with a prescribed S-genus number.

Given S = S0 plus the real place, m and k with m - r_S <= k <= m, pick m
primes whose Frobenius vectors in the governing group are

    e_1 + ... + e_r,  e_1, ..., e_r,  0, ..., 0        (r = m - k)

The vectors sum to zero, so d = product of the primes is 1 mod 4, positive
and a square at every prime of S0 (quadratic reciprocity); the genus matrix
is then the matrix of these vectors, of rank r.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .arith import kronecker
from .errors import BudgetExhausted, InvalidRange, VerificationFailed
from .genus import GenusReport, ProblemInstance, genus_number, ramification_set
from .governing import GoverningBasis, PlaceSets, frobenius_vector, governing_basis

DEFAULT_BUDGET = 10**5


@dataclass(frozen=True)
class SearchSpec:
    places: PlaceSets
    m: int
    k: int
    prime_budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.places.t:
            raise InvalidRange("InvalidRange: the search needs T to be empty")
        if not self.places.s_inf:
            raise InvalidRange("InvalidRange: the search needs the real place in S (--sinf)")
        if self.m < 1:
            raise InvalidRange(f"InvalidRange: m must be >= 1, got {self.m}")
        lo = max(1, self.m - self.r_s)
        if not lo <= self.k <= self.m:
            raise InvalidRange(f"InvalidRange: k = {self.k} outside [{lo}, {self.m}] for m = {self.m}, r_S = {self.r_s}")

    @property
    def r_s(self) -> int:
        return len(self.places.s0) + 1


@dataclass(frozen=True)
class SearchResult:
    sigma: tuple[int, ...]
    d: int
    report: GenusReport
    max_prime: int

    def to_dict(self):
        return {
            "sigma": list(self.sigma),
            "d": self.d,
            "max_prime": self.max_prime,
            "report": self.report.to_dict(),
        }


def plan_targets(spec: SearchSpec) -> list[tuple[int, ...]]:
    """Frobenius targets over F_2 for the m primes, summing to zero."""
    n = spec.r_s
    r = spec.m - spec.k

    def unit(i):
        return tuple(int(j == i) for j in range(n))

    zero = (0,) * n
    if r == 0:
        return [zero] * spec.m
    first = tuple(int(j < r) for j in range(n))
    return [first] + [unit(i) for i in range(r)] + [zero] * (spec.m - r - 1)


def _primes_up_to(n: int):
    sieve = bytearray([1]) * (n + 1)
    sieve[:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytes(len(range(p * p, n + 1, p)))
    return (p for p in range(3, n + 1, 2) if sieve[p])


def find_primes(targets, basis: GoverningBasis, budget: int = DEFAULT_BUDGET, exclude=()) -> list[int]:
    """Smallest distinct odd primes with the given Frobenius vectors, in target order."""
    targets = [tuple(t) for t in targets]
    chosen: list[int | None] = [None] * len(targets)
    bad = set(exclude) | {abs(g) for g in basis.gens}
    open_slots = len(targets)
    for q in _primes_up_to(budget):
        if q in bad:
            continue
        vec = frobenius_vector(q, basis)
        for i, t in enumerate(targets):
            if chosen[i] is None and t == vec:
                chosen[i] = q
                open_slots -= 1
                break
        if not open_slots:
            return chosen  # type: ignore[return-value]
    missing = next(t for t, c in zip(targets, chosen) if c is None)
    raise BudgetExhausted(missing, budget)


def assemble_and_verify(spec: SearchSpec, primes) -> SearchResult:
    """Build d = product of the primes and check every claimed property."""
    basis = governing_basis(spec.places)
    primes = tuple(sorted(primes))
    d = math.prod(primes)
    total = [sum(col) % 2 for col in zip(*(frobenius_vector(q, basis) for q in primes))]
    if any(total):
        raise VerificationFailed(f"Frobenius vectors of {primes} do not sum to zero")
    if d % 4 != 1:
        raise VerificationFailed(f"d = {d} is not 1 mod 4")
    if 2 in spec.places.s0 and d % 8 != 1:
        raise VerificationFailed(f"d = {d} is not 1 mod 8 although 2 is in S0")
    for q in spec.places.s0:
        if kronecker(d, q) != 1:
            raise VerificationFailed(f"{q} does not split in Q(sqrt {d})")
    if ramification_set(d) != list(primes):
        raise VerificationFailed(f"ramification set of {d} is not {primes}")
    report = genus_number(ProblemInstance(d, spec.places))
    if report.g != 1 << spec.k:
        raise VerificationFailed(f"g = {report.g}, expected 2^{spec.k}", report)
    if report.matrix.ncols != spec.m:
        raise VerificationFailed("S-places unexpectedly contribute columns", report)
    return SearchResult(primes, d, report, max(primes))


def search(spec: SearchSpec) -> SearchResult:
    basis = governing_basis(spec.places)
    targets = plan_targets(spec)
    primes = find_primes(targets, basis, spec.prime_budget, exclude=spec.places.s0)
    return assemble_and_verify(spec, primes)


__all__ = [
    "SearchSpec",
    "SearchResult",
    "plan_targets",
    "find_primes",
    "assemble_and_verify",
    "search",
]
