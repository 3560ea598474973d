"""Governing-field data for K = Q and p = 2.

The S-units of Q are generated by -1 (when the real place is in S) and the
primes of S0.  Their classes modulo squares form the dual of the Galois
group of the governing field, so an element of that group is recorded as an
F_2 vector over the generators.  ``wt_subgroup`` computes the exact image of
the congruence S-units (those = 1 mod every prime of T).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .arith import is_prime, legendre_add
from .errors import InputError, InvalidPlace, NotCoprime, OverlapError, RamifiedInGoverning, ValueOutOfRange
from .linalg import _rank_f2, congruence_kernel, f2_row_reduce_tracked

T_CAP = 10**6
_LABEL_DIGITS = 18


@dataclass(frozen=True)
class PlaceSets:
    """S = S0 (finite primes) plus optionally the real place; T = odd primes."""

    s0: tuple[int, ...] = ()
    s_inf: bool = False
    t: tuple[int, ...] = ()

    def __post_init__(self):
        s0 = tuple(sorted(set(int(x) for x in self.s0)))
        t = tuple(sorted(set(int(x) for x in self.t)))
        object.__setattr__(self, "s0", s0)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "s_inf", bool(self.s_inf))
        for q in s0 + t:
            if q < 2 or q >= 1 << 63 or not is_prime(q):
                raise InvalidPlace(f"InvalidPlace: {q} is not a prime")
        for q in t:
            if q == 2:
                raise InvalidPlace("InvalidPlace: T may only contain odd primes")
            if q > T_CAP:
                raise ValueOutOfRange(f"ValueOutOfRange: T prime {q} exceeds {T_CAP}")
        common = set(s0) & set(t)
        if common:
            raise OverlapError(f"OverlapError: S0 and T share {sorted(common)}")

    @property
    def modulus(self) -> int:
        return math.prod(self.t)


@dataclass(frozen=True)
class GoverningBasis:
    gens: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.gens)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(str(g) for g in self.gens)

    def primes(self) -> tuple[int, ...]:
        return tuple(g for g in self.gens if g > 0)


def governing_basis(places: PlaceSets) -> GoverningBasis:
    """Generators of E^S modulo squares: -1 first (if the real place is in S), then S0."""
    gens = ((-1,) if places.s_inf else ()) + places.s0
    return GoverningBasis(gens)


def frobenius_vector(q: int, basis: GoverningBasis) -> tuple[int, ...]:
    """Frobenius of the prime q in the governing group, as additive Legendre symbols."""
    if q == 2 or any(g % q == 0 for g in basis.gens):
        raise RamifiedInGoverning(f"RamifiedInGoverning: {q} ramifies in the governing field")
    return tuple(legendre_add(g, q) for g in basis.gens)


# -- discrete logarithms in (Z/t)^x ---------------------------------------------


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def primitive_root(t: int) -> int:
    """Smallest primitive root modulo the odd prime t."""
    if t == 2:
        return 1
    fs = _prime_factors(t - 1)
    g = 2
    while any(pow(g, (t - 1) // f, t) == 1 for f in fs):
        g += 1
    return g


def discrete_log(a: int, g: int, t: int) -> int:
    """Baby-step giant-step: x in [0, t-1) with g**x = a mod t."""
    a %= t
    n = t - 1
    m = math.isqrt(n) + 1
    table = {}
    e = 1
    for j in range(m):
        table.setdefault(e, j)
        e = e * g % t
    step = pow(g, -m, t)
    y = a
    for i in range(m):
        if y in table:
            return (i * m + table[y]) % n
        y = y * step % t
    raise ValueError(f"{a} is not a power of {g} mod {t}")


def dlog_row(gens: Sequence[int], t: int) -> list[int]:
    g = primitive_root(t)
    return [(t - 1) // 2 if x == -1 else discrete_log(x, g, t) for x in gens]


# -- the congruence subgroup ------------------------------------------------------


@dataclass(frozen=True)
class SubgroupWT:
    """Image of E^S_T in E^S / squares.

    ``basis`` holds F_2 vectors over the governing generators (RREF, pivots
    ascending); ``exponents`` holds, per basis vector, nonnegative integer
    exponents whose product of generators is = 1 modulo every prime of T.
    """

    gens: tuple[int, ...]
    modulus: int
    basis: tuple[tuple[int, ...], ...]
    exponents: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def witness(self, i: int) -> int:
        return math.prod(g**e for g, e in zip(self.gens, self.exponents[i]))

    @property
    def witnesses(self) -> tuple[int, ...]:
        return tuple(self.witness(i) for i in range(self.dim))

    def core(self, i: int) -> int:
        """Squarefree representative of the i-th class (witness / core is a square)."""
        return math.prod(g for g, b in zip(self.gens, self.basis[i]) if b)

    def label(self, i: int) -> str:
        exps = self.exponents[i]
        # cheap size estimate before materialising the witness
        digits = sum(e * math.log10(abs(g)) for g, e in zip(self.gens, exps) if abs(g) > 1)
        if digits < _LABEL_DIGITS:
            return str(self.witness(i))
        parts = ["-1"] if any(g == -1 and e % 2 for g, e in zip(self.gens, exps)) else []
        parts += [f"{g}^{e}" if e > 1 else str(g) for g, e in zip(self.gens, exps) if g > 0 and e]
        return "*".join(parts) or "1"

    def contains(self, vector: Sequence[int]) -> bool:
        words = [_pack(v) for v in self.basis]
        return _rank_f2(words + [_pack(vector)]) == len(words)

    def witness_is_congruent(self, i: int, t: int) -> bool:
        r = 1
        for g, e in zip(self.gens, self.exponents[i]):
            r = r * pow(g, e, t) % t
        return r == 1 % t


def _pack(v: Iterable[int]) -> int:
    return sum(1 << j for j, x in enumerate(v) if x % 2)


def _element_order(dlog: int, t: int) -> int:
    return (t - 1) // math.gcd(dlog, t - 1)


def wt_subgroup(basis: GoverningBasis, t_primes: Sequence[int]) -> SubgroupWT:
    """Exact subspace of congruence S-unit classes, with integer witnesses."""
    gens = basis.gens
    n = len(gens)
    t_primes = tuple(sorted(set(t_primes)))
    for t in t_primes:
        if t == 2 or not is_prime(t):
            raise InvalidPlace(f"InvalidPlace: T entry {t} is not an odd prime")
        if t > T_CAP:
            raise ValueOutOfRange(f"ValueOutOfRange: T prime {t} exceeds {T_CAP}")
        if any(g % t == 0 for g in gens):
            raise OverlapError(f"OverlapError: {t} lies in both S0 and T")
    modulus = math.prod(t_primes)
    if n == 0:
        return SubgroupWT(gens, modulus, (), ())
    if not t_primes:
        ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        return SubgroupWT(gens, modulus, ident, ident)

    dlogs = [dlog_row(gens, t) for t in t_primes]
    orders = [t - 1 for t in t_primes]
    lattice = congruence_kernel(dlogs, orders, n)
    bits, ints = f2_row_reduce_tracked(lattice, lattice)

    # shrink exponents without leaving the lattice or changing parity
    periods = []
    for j, g in enumerate(gens):
        if g == -1:
            periods.append(2)
        else:
            periods.append(2 * math.lcm(*(_element_order(row[j], t) for row, t in zip(dlogs, t_primes))))
    exps = tuple(tuple(e % per for e, per in zip(v, periods)) for v in ints)
    sub = SubgroupWT(gens, modulus, tuple(map(tuple, bits)), exps)
    for i in range(sub.dim):
        assert all(sub.witness_is_congruent(i, t) for t in t_primes)
        assert tuple(e % 2 for e in exps[i]) == sub.basis[i]
    return sub


@dataclass(frozen=True)
class IndependenceFailure:
    """The Frobenius vectors of T are linearly dependent; the quotient formula does not apply."""

    frobenius: tuple[tuple[int, ...], ...]
    rank: int


def gamma_dim_quotient(basis: GoverningBasis, t_primes: Sequence[int]) -> int | IndependenceFailure:
    """dim(basis) - #T when the Frobenius vectors of T are independent."""
    frobs = tuple(frobenius_vector(t, basis) for t in sorted(set(t_primes)))
    rank = _rank_f2([_pack(v) for v in frobs])
    if rank < len(frobs):
        return IndependenceFailure(frobs, rank)
    return basis.dim - len(frobs)


def pairing_annihilator_dim(basis: GoverningBasis, t_primes: Sequence[int]) -> int:
    """Dimension of the classes whose Legendre symbol vanishes at every prime of T."""
    frobs = [frobenius_vector(t, basis) for t in t_primes]
    return basis.dim - _rank_f2([_pack(v) for v in frobs])


def ray_class_order(m: int, places: PlaceSets) -> int:
    """Order of the S-ray class group of Q modulo the squarefree odd m.

    This is (Z/m)^x modulo the subgroup generated by -1 (if the real place
    is in S) and the primes of S0, enumerated by closure.
    """
    if m < 1:
        raise InputError(f"modulus must be >= 1, got {m}")
    if m == 1:
        return 1
    for q in places.s0:
        if math.gcd(q, m) != 1:
            raise NotCoprime(f"NotCoprime: S0 prime {q} divides the modulus {m}")
    gens = [x % m for x in places.s0] + ([m - 1] if places.s_inf else [])
    seen = {1}
    frontier = [1]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g % m
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    phi = sum(1 for x in range(1, m) if math.gcd(x, m) == 1)
    return phi // len(seen)
