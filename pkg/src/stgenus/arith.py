"""Exact integer and local-symbol primitives over Q.

Symbols are additive: a value in F_2 where 0 stands for +1 (trivial) and 1
for -1.  Integers are limited to a signed 64-bit budget; anything larger is
rejected rather than silently accepted.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    InvalidDiscriminant,
    InvalidPlace,
    NotCoprime,
    NotSquarefree,
    ValueOutOfRange,
    ZeroArgument,
)

INT_BUDGET = 1 << 63

# Deterministic for n < 3.3e24, which covers the whole 64-bit range.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _check_budget(n: int, what: str = "value") -> None:
    if abs(n) >= INT_BUDGET:
        raise ValueOutOfRange(f"ValueOutOfRange: |{what}| = {abs(n)} exceeds the 64-bit budget")


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test for 0 <= n < 2**64."""
    if n < 0:
        raise ValueOutOfRange(f"ValueOutOfRange: is_prime expects n >= 0, got {n}")
    if n >= 1 << 64:
        raise ValueOutOfRange(f"ValueOutOfRange: {n} exceeds 64 bits")
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    """Return a nontrivial factor of the odd composite n."""
    c = 1
    while True:
        y, r, q, g = 2, 1, 1, 1
        f = lambda t: (t * t + c) % n  # noqa: E731
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = f(y)
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = f(y)
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += 128
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = f(ys)
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        c += 1


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of |n| as {prime: exponent}; n must be nonzero."""
    if n == 0:
        raise ZeroArgument("ZeroArgument: cannot factor 0")
    _check_budget(n)
    n = abs(n)
    out: dict[int, int] = {}
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        f = _pollard_brent(m)
        stack += [f, m // f]
    return dict(sorted(out.items()))


def factor_squarefree(d: int) -> tuple[int, list[int]]:
    """Split a squarefree d into (sign, ascending primes)."""
    if d == 0:
        raise ZeroArgument("ZeroArgument: d must be nonzero")
    _check_budget(d, "d")
    fac = factorize(d)
    for p, e in fac.items():
        if e > 1:
            raise NotSquarefree(f"NotSquarefree: {p}^2 divides {d}")
    return (1 if d > 0 else -1), list(fac)


def is_squarefree(d: int) -> bool:
    try:
        factor_squarefree(d)
    except NotSquarefree:
        return False
    return True


def valuation(n: int, p: int) -> tuple[int, int]:
    """Return (v, u) with n = p**v * u and p not dividing u."""
    if n == 0:
        raise ZeroArgument("ZeroArgument: valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd positive n, by binary reciprocity."""
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"jacobi needs odd positive modulus, got {n}")
    a %= n
    acc = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                acc = -acc
        if a % 4 == 3 and n % 4 == 3:
            acc = -acc
        a, n = n % a, a
    return acc if n == 1 else 0


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) in {-1, 0, 1}."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    acc = 1
    if n < 0:
        n = -n
        if a < 0:
            acc = -acc
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            acc = -acc
    if n == 1:
        return acc
    return acc * jacobi(a, n)


def _require_odd_prime(q: int) -> None:
    if q == 2 or q < 2 or not is_prime(q):
        raise InvalidPlace(f"InvalidPlace: {q} is not an odd prime")


def legendre_add(a: int, q: int) -> int:
    """Additive Legendre symbol: 0 iff a is a nonzero square mod the odd prime q."""
    _require_odd_prime(q)
    if a % q == 0:
        raise NotCoprime(f"NotCoprime: {q} divides {a}")
    return 0 if jacobi(a, q) == 1 else 1


@dataclass(frozen=True, order=True)
class Place:
    """A place of Q: a prime number, or ``None`` for the real place."""

    prime: int | None = None

    def __post_init__(self):
        if self.prime is not None:
            if not isinstance(self.prime, int) or self.prime < 2 or not is_prime(self.prime):
                raise InvalidPlace(f"InvalidPlace: {self.prime!r} is not prime")

    @property
    def is_infinite(self) -> bool:
        return self.prime is None

    @property
    def is_two(self) -> bool:
        return self.prime == 2

    @property
    def is_odd(self) -> bool:
        return self.prime is not None and self.prime != 2

    @property
    def label(self) -> str:
        return "inf" if self.prime is None else str(self.prime)

    def __str__(self):
        return self.label

    @classmethod
    def parse(cls, text: str) -> "Place":
        text = text.strip().lower()
        if text in ("inf", "infinity", "oo"):
            return INF
        return cls(int(text))


INF = Place(None)
TWO = Place(2)


@dataclass(frozen=True)
class SquareClass2:
    """Element of Q_2^x / squares: (exponent of 2 mod 2, odd part mod 8)."""

    val2: int
    unit: int

    @classmethod
    def of(cls, a) -> "SquareClass2":
        a = rational_class(a)
        v, u = valuation(a, 2)
        return cls(v % 2, u % 8)


def rational_class(a) -> int:
    """Integer in the same square class as a nonzero rational.

    Accepts an int, a Fraction or a (numerator, denominator) pair.
    """
    if isinstance(a, tuple):
        a = Fraction(*a)
    if isinstance(a, Fraction):
        a = a.numerator * a.denominator
    if a == 0:
        raise ZeroArgument("ZeroArgument: Hilbert symbol of 0")
    return int(a)


def _eps(u: int) -> int:
    return ((u - 1) // 2) % 2


def _omega(u: int) -> int:
    return ((u * u - 1) // 8) % 2


def hilbert_add(a, b, v: Place) -> int:
    """Additive Hilbert symbol (a, b)_v: 0 iff z^2 = a x^2 + b y^2 is isotropic over Q_v."""
    a, b = rational_class(a), rational_class(b)
    if v.is_infinite:
        return 1 if (a < 0 and b < 0) else 0
    q = v.prime
    alpha, u = valuation(a, q)
    beta, w = valuation(b, q)
    alpha %= 2
    beta %= 2
    if q == 2:
        u, w = u % 8, w % 8
        return (_eps(u) * _eps(w) + alpha * _omega(w) + beta * _omega(u)) % 2
    s = alpha * beta * _eps(q)
    if beta:
        s += legendre_add(u, q)
    if alpha:
        s += legendre_add(w, q)
    return s % 2


class Splitting(enum.Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"

    def __str__(self):
        return self.value


def check_discriminant(d: int) -> None:
    """Raise unless d is a squarefree integer outside {0, 1} within budget."""
    if d in (0, 1):
        raise InvalidDiscriminant(f"InvalidDiscriminant: d = {d} does not define a quadratic field")
    factor_squarefree(d)


def splitting_type(d: int, v: Place) -> Splitting:
    """Decomposition type of the place v in Q(sqrt d)."""
    check_discriminant(d)
    if v.is_infinite:
        return Splitting.SPLIT if d > 0 else Splitting.INERT
    q = v.prime
    if q == 2:
        if d % 4 != 1:
            return Splitting.RAMIFIED
        return Splitting.SPLIT if d % 8 == 1 else Splitting.INERT
    if d % q == 0:
        return Splitting.RAMIFIED
    return Splitting.SPLIT if kronecker(d, q) == 1 else Splitting.INERT
