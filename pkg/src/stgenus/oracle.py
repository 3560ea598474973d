"""Independent verification paths.

Nothing here uses reciprocity or the closed-form Hilbert symbol formulas.
Local solvability of z^2 = a x^2 + b y^2 is decided by exhaustive search over
residues plus Hensel's lemma; the genus number is recomputed from the
norm-index formula over every relevant place; class numbers of imaginary
quadratic fields come from counting reduced forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import INF, TWO, Place, factorize, rational_class, valuation
from .errors import InputError, NotFundamental, ValueOutOfRange, VerificationFailed
from .genus import ProblemInstance, matrix_columns
from .governing import PlaceSets, ray_class_order, wt_subgroup
from .linalg import MatrixFp, rank_fp

__all__ = [
    "hilbert_bruteforce",
    "build_matrix_hilbert",
    "genus_via_formula",
    "ray_class_order",
    "bqf_class_data",
    "BQForm",
    "is_local_square",
]

ODD_PRIME_CAP = 2 * 10**7
_TWO_ADIC_BITS = 6


@lru_cache(maxsize=512)
def _square_mask(q: int) -> np.ndarray:
    """mask[r] is True iff r = x^2 mod q for some x (0 included)."""
    x = np.arange(q, dtype=np.int64)
    mask = np.zeros(q, dtype=bool)
    mask[(x * x) % q] = True
    mask.setflags(write=False)
    return mask


def _is_square_mod(r: int, q: int) -> bool:
    return bool(_square_mask(q)[r % q])


@lru_cache(maxsize=4096)
def _isotropic_2adic(a: int, b: int) -> bool:
    """z^2 = a x^2 + b y^2 over Q_2, for a, b of 2-adic valuation 0 or 1 given mod 2^6."""
    mod = 1 << _TWO_ADIC_BITS
    r = np.arange(mod, dtype=np.int64)
    x, y, z = np.meshgrid(r, r, r, indexing="ij")
    x, y, z = x.ravel(), y.ravel(), z.ravel()
    prim = ((x | y | z) & 1) == 1
    f = (z * z - a * x * x - b * y * y) % mod
    tz = np.full(mod, 99, dtype=np.int64)
    for k in range(1, mod):
        tz[k] = (k & -k).bit_length() - 1
    ok = np.zeros_like(prim)
    for partial in (2 * z, 2 * a * x, 2 * b * y):
        e = tz[partial % mod]
        # Hensel: f = 0 mod 2^(2e+1) with e = v(df/dX_i) lifts to a root
        need = np.minimum(2 * e + 1, 7)
        ok |= (e <= 2) & ((f % (1 << need)) == 0)
    return bool(np.any(prim & ok))


def _isotropic_odd(c1: int, c2: int, c3: int, gamma: int, q: int) -> bool:
    """c1 X^2 + c2 Y^2 + q^gamma c3 Z^2 over Q_q, c_i units, gamma in {0, 1}.

    A primitive zero always has a unit coordinate with a unit coefficient
    (when gamma = 1, q | X and q | Y would force q | Z), so a nonzero root
    mod q of that shape decides the question by Hensel with a unit derivative.
    """
    c1, c2, c3 = c1 % q, c2 % q, c3 % q
    mask = _square_mask(q)
    # points with Z = 0: c1 X^2 = -c2 Y^2, Y = 1  <=>  (c1 X)^2 = -c1 c2
    if mask[(-c1 * c2) % q]:
        return True
    if gamma == 1:
        return False
    # points (X : Y : 1): (c2 Y)^2 = c2 (-c3 - c1 X^2)
    x = np.arange(q, dtype=np.int64)
    vals = c2 * ((-c3 - c1 * ((x * x) % q)) % q) % q
    return bool(np.any(mask[vals]))


def hilbert_bruteforce(a, b, v: Place) -> int:
    """Additive Hilbert symbol by exhaustive local search: 0 iff isotropic."""
    a, b = rational_class(a), rational_class(b)
    if v.is_infinite:
        return 0 if (a > 0 or b > 0) else 1
    q = v.prime
    alpha, u = valuation(a, q)
    beta, w = valuation(b, q)
    alpha, beta = alpha % 2, beta % 2
    if q == 2:
        mod = 1 << _TWO_ADIC_BITS
        return 0 if _isotropic_2adic((2**alpha * u) % mod, (2**beta * w) % mod) else 1
    if q > ODD_PRIME_CAP:
        raise ValueOutOfRange(f"ValueOutOfRange: brute-force Hilbert symbol needs q <= {ODD_PRIME_CAP}")
    # form 1*Z^2 - a X^2 - b Y^2 as (unit coefficient, valuation) pairs
    terms = [(1, 0), (-u, alpha), (-w, beta)]
    units = [c for c, e in terms if e == 0]
    highs = [c for c, e in terms if e == 1]
    if len(highs) == 2:
        # multiply by q and absorb q^2 into the two variables
        units, highs = highs, units
    if not highs:
        return 0 if _isotropic_odd(units[0], units[1], units[2], 0, q) else 1
    return 0 if _isotropic_odd(units[0], units[1], highs[0], 1, q) else 1


def is_local_square(d: int, v: Place) -> bool:
    """Whether d is a square in Q_v (a split place of Q(sqrt d))."""
    if v.is_infinite:
        return d > 0
    e, u = valuation(d, v.prime)
    if e % 2:
        return False
    if v.prime == 2:
        return u % 8 in {x * x % 8 for x in range(1, 8, 2)}
    return _is_square_mod(u, v.prime)


def _rows(inst: ProblemInstance):
    wt = wt_subgroup(inst.basis, inst.places.t)
    return wt, [wt.core(i) for i in range(wt.dim)]


def build_matrix_hilbert(inst: ProblemInstance) -> MatrixFp:
    """Genus matrix with every entry a brute-force Hilbert symbol (w, d)_v.

    Square classes are all a Hilbert symbol sees, so each row uses the
    squarefree core of its witness.
    """
    wt, cores = _rows(inst)
    cols = matrix_columns(inst)
    rows = [[hilbert_bruteforce(w, inst.d, c.place) for c in cols] for w in cores]
    return MatrixFp(
        2,
        tuple(map(tuple, rows)),
        len(cols),
        tuple(wt.label(i) for i in range(wt.dim)),
        tuple(c.label for c in cols),
    )


def _ramified(d: int) -> set[int]:
    odd = {p for p in factorize(d) if p != 2}
    return odd | ({2} if d % 4 != 1 else set())


def genus_via_formula(inst: ProblemInstance) -> int:
    """g = 2^(#S^ns + #Sigma' - log2 of the norm index of E^S_T)."""
    d = inst.d
    places: PlaceSets = inst.places
    sigma = _ramified(d)
    s_places = [Place(q) for q in places.s0] + ([INF] if places.s_inf else [])
    s_ns = {v for v in s_places if not is_local_square(d, v)}
    sigma_prime = sigma - set(places.s0) - set(places.t)

    candidates = sorted({Place(q) for q in sigma | set(places.s0)} | {TWO}, key=lambda v: v.prime)
    candidates.append(INF)
    _, cores = _rows(inst)
    rows = [[hilbert_bruteforce(w, d, v) for v in candidates] for w in cores]

    live = {Place(q) for q in sigma_prime} | s_ns
    for j, v in enumerate(candidates):
        if v not in live and any(r[j] for r in rows):
            raise VerificationFailed(f"nonzero norm-residue column at {v.label}, which should be trivial for d = {d}")
    m = MatrixFp(2, tuple(map(tuple, rows)), len(candidates))
    index_log2 = rank_fp(m)
    log2_g = len(s_ns) + len(sigma_prime) - index_log2
    if log2_g < 0:
        raise VerificationFailed(f"negative genus exponent for d = {d}")
    return 1 << log2_g


# -- binary quadratic forms ----------------------------------------------------


@dataclass(frozen=True)
class BQForm:
    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        return b >= 0 if (abs(b) == a or a == c) else True

    def is_ambiguous(self) -> bool:
        return self.b == 0 or self.a == self.b or self.a == self.c


def is_fundamental(D: int) -> bool:
    if D % 4 == 1:
        return D != 1 and _squarefree(D)
    if D % 4 == 0:
        return (D // 4) % 4 in (2, 3) and _squarefree(D // 4)
    return False


def _squarefree(n: int) -> bool:
    return all(e == 1 for e in factorize(n).values())


def reduced_forms(D: int) -> list[BQForm]:
    """Primitive reduced positive definite forms of discriminant D < 0."""
    if D >= 0 or D % 4 not in (0, 1):
        raise InputError(f"not a negative discriminant: {D}")
    out = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            f = BQForm(a, b, c)
            if f.is_reduced() and math.gcd(math.gcd(a, b), c) == 1:
                out.append(f)
        a += 1
    return out


def bqf_class_data(D: int) -> tuple[int, int]:
    """(class number, number of ambiguous reduced forms) for a negative fundamental D."""
    if D >= 0 or not is_fundamental(D):
        raise NotFundamental(f"NotFundamental: {D} is not a negative fundamental discriminant")
    forms = reduced_forms(D)
    return len(forms), sum(f.is_ambiguous() for f in forms)
