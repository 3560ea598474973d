"""Genus matrices of quadratic fields Q(sqrt d) and the S-T genus number.

Rows of the matrix are a basis of the congruence S-unit classes W_T, columns
are the ramified primes followed by the places of S that do not split.  The
genus number is 2 ** (number of columns - rank).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any

from .arith import INF, TWO, Place, SquareClass2, Splitting, check_discriminant, factor_squarefree, legendre_add, splitting_type
from .errors import OverlapError
from .governing import (
    GoverningBasis,
    PlaceSets,
    SubgroupWT,
    governing_basis,
    ray_class_order,
    wt_subgroup,
)
from .linalg import MatrixFp, kernel_basis_fp, rank_fp

_W2_PRECISION = 6


@dataclass(frozen=True)
class ProblemInstance:
    d: int
    places: PlaceSets = field(default_factory=PlaceSets)

    def __post_init__(self):
        check_discriminant(self.d)
        sigma = set(ramification_set(self.d))
        clash = sigma & (set(self.places.s0) | set(self.places.t))
        if clash:
            raise OverlapError(
                f"OverlapError: ramified primes {sorted(clash)} meet S0 or T; the ramification set must be disjoint from S0 and T"
            )

    @property
    def sigma(self) -> list[int]:
        return ramification_set(self.d)

    @property
    def basis(self) -> GoverningBasis:
        return governing_basis(self.places)


def ramification_set(d: int) -> list[int]:
    """Finite primes ramified in Q(sqrt d), ascending."""
    check_discriminant(d)
    _, primes = factor_squarefree(d)
    odd = [p for p in primes if p != 2]
    return sorted(odd + ([2] if d % 4 != 1 else []))


def discriminant(d: int) -> int:
    check_discriminant(d)
    return d if d % 4 == 1 else 4 * d


@lru_cache(maxsize=64)
def _norms_of_units_mod8(d: int) -> frozenset[int]:
    mod = 1 << _W2_PRECISION
    out = set()
    for x in range(mod):
        for y in range(mod):
            if d % 4 == 1:
                # integral basis 1, (1 + sqrt d)/2
                n = x * x + x * y + y * y * ((1 - d) // 4)
            else:
                n = x * x - d * y * y
            if n % 2:
                out.add(n % 8)
    return frozenset(out)


def w2_norm_classes(d: int) -> frozenset[SquareClass2]:
    """2-adic unit square classes that are norms of units from Q_2(sqrt d).

    Found by enumerating norms of x + y*omega over Z/2^6, omega the integral
    generator; a unit square class is fixed by its residue mod 8.
    """
    check_discriminant(d)
    return frozenset(SquareClass2(0, u) for u in _norms_of_units_mod8(d % 64))


@dataclass(frozen=True)
class Column:
    place: Place
    role: str  # "sigma" (ramified) or "sns" (non-split place of S)

    @property
    def label(self) -> str:
        return self.place.label


def matrix_columns(inst: ProblemInstance) -> list[Column]:
    """Column layout: odd ramified primes, then 2 if ramified, then non-split S0, then infinity."""
    sigma = inst.sigma
    cols = [Column(Place(q), "sigma") for q in sigma if q != 2]
    if 2 in sigma:
        cols.append(Column(TWO, "sigma"))
    for q in inst.places.s0:
        if splitting_type(inst.d, Place(q)) is not Splitting.SPLIT:
            cols.append(Column(Place(q), "sns"))
    if inst.places.s_inf and inst.d < 0:
        cols.append(Column(INF, "sns"))
    return cols


def _unit_mod8(gens, bits) -> int:
    r = 1
    for g, b in zip(gens, bits):
        if b:
            r = r * g % 8
    return r


def build_matrix_caserule(inst: ProblemInstance, wt: SubgroupWT | None = None) -> MatrixFp:
    """Genus matrix from the explicit local rules (Legendre symbols, valuations, signs, W_2)."""
    basis = inst.basis
    if wt is None:
        wt = wt_subgroup(basis, inst.places.t)
    cols = matrix_columns(inst)
    gens = basis.gens
    w2 = None
    rows = []
    for bits in wt.basis:
        row = []
        for col in cols:
            v = col.place
            if col.role == "sigma" and v.is_odd:
                e = sum(legendre_add(g, v.prime) for g, b in zip(gens, bits) if b) % 2
            elif col.role == "sigma":
                if w2 is None:
                    w2 = {c.unit for c in w2_norm_classes(inst.d)}
                e = 0 if _unit_mod8(gens, bits) in w2 else 1
            elif v.is_infinite:
                e = bits[gens.index(-1)]
            else:
                e = bits[gens.index(v.prime)]
            row.append(e)
        rows.append(row)
    return MatrixFp(
        2,
        tuple(map(tuple, rows)),
        len(cols),
        tuple(wt.label(i) for i in range(wt.dim)),
        tuple(c.label for c in cols),
    )


@dataclass(frozen=True)
class GenusReport:
    instance: ProblemInstance
    matrix: MatrixFp
    rank: int
    log2_g: int
    g: int
    g_star: int
    ray_class_order: int
    splitting: dict
    kernel_basis: tuple[tuple[str, ...], ...]
    wt_dim: int
    witnesses: tuple[str, ...]

    @property
    def log2_g_star(self) -> int | None:
        """log2 of g*, or None when g* is not a power of two."""
        gs = self.g_star
        return gs.bit_length() - 1 if gs & (gs - 1) == 0 else None

    def to_dict(self) -> dict[str, Any]:
        inst = self.instance
        return {
            "d": inst.d,
            "sigma": inst.sigma,
            "s0": list(inst.places.s0),
            "sinf": inst.places.s_inf,
            "t": list(inst.places.t),
            "governing_basis": list(inst.basis.gens),
            "rows": list(self.matrix.row_labels),
            "cols": list(self.matrix.col_labels),
            "matrix": [list(r) for r in self.matrix.rows],
            "rank": self.rank,
            "log2_g": self.log2_g,
            "g": self.g,
            "log2_g_star": self.log2_g_star,
            "g_star": self.g_star,
            "ray_class_order": self.ray_class_order,
            "wt_dim": self.wt_dim,
            "splitting": dict(self.splitting),
            "kernel_basis": [list(k) for k in self.kernel_basis],
        }


def splitting_report(inst: ProblemInstance) -> dict[str, str]:
    places = [Place(q) for q in sorted(set(inst.sigma) | set(inst.places.s0) | set(inst.places.t))]
    if inst.places.s_inf:
        places.append(INF)
    return {v.label: str(splitting_type(inst.d, v)) for v in places}


def genus_number(inst: ProblemInstance) -> GenusReport:
    """Compute g = #ker(Theta) together with g* and the splitting diagnostics."""
    wt = wt_subgroup(inst.basis, inst.places.t)
    m = build_matrix_caserule(inst, wt)
    rank = rank_fp(m)
    log2_g = m.ncols - rank
    g = 1 << log2_g
    h = ray_class_order(math.prod(inst.places.t), inst.places)
    # L is ramified outside T, so L is not inside the ray class field and M contains L.K_T^S
    g_star = g * h // 2
    kernel = tuple(
        tuple(label for label, x in zip(m.col_labels, vec) if x) for vec in kernel_basis_fp(m)
    )
    return GenusReport(
        instance=inst,
        matrix=m,
        rank=rank,
        log2_g=log2_g,
        g=g,
        g_star=g_star,
        ray_class_order=h,
        splitting=splitting_report(inst),
        kernel_basis=kernel,
        wt_dim=wt.dim,
        witnesses=tuple(wt.label(i) for i in range(wt.dim)),
    )
