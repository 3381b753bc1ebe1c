"""Seeded random generators shared by the property suites and the tests.

Everything takes an explicit random.Random so that a fixed seed fixes the
whole sweep byte for byte.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .actions import ActionSpec, GroupElement, ab_element, berger_element
from .apf import TowerSpec, TowerElement, tower_from_poly
from .descent import SeriesMatrix
from .scalars import PadicScalar, ResidueScalar
from .series import CharPSeries, DaggerSeries, RingDescriptor

ZERO = Fraction(0)


def rand_scalar(rng: random.Random, p: int, h: int, N: int,
                unit: bool = False, max_val: int | None = None) -> PadicScalar:
    while True:
        coeffs = tuple(rng.randrange(p**N) for _ in range(h))
        s = PadicScalar(p, h, N, coeffs)
        if s.is_zero:
            continue
        if unit and not s.is_unit():
            continue
        if max_val is not None:
            v = s.valuation()
            if v.is_infinite or v.value > max_val:
                continue
        return s


def rand_series(rng: random.Random, ring: RingDescriptor, terms: int = 3,
                pi_lo: int = -2, pi_hi: int = 4, t_hi: int = 2,
                unit_leading: bool = False, integral_exponents: bool = True,
                max_val: int | None = None) -> DaggerSeries:
    """A sparse series with small support, never zero."""
    out = {}
    for _ in range(terms):
        exps = [Fraction(rng.randint(pi_lo, pi_hi))]
        for i in range(ring.nvars_T):
            lo = -t_hi if ring.t_laurent else 0
            exps.append(Fraction(rng.randint(lo, t_hi)))
        for _ in range(ring.nvars_U):
            exps.append(Fraction(rng.randint(0, t_hi)))
        out[tuple(exps)] = rand_scalar(rng, ring.p, ring.h, ring.N,
                                       max_val=max_val)
    if unit_leading:
        key = min(out)
        out[key] = rand_scalar(rng, ring.p, ring.h, ring.N, unit=True)
    x = DaggerSeries.build(ring, out)
    if x.is_zero:
        return rand_series(rng, ring, terms, pi_lo, pi_hi, t_hi,
                           unit_leading, integral_exponents, max_val)
    return x


def rand_integral_series(rng: random.Random, ring: RingDescriptor,
                         terms: int = 3, deg_hi: int = 3) -> DaggerSeries:
    """Nonnegative exponents only (an integral-subring element)."""
    return rand_series(rng, ring, terms=terms, pi_lo=0, pi_hi=deg_hi,
                       t_hi=deg_hi)


def rand_charp_series(rng: random.Random, ring: RingDescriptor,
                      terms: int = 2, deg_hi: int = 2) -> CharPSeries:
    out = {}
    for _ in range(terms):
        exps = [Fraction(rng.randint(0, deg_hi))]
        for i in range(ring.nvars_T):
            exps.append(Fraction(rng.randint(0, deg_hi)))
        for _ in range(ring.nvars_U):
            exps.append(Fraction(rng.randint(0, deg_hi)))
        c = rng.randrange(1, ring.p)
        out[tuple(exps)] = ResidueScalar.from_int(ring.p, ring.h, c)
    x = CharPSeries.build(ring, out)
    return x if not x.is_zero else rand_charp_series(rng, ring, terms, deg_hi)


def rand_group_element(rng: random.Random, spec: ActionSpec,
                       depth: int = 0) -> GroupElement:
    """A random operator; depth > 0 restricts to 1 + p^depth coordinates."""
    p, N = spec.p, spec.ring.N
    if spec.kind == "cyclotomic_ab":
        if depth > 0:
            gamma = 1 + p**depth * rng.randrange(1, p**2)
            trans = tuple(p**depth * rng.randrange(0, p**2)
                          for _ in range(spec.ring.nvars_T))
        else:
            gamma = rng.randrange(1, p**(N + 1))
            while gamma % p == 0:
                gamma = rng.randrange(1, p**(N + 1))
            trans = tuple(rng.randrange(0, p**N)
                          for _ in range(spec.ring.nvars_T))
        return ab_element(spec, gamma=gamma, trans=trans)
    hv = spec.ring.nvars_T + 1
    units = []
    for _ in range(hv):
        if depth > 0:
            units.append(1 + p**depth * rng.randrange(1, p**2))
        else:
            u = rng.randrange(1, p**N)
            while u % p == 0:
                u = rng.randrange(1, p**N)
            units.append(u)
    return berger_element(spec, units=tuple(units))


def rand_contracting_matrix(rng: random.Random, ring: RingDescriptor,
                            d: int) -> SeriesMatrix:
    """V with v(V^2 - V) > 0: an exact 0/1 idempotent plus p times noise."""
    p = ring.p
    diag = [rng.randrange(2) for _ in range(d)]
    rows = []
    for i in range(d):
        row = []
        for j in range(d):
            base = diag[i] if i == j else 0
            noise = p * rng.randrange(p ** (ring.N - 1))
            entry = DaggerSeries.constant(ring, base + noise)
            row.append(entry)
        rows.append(tuple(row))
    return SeriesMatrix(tuple(rows))


def rand_tower_element(rng: random.Random, spec: TowerSpec, level: int,
                       terms: int | None = None) -> TowerElement:
    d = spec.degree(level)
    coeffs = [0] * d
    n_terms = terms if terms is not None else min(d, 4)
    for _ in range(n_terms):
        coeffs[rng.randrange(d)] = rng.randrange(spec.p**spec.N)
    x = tower_from_poly(spec, level, coeffs)
    return x if not x.is_zero else rand_tower_element(rng, spec, level, terms)
