"""Finite-length Witt vectors over truncated perfect char-p series rings.

Arithmetic goes through the universal sum/product polynomials S_n, P_n,
computed once per (p, length) by ghost-component equalization over the
integers (the divisions by p^n are exact; exactness is asserted).  Ghost
components do not exist in characteristic p, but the integral universal
polynomials evaluate there just fine; only their reductions mod p are used
for evaluation.

The r-norm of x = sum p^n [x_n^(p^-n)] is, in valuation form,
min_n (n + r * val(x_n) / p^n) with val the weighted char-p Gauss
valuation.  Teichmuller digits of the coefficients give the constructive
embedding of integral series into Witt vectors; it is multiplicative on
monomials with Teichmuller coefficients and isometric at small radii,
which is exactly what the tests pin down.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache

from .scalars import ParameterError, ResidueScalar, Valuation, teichmuller_digits
from .series import (
    CharPSeries,
    DaggerSeries,
    GaussValue,
    RingDescriptor,
    Window,
    _prune_hull,
    tail_bound,
)

ZERO = Fraction(0)

# integer multivariate polynomials: {exponent tuple: int coefficient}
Poly = dict


def _poly_add(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for k, v in b.items():
        s = out.get(k, 0) + v
        if s:
            out[k] = s
        elif k in out:
            del out[k]
    return out


def _poly_scale(a: Poly, c: int) -> Poly:
    if c == 0:
        return {}
    return {k: c * v for k, v in a.items()}


def _poly_mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            s = out.get(k, 0) + va * vb
            if s:
                out[k] = s
            elif k in out:
                del out[k]
    return out


def _poly_pow(a: Poly, n: int, one_key: tuple) -> Poly:
    result = {one_key: 1}
    base = a
    while n:
        if n & 1:
            result = _poly_mul(result, base)
        n >>= 1
        if n:
            base = _poly_mul(base, base)
    return result


def _poly_div_exact(a: Poly, c: int) -> Poly:
    out = {}
    for k, v in a.items():
        q, r = divmod(v, c)
        if r:
            raise ArithmeticError("ghost equalization produced a non-integral "
                                  "coefficient; this is a bug")
        out[k] = q
    return out


class WittPolyCache:
    """Universal addition/multiplication/negation polynomials for one (p, n).

    Variables are X_0..X_(n-1), Y_0..Y_(n-1) (2n slots).  ``sums[k]`` and
    ``prods[k]`` are S_k and P_k; ``negs[k]`` gives -x coordinates (only
    nontrivial at p = 2).  ``*_modp`` hold the reductions used for
    evaluation in characteristic p.
    """

    def __init__(self, p: int, length: int, max_length: int = 5):
        if length > max_length:
            raise ParameterError(
                f"Witt length {length} beyond the desk-scale cap {max_length}")
        self.p = p
        self.length = length
        nv = 2 * length
        self._zero_key = (0,) * nv

        def var(i: int) -> Poly:
            k = [0] * nv
            k[i] = 1
            return {tuple(k): 1}

        def ghost(n: int, offset: int) -> Poly:
            acc: Poly = {}
            for i in range(n + 1):
                acc = _poly_add(acc, _poly_scale(
                    _poly_pow(var(offset + i), p ** (n - i), self._zero_key),
                    p**i))
            return acc

        xs = [var(i) for i in range(length)]
        ys = [var(length + i) for i in range(length)]

        self.sums: list[Poly] = []
        self.prods: list[Poly] = []
        self.negs: list[Poly] = []
        for n in range(length):
            gx, gy = ghost(n, 0), ghost(n, length)
            target_sum = _poly_add(gx, gy)
            target_prod = _poly_mul(gx, gy)
            target_neg = _poly_scale(gx, -1)
            for i in range(n):
                q = p ** (n - i)
                target_sum = _poly_add(
                    target_sum,
                    _poly_scale(_poly_pow(self.sums[i], q, self._zero_key), -(p**i)))
                target_prod = _poly_add(
                    target_prod,
                    _poly_scale(_poly_pow(self.prods[i], q, self._zero_key), -(p**i)))
                target_neg = _poly_add(
                    target_neg,
                    _poly_scale(_poly_pow(self.negs[i], q, self._zero_key), -(p**i)))
            self.sums.append(_poly_div_exact(target_sum, p**n))
            self.prods.append(_poly_div_exact(target_prod, p**n))
            self.negs.append(_poly_div_exact(target_neg, p**n))

        self.sums_modp = [self._reduce(f) for f in self.sums]
        self.prods_modp = [self._reduce(f) for f in self.prods]
        self.negs_modp = [self._reduce(f) for f in self.negs]
        self._verify_ghost(ghost, xs, ys)

    def _reduce(self, f: Poly) -> Poly:
        return {k: v % self.p for k, v in f.items() if v % self.p}

    def _verify_ghost(self, ghost, xs, ys) -> None:
        """Independent re-expansion of the ghost identities (exact, over Z)."""
        p, n = self.p, self.length - 1
        gx, gy = ghost(n, 0), ghost(n, self.length)

        def ghost_of(coords: list[Poly]) -> Poly:
            acc: Poly = {}
            for i in range(n + 1):
                acc = _poly_add(acc, _poly_scale(
                    _poly_pow(coords[i], p ** (n - i), self._zero_key), p**i))
            return acc

        if _poly_add(ghost_of(self.sums), _poly_scale(_poly_add(gx, gy), -1)):
            raise ArithmeticError("Witt sum polynomials fail the ghost identity")
        if _poly_add(ghost_of(self.prods), _poly_scale(_poly_mul(gx, gy), -1)):
            raise ArithmeticError("Witt product polynomials fail the ghost identity")


@lru_cache(maxsize=None)
def witt_polynomials(p: int, length: int, max_length: int = 5) -> WittPolyCache:
    return WittPolyCache(p, length, max_length)


def perfect_ring(ring: RingDescriptor, headroom: int = 2) -> RingDescriptor:
    """Widen the exponent denominator bound for Witt-coordinate roots."""
    need = ring.p ** (ring.N - 1 + headroom)
    if ring.frac_denominator % need == 0:
        return ring
    return replace(ring, frac_denominator=need * ring.frac_denominator,
                   cap=ring.cap)


@dataclass(frozen=True)
class WittVector:
    """Length-N coordinates over a common perfect char-p descriptor.

    The optional tail records dropped content of the element it represents,
    in the same (valuation, weighted degree) convention as series tails.
    """

    coords: tuple[CharPSeries, ...]
    tail: tuple = ()

    def __post_init__(self):
        if not self.coords:
            raise ParameterError("Witt vectors need at least one coordinate")
        ring = self.ring
        for c in self.coords:
            if c.ring != ring:
                raise ParameterError("Witt coordinates must share a descriptor")

    @property
    def ring(self) -> RingDescriptor:
        return self.coords[0].ring

    @property
    def length(self) -> int:
        return len(self.coords)

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.coords)

    def digit(self, n: int) -> CharPSeries:
        """The n-th Teichmuller digit x_n^(p^-n)."""
        return self.coords[n].p_th_root(n)

    def digits(self) -> list[CharPSeries]:
        return [self.digit(n) for n in range(self.length)]

    def __repr__(self):
        return "W(" + ", ".join(repr(c) for c in self.coords) + ")"


def witt_zero(ring: RingDescriptor, length: int | None = None) -> WittVector:
    n = length if length is not None else ring.N
    return WittVector((CharPSeries.zero(ring),) * n)


def teichmuller(xbar: CharPSeries, length: int | None = None) -> WittVector:
    n = length if length is not None else xbar.ring.N
    return WittVector((xbar,) + (CharPSeries.zero(xbar.ring),) * (n - 1))


def _points(x: WittVector):
    pts = []
    for n, c in enumerate(x.coords):
        for e in c.terms:
            pts.append((Fraction(n), c.ring.wdeg(e) / c.ring.p**n))
        pts.extend((Fraction(n) + v, d / c.ring.p**n) for v, d in c.tail)
    return _prune_hull(pts) if pts else ()


def witt_arith(a: WittVector, b: WittVector, op: str) -> WittVector:
    if a.ring != b.ring or a.length != b.length:
        raise ParameterError("Witt operands must share descriptor and length")
    ring = a.ring
    cache = witt_polynomials(ring.p, a.length)
    if op == "sub":
        return witt_arith(a, witt_neg(b), "add")
    if op == "add":
        polys = cache.sums_modp
    elif op == "mul":
        polys = cache.prods_modp
    else:
        raise ParameterError(f"unknown Witt op {op!r}")
    args = list(a.coords) + list(b.coords)
    coords = tuple(_eval_modp(polys[n], args, ring) for n in range(a.length))
    if op == "add":
        tail = _prune_hull(a.tail + b.tail) if (a.tail or b.tail) else ()
    else:
        tail = []
        tail += [(v + w, d + e) for v, d in a.tail for w, e in _points(b)]
        tail += [(v + w, d + e) for v, d in b.tail for w, e in _points(a)]
        tail += [(v + w, d + e) for v, d in a.tail for w, e in b.tail]
        tail = _prune_hull(tail) if tail else ()
    return WittVector(coords, tail)


def witt_neg(a: WittVector) -> WittVector:
    ring = a.ring
    if ring.p != 2:
        return WittVector(tuple(-c for c in a.coords), a.tail)
    cache = witt_polynomials(2, a.length)
    args = list(a.coords) + [CharPSeries.zero(ring)] * a.length
    return WittVector(
        tuple(_eval_modp(cache.negs_modp[n], args, ring) for n in range(a.length)),
        a.tail)


def _eval_modp(poly: Poly, args: list[CharPSeries], ring: RingDescriptor) -> CharPSeries:
    out = CharPSeries.zero(ring)
    powers: dict[tuple[int, int], CharPSeries] = {}

    def power(i: int, e: int) -> CharPSeries:
        key = (i, e)
        if key not in powers:
            powers[key] = args[i] ** e
        return powers[key]

    for exps, c in sorted(poly.items()):
        piece = None
        for i, e in enumerate(exps):
            if e:
                q = power(i, e)
                piece = q if piece is None else piece * q
        if piece is None:
            piece = CharPSeries.one(ring)
        if c % ring.p == 1:
            out = out + piece
        else:
            scaled = CharPSeries.build(
                ring,
                {k: v * ResidueScalar.from_int(ring.p, ring.h, c)
                 for k, v in piece.terms.items()},
                piece.window, piece.tail)
            out = out + scaled
    return out


def witt_norm(x: WittVector, r) -> GaussValue:
    """min_n (n + r * val(x_n) / p^n) over the Teichmuller digits."""
    r = Fraction(r)
    if r <= 0:
        raise ParameterError("radius must be positive")
    p = x.ring.p
    best: Valuation | None = None
    certified = True
    floors = []
    tb = tail_bound(x.tail, r)
    if tb is not None:
        floors.append(tb)
    for n, c in enumerate(x.coords):
        g = c.gauss_norm(r / p**n)
        if g.value.is_infinite:
            if g.bound is not None:
                floors.append(Fraction(n) + g.bound)
            continue
        v = Valuation.finite(Fraction(n) + g.value.value)
        if not g.certified:
            # the coordinate min is real but something smaller may hide
            floors.append(Fraction(n) + g.bound)
        best = v if best is None else best.min(v)
    if best is None:
        fl = min(floors) if floors else None
        return GaussValue(r, Valuation.infinite(floor=fl), False, fl)
    bound = min(floors) if floors else None
    certified = bound is None or best.value <= bound
    return GaussValue(r, best, certified, bound)


def witt_frobenius(x: WittVector) -> WittVector:
    """Coordinate-wise q-power (the p-power Frobenius applied h times)."""
    h = x.ring.h
    return WittVector(tuple(c.frobenius(h) for c in x.coords),
                      tuple((v, d * x.ring.p**h) for v, d in x.tail))


def embed_robba(x: DaggerSeries, headroom: int = 2) -> WittVector:
    """Teichmuller-digit expansion of each coefficient, Witt-summed.

    a * m with a = sum p^n [a_n] contributes sum_n p^n [a_n m-bar], i.e. a
    vector whose n-th coordinate is (a_n m-bar)^(p^n).  The sums use exact
    Witt arithmetic, so the residue compatibility and the small-radius
    isometry are theorems of the construction, tested rather than assumed.
    """
    ring = x.ring
    pring = perfect_ring(ring, headroom)
    N = ring.N
    acc = witt_zero(pring, N)
    for exps, coeff in x.sorted_terms():
        digits = teichmuller_digits(coeff)
        coords = []
        for n, d in enumerate(digits):
            if d.is_zero:
                coords.append(CharPSeries.zero(pring))
                continue
            pn = ring.p**n
            mono = CharPSeries.monomial(
                pring, tuple(e * pn for e in exps),
                _residue_power(d, pn))
            coords.append(mono)
        acc = witt_arith(acc, WittVector(tuple(coords)), "add")
    if x.tail:
        acc = WittVector(acc.coords, _prune_hull(acc.tail + x.tail))
    return acc


def _residue_power(d: ResidueScalar, n: int) -> ResidueScalar:
    return d**n


def isometry_check(x: DaggerSeries, r) -> tuple[bool | None, dict]:
    """Certified equality of the series norm and the embedded Witt norm."""
    r = Fraction(r)
    g = x.gauss_norm(r)
    w = witt_norm(embed_robba(x), r)
    witness = {"series": g, "witt": w}
    if not (g.certified and w.certified):
        return None, witness
    return (g.value == w.value), witness
