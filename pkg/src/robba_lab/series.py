"""Sparse truncated multivariate series with exact weighted Gauss norms.

A series lives over a descriptor fixing (p, h, N), the variable counts, a
nonnegative rational weight per variable (pi first, then the T block, then
the U block) and a denominator bound p^M for fractional exponents.

The truncation model: a stored series denotes a coset.  The true element
equals the stored terms, plus p^N times something supported in the stated
window, plus a drop tail delta.  Every operation that discards a term
records a (valuation, weighted-degree) marker for it; the tail of a series
is the lower hull of those markers, so v_r(delta) >= min(val + r * wdeg)
holds for every radius at once.  A computed Gauss valuation is *certified*
exactly when it beats both the precision floor N + r * wdeg_min(window)
and the tail bound.  Freshly constructed polynomials carry an empty tail
and certify whenever precision allows.

In valuation form the r-Gauss norm of a monomial a * x^e is
val_p(a) + r * <weights, e>, and |x|_r = p^(-v_r(x)).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping

from .scalars import (
    PadicScalar,
    ParameterError,
    ResidueScalar,
    Valuation,
)


class WindowError(ValueError):
    """An operation needed capacity outside the descriptor cap."""


class NotInvertibleError(ValueError):
    """The unit criterion in use does not apply to this element."""


ZERO = Fraction(0)


# ---------------------------------------------------------------------------
# descriptors and windows


@dataclass(frozen=True)
class Window:
    """Per-variable exponent bounds: a closed box [lo_i, hi_i]."""

    lo: tuple[Fraction, ...]
    hi: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise ParameterError("window bound lengths differ")
        if any(a > b for a, b in zip(self.lo, self.hi)):
            raise ParameterError("empty window")

    def contains(self, exps: tuple[Fraction, ...]) -> bool:
        return all(a <= e <= b for a, e, b in zip(self.lo, exps, self.hi))

    def union(self, other: "Window") -> "Window":
        return Window(
            tuple(min(a, b) for a, b in zip(self.lo, other.lo)),
            tuple(max(a, b) for a, b in zip(self.hi, other.hi)),
        )

    def minkowski(self, other: "Window") -> "Window":
        return Window(
            tuple(a + b for a, b in zip(self.lo, other.lo)),
            tuple(a + b for a, b in zip(self.hi, other.hi)),
        )

    def intersect(self, other: "Window") -> "Window":
        return Window(
            tuple(max(a, b) for a, b in zip(self.lo, other.lo)),
            tuple(min(a, b) for a, b in zip(self.hi, other.hi)),
        )

    def scaled(self, k: int) -> "Window":
        if k < 0:
            raise ParameterError("window scale must be nonnegative")
        return Window(tuple(k * a for a in self.lo), tuple(k * a for a in self.hi))

    def fits_in(self, other: "Window") -> bool:
        return all(a >= b for a, b in zip(self.lo, other.lo)) and all(
            a <= b for a, b in zip(self.hi, other.hi)
        )


@dataclass(frozen=True)
class RingDescriptor:
    """Shape data for a series ring.

    weights[0] is the pi weight (strictly positive); then nvars_T entries,
    then nvars_U entries, all nonnegative.  frac_denominator bounds exponent
    denominators (a power of p; 1 for plain rings, p^M for perfection
    approximants).  t_laurent permits negative T exponents, as in the two
    preset actions where the T block is invertible.  cap is the storage
    capacity window; terms pushed beyond it are dropped into the tail.
    """

    p: int
    h: int
    N: int
    nvars_T: int = 0
    nvars_U: int = 0
    weights: tuple[Fraction, ...] = (Fraction(1),)
    frac_denominator: int = 1
    t_laurent: bool = False
    cap: Window | None = None

    def __post_init__(self):
        nv = self.nvars
        if len(self.weights) != nv:
            raise ParameterError("need one weight per variable")
        if self.weights[0] <= 0:
            raise ParameterError("pi weight must be positive")
        if any(w < 0 for w in self.weights):
            raise ParameterError("weights must be nonnegative")
        d = self.frac_denominator
        while d % self.p == 0:
            d //= self.p
        if d != 1:
            raise ParameterError("frac_denominator must be a power of p")
        if self.cap is None:
            object.__setattr__(self, "cap", self.default_cap())
        if len(self.cap.lo) != nv:
            raise ParameterError("cap window has wrong arity")

    @property
    def nvars(self) -> int:
        return 1 + self.nvars_T + self.nvars_U

    def default_cap(self, reach: int = 64) -> Window:
        lo = [Fraction(-reach)]
        hi = [Fraction(reach)]
        for _ in range(self.nvars_T):
            lo.append(Fraction(-reach) if self.t_laurent else ZERO)
            hi.append(Fraction(reach))
        for _ in range(self.nvars_U):
            lo.append(ZERO)
            hi.append(Fraction(reach))
        return Window(tuple(lo), tuple(hi))

    def wdeg(self, exps: tuple[Fraction, ...]) -> Fraction:
        return sum((w * e for w, e in zip(self.weights, exps)), ZERO)

    def wdeg_floor(self, window: Window) -> Fraction:
        """Least weighted degree over the window (weights are nonnegative)."""
        return sum((w * lo for w, lo in zip(self.weights, window.lo)), ZERO)

    def check_exponents(self, exps: tuple[Fraction, ...]) -> None:
        if len(exps) != self.nvars:
            raise ParameterError("exponent arity mismatch")
        for i, e in enumerate(exps):
            if (e * self.frac_denominator).denominator != 1:
                raise ParameterError(
                    f"exponent {e} denominator exceeds bound {self.frac_denominator}"
                )
            if i > 0 and e < 0:
                if i > self.nvars_T or not self.t_laurent:
                    raise ParameterError(f"negative exponent {e} at position {i}")

    def var_exps(self, index: int, power=1) -> tuple[Fraction, ...]:
        e = [ZERO] * self.nvars
        e[index] = Fraction(power)
        return tuple(e)

    def origin(self) -> Window:
        z = (ZERO,) * self.nvars
        return Window(z, z)


def default_ring(p: int, h: int, N: int, nvars_T: int = 0, nvars_U: int = 0,
                 u_weight=1, frac_denominator: int = 1,
                 t_laurent: bool = False, reach: int = 64) -> RingDescriptor:
    """Weight 1 on pi, 0 on the T block, a fixed positive weight on each U."""
    weights = (Fraction(1),) + (ZERO,) * nvars_T + (Fraction(u_weight),) * nvars_U
    ring = RingDescriptor(p, h, N, nvars_T, nvars_U, weights, frac_denominator,
                          t_laurent)
    if reach != 64:
        ring = replace(ring, cap=ring.default_cap(reach))
    return ring


def berger_ring(p: int, h: int, N: int, frac_denominator: int = 1,
                reach: int = 64) -> RingDescriptor:
    """h invertible variables Y_0..Y_(h-1) of weights 1, p, ..., p^(h-1)."""
    weights = tuple(Fraction(p**i) for i in range(h))
    ring = RingDescriptor(p, h, N, nvars_T=h - 1, nvars_U=0, weights=weights,
                          frac_denominator=frac_denominator, t_laurent=True)
    if reach != 64:
        ring = replace(ring, cap=ring.default_cap(reach))
    return ring


def ab_ring(p: int, N: int, nvars_T: int, frac_denominator: int = 1,
            reach: int = 64) -> RingDescriptor:
    """pi plus nvars_T invertible weight-0 variables (unramified coefficients)."""
    return default_ring(p, 1, N, nvars_T=nvars_T, frac_denominator=frac_denominator,
                        t_laurent=True, reach=reach)


# ---------------------------------------------------------------------------
# drop tails


def _prune_hull(entries: Iterable[tuple[Fraction, Fraction]],
                limit: int = 48) -> tuple[tuple[Fraction, Fraction], ...]:
    """Keep only entries that can achieve the minimum of val + r * wdeg.

    Coordinate domination is exact pruning; if the hull is still large,
    collapse to the (conservative) coordinate-wise minimum.
    """
    pts = sorted(set(entries))
    kept: list[tuple[Fraction, Fraction]] = []
    for v, d in pts:
        dominated = False
        for v2, d2 in pts:
            if (v2, d2) != (v, d) and v2 <= v and d2 <= d:
                dominated = True
                break
        if not dominated:
            kept.append((v, d))
    if len(kept) > limit:
        kept = [(min(v for v, _ in kept), min(d for _, d in kept))]
    return tuple(kept)


def tail_bound(tail: tuple[tuple[Fraction, Fraction], ...], r: Fraction) -> Fraction | None:
    """min(val + r * wdeg) over tail markers; None for an empty tail."""
    if not tail:
        return None
    return min(v + r * d for v, d in tail)


def _tail_product(tail, points):
    return [(v + w, d + e) for v, d in tail for w, e in points]


# ---------------------------------------------------------------------------
# series


@dataclass(frozen=True)
class GaussValue:
    """One certified (or not) Gauss-norm evaluation at a fixed radius."""

    radius: Fraction
    value: Valuation
    certified: bool
    bound: Fraction | None = None  # the certification floor that was applied


class _Series:
    """Shared machinery for the two coefficient types."""

    __slots__ = ("ring", "terms", "window", "tail")

    def __init__(self, ring: RingDescriptor, terms: Mapping, window: Window,
                 tail: tuple[tuple[Fraction, Fraction], ...]):
        self.ring = ring
        self.terms = dict(terms)
        self.window = window
        self.tail = tail

    # subclasses pin these three
    _COEFF_ZERO_OK = True

    def _coeff_is_zero(self, c) -> bool:
        raise NotImplementedError

    def _coeff_val(self, c) -> Valuation:
        raise NotImplementedError

    @classmethod
    def build(cls, ring: RingDescriptor, terms: Mapping, window: Window | None = None,
              tail=()):
        clean = {}
        for exps, c in terms.items():
            exps = tuple(Fraction(e) for e in exps)
            ring.check_exponents(exps)
            if cls._static_is_zero(c):
                continue
            clean[exps] = c
        if window is None:
            window = cls._support_box(ring, clean)
        out = cls(ring, clean, window, _prune_hull(tail) if tail else ())
        return out._clip_to_cap()

    @staticmethod
    def _static_is_zero(c) -> bool:
        raise NotImplementedError

    @staticmethod
    def _support_box(ring: RingDescriptor, terms: Mapping) -> Window:
        if not terms:
            return ring.origin()
        keys = list(terms)
        nv = ring.nvars
        lo = tuple(min(k[i] for k in keys) for i in range(nv))
        hi = tuple(max(k[i] for k in keys) for i in range(nv))
        return Window(lo, hi)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def _match(self, other: "_Series") -> None:
        if self.ring != other.ring:
            raise ParameterError("ring descriptors differ")

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def _clip_to_cap(self):
        cap = self.ring.cap
        kept, dropped = {}, []
        for exps, c in self.terms.items():
            if cap.contains(exps):
                kept[exps] = c
            else:
                dropped.append((self._val_floor(c), self.ring.wdeg(exps)))
        tail = list(self.tail)
        window = self.window
        if not window.fits_in(cap):
            # the p^N ambiguity beyond the cap is recorded, then forgotten
            marker = self._precision_marker(window)
            if marker is not None:
                tail.append(marker)
            try:
                window = window.intersect(cap)
            except ParameterError:
                window = self.ring.origin()  # support fell entirely outside
        tail.extend(dropped)
        return type(self)(self.ring, kept, window, _prune_hull(tail))

    def _val_floor(self, c) -> Fraction:
        v = self._coeff_val(c)
        return Fraction(self.ring.N) if v.is_infinite else v.value

    def _precision_marker(self, window: Window) -> tuple[Fraction, Fraction]:
        raise NotImplementedError

    def _points_hull(self):
        return _prune_hull(
            (self._val_floor(c), self.ring.wdeg(e)) for e, c in self.terms.items()
        ) if self.terms else ()

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        self._match(other)
        terms = dict(self.terms)
        for exps, c in other.terms.items():
            if exps in terms:
                s = terms[exps] + c
                if self._coeff_is_zero(s):
                    del terms[exps]
                else:
                    terms[exps] = s
            else:
                terms[exps] = c
        window = self.window.union(other.window)
        tail = _prune_hull(self.tail + other.tail)
        return type(self)(self.ring, terms, window, tail)._clip_to_cap()

    def __neg__(self):
        return type(self)(self.ring, {e: -c for e, c in self.terms.items()},
                          self.window, self.tail)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._match(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                prod = c1 * c2
                if e in terms:
                    s = terms[e] + prod
                    if self._coeff_is_zero(s):
                        del terms[e]
                    else:
                        terms[e] = s
                elif not self._coeff_is_zero(prod):
                    terms[e] = prod
        window = self.window.minkowski(other.window)
        tail = list(_tail_product(self.tail, other._points_hull()))
        tail += _tail_product(other.tail, self._points_hull())
        tail += _tail_product(self.tail, other.tail)
        return type(self)(self.ring, terms, window,
                          _prune_hull(tail))._clip_to_cap()

    def __pow__(self, n: int):
        if n < 0:
            raise ParameterError("use invert_series for negative powers")
        result = self.one(self.ring)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- norms ---------------------------------------------------------------

    def gauss_norm(self, r) -> GaussValue:
        r = Fraction(r)
        if r <= 0:
            raise ParameterError("Gauss radius must be positive")
        floor = self._cert_floor(r)
        if not self.terms:
            return GaussValue(r, Valuation.infinite(floor=floor), False, floor)
        best = None
        for exps, c in self.terms.items():
            v = self._coeff_val(c) + Valuation.finite(r * self.ring.wdeg(exps))
            best = v if best is None else best.min(v)
        certified = (not best.is_infinite) and (floor is None or best.value <= floor)
        return GaussValue(r, best, certified, floor)

    def _cert_floor(self, r: Fraction) -> Fraction | None:
        bounds = []
        pm = self._precision_marker(self.window)
        if pm is not None:
            bounds.append(pm[0] + r * pm[1])
        tb = tail_bound(self.tail, r)
        if tb is not None:
            bounds.append(tb)
        return min(bounds) if bounds else None

    # -- misc -----------------------------------------------------------------

    @classmethod
    def zero(cls, ring: RingDescriptor):
        return cls(ring, {}, ring.origin(), ())

    def __eq__(self, other):
        return (isinstance(other, type(self)) and self.ring == other.ring
                and self.terms == other.terms)

    def __hash__(self):
        return hash((type(self).__name__, self.ring,
                     tuple(self.sorted_terms())))

    def __repr__(self):
        names = ["pi"] + [f"T{i+1}" for i in range(self.ring.nvars_T)] + \
                [f"U{i+1}" for i in range(self.ring.nvars_U)]
        if not self.terms:
            return "0"
        bits = []
        for exps, c in self.sorted_terms():
            mono = "*".join(
                f"{n}^{e}" if e != 1 else n for n, e in zip(names, exps) if e != 0
            )
            bits.append(f"({c!r})" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)


class DaggerSeries(_Series):
    """Series with W(F_q)/p^N coefficients (integral Robba-ring windows)."""

    @staticmethod
    def _static_is_zero(c: PadicScalar) -> bool:
        return c.is_zero

    def _coeff_is_zero(self, c: PadicScalar) -> bool:
        return c.is_zero

    def _coeff_val(self, c: PadicScalar) -> Valuation:
        return c.valuation()

    def _precision_marker(self, window: Window):
        return (Fraction(self.ring.N), self.ring.wdeg_floor(window))

    @classmethod
    def one(cls, ring: RingDescriptor) -> "DaggerSeries":
        return cls.monomial(ring, (ZERO,) * ring.nvars,
                            PadicScalar.one(ring.p, ring.h, ring.N))

    @classmethod
    def monomial(cls, ring: RingDescriptor, exps, coeff: PadicScalar | int) -> "DaggerSeries":
        if isinstance(coeff, int):
            coeff = PadicScalar.from_int(ring.p, ring.h, ring.N, coeff)
        return cls.build(ring, {tuple(Fraction(e) for e in exps): coeff})

    @classmethod
    def variable(cls, ring: RingDescriptor, index: int, power=1) -> "DaggerSeries":
        return cls.monomial(ring, ring.var_exps(index, power), 1)

    @classmethod
    def constant(cls, ring: RingDescriptor, c: PadicScalar | int) -> "DaggerSeries":
        return cls.monomial(ring, (ZERO,) * ring.nvars, c)

    def scale(self, c: PadicScalar | int) -> "DaggerSeries":
        if isinstance(c, int):
            c = PadicScalar.from_int(self.ring.p, self.ring.h, self.ring.N, c)
        return DaggerSeries.build(self.ring,
                                  {e: v * c for e, v in self.terms.items()},
                                  self.window, self.tail)

    def map_coefficients(self, fn) -> "DaggerSeries":
        return DaggerSeries.build(self.ring,
                                  {e: fn(c) for e, c in self.terms.items()},
                                  self.window, self.tail)

    def reduce_mod_p(self) -> "CharPSeries":
        terms = {}
        for exps, c in self.terms.items():
            r = c.residue()
            if not r.is_zero:
                terms[exps] = r
        tail = tuple((v, d) for v, d in self.tail if v < 1)
        return CharPSeries(self.ring, terms, self.window, _prune_hull(tail))


class CharPSeries(_Series):
    """Series with F_q coefficients: the char-p reduction rings and their
    perfections (fractional exponents with bounded denominator)."""

    @staticmethod
    def _static_is_zero(c: ResidueScalar) -> bool:
        return c.is_zero

    def _coeff_is_zero(self, c: ResidueScalar) -> bool:
        return c.is_zero

    def _coeff_val(self, c: ResidueScalar) -> Valuation:
        return Valuation.infinite() if c.is_zero else Valuation.finite(0)

    def _precision_marker(self, window: Window):
        return None  # no p^N coset in characteristic p

    def _val_floor(self, c) -> Fraction:
        return ZERO

    @classmethod
    def one(cls, ring: RingDescriptor) -> "CharPSeries":
        return cls.monomial(ring, (ZERO,) * ring.nvars,
                            ResidueScalar.one(ring.p, ring.h))

    @classmethod
    def monomial(cls, ring: RingDescriptor, exps, coeff: ResidueScalar | int) -> "CharPSeries":
        if isinstance(coeff, int):
            coeff = ResidueScalar.from_int(ring.p, ring.h, coeff)
        return cls.build(ring, {tuple(Fraction(e) for e in exps): coeff})

    @classmethod
    def variable(cls, ring: RingDescriptor, index: int, power=1) -> "CharPSeries":
        return cls.monomial(ring, ring.var_exps(index, power), 1)

    def valuation(self) -> GaussValue:
        """The intrinsic char-p Gauss valuation (radius parameter 1)."""
        return self.gauss_norm(Fraction(1))

    def frobenius(self, times: int = 1) -> "CharPSeries":
        """x -> x^p termwise: exponents scale by p, coefficients by x^p."""
        out = self
        for _ in range(times):
            out = CharPSeries.build(
                out.ring,
                {tuple(p_e * out.ring.p for p_e in e): c.frobenius()
                 for e, c in out.terms.items()},
                tail=tuple((v, d * out.ring.p) for v, d in out.tail),
            )
        return out

    def p_th_root(self, times: int = 1) -> "CharPSeries":
        """Exact inverse Frobenius; needs frac_denominator headroom."""
        out = self
        for _ in range(times):
            terms = {}
            for e, c in out.terms.items():
                new_e = tuple(x / out.ring.p for x in e)
                out.ring.check_exponents(new_e)
                terms[new_e] = c.frobenius_inverse()
            out = CharPSeries.build(
                out.ring, terms,
                tail=tuple((v, d / out.ring.p) for v, d in out.tail))
        return out


# ---------------------------------------------------------------------------
# operations of the module surface


def series_arith(x: _Series, y: _Series, op: str) -> _Series:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise ParameterError(f"unknown series op {op!r}")


def gauss_norm(x: _Series, r) -> GaussValue:
    return x.gauss_norm(r)


def hadamard_check(x: _Series, r, s, t) -> tuple[bool | None, dict]:
    """Interpolation bound between two radii.

    With u = t*r + (1-t)*s (the norm parameter interpolates linearly; the
    actual radii |pi| = p^(-u) then interpolate geometrically), checks
    v_u(x) >= t * v_r(x) + (1-t) * v_s(x).  Equality for a single monomial.
    Returns (verdict, witness); verdict None when some norm is uncertified.
    """
    r, s, t = Fraction(r), Fraction(s), Fraction(t)
    if not 0 < s <= r:
        raise ParameterError("need 0 < s <= r")
    if not 0 <= t <= 1:
        raise ParameterError("need t in [0, 1]")
    u = t * r + (1 - t) * s
    gr, gs, gu = x.gauss_norm(r), x.gauss_norm(s), x.gauss_norm(u)
    witness = {"r": r, "s": s, "t": t, "u": u,
               "v_r": gr.value, "v_s": gs.value, "v_u": gu.value}
    if not (gr.certified and gs.certified and gu.certified):
        return None, witness
    lhs = gu.value
    rhs = Valuation.finite(t * gr.value.value + (1 - t) * gs.value.value)
    return (rhs <= lhs), witness


def invert_one_plus_small(x: DaggerSeries, r, s, max_iter: int = 512) -> DaggerSeries:
    """Invert x when |x - 1| < 1 on both endpoint radii (hence between them).

    Geometric series in y = x - 1; the loop runs until y^k dies out at the
    working precision and window, so x * result == 1 holds exactly up to the
    recorded tail.
    """
    r, s = Fraction(r), Fraction(s)
    one = type(x).one(x.ring)
    y = x - one
    if y.is_zero:
        return one
    for u in (s, r):
        g = y.gauss_norm(u)
        if not g.certified or g.value.is_infinite or g.value.value <= 0:
            raise NotInvertibleError(
                f"|x-1| not certified < 1 at radius {u} (got {g.value}, "
                f"certified={g.certified})")
    acc = one
    power = one
    for _ in range(max_iter):
        power = power * (-y)
        if power.is_zero:
            return acc
        acc = acc + power
    raise NotInvertibleError("geometric series did not terminate")


def invert_series(x: DaggerSeries, max_iter: int = 512) -> DaggerSeries:
    """General unit inversion by factoring out a dominant monomial.

    Picks the unit-coefficient term of least weighted degree as pivot m, so
    x = m * (1 + d); succeeds when powers of d die out (p-adically, or by
    leaving the window, in which case the drop tail records the loss).
    """
    units = [(x.ring.wdeg(e), e) for e, c in x.terms.items()
             if not c.valuation().is_infinite and c.valuation().value == 0]
    if not units:
        raise NotInvertibleError("no unit-coefficient pivot term")
    _, pivot = min(units)
    c = x.terms[pivot]
    m_inv = type(x).monomial(x.ring, tuple(-e for e in pivot), c.invert_unit())
    y = x * m_inv  # 1 + d
    one = type(x).one(x.ring)
    d = y - one
    acc = one
    power = one
    for _ in range(max_iter):
        if power.is_zero:
            break
        power = power * (-d)
        acc = acc + power
    else:
        raise NotInvertibleError("pivot residual is not topologically nilpotent")
    return acc * m_inv


def reduce_mod_p(x: DaggerSeries) -> CharPSeries:
    return x.reduce_mod_p()


# ---------------------------------------------------------------------------
# serialization (canonical, byte-stable)


def _frac(q: Fraction) -> list[int]:
    return [q.numerator, q.denominator]


def ring_to_json(ring: RingDescriptor) -> dict:
    return {
        "p": ring.p, "h": ring.h, "N": ring.N,
        "nvars_T": ring.nvars_T, "nvars_U": ring.nvars_U,
        "weights": [_frac(w) for w in ring.weights],
        "frac_denominator": ring.frac_denominator,
        "t_laurent": ring.t_laurent,
        "cap": {"lo": [_frac(a) for a in ring.cap.lo],
                "hi": [_frac(a) for a in ring.cap.hi]},
    }


def series_to_json(x: _Series) -> dict:
    terms = []
    for exps, c in x.sorted_terms():
        coeffs = list(c.coeffs)
        terms.append([[_frac(e) for e in exps], coeffs])
    return {
        "ring": ring_to_json(x.ring),
        "char_p": isinstance(x, CharPSeries),
        "terms": terms,
        "window": {"lo": [_frac(a) for a in x.window.lo],
                   "hi": [_frac(a) for a in x.window.hi]},
        "tail": [[_frac(v), _frac(d)] for v, d in sorted(x.tail)],
    }


def series_from_json(data: dict) -> _Series:
    rd = data["ring"]
    ring = RingDescriptor(
        rd["p"], rd["h"], rd["N"], rd["nvars_T"], rd["nvars_U"],
        tuple(Fraction(*w) for w in rd["weights"]),
        rd["frac_denominator"], rd["t_laurent"],
        Window(tuple(Fraction(*a) for a in rd["cap"]["lo"]),
               tuple(Fraction(*a) for a in rd["cap"]["hi"])),
    )
    window = Window(tuple(Fraction(*a) for a in data["window"]["lo"]),
                    tuple(Fraction(*a) for a in data["window"]["hi"]))
    tail = tuple((Fraction(*v), Fraction(*d)) for v, d in data["tail"])
    cls = CharPSeries if data["char_p"] else DaggerSeries
    terms = {}
    for exps, coeffs in data["terms"]:
        key = tuple(Fraction(*e) for e in exps)
        if data["char_p"]:
            terms[key] = ResidueScalar(ring.p, ring.h, tuple(coeffs))
        else:
            terms[key] = PadicScalar(ring.p, ring.h, ring.N, tuple(coeffs))
    return cls(ring, terms, window, tail)


def series_dumps(x: _Series) -> str:
    return json.dumps(series_to_json(x), sort_keys=True, separators=(",", ":"))
