"""Exact arithmetic in truncated unramified coefficient rings.

The coefficient ring is W(F_q)/p^N with q = p^h, modeled as
(Z/p^N)[g]/(f(g)) for a fixed monic degree-h integer polynomial f that is
irreducible modulo p.  The defining polynomials are pinned in a table so
that two runs (and two machines) agree bit for bit.

Valuations are exact rationals.  A value that is indistinguishable from 0
at the working precision is reported as "infinite with a floor": the true
valuation is certified to be >= the floor, nothing more.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


class ParameterError(ValueError):
    """Operands do not share (p, h, N) or a parameter is out of range."""


# g^h = rel[0] + rel[1]*g + ... + rel[h-1]*g^(h-1), irreducible mod p.
# (2,2) and (3,2) share the golden-ratio relation g^2 = g + 1.
_DEFINING_RELATIONS: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1),
    (2, 3): (1, 1, 0),
    (2, 4): (1, 1, 0, 0),
    (3, 2): (1, 1),
    (3, 3): (-1, 1, 0),
    (5, 2): (-2, -4),
    (7, 2): (-3, -6),
}

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13)


def defining_relation(p: int, h: int) -> tuple[int, ...]:
    """Return the pinned relation for g^h over (p, h); h = 1 needs none."""
    if h == 1:
        return ()
    try:
        return _DEFINING_RELATIONS[(p, h)]
    except KeyError:
        raise ParameterError(f"no pinned defining polynomial for (p={p}, h={h})")


@lru_cache(maxsize=None)
def _check_prime(p: int) -> None:
    if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
        raise ParameterError(f"p = {p} is not prime")


@dataclass(frozen=True)
class Valuation:
    """An exact rational valuation, possibly censored at a precision floor.

    ``value is None`` means the element was indistinguishable from zero;
    ``floor`` then records the certified lower bound (None = genuinely
    infinite, e.g. an exact zero of a formula).  Infinite values absorb
    addition and lose every min.
    """

    value: Fraction | None = None
    floor: Fraction | None = None

    @staticmethod
    def finite(v) -> "Valuation":
        return Valuation(Fraction(v))

    @staticmethod
    def infinite(floor=None) -> "Valuation":
        return Valuation(None, None if floor is None else Fraction(floor))

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def __add__(self, other: "Valuation") -> "Valuation":
        if self.is_infinite or other.is_infinite:
            floors = []
            for t in (self, other):
                floors.append(t.floor if t.is_infinite else t.value)
            if any(f is None for f in floors):
                return Valuation.infinite()
            return Valuation.infinite(sum(floors))
        return Valuation(self.value + other.value)

    def min(self, other: "Valuation") -> "Valuation":
        if self.is_infinite:
            return other
        if other.is_infinite:
            return self
        return self if self.value <= other.value else other

    def __le__(self, other: "Valuation") -> bool:
        if self.is_infinite:
            return other.is_infinite
        if other.is_infinite:
            return True
        return self.value <= other.value

    def __lt__(self, other: "Valuation") -> bool:
        return self <= other and self != other

    def __repr__(self) -> str:
        if self.is_infinite:
            return "val(oo)" if self.floor is None else f"val(>={self.floor})"
        return f"val({self.value})"


@dataclass(frozen=True)
class ResidueScalar:
    """An element of F_q, q = p^h, as a coefficient vector over F_p."""

    p: int
    h: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.h:
            raise ParameterError("coefficient vector length must equal h")
        if any(not 0 <= c < self.p for c in self.coeffs):
            raise ParameterError("residue coefficients must lie in [0, p)")

    @staticmethod
    def from_int(p: int, h: int, n: int) -> "ResidueScalar":
        return ResidueScalar(p, h, (n % p,) + (0,) * (h - 1))

    @staticmethod
    def zero(p: int, h: int) -> "ResidueScalar":
        return ResidueScalar.from_int(p, h, 0)

    @staticmethod
    def one(p: int, h: int) -> "ResidueScalar":
        return ResidueScalar.from_int(p, h, 1)

    @staticmethod
    def generator(p: int, h: int) -> "ResidueScalar":
        if h == 1:
            return ResidueScalar.one(p, 1)
        return ResidueScalar(p, h, (0, 1) + (0,) * (h - 2))

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def _match(self, other: "ResidueScalar") -> None:
        if (self.p, self.h) != (other.p, other.h):
            raise ParameterError("residue parameters differ")

    def __add__(self, other: "ResidueScalar") -> "ResidueScalar":
        self._match(other)
        return ResidueScalar(
            self.p, self.h,
            tuple((a + b) % self.p for a, b in zip(self.coeffs, other.coeffs)),
        )

    def __neg__(self) -> "ResidueScalar":
        return ResidueScalar(self.p, self.h, tuple((-a) % self.p for a in self.coeffs))

    def __sub__(self, other: "ResidueScalar") -> "ResidueScalar":
        return self + (-other)

    def __mul__(self, other: "ResidueScalar") -> "ResidueScalar":
        self._match(other)
        return ResidueScalar(
            self.p, self.h,
            _poly_mul_reduce(self.coeffs, other.coeffs, self.p, self.h,
                             defining_relation(self.p, self.h), self.p),
        )

    def __pow__(self, n: int) -> "ResidueScalar":
        if n < 0:
            return self.inverse() ** (-n)
        result = ResidueScalar.one(self.p, self.h)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "ResidueScalar":
        if self.is_zero:
            raise ZeroDivisionError("inverse of 0 in F_q")
        return self ** (self.p**self.h - 2)

    def frobenius(self) -> "ResidueScalar":
        """x -> x^p on F_q."""
        return self ** self.p

    def frobenius_inverse(self) -> "ResidueScalar":
        """The p-th root, x -> x^(p^(h-1))."""
        return self ** (self.p ** (self.h - 1))


def _poly_mul_reduce(a, b, modulus_p, h, rel, coeff_mod):
    """Multiply coefficient vectors and reduce by g^h = rel, mod coeff_mod."""
    if h == 1:
        return ((a[0] * b[0]) % coeff_mod,)
    prod = [0] * (2 * h - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            prod[i + j] += ai * bj
    for k in range(2 * h - 2, h - 1, -1):
        c = prod[k]
        if c:
            prod[k] = 0
            for i, ri in enumerate(rel):
                prod[k - h + i] += c * ri
    return tuple(c % coeff_mod for c in prod[:h])


@dataclass(frozen=True)
class PadicScalar:
    """An element of W(F_q)/p^N, coefficients reduced into [0, p^N)."""

    p: int
    h: int
    N: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        _check_prime(self.p)
        if self.h < 1 or self.N < 1:
            raise ParameterError("need h >= 1 and N >= 1")
        if len(self.coeffs) != self.h:
            raise ParameterError("coefficient vector length must equal h")
        q = self.p**self.N
        if any(not 0 <= c < q for c in self.coeffs):
            raise ParameterError("coefficients must be reduced mod p^N")

    @staticmethod
    def from_int(p: int, h: int, N: int, n: int) -> "PadicScalar":
        return PadicScalar(p, h, N, (n % p**N,) + (0,) * (h - 1))

    @staticmethod
    def from_coeffs(p: int, h: int, N: int, coeffs) -> "PadicScalar":
        q = p**N
        cs = tuple(int(c) % q for c in coeffs)
        if len(cs) < h:
            cs = cs + (0,) * (h - len(cs))
        return PadicScalar(p, h, N, cs)

    @staticmethod
    def zero(p: int, h: int, N: int) -> "PadicScalar":
        return PadicScalar.from_int(p, h, N, 0)

    @staticmethod
    def one(p: int, h: int, N: int) -> "PadicScalar":
        return PadicScalar.from_int(p, h, N, 1)

    @staticmethod
    def generator(p: int, h: int, N: int) -> "PadicScalar":
        if h == 1:
            return PadicScalar.one(p, 1, N)
        return PadicScalar(p, h, N, (0, 1) + (0,) * (h - 2))

    @property
    def modulus(self) -> int:
        return self.p**self.N

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def _match(self, other: "PadicScalar") -> None:
        if (self.p, self.h, self.N) != (other.p, other.h, other.N):
            raise ParameterError(
                f"scalar parameters differ: {(self.p, self.h, self.N)} vs "
                f"{(other.p, other.h, other.N)}"
            )

    def __add__(self, other: "PadicScalar") -> "PadicScalar":
        self._match(other)
        m = self.modulus
        return PadicScalar(
            self.p, self.h, self.N,
            tuple((a + b) % m for a, b in zip(self.coeffs, other.coeffs)),
        )

    def __neg__(self) -> "PadicScalar":
        m = self.modulus
        return PadicScalar(self.p, self.h, self.N, tuple((-a) % m for a in self.coeffs))

    def __sub__(self, other: "PadicScalar") -> "PadicScalar":
        return self + (-other)

    def __mul__(self, other: "PadicScalar") -> "PadicScalar":
        self._match(other)
        return PadicScalar(
            self.p, self.h, self.N,
            _poly_mul_reduce(self.coeffs, other.coeffs, self.p, self.h,
                             defining_relation(self.p, self.h), self.modulus),
        )

    def scale(self, n: int) -> "PadicScalar":
        m = self.modulus
        return PadicScalar(self.p, self.h, self.N,
                           tuple((n * a) % m for a in self.coeffs))

    def __pow__(self, n: int) -> "PadicScalar":
        if n < 0:
            return self.invert_unit() ** (-n)
        result = PadicScalar.one(self.p, self.h, self.N)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def valuation(self) -> Valuation:
        """p-adic valuation, censored at the precision floor N."""
        if self.is_zero:
            return Valuation.infinite(floor=self.N)
        v = self.N
        for c in self.coeffs:
            if c == 0:
                continue
            w = 0
            while c % self.p == 0:
                c //= self.p
                w += 1
            v = min(v, w)
        return Valuation.finite(v)

    def residue(self) -> ResidueScalar:
        return ResidueScalar(self.p, self.h, tuple(c % self.p for c in self.coeffs))

    def is_unit(self) -> bool:
        return not self.residue().is_zero

    def invert_unit(self) -> "PadicScalar":
        """Inverse of a unit, by Hensel lifting the residue inverse."""
        if not self.is_unit():
            raise ZeroDivisionError("not a unit in W(F_q)/p^N")
        r = self.residue().inverse()
        x = lift_residue(r, self.N)
        one = PadicScalar.one(self.p, self.h, self.N)
        two = PadicScalar.from_int(self.p, self.h, self.N, 2)
        for _ in range(self.N.bit_length() + 2):
            err = one - self * x
            if err.is_zero:
                break
            x = x * (two - self * x)
        return x

    def divide_by_p(self, k: int = 1) -> "PadicScalar":
        """Exact division by p^k; the result is only meaningful mod p^(N-k)."""
        pk = self.p**k
        if any(c % pk != 0 for c in self.coeffs):
            raise ParameterError(f"element not divisible by p^{k}")
        return PadicScalar(self.p, self.h, self.N, tuple(c // pk for c in self.coeffs))

    def divide_exact(self, other: "PadicScalar") -> "PadicScalar":
        """Division a/b when b = p^k * unit and p^k | a; exact mod p^(N-k)."""
        bv = other.valuation()
        if bv.is_infinite:
            raise ZeroDivisionError("divisor indistinguishable from 0")
        k = int(bv.value)
        unit = other.divide_by_p(k)
        return (self * unit.invert_unit()).divide_by_p(k)

    def with_precision(self, N: int) -> "PadicScalar":
        """Re-embed via canonical integer representatives (lossy if N < self.N)."""
        m = self.p**N
        return PadicScalar(self.p, self.h, N, tuple(c % m for c in self.coeffs))

    def __repr__(self) -> str:
        if self.h == 1:
            return f"{self.coeffs[0]} (mod {self.p}^{self.N})"
        return f"{list(self.coeffs)}@g (mod {self.p}^{self.N})"


def lift_residue(r: ResidueScalar, N: int) -> PadicScalar:
    """The naive coefficient-wise lift F_q -> W(F_q)/p^N."""
    return PadicScalar(r.p, r.h, N, tuple(r.coeffs))


@lru_cache(maxsize=None)
def _frobenius_generator_image(p: int, h: int, N: int) -> PadicScalar:
    """The root of the defining polynomial congruent to g^p mod p.

    Newton iteration on f(x) = x^h - rel(x); f'(s) is a unit because f is
    separable mod p.
    """
    rel = defining_relation(p, h)
    g = PadicScalar.generator(p, h, N)

    def f(s: PadicScalar) -> PadicScalar:
        acc = s**h
        for i, ri in enumerate(rel):
            acc = acc - (s**i).scale(ri)
        return acc

    def fprime(s: PadicScalar) -> PadicScalar:
        acc = (s ** (h - 1)).scale(h)
        for i, ri in enumerate(rel):
            if i >= 1:
                acc = acc - (s ** (i - 1)).scale(i * ri)
        return acc

    s = g**p
    for _ in range(N.bit_length() + 2):
        fs = f(s)
        if fs.is_zero:
            break
        s = s - fs * fprime(s).invert_unit()
    if not f(s).is_zero:
        raise ParameterError("Frobenius lift iteration failed to converge")
    return s


def scalar_frobenius(a: PadicScalar) -> PadicScalar:
    """The Witt-vector Frobenius on W(F_q)/p^N (identity when h = 1)."""
    if a.h == 1:
        return a
    s = _frobenius_generator_image(a.p, a.h, a.N)
    acc = PadicScalar.zero(a.p, a.h, a.N)
    power = PadicScalar.one(a.p, a.h, a.N)
    for c in a.coeffs:
        acc = acc + power.scale(c)
        power = power * s
    return acc


def scalar_frobenius_inverse(a: PadicScalar) -> PadicScalar:
    """sigma^(h-1), the inverse of the Frobenius automorphism."""
    for _ in range(a.h - 1):
        a = scalar_frobenius(a)
    return a


def teichmuller_lift(r: ResidueScalar, N: int) -> PadicScalar:
    """The multiplicative lift [r]: the unique root of x^q = x above r."""
    q = r.p**r.h
    t = lift_residue(r, N)
    for _ in range(N - 1):
        t = t**q
    return t


def teichmuller_digits(a: PadicScalar) -> list[ResidueScalar]:
    """Digits (a_0, ..., a_(N-1)) with a = sum p^n [a_n] mod p^N."""
    digits = []
    x = a
    for n in range(a.N):
        d = x.residue()
        digits.append(d)
        x = (x - teichmuller_lift(d, a.N)).divide_by_p()
    return digits


def from_teichmuller_digits(p: int, h: int, N: int,
                            digits: list[ResidueScalar]) -> PadicScalar:
    acc = PadicScalar.zero(p, h, N)
    for n, d in enumerate(digits[:N]):
        acc = acc + teichmuller_lift(d, N).scale(p**n)
    return acc


def scalar_arith(a: PadicScalar, b: PadicScalar, op: str) -> PadicScalar:
    """Dispatch used by the CLI surface: op in {add, sub, mul}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ParameterError(f"unknown scalar op {op!r}")


def scalar_val(a: PadicScalar) -> Valuation:
    return a.valuation()
