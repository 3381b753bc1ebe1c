"""Cyclotomic and Lubin-Tate towers: ramification data, norm maps,
norm-defect bounds, and field-of-norms arithmetic.

Levels are indexed so that K_j has uniformizer u_j with rel(u_(j+1)) = u_j,
where rel(X) = (1+X)^p - 1 for the cyclotomic tower over Q_p and
rel(X) = pX + X^q for the Lubin-Tate tower over the unramified field of
degree h (q = p^h).  The minimal polynomial of u_j over the base is the
level-j "cyclotomic polynomial" analogue; both families have integer
coefficients, so all level arithmetic happens in K[X]/(f_j) with exact
truncated scalars.

The expected ramification picture comes from the unit filtration of the
Galois group (units congruent to 1 mod p^m), giving upper breaks at the
integers and the Herbrand function with slope (q-1) q^(m-1) on (m-1, m].
Every reported break is cross-checked at low levels by computing
v(gamma(u_j) - u_j) directly through the group action.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .actions import berger_action, lubin_tate_series, plain_action
from .scalars import (
    PadicScalar,
    ParameterError,
    ResidueScalar,
    Valuation,
    teichmuller_digits,
    teichmuller_lift,
)

ZERO = Fraction(0)


class IntegrityError(ValueError):
    """A predicted invariant disagreed with its direct computation."""


@dataclass(frozen=True)
class TowerSpec:
    kind: str  # cyclotomic | lubin_tate
    p: int
    J: int
    N: int
    h: int = 1

    def __post_init__(self):
        if self.kind not in ("cyclotomic", "lubin_tate"):
            raise ParameterError(f"unknown tower kind {self.kind!r}")
        if self.kind == "cyclotomic" and self.h != 1:
            raise ParameterError("the cyclotomic tower has h = 1")
        if self.J < 1:
            raise ParameterError("need at least levels 0 and 1")

    @property
    def q(self) -> int:
        return self.p**self.h

    def degree(self, j: int) -> int:
        """[K_j : K] = q^j (q - 1)."""
        return self.q**j * (self.q - 1) if self.q > 2 else self.q**j

    def rel_index(self, j: int) -> int:
        """[K_(j+1) : K_j] = q for j >= 0."""
        return self.q


def _poly_mul_trunc(a, b, zero):
    out = [zero] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai.is_zero:
            continue
        for j, bj in enumerate(b):
            if not bj.is_zero:
                out[i + j] = out[i + j] + ai * bj
    return out


@lru_cache(maxsize=None)
def tower_polynomials(kind: str, p: int, h: int, J: int) -> tuple[tuple[int, ...], ...]:
    """Integer coefficient lists of the level minimal polynomials f_j.

    cyclotomic: f_j(X) = sum_{i<p} (1+X)^(i p^j); lubin_tate:
    f_j(X) = p + g_j(X)^(q-1) with g_(j+1) = p g_j + g_j^q, g_0 = X.
    """
    q = p**h
    out = []
    if kind == "cyclotomic":
        for j in range(J + 1):
            acc = {}
            for i in range(p):
                e = i * p**j
                from math import comb
                for k in range(e + 1):
                    acc[k] = acc.get(k, 0) + comb(e, k)
            deg = max(acc)
            out.append(tuple(acc.get(k, 0) for k in range(deg + 1)))
        # f_0 for p = 2 is X + 2, degree 1: the level-0 field is the base
        return tuple(out)
    g = [0, 1]
    for j in range(J + 1):
        # f_j = p + g^(q-1)
        gq = [1]
        for _ in range(q - 1):
            acc = [0] * (len(gq) + len(g) - 1)
            for i, ai in enumerate(gq):
                if ai:
                    for k, bk in enumerate(g):
                        acc[i + k] += ai * bk
            gq = acc
        f = list(gq)
        f[0] += p
        out.append(tuple(f))
        # g <- p g + g^q
        nxt = [0] * (len(gq) + len(g) - 1)
        for i, ai in enumerate(gq):
            if ai:
                for k, bk in enumerate(g):
                    nxt[i + k] += ai * bk
        for i, ai in enumerate(g):
            nxt[i] += p * ai
        g = nxt
    return tuple(out)


@dataclass(frozen=True)
class TowerElement:
    """An element of K_j as a polynomial in u_j of degree < [K_j : K]."""

    spec: TowerSpec
    level: int
    coeffs: tuple[PadicScalar, ...]

    def __post_init__(self):
        d = self.spec.degree(self.level)
        if len(self.coeffs) != d:
            raise ParameterError(f"level-{self.level} elements have degree < {d}")

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.coeffs)

    def _match(self, other: "TowerElement"):
        if self.spec != other.spec or self.level != other.level:
            raise ParameterError("tower elements at different levels")

    def __add__(self, other):
        self._match(other)
        return TowerElement(self.spec, self.level,
                            tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return TowerElement(self.spec, self.level, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._match(other)
        zero = _scalar_zero(self.spec)
        prod = _poly_mul_trunc(list(self.coeffs), list(other.coeffs), zero)
        return TowerElement(self.spec, self.level,
                            _reduce_mod_level(self.spec, self.level, prod))

    def __pow__(self, n: int):
        result = tower_one(self.spec, self.level)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c: PadicScalar) -> "TowerElement":
        return TowerElement(self.spec, self.level,
                            tuple(a * c for a in self.coeffs))


def _scalar_zero(spec: TowerSpec) -> PadicScalar:
    return PadicScalar.zero(spec.p, spec.h, spec.N)


def _scalar_one(spec: TowerSpec) -> PadicScalar:
    return PadicScalar.one(spec.p, spec.h, spec.N)


def _level_poly(spec: TowerSpec, j: int) -> list[PadicScalar]:
    ints = tower_polynomials(spec.kind, spec.p, spec.h, spec.J)[j]
    return [PadicScalar.from_int(spec.p, spec.h, spec.N, c) for c in ints]


def _reduce_mod_level(spec: TowerSpec, j: int, poly: list[PadicScalar]):
    f = _level_poly(spec, j)
    d = len(f) - 1
    work = list(poly)
    for k in range(len(work) - 1, d - 1, -1):
        c = work[k]
        if c.is_zero:
            continue
        work[k] = _scalar_zero(spec)
        for i in range(d):
            work[k - d + i] = work[k - d + i] - c * f[i]
    work = work[:d] + [_scalar_zero(spec)] * max(0, d - len(work))
    return tuple(work[:d])


def tower_zero(spec: TowerSpec, j: int) -> TowerElement:
    return TowerElement(spec, j, (_scalar_zero(spec),) * spec.degree(j))


def tower_one(spec: TowerSpec, j: int) -> TowerElement:
    z = [_scalar_zero(spec)] * spec.degree(j)
    z[0] = _scalar_one(spec)
    return TowerElement(spec, j, tuple(z))


def tower_scalar(spec: TowerSpec, j: int, c: PadicScalar | int) -> TowerElement:
    if isinstance(c, int):
        c = PadicScalar.from_int(spec.p, spec.h, spec.N, c)
    z = [_scalar_zero(spec)] * spec.degree(j)
    z[0] = c
    return TowerElement(spec, j, tuple(z))


def tower_uniformizer(spec: TowerSpec, j: int) -> TowerElement:
    d = spec.degree(j)
    if d == 1:
        # degenerate level (q = 2, j = 0): f_0 is linear, u_0 is its root
        c0 = tower_polynomials(spec.kind, spec.p, spec.h, spec.J)[j][0]
        return tower_scalar(spec, j, -c0)
    z = [_scalar_zero(spec)] * d
    z[1] = _scalar_one(spec)
    return TowerElement(spec, j, tuple(z))


def tower_from_poly(spec: TowerSpec, j: int, coeffs) -> TowerElement:
    out = [_scalar_zero(spec)] * spec.degree(j)
    for i, c in enumerate(coeffs):
        if isinstance(c, int):
            c = PadicScalar.from_int(spec.p, spec.h, spec.N, c)
        out[i] = c
    return TowerElement(spec, j, tuple(out))


def _rel_image(spec: TowerSpec, j_plus: int) -> TowerElement:
    """rel(u_(j+1)) = u_j as an element of K_(j+1)."""
    u = tower_uniformizer(spec, j_plus)
    if spec.kind == "cyclotomic":
        one = tower_one(spec, j_plus)
        return (one + u) ** spec.p - one
    return u.scale(PadicScalar.from_int(spec.p, spec.h, spec.N, spec.p)) + u ** spec.q


def include_up(x: TowerElement) -> TowerElement:
    """The inclusion K_j -> K_(j+1), substituting u_j = rel(u_(j+1))."""
    spec, j = x.spec, x.level
    if j + 1 > spec.J:
        raise ParameterError("level overflow")
    img = _rel_image(spec, j + 1)
    acc = tower_zero(spec, j + 1)
    for c in reversed(x.coeffs):
        acc = acc * img + tower_scalar(spec, j + 1, c)
    return acc


def _relative_rewrite(y: TowerElement):
    """Rewrite a level-(j+1) element as sum_t b_t Y^t with b_t in K_j,
    Y = u_(j+1), t < q: the coordinates for the relative norm."""
    spec, j1 = y.spec, y.level
    j = j1 - 1
    e = spec.rel_index(j)
    u_j = tower_uniformizer(spec, j)
    # reduction data: Y^e = u_j - lower(Y), lower from rel(Y) - Y^e
    if spec.kind == "cyclotomic":
        from math import comb
        lower = [comb(spec.p, i) for i in range(spec.p)]
        lower[0] = 0  # (1+Y)^p - 1 has no constant term
    else:
        lower = [0] * e
        lower[1] = spec.p
    # rows[k][t] in K_j: Y^k = sum_t rows[k][t] Y^t mod (rel(Y) - u_j)
    rows = []
    for k in range(e):
        row = [tower_zero(spec, j) for _ in range(e)]
        row[k] = tower_one(spec, j)
        rows.append(row)
    top = [tower_zero(spec, j) for _ in range(e)]
    top[0] = u_j
    for i, c in enumerate(lower):
        if c and i < e:
            top[i] = top[i] - tower_scalar(spec, j, c)
    rows.append(top)  # Y^e
    d1 = spec.degree(j1)
    while len(rows) < d1:
        prev = rows[-1]
        nxt = [tower_zero(spec, j) for _ in range(e)]
        for t in range(e - 1):
            nxt[t + 1] = nxt[t + 1] + prev[t]
        lead = prev[e - 1]
        if not lead.is_zero:
            for t in range(e):
                nxt[t] = nxt[t] + lead * rows[e][t]
        rows.append(nxt)
    out = [tower_zero(spec, j) for _ in range(e)]
    for k, c in enumerate(y.coeffs):
        if c.is_zero:
            continue
        for t in range(e):
            out[t] = out[t] + rows[k][t].scale(c)
    return out


def tower_norm(y: TowerElement) -> TowerElement:
    """Norm K_(j+1) -> K_j as the determinant of multiplication by y on the
    relative basis 1, Y, ..., Y^(q-1) (a resultant in matrix form)."""
    spec, j1 = y.spec, y.level
    if j1 < 1:
        raise ParameterError("already at the bottom level")
    j = j1 - 1
    e = spec.rel_index(j)
    coords = _relative_rewrite(y)
    # multiplication matrix: column t = coordinates of y * Y^t
    d1 = spec.degree(j1)
    u1 = tower_uniformizer(spec, j1)
    cols = []
    current = y
    for t in range(e):
        cols.append(_relative_rewrite(current))
        if t < e - 1:
            current = current * u1
    import itertools
    acc = tower_zero(spec, j)
    for perm in itertools.permutations(range(e)):
        sign = 1
        seen = [False] * e
        for i in range(e):
            if seen[i]:
                continue
            k, ln = i, 0
            while not seen[k]:
                seen[k] = True
                k = perm[k]
                ln += 1
            if ln % 2 == 0:
                sign = -sign
        piece = tower_one(spec, j)
        for t in range(e):
            piece = piece * cols[t][perm[t]]
        acc = acc + (piece if sign > 0 else -piece)
    return acc


def norm_to_base(x: TowerElement) -> PadicScalar:
    """Norm all the way down to K (a scalar)."""
    spec = x.spec
    y = x
    while y.level > 0:
        y = tower_norm(y)
    # level 0: determinant of multiplication on K_0 over K
    d = spec.degree(0)
    if d == 1:
        return y.coeffs[0]
    cols = []
    u = tower_uniformizer(spec, 0)
    current = y
    for t in range(d):
        cols.append(list(current.coeffs))
        if t < d - 1:
            current = current * u
    import itertools
    acc = _scalar_zero(spec)
    for perm in itertools.permutations(range(d)):
        sign = 1
        seen = [False] * d
        for i in range(d):
            if seen[i]:
                continue
            k, ln = i, 0
            while not seen[k]:
                seen[k] = True
                k = perm[k]
                ln += 1
            if ln % 2 == 0:
                sign = -sign
        piece = _scalar_one(spec)
        for t in range(d):
            piece = piece * cols[t][perm[t]]
        acc = acc + piece.scale(sign)
    return acc


def tower_valuation(x: TowerElement) -> Valuation:
    """v(x) normalized so v(K^*) = Z.

    K_j/K is totally ramified with v(u_j) = 1/e_j and unramified-integer
    coefficient valuations, so the powers u^i (i < e_j) form a valuation
    basis: v(x) = min_i (v_p(c_i) + i/e_j), the fractional parts never
    cancel.  This reads small valuations without norming them up to
    precision-breaking p-powers; v_p(Norm(x)) = [K_j:K] v(x) is kept as the
    cross-check route on small cases.
    """
    if x.is_zero:
        return Valuation.infinite(floor=Fraction(x.spec.N))
    e = x.spec.degree(x.level)
    best = None
    for i, c in enumerate(x.coeffs):
        v = c.valuation()
        if v.is_infinite:
            continue
        cand = v.value + Fraction(i, e)
        best = cand if best is None or cand < best else best
    if best is None:
        return Valuation.infinite(floor=Fraction(x.spec.N))
    return Valuation.finite(best)


def tower_valuation_via_norm(x: TowerElement) -> Valuation:
    """Reference route: v_p(Norm_(K_j/K) x) / [K_j : K] (small cases only)."""
    if x.is_zero:
        return Valuation.infinite(floor=Fraction(x.spec.N))
    n = norm_to_base(x)
    v = n.valuation()
    d = x.spec.degree(x.level)
    if v.is_infinite:
        return Valuation.infinite(
            floor=None if v.floor is None else v.floor / d)
    return Valuation.finite(v.value / d)


# ---------------------------------------------------------------------------
# the Galois action on levels


def _lt_coefficients(spec: TowerSpec, a: PadicScalar | int, cap: int):
    action = berger_action(spec.p, spec.h, spec.N) if spec.h > 1 else \
        berger_action(spec.p, 1, spec.N)
    series = lubin_tate_series(action, a, cap=cap)
    coeffs = {}
    for exps, c in series.terms.items():
        coeffs[int(exps[0])] = c
    return coeffs


def gamma_on_level(spec: TowerSpec, j: int, a: PadicScalar | int) -> TowerElement:
    """The action of the group element with character value a on u_j.

    cyclotomic: u -> (1+u)^a - 1 with a an integer representative mod
    p^(j+1).  lubin_tate: u -> [a](u), the Lubin-Tate series evaluated at
    u_j, truncated where terms fall below the working precision.
    """
    u = tower_uniformizer(spec, j)
    if spec.kind == "cyclotomic":
        if not isinstance(a, int):
            raise ParameterError("cyclotomic characters are integers")
        a = a % spec.p ** (j + 1)
        one = tower_one(spec, j)
        return (one + u) ** a - one
    e_j = spec.degree(j)
    cap = spec.N * e_j + 1
    coeffs = _lt_coefficients(spec, a, cap)
    acc = tower_zero(spec, j)
    u_pow = tower_one(spec, j)
    for k in range(1, cap + 1):
        u_pow = u_pow * u
        if k in coeffs:
            acc = acc + u_pow.scale(coeffs[k])
        if u_pow.is_zero:
            break
    return acc


def gamma_on_element(spec: TowerSpec, x: TowerElement, a) -> TowerElement:
    """Extend the action to K_j by acting on the uniformizer."""
    img = gamma_on_level(spec, x.level, a)
    acc = tower_zero(spec, x.level)
    for c in reversed(x.coeffs):
        acc = acc * img + tower_scalar(spec, x.level, c)
    return acc


# ---------------------------------------------------------------------------
# ramification data


@dataclass(frozen=True)
class RamificationData:
    spec: TowerSpec
    breaks: tuple[Fraction, ...]         # upper numbering i_j
    lower_breaks: tuple[Fraction, ...]   # i'_j = psi(i_j)
    psi_breakpoints: tuple[tuple[Fraction, Fraction], ...]
    indices: tuple[int, ...]             # [K_(j+1) : K_j]
    relative_breaks: tuple[int, ...]     # i(K_(j+1)/K_j), computed directly
    c_estimate: Fraction
    c_levels_used: tuple[int, ...]
    crosscheck: tuple[tuple[int, Fraction, Fraction], ...]  # (m, got, expected)

    def to_json(self) -> dict:
        def fr(x):
            return [x.numerator, x.denominator]
        return {
            "kind": self.spec.kind, "p": self.spec.p, "h": self.spec.h,
            "J": self.spec.J,
            "breaks": [fr(b) for b in self.breaks],
            "lower_breaks": [fr(b) for b in self.lower_breaks],
            "psi_breakpoints": [[fr(a), fr(b)] for a, b in self.psi_breakpoints],
            "indices": list(self.indices),
            "relative_breaks": list(self.relative_breaks),
            "c_estimate": fr(self.c_estimate),
            "c_levels_used": list(self.c_levels_used),
            "crosscheck": [[m, fr(g), fr(e)] for m, g, e in self.crosscheck],
        }


def herbrand_psi(spec: TowerSpec, v: Fraction) -> Fraction:
    """psi(v) = integral of [G0 : G^t] dt with the unit-filtration slopes
    (q-1) q^(m-1) on (m-1, m]."""
    v = Fraction(v)
    if v <= 0:
        return v
    q = spec.q
    acc = ZERO
    m = 1
    left = ZERO
    while True:
        right = Fraction(m)
        slope = (q - 1) * q ** (m - 1)
        if v <= right:
            return acc + slope * (v - left)
        acc += slope * (right - left)
        left = right
        m += 1


def _tame_generator(spec: TowerSpec):
    """A generator of the prime-to-p part of the character group."""
    if spec.h == 1:
        for g in range(2, spec.p):
            seen, x = set(), 1
            for _ in range(spec.p - 1):
                x = x * g % spec.p
                seen.add(x)
            if len(seen) == spec.p - 1:
                return g
        return None
    gen = ResidueScalar.generator(spec.p, spec.h)
    return teichmuller_lift(gen, spec.N)


def ramification_data(spec: TowerSpec, crosscheck_level: int | None = None) -> RamificationData:
    """Predicted breaks from the unit filtration, verified directly.

    The direct check computes v_(K_j)(gamma_m(u_j) - u_j) for the depth-m
    congruence generators gamma_m at a low level j; Serre's lemma makes
    this psi(m) + 1 exactly.  Disagreement raises IntegrityError.
    """
    q = spec.q
    J = spec.J
    offset = 1 if q == 2 else 0  # no tame part: the first break moves up
    breaks = tuple(Fraction(j + offset) for j in range(J + 1))
    lower = tuple(herbrand_psi(spec, b) for b in breaks)
    corners = [(ZERO, ZERO)]
    for m in range(1, J + 2):
        corners.append((Fraction(m), herbrand_psi(spec, Fraction(m))))
    indices = tuple(spec.rel_index(j) for j in range(J))

    j = crosscheck_level if crosscheck_level is not None else min(2, J)
    checks = []
    e_j = spec.degree(j)
    u = tower_uniformizer(spec, j)
    ms = range(0 if q > 2 else 1, j + 1)
    for m in ms:
        if m == 0:
            a = _tame_generator(spec)
        else:
            a = 1 + spec.p**m
        moved = gamma_on_element(spec, u, a)
        diff = moved - u
        v = tower_valuation(diff)
        expected = herbrand_psi(spec, Fraction(m)) + 1
        if v.is_infinite:
            raise IntegrityError(
                f"break check at depth {m}: difference vanished at precision")
        got = v.value * e_j  # v_(K_j) is e_j times the normalized valuation
        checks.append((m, got, expected))
        if got != expected:
            raise IntegrityError(
                f"break mismatch at depth {m}: direct {got} vs predicted {expected}")

    # relative breaks i(K_(j+1)/K_j) computed directly at each level
    rel_breaks = []
    levels = []
    for jj in range(J):
        e_next = spec.degree(jj + 1)
        u_next = tower_uniformizer(spec, jj + 1)
        a = 1 + spec.p ** (jj + 1)
        moved = gamma_on_element(spec, u_next, a)
        v = tower_valuation(moved - u_next)
        if v.is_infinite:
            raise IntegrityError(f"relative break at level {jj} fell below precision")
        rel_breaks.append(int(v.value * e_next) - 1)
        levels.append(jj)

    c_terms = [Fraction(spec.p - 1, spec.p) *
               Fraction(rel_breaks[jj] * spec.degree(0), spec.degree(jj + 1))
               for jj in range(J)]
    c_estimate = min(c_terms)
    return RamificationData(spec, breaks, lower, tuple(corners), indices,
                            tuple(rel_breaks), c_estimate, tuple(levels),
                            tuple(checks))


def strict_apf_constant(spec: TowerSpec,
                        data: RamificationData | None = None) -> Fraction:
    """Finite-range estimate of the liminf constant; labeled an estimate,
    asserted positive."""
    if data is None:
        data = ramification_data(spec)
    if data.c_estimate <= 0:
        raise IntegrityError("the strict-APF constant estimate is not positive")
    return data.c_estimate


# ---------------------------------------------------------------------------
# norm defect, lifts, field of norms


def norm_defect_check(y: TowerElement, c_estimate: Fraction):
    """v(Norm(y) - y^q) - (p/(p-1)) c, with verdict margin >= 0."""
    spec = y.spec
    ny = tower_norm(y)
    diff = include_up(ny) - y ** spec.rel_index(y.level - 1)
    bound = Fraction(spec.p, spec.p - 1) * c_estimate
    v = tower_valuation(diff)
    if v.is_infinite:
        if v.floor is not None and v.floor >= bound:
            return Valuation.infinite(floor=v.floor - bound), True
        return Valuation.infinite(floor=v.floor), None
    margin = Valuation.finite(v.value - bound)
    return margin, margin.value >= 0


def _digit_root_scalar(c: PadicScalar) -> PadicScalar:
    """Teichmuller digits replaced by their p-th roots (transport map)."""
    digits = [d.frobenius_inverse() for d in teichmuller_digits(c)]
    acc = PadicScalar.zero(c.p, c.h, c.N)
    for n, d in enumerate(digits):
        acc = acc + teichmuller_lift(d, c.N).scale(c.p**n)
    return acc


def approx_norm_lift(x: TowerElement, c_estimate: Fraction):
    """A y one level up with v(Norm(y) - x) >= c.

    Candidate: transport the polynomial to u_(j+1), taking digit-wise p-th
    roots of the coefficients.  The defect is measured exactly; the lemma
    guarantees such a y exists, so falling short signals a precision or
    window shortfall and is reported as an error.
    """
    spec, j = x.spec, x.level
    if j + 1 > spec.J:
        raise ParameterError("no room above the top level")
    coeffs = [_digit_root_scalar(c) for c in x.coeffs]
    d_up = spec.degree(j + 1)
    up = [PadicScalar.zero(spec.p, spec.h, spec.N)] * d_up
    for i, c in enumerate(coeffs):
        up[i] = c
    y = TowerElement(spec, j + 1, tuple(up))
    defect = tower_valuation(tower_norm(y) - x)
    ok = defect.is_infinite or defect.value >= c_estimate
    if not ok:
        raise IntegrityError(
            f"norm lift defect {defect} fell short of c = {c_estimate}; "
            "precision or window shortfall")
    return y, defect


@dataclass(frozen=True)
class NormFieldElement:
    """A norm-compatible vector (x_j), j = 0..J, within stated tolerance."""

    levels: tuple[TowerElement, ...]

    @property
    def spec(self) -> TowerSpec:
        return self.levels[0].spec

    def compatibility_margins(self):
        out = []
        for j in range(len(self.levels) - 1):
            d = tower_norm(self.levels[j + 1]) - self.levels[j]
            out.append(tower_valuation(d))
        return out


def uniformizer_system(spec: TowerSpec) -> NormFieldElement:
    return NormFieldElement(tuple(tower_uniformizer(spec, j)
                                  for j in range(spec.J + 1)))


def teichmuller_system(spec: TowerSpec, r: ResidueScalar) -> NormFieldElement:
    c = teichmuller_lift(r, spec.N)
    return NormFieldElement(tuple(tower_scalar(spec, j, c)
                                  for j in range(spec.J + 1)))


def one_system(spec: TowerSpec) -> NormFieldElement:
    return NormFieldElement(tuple(tower_one(spec, j) for j in range(spec.J + 1)))


def norm_field_arith(a: NormFieldElement, b: NormFieldElement, op: str,
                     depth: int = 1):
    """Componentwise mul; add by norm-descending from depth levels above.

    Returns (result, stabilization) where stabilization[j] logs
    v(stage_d - stage_(d-1)) for d = 1..depth at level j; the sequence must
    be increasing for the limit formula to make sense at this precision.
    """
    spec = a.spec
    if op == "mul":
        return NormFieldElement(tuple(x * y for x, y in zip(a.levels, b.levels))), {}
    if op != "add":
        raise ParameterError(f"unknown norm-field op {op!r}")
    if depth < 1:
        raise ParameterError("depth must be at least 1")
    levels = []
    stab: dict[int, list] = {}
    for j in range(spec.J + 1):
        top = min(spec.J, j + depth)
        stages = []
        for d in range(top - j + 1):
            s = a.levels[j + d] + b.levels[j + d]
            for _ in range(d):
                s = tower_norm(s)
            stages.append(s)
        log = []
        for d in range(1, len(stages)):
            log.append(tower_valuation(stages[d] - stages[d - 1]))
        stab[j] = log
        levels.append(stages[-1])
    return NormFieldElement(tuple(levels)), stab


def perfectoid_surjectivity_check(spec: TowerSpec, x: TowerElement,
                                  t_val: Fraction):
    """Find y one level up with y^p = x mod t, v(t) = t_val.

    The transport candidate followed by the q/p power supplies y; returns
    (y, margin, verdict).
    """
    j = x.level
    coeffs = [_digit_root_scalar(c) for c in x.coeffs]
    d_up = spec.degree(j + 1)
    up = [PadicScalar.zero(spec.p, spec.h, spec.N)] * d_up
    for i, c in enumerate(coeffs):
        up[i] = c
    y = TowerElement(spec, j + 1, tuple(up)) ** (spec.q // spec.p)
    diff = y ** spec.p - include_up(x)
    v = tower_valuation(diff)
    if v.is_infinite:
        return y, v, True
    return y, v, v.value >= t_val
