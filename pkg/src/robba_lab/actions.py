"""Plain and enhanced q-power Frobenius lifts and their operator families.

Two preset actions are provided.

* ``cyclotomic_ab`` (coefficients Z_p, q = p): the lift sends pi to
  (1+pi)^p - 1 and T_i to T_i^p.  The operator group is Z_p^x semidirect
  Z_p^n: a unit gamma sends pi to (1+pi)^gamma - 1 and fixes the T_i; a
  translation c in the i-th factor sends T_i to (1+pi)^c T_i.

* ``lubin_tate_berger`` (coefficients W(F_q), q = p^h): h invertible
  variables Y_0..Y_(h-1).  phi_p shifts Y_i to Y_(i+1), sends Y_(h-1) to
  [p](Y_0) for the formal module with [p](T) = pT + T^q, and acts on
  coefficients by the p-power Frobenius; the q-power lift is phi = phi_p^h.
  A unit u in the i-th group factor sends Y_i to [u](Y_i).

Group elements keep exact coordinates (integers, or scalars carried at a
boosted precision) so that powers like gamma^(p^m) are computed exactly
and applied once, never by iterating a truncated substitution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .scalars import (
    PadicScalar,
    ParameterError,
    Valuation,
    scalar_frobenius,
)
from .series import (
    DaggerSeries,
    NotInvertibleError,
    RingDescriptor,
    ab_ring,
    berger_ring,
    default_ring,
    invert_series,
)

ZERO = Fraction(0)


class DepthNotFoundError(ValueError):
    """No congruence depth within the search bound met the margin target."""


def integer_binomial(n: int, i: int) -> int:
    """C(n, i) for any integer n >= 0 or < 0, exactly."""
    if i < 0:
        raise ParameterError("binomial index must be nonnegative")
    num = 1
    for k in range(i):
        num *= n - k
    den = 1
    for k in range(2, i + 1):
        den *= k
    q, rem = divmod(num, den)
    assert rem == 0
    return q


# ---------------------------------------------------------------------------
# action specifications and group elements


@dataclass(frozen=True)
class ActionSpec:
    kind: str  # plain | cyclotomic_ab | lubin_tate_berger
    ring: RingDescriptor
    q: int
    lt_cap: int = 24        # degree cap for Lubin-Tate expansions
    series_cap: int = 32    # degree cap for binomial expansions
    guard_digits: int = 2   # precision buffer on group coordinates

    def __post_init__(self):
        if self.kind not in ("plain", "cyclotomic_ab", "lubin_tate_berger"):
            raise ParameterError(f"unknown action kind {self.kind!r}")
        if self.q != self.ring.p**self.ring.h:
            raise ParameterError("q must equal p^h for the descriptor")

    @property
    def p(self) -> int:
        return self.ring.p

    def generators(self) -> list[DaggerSeries]:
        return [DaggerSeries.variable(self.ring, i) for i in range(self.ring.nvars)]


def plain_action(p: int, N: int, nvars_T: int = 0, nvars_U: int = 0,
                 h: int = 1) -> ActionSpec:
    """The monomial q-power lift: every variable goes to its q-th power."""
    return ActionSpec("plain", default_ring(p, h, N, nvars_T, nvars_U), p**h)


def ab_action(p: int, N: int, nvars_T: int = 1, reach: int = 64, **kw) -> ActionSpec:
    return ActionSpec("cyclotomic_ab", ab_ring(p, N, nvars_T, reach=reach), p, **kw)


def berger_action(p: int, h: int, N: int, reach: int = 64, **kw) -> ActionSpec:
    return ActionSpec("lubin_tate_berger", berger_ring(p, h, N, reach=reach),
                      p**h, **kw)


def action_preset(name: str, p: int, h: int, N: int, nvars_T: int = 1) -> ActionSpec:
    if name == "ab":
        return ab_action(p, N, nvars_T)
    if name == "berger":
        return berger_action(p, h, N)
    if name == "plain":
        return plain_action(p, N, nvars_T, h=h)
    raise ParameterError(f"unknown action preset {name!r}")


@dataclass(frozen=True)
class GroupElement:
    """One operator of the commuting family, in exact normal form.

    cyclotomic_ab: gamma (integer representative of a Z_p unit) and a
    translation vector over Z; composition law
    (g2, c2) o (g1, c1) = (g2*g1, g2*c1 + c2).

    lubin_tate_berger: a unit per factor (boosted-precision scalars) and a
    phi_p power k, in the normal form (units) o phi_p^k; phi_p conjugation
    shifts the unit vector cyclically and applies the coefficient Frobenius.
    """

    kind: str
    gamma: int = 1
    trans: tuple[int, ...] = ()
    units: tuple[PadicScalar, ...] = ()
    phi_p_power: int = 0

    @property
    def is_identity(self) -> bool:
        if self.kind == "cyclotomic_ab":
            return self.gamma == 1 and all(c == 0 for c in self.trans)
        return self.phi_p_power == 0 and all(
            (u - PadicScalar.one(u.p, u.h, u.N)).is_zero for u in self.units)

    def compose(self, other: "GroupElement") -> "GroupElement":
        """self o other (apply ``other`` first)."""
        if self.kind != other.kind:
            raise ParameterError("group element kinds differ")
        if self.kind == "cyclotomic_ab":
            gamma = self.gamma * other.gamma
            trans = tuple(self.gamma * c + d for c, d in zip(other.trans, self.trans))
            return GroupElement("cyclotomic_ab", gamma, trans)
        # (u, a) o (v, b) = (u * shift^a(v), a + b)
        v = other.units
        for _ in range(self.phi_p_power):
            v = tuple(scalar_frobenius(v[-1]),) + tuple(v[:-1])
        units = tuple(a * b for a, b in zip(self.units, v))
        return GroupElement("lubin_tate_berger", units=units,
                            phi_p_power=self.phi_p_power + other.phi_p_power)

    def power(self, n: int) -> "GroupElement":
        if n < 0:
            raise ParameterError("only nonnegative group powers are needed")
        result = identity_like(self)
        base = self
        while n:
            if n & 1:
                result = result.compose(base)
            if n > 1:
                base = base.compose(base)
            n >>= 1
        return result


def identity_like(g: GroupElement) -> GroupElement:
    if g.kind == "cyclotomic_ab":
        return GroupElement("cyclotomic_ab", 1, (0,) * len(g.trans))
    one = PadicScalar.one(g.units[0].p, g.units[0].h, g.units[0].N)
    return GroupElement("lubin_tate_berger", units=(one,) * len(g.units))


def ab_element(spec: ActionSpec, gamma: int = 1, trans=None) -> GroupElement:
    if spec.kind != "cyclotomic_ab":
        raise ParameterError("ab_element needs the cyclotomic_ab action")
    if gamma % spec.p == 0:
        raise ParameterError("gamma must be a unit")
    t = tuple(trans) if trans is not None else (0,) * spec.ring.nvars_T
    if len(t) != spec.ring.nvars_T:
        raise ParameterError("translation vector arity mismatch")
    return GroupElement("cyclotomic_ab", gamma, t)


def berger_element(spec: ActionSpec, units=None, phi_p_power: int = 0) -> GroupElement:
    if spec.kind != "lubin_tate_berger":
        raise ParameterError("berger_element needs the lubin_tate_berger action")
    p, h, N = spec.p, spec.ring.h, spec.ring.N
    boosted = N + spec.lt_cap + spec.guard_digits
    h_vars = spec.ring.nvars_T + 1
    if units is None:
        units = (1,) * h_vars
    us = []
    for u in units:
        if isinstance(u, int):
            u = PadicScalar.from_int(p, h, boosted, u)
        else:
            u = u.with_precision(boosted)
        if not u.is_unit():
            raise ParameterError("group coordinates must be units")
        us.append(u)
    if len(us) != h_vars:
        raise ParameterError("unit vector arity mismatch")
    return GroupElement("lubin_tate_berger", units=tuple(us),
                        phi_p_power=phi_p_power)


def identity_element(spec: ActionSpec) -> GroupElement:
    if spec.kind == "cyclotomic_ab":
        return ab_element(spec)
    return berger_element(spec)


# ---------------------------------------------------------------------------
# binomial powers and Lubin-Tate series


def binomial_unit_power(gamma, x: DaggerSeries, cap: int) -> DaggerSeries:
    """(1 + x)^gamma = sum_{i <= cap} C(gamma, i) x^i.

    gamma is an exact integer (possibly a canonical representative of a
    p-adic integer; carry guard digits in the representative if the target
    precision requires them).  The dropped tail past the cap is recorded
    from the Newton data of x, which must be integral of nonnegative
    weighted degree, with no unit term of weighted degree zero.
    """
    ring = x.ring
    if isinstance(gamma, PadicScalar):
        if gamma.h != 1:
            raise ParameterError("binomial exponents live in Z_p")
        gamma = gamma.coeffs[0]
    for exps, c in x.terms.items():
        d = ring.wdeg(exps)
        v = c.valuation().value or ring.N
        if d < 0 or (d == 0 and v == 0):
            raise ParameterError(
                "binomial series needs |x| < 1: positive weighted degree or "
                "positive coefficient valuation termwise")
    acc = DaggerSeries.one(ring)
    power = DaggerSeries.one(ring)
    for i in range(1, cap + 1):
        if gamma >= 0 and i > gamma:
            return acc  # exact polynomial, nothing dropped
        power = power * x
        if power.is_zero:
            return acc
        coeff = integer_binomial(gamma, i) % ring.p**ring.N
        if coeff:
            acc = acc + power.scale(coeff)
    if gamma >= 0 and cap >= gamma:
        return acc
    # tail markers: every dropped term is a product of > cap vertices of x
    verts = x._points_hull()
    tail = tuple(((cap + 1) * v, (cap + 1) * d) for v, d in verts)
    return DaggerSeries.build(ring, acc.terms, acc.window, acc.tail + tail)


def _lt_multiply(a: list, b: list, cap: int, zero: PadicScalar) -> list:
    out = [zero] * (cap + 1)
    for i, ai in enumerate(a):
        if ai.is_zero:
            continue
        for j, bj in enumerate(b):
            if i + j > cap:
                break
            if not bj.is_zero:
                out[i + j] = out[i + j] + ai * bj
    return out


def _lt_power(a: list, n: int, cap: int, zero: PadicScalar, one: PadicScalar) -> list:
    result = [one] + [zero] * cap
    base = a
    while n:
        if n & 1:
            result = _lt_multiply(result, base, cap, zero)
        base = _lt_multiply(base, base, cap, zero)
        n >>= 1
    return result


def lubin_tate_series(spec: ActionSpec, a, cap: int | None = None) -> DaggerSeries:
    """[a](T): the unique series with linear term aT commuting with [p].

    [p](T) = pT + T^q.  Coefficients are solved degree by degree from
    [a]([p]) = [p]([a]); the division by p^n - p at degree n costs one
    p-adic digit, so the recursion runs at a boosted internal precision and
    only the final result is reduced to N.  Returned as a univariate series
    in the pi slot of a fresh descriptor.
    """
    if cap is None:
        cap = spec.lt_cap
    if cap < 1:
        raise ParameterError("cap must be at least 1")
    p, h, N, q = spec.p, spec.ring.h, spec.ring.N, spec.q
    work = N + cap + 2
    if isinstance(a, int):
        a_w = PadicScalar.from_int(p, h, work, a)
    else:
        a_w = a.with_precision(work)
    zero = PadicScalar.zero(p, h, work)
    one = PadicScalar.one(p, h, work)
    p_scalar = one.scale(p)

    # F = [p] as a coefficient list
    F = [zero] * (cap + 1)
    if 1 <= cap:
        F[1] = p_scalar
    if q <= cap:
        F[q] = one
    f_powers = [[one] + [zero] * cap, F]
    for _ in range(2, cap + 1):
        f_powers.append(_lt_multiply(f_powers[-1], F, cap, zero))

    c = [zero, a_w] + [zero] * (cap - 1)
    for n in range(2, cap + 1):
        # LHS_n (k < n part): sum_k c_k * (F^k)_n
        lhs = zero
        for k in range(1, n):
            fk = f_powers[k][n]
            if not fk.is_zero and not c[k].is_zero:
                lhs = lhs + c[k] * fk
        # RHS_n: p*c_n + ([a]^q)_n, where [a]^q only involves c_(<n)
        aq = _lt_power(c, q, n, zero, one)
        rhs_known = aq[n]
        # c_n (p^n - p) = ([a]^q)_n - LHS_known
        delta = one.scale(p**n) - p_scalar
        c[n] = (rhs_known - lhs).divide_exact(delta)

    ring = default_ring(p, h, N)
    terms = {}
    for n, cn in enumerate(c):
        cn = cn.with_precision(N)
        if not cn.is_zero:
            terms[(Fraction(n),)] = cn
    tail = ((ZERO, Fraction(cap + 1)),)  # dropped tail is integral past the cap
    return DaggerSeries.build(ring, terms, tail=tail)


# ---------------------------------------------------------------------------
# substitution engine


def substitute(x: DaggerSeries, images: list[DaggerSeries],
               coeff_map: Callable[[PadicScalar], PadicScalar] | None = None,
               out_ring: RingDescriptor | None = None) -> DaggerSeries:
    """Evaluate x at the given variable images (all in a common target ring).

    Exponents must be integers; negative exponents invert the image, which
    must have a dominant unit monomial.
    """
    ring = out_ring if out_ring is not None else images[0].ring
    out = DaggerSeries.zero(ring)
    cache: dict[tuple[int, int], DaggerSeries] = {}
    inv_cache: dict[int, DaggerSeries] = {}

    def img_power(i: int, e: Fraction) -> DaggerSeries:
        if e.denominator != 1:
            raise ParameterError("substitution needs integer exponents")
        n = int(e)
        key = (i, n)
        if key in cache:
            return cache[key]
        if n >= 0:
            val = images[i] ** n
        else:
            if i not in inv_cache:
                inv_cache[i] = invert_series(images[i])
            val = inv_cache[i] ** (-n)
        cache[key] = val
        return val

    tail = list(x.tail)
    for exps, coeff in x.sorted_terms():
        piece = DaggerSeries.one(ring)
        for i, e in enumerate(exps):
            if e != 0:
                piece = piece * img_power(i, e)
        if coeff_map is not None:
            coeff = coeff_map(coeff)
        out = out + piece.scale(coeff)
    return DaggerSeries.build(ring, out.terms, out.window,
                              out.tail + tuple(tail))


def _ab_pi_image(spec: ActionSpec, exponent: int) -> DaggerSeries:
    """(1 + pi)^exponent - 1 in the AB ring."""
    ring = spec.ring
    pi = DaggerSeries.variable(ring, 0)
    return binomial_unit_power(exponent, pi, spec.series_cap) - DaggerSeries.one(ring)


def apply_phi(spec: ActionSpec, x: DaggerSeries) -> DaggerSeries:
    """The distinguished central q-power lift."""
    ring = spec.ring
    if spec.kind == "plain":
        return DaggerSeries.build(
            ring,
            {tuple(spec.q * e for e in exps): c for exps, c in x.terms.items()},
            tail=tuple((v, spec.q * d) for v, d in x.tail))
    if spec.kind == "cyclotomic_ab":
        images = [_ab_pi_image(spec, spec.p)]
        for i in range(1, ring.nvars):
            images.append(DaggerSeries.variable(ring, i, ring.p))
        return substitute(x, images)
    out = x
    for _ in range(ring.h):
        out = apply_phi_p(spec, out)
    return out


def apply_phi_p(spec: ActionSpec, x: DaggerSeries) -> DaggerSeries:
    """The p-power shift of the lubin_tate_berger action (not itself a
    q-power lift): Y_i -> Y_(i+1), Y_(h-1) -> [p](Y_0), sigma on scalars."""
    if spec.kind != "lubin_tate_berger":
        raise ParameterError("phi_p only exists for the lubin_tate_berger action")
    ring = spec.ring
    h = ring.nvars_T + 1
    images = [DaggerSeries.variable(ring, i + 1) for i in range(h - 1)]
    lt_p = lubin_tate_series(spec, spec.p)
    images.append(_univariate_into(lt_p, ring, 0))
    return substitute(x, images, coeff_map=scalar_frobenius)


def _univariate_into(u: DaggerSeries, ring: RingDescriptor, var: int) -> DaggerSeries:
    """Transplant a univariate series (in its pi slot) onto ring variable var."""
    terms = {}
    for exps, c in u.terms.items():
        terms[ring.var_exps(var, exps[0])] = c
    tail = tuple((v, d * ring.weights[var]) for v, d in u.tail)
    return DaggerSeries.build(ring, terms, tail=tail)


def apply_gamma(spec: ActionSpec, g: GroupElement, x: DaggerSeries) -> DaggerSeries:
    """Apply one exact group element by a single substitution."""
    ring = spec.ring
    if spec.kind == "plain":
        if not g.is_identity:
            raise ParameterError("the plain action has a trivial group part")
        return x
    if spec.kind == "cyclotomic_ab":
        if g.kind != "cyclotomic_ab":
            raise ParameterError("group element kind mismatch")
        images = [_ab_pi_image(spec, g.gamma)]
        one = DaggerSeries.one(ring)
        for i, c in enumerate(g.trans):
            t = DaggerSeries.variable(ring, 1 + i)
            if c == 0:
                images.append(t)
            else:
                images.append(binomial_unit_power(c, DaggerSeries.variable(ring, 0),
                                                  spec.series_cap) * t)
        for i in range(1 + ring.nvars_T, ring.nvars):
            images.append(DaggerSeries.variable(ring, i))
        return substitute(x, images)
    if g.kind != "lubin_tate_berger":
        raise ParameterError("group element kind mismatch")
    out = x
    if any(not (u - PadicScalar.one(u.p, u.h, u.N)).is_zero for u in g.units):
        images = []
        for i, u in enumerate(g.units):
            if (u - PadicScalar.one(u.p, u.h, u.N)).is_zero:
                images.append(DaggerSeries.variable(spec.ring, i))
            else:
                lt_u = lubin_tate_series(spec, u)
                images.append(_univariate_into(lt_u, spec.ring, i))
        out = substitute(out, images)
    for _ in range(g.phi_p_power):
        out = apply_phi_p(spec, out)
    return out


# ---------------------------------------------------------------------------
# checks


def frobenius_congruence_check(spec: ActionSpec, x: DaggerSeries) -> bool:
    """phi(x) == x^q mod p, within the certified window."""
    diff = apply_phi(spec, x) - x ** spec.q
    return diff.reduce_mod_p().is_zero


def reality_check_bound(spec: ActionSpec, x: DaggerSeries, r,
                        threshold=ZERO) -> tuple[Valuation, bool | None]:
    """v_r(phi(x) - x^q) - v_r(x^q), with verdict margin > threshold.

    Verdict None when either norm is uncertified.
    """
    r = Fraction(r)
    threshold = Fraction(threshold)
    xq = x ** spec.q
    diff = apply_phi(spec, x) - xq
    g_diff = diff.gauss_norm(r)
    g_xq = xq.gauss_norm(r)
    if g_diff.value.is_infinite and diff.is_zero:
        floor = g_diff.bound
        return Valuation.infinite(floor=floor), True
    if not g_xq.certified or g_diff.value.is_infinite:
        return Valuation.infinite(), None
    margin = Valuation.finite(g_diff.value.value - g_xq.value.value)
    if g_diff.certified:
        return margin, margin.value > threshold
    # v_r(diff) is only an upper bound here: a definite failure is still a
    # definite verdict, anything else stays inconclusive
    if margin.value <= threshold:
        return margin, False
    return margin, None


def twisted_leibniz_check(spec: ActionSpec, g: GroupElement,
                          y: DaggerSeries, z: DaggerSeries) -> bool:
    """(gamma-1)(yz) == (gamma-1)(y) z + gamma(y) (gamma-1)(z), exactly."""
    gy = apply_gamma(spec, g, y)
    gz = apply_gamma(spec, g, z)
    lhs = apply_gamma(spec, g, y * z) - y * z
    rhs = (gy - y) * z + gy * (gz - z)
    return (lhs - rhs).is_zero


@dataclass(frozen=True)
class AnalyticitySample:
    m: int
    s: Fraction
    margin: Valuation
    threshold: Fraction
    verdict: bool | None


@dataclass
class AnalyticityReport:
    """Observed analyticity margins for fixed (c, subgroup depth) pairs.

    The uniform statement quantifies over all c; a finite run only records
    verdicts for the pairs actually tested.
    """

    c_val: Fraction
    samples: list[AnalyticitySample] = field(default_factory=list)

    @property
    def all_pass(self) -> bool:
        return all(s.verdict for s in self.samples)


def analytic_inequality_check(spec: ActionSpec, g: GroupElement,
                              v: DaggerSeries, m: int, s, c_val) -> AnalyticitySample:
    """Margin of v_s((gamma^(p^m) - 1) v) - v_s(v) against the uniform bound.

    In valuation form the bound is strict inequality above
    min over i = 0..m of ((i - m) + p^(-i) * s * c_val), where the constant
    c of the uniform statement is p^(-c_val).
    """
    s = Fraction(s)
    c_val = Fraction(c_val)
    gp = g.power(spec.p**m)
    delta = apply_gamma(spec, gp, v) - v
    threshold = min(Fraction(i - m) + Fraction(1, spec.p**i) * s * c_val
                    for i in range(m + 1))
    if delta.is_zero:
        return AnalyticitySample(m, s, Valuation.infinite(), threshold, True)
    g_delta = delta.gauss_norm(s)
    g_v = v.gauss_norm(s)
    if not (g_delta.certified and g_v.certified):
        return AnalyticitySample(m, s, Valuation.infinite(), threshold, None)
    margin = Valuation.finite(g_delta.value.value - g_v.value.value)
    return AnalyticitySample(m, s, margin, threshold, margin.value > threshold)


def depth_generators(spec: ActionSpec, depth: int) -> list[GroupElement]:
    """Generators of the congruence-depth subgroup (coordinates 1 + p^depth)."""
    pn = spec.p**depth
    out = []
    if spec.kind == "cyclotomic_ab":
        out.append(ab_element(spec, gamma=1 + pn))
        for i in range(spec.ring.nvars_T):
            t = [0] * spec.ring.nvars_T
            t[i] = pn
            out.append(ab_element(spec, trans=t))
        return out
    if spec.kind == "lubin_tate_berger":
        hv = spec.ring.nvars_T + 1
        for i in range(hv):
            units = [1] * hv
            units[i] = 1 + pn
            out.append(berger_element(spec, units=units))
        return out
    raise ParameterError("plain actions have no congruence subgroups")


def find_subgroup_depth(spec: ActionSpec, c_val, max_depth: int = 8):
    """Least depth n whose generators all contract the ring generators mod p.

    Margin of gamma on generator x: val((gamma-1) x mod p) - val(x mod p)
    in the weighted char-p valuation.  Returns (n, margins).
    """
    c_val = Fraction(c_val)
    if c_val <= 0:
        raise ParameterError("c_val must be positive")
    gens = spec.generators()
    for depth in range(1, max_depth + 1):
        margins = {}
        ok = True
        for k, g in enumerate(depth_generators(spec, depth)):
            for i, x in enumerate(gens):
                delta = (apply_gamma(spec, g, x) - x).reduce_mod_p()
                base = x.reduce_mod_p().valuation()
                if delta.is_zero:
                    margins[(k, i)] = Valuation.infinite()
                    continue
                dv = delta.valuation()
                if not (dv.certified and base.certified):
                    ok = False
                    break
                m = Valuation.finite(dv.value.value - base.value.value)
                margins[(k, i)] = m
                if not m.value > c_val:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return depth, margins
    raise DepthNotFoundError(
        f"no depth <= {max_depth} reaches margin {c_val} on all generators")


def binomial_action_convergence(spec: ActionSpec, g: GroupElement, n: int,
                                x: DaggerSeries, I: int, s):
    """Partial sums sum_{i<I} C(n,i) (gamma-1)^i x against gamma^n x.

    Returns (partial, margins) where margins[k] = v_s(gamma^n x - partial
    sum with k terms), k = 1..I; the margins must grow once the expansion
    bites.  Divergence (three consecutive strict drops) raises.
    """
    s = Fraction(s)
    target = apply_gamma(spec, g.power(n), x)
    diff = x
    partial = DaggerSeries.zero(spec.ring)
    margins: list[Valuation] = []
    drops = 0
    for i in range(I):
        coeff = integer_binomial(n, i) % spec.ring.p**spec.ring.N
        if coeff:
            partial = partial + diff.scale(coeff)
        gap = target - partial
        if gap.is_zero:
            margins.append(Valuation.infinite(floor=gap.gauss_norm(s).bound))
        else:
            gv = gap.gauss_norm(s)
            if gv.bound is not None and (gv.value.is_infinite
                                         or gv.value.value >= gv.bound):
                # the gap fell to the truncation resolution: only a floor
                margins.append(Valuation.infinite(floor=gv.bound))
            else:
                margins.append(gv.value)
        if len(margins) >= 2 and margins[-1] < margins[-2]:
            drops += 1
            if drops >= 3:
                raise ParameterError(
                    f"binomial expansion diverging at stage {i}: {margins}")
        else:
            drops = 0
        diff = apply_gamma(spec, g, diff) - diff
    return partial, margins
