"""Sparse series, Gauss norms and the certification contract."""

import json
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from robba_lab.scalars import PadicScalar, ParameterError
from robba_lab.series import (
    CharPSeries,
    DaggerSeries,
    NotInvertibleError,
    Window,
    ab_ring,
    berger_ring,
    default_ring,
    gauss_norm,
    hadamard_check,
    invert_one_plus_small,
    invert_series,
    reduce_mod_p,
    series_dumps,
    series_from_json,
    series_to_json,
)

R23 = default_ring(2, 1, 3)
R33 = default_ring(3, 1, 3)


def brute_norm_oracle(x, r):
    """Enumerate stored terms; the Gauss valuation is their plain minimum."""
    vals = []
    for exps, c in x.terms.items():
        v = c.valuation()
        assert not v.is_infinite
        vals.append(v.value + F(r) * x.ring.wdeg(exps))
    return min(vals) if vals else None


def test_norm_single_monomial():
    R = ab_ring(2, 3, 1)
    x = DaggerSeries.monomial(R, (2, 1), 1)  # pi^2 T1
    g = gauss_norm(x, 1)
    assert g.value.value == 2 and g.certified


def test_norm_of_one_any_radius():
    for r in (F(1, 8), F(1), F(7, 2)):
        g = gauss_norm(DaggerSeries.one(R23), r)
        assert g.value.value == 0 and g.certified


def test_norm_pi_plus_p_half_radius():
    pi = DaggerSeries.variable(R23, 0)
    x = pi + DaggerSeries.constant(R23, 2)
    g = gauss_norm(x, F(1, 2))
    assert g.value.value == brute_norm_oracle(x, F(1, 2)) == F(1, 2)


def test_norm_empty_series_uncertified_infinite():
    g = gauss_norm(DaggerSeries.zero(R23), F(1, 2))
    assert g.value.is_infinite and not g.certified


def test_arith_examples():
    pi = DaggerSeries.variable(R23, 0)
    one = DaggerSeries.one(R23)
    assert (pi * pi) == DaggerSeries.monomial(R23, (2,), 1)
    x = pi + DaggerSeries.constant(R23, 3)
    assert (x + DaggerSeries.zero(R23)) == x
    sq = (one + pi) * (one + pi)
    want = one + pi.scale(2) + pi * pi  # convolution oracle: 1 + 2pi + pi^2
    assert sq == want


def test_descriptor_mismatch_raises():
    x = DaggerSeries.one(R23)
    y = DaggerSeries.one(R33)
    with pytest.raises(ParameterError):
        x + y


def rand_small_series(rng, ring, max_val=2):
    terms = {}
    for _ in range(rng.randint(1, 3)):
        e = (F(rng.randint(-2, 4)),)
        c = PadicScalar.from_int(ring.p, 1, ring.N,
                                 rng.randrange(1, ring.p**ring.N))
        v = c.valuation()
        if not v.is_infinite and v.value <= max_val:
            terms[e] = c
    x = DaggerSeries.build(ring, terms)
    return x if not x.is_zero else rand_small_series(rng, ring, max_val)


def test_multiplicativity_500_certified_pairs():
    rng = random.Random(42)
    R = default_ring(3, 1, 4)
    count = 0
    while count < 500:
        x, y = rand_small_series(rng, R), rand_small_series(rng, R)
        r = rng.choice([F(1, 8), F(1, 4)])
        gx, gy, gxy = x.gauss_norm(r), y.gauss_norm(r), (x * y).gauss_norm(r)
        if not (gx.certified and gy.certified and gxy.certified):
            continue
        assert gxy.value.value == gx.value.value + gy.value.value
        count += 1


def test_ultrametric_with_equality_on_distinct_minima():
    rng = random.Random(43)
    R = default_ring(2, 1, 4)
    for _ in range(300):
        x, y = rand_small_series(rng, R), rand_small_series(rng, R)
        r = F(1, 8)
        gx, gy = x.gauss_norm(r), y.gauss_norm(r)
        s = x + y
        if s.is_zero:
            continue
        gs = s.gauss_norm(r)
        lo = gx.value.min(gy.value)
        assert lo <= gs.value
        if gx.value != gy.value:
            assert gs.value == lo


def test_hadamard_examples_and_interpolation():
    pi = DaggerSeries.variable(R23, 0)
    # single monomial: equality at every (r, s, t)
    x = DaggerSeries.monomial(R23, (3,), 2)
    ok, wit = hadamard_check(x, F(2), F(1, 4), F(1, 2))
    assert ok
    lhs = wit["v_u"].value
    rhs = F(1, 2) * wit["v_r"].value + F(1, 2) * wit["v_s"].value
    assert lhs == rhs
    # t = 1 tautology
    ok, _ = hadamard_check(x, F(1), F(1, 2), F(1))
    assert ok
    # two-monomial case, brute-force oracle at each radius
    y = pi + DaggerSeries.monomial(R23, (-1,), 2)
    ok, wit = hadamard_check(y, F(1), F(1, 4), F(1, 2))
    assert ok
    for key, radius in (("v_r", F(1)), ("v_s", F(1, 4))):
        assert wit[key].value == brute_norm_oracle(y, radius)


def test_hadamard_sampled_invariant():
    rng = random.Random(7)
    R = default_ring(3, 1, 4)
    radii = [F(1), F(1, 2), F(1, 4), F(1, 8)]
    done = 0
    while done < 120:
        x = rand_small_series(rng, R, max_val=1)
        r = rng.choice(radii)
        s = rng.choice([u for u in radii if u <= r])
        t = rng.choice([F(0), F(1, 3), F(1, 2), F(1)])
        ok, _ = hadamard_check(x, r, s, t)
        if ok is None:
            continue
        assert ok
        done += 1


def test_invert_one_plus_small_examples():
    one = DaggerSeries.one(R23)
    assert invert_one_plus_small(one, F(1, 2), F(1, 4)) == one
    # 1 + p: geometric series sum (-p)^k mod p^3
    x = one + DaggerSeries.constant(R23, 2)
    z = invert_one_plus_small(x, F(1, 2), F(1, 4))
    assert (x * z) == one
    assert z.terms[(F(0),)].coeffs[0] == (1 - 2 + 4) % 8
    # 1 + p pi^-1 at radii strictly below 1
    y = one + DaggerSeries.monomial(R23, (-1,), 2)
    z = invert_one_plus_small(y, F(7, 8), F(1, 2))
    assert (y * z) == one
    want = {(F(0),): 1, (F(-1),): -2 % 8, (F(-2),): 4}
    assert {e: c.coeffs[0] for e, c in z.terms.items()} == want


def test_invert_criterion_rejects_norm_one():
    one = DaggerSeries.one(R23)
    y = one + DaggerSeries.monomial(R23, (-1,), 2)
    # at radius 1 the perturbation has |y - 1| = 1: not invertible this way
    with pytest.raises(NotInvertibleError):
        invert_one_plus_small(y, F(1), F(1, 2))


def test_invert_series_dominant_monomial():
    R = default_ring(2, 1, 4)
    pi = DaggerSeries.variable(R, 0)
    f = pi.scale(2) + pi * pi  # [p](Y) shape: val-0 pivot Y^2
    g = invert_series(f)
    assert (f * g) == DaggerSeries.one(R)


def test_reduce_mod_p_examples():
    assert reduce_mod_p(DaggerSeries.constant(R23, 2)).is_zero
    R = ab_ring(2, 3, 1)
    x = DaggerSeries.variable(R, 0) + DaggerSeries.variable(R, 1).scale(2)
    red = reduce_mod_p(x)
    assert list(red.terms) == [(F(1), F(0))]
    pi3 = DaggerSeries.variable(R33, 0)
    one3 = DaggerSeries.one(R33)
    y = (one3 + pi3) ** 3 - one3
    assert list(reduce_mod_p(y).terms) == [(F(3),)]


def test_reduce_mod_p_is_ring_hom():
    rng = random.Random(5)
    R = default_ring(3, 1, 3)
    for _ in range(50):
        x, y = rand_small_series(rng, R), rand_small_series(rng, R)
        assert reduce_mod_p(x * y) == reduce_mod_p(x) * reduce_mod_p(y)
        assert reduce_mod_p(x + y) == reduce_mod_p(x) + reduce_mod_p(y)


def test_charp_frobenius_and_root_are_inverse():
    R = default_ring(3, 1, 3, frac_denominator=27)
    x = CharPSeries.monomial(R, (F(2),), 2) + CharPSeries.monomial(R, (F(1, 3),), 1)
    assert x.frobenius().p_th_root() == x
    assert x.p_th_root().frobenius() == x


def test_serialization_roundtrip_and_canonical_bytes():
    R = ab_ring(2, 3, 1)
    x = DaggerSeries.variable(R, 0) + DaggerSeries.monomial(R, (-1, 2), 5)
    assert series_from_json(series_to_json(x)) == x
    assert series_dumps(x) == series_dumps(series_from_json(series_to_json(x)))
    data = json.loads(series_dumps(x))
    assert data["terms"] == sorted(data["terms"])


def test_tail_certification_after_cap_clip():
    # a tiny capacity forces a clip; the norm must stop certifying once the
    # computed minimum cannot beat the recorded tail
    small = default_ring(2, 1, 3, reach=4)
    pi = DaggerSeries.variable(small, 0)
    x = DaggerSeries.one(small) + pi ** 3
    y = x * x  # pi^6 clipped beyond reach 4
    assert y.tail
    g = y.gauss_norm(F(1, 2))
    assert g.certified  # min 0 still beats the tail floor
    z = (pi ** 3) * (pi ** 2)  # entirely clipped: nothing left but the tail
    assert z.is_zero and z.tail
    gz = z.gauss_norm(F(1, 2))
    assert gz.value.is_infinite and not gz.certified


def test_window_semantics():
    w1 = Window((F(0),), (F(2),))
    w2 = Window((F(-1),), (F(1),))
    assert w1.union(w2) == Window((F(-1),), (F(2),))
    assert w1.minkowski(w2) == Window((F(-1),), (F(3),))
    assert w1.intersect(w2) == Window((F(0),), (F(1),))


@given(st.integers(-2, 4), st.integers(1, 7), st.integers(-2, 4), st.integers(1, 7))
@settings(max_examples=50, deadline=None)
def test_norm_multiplicativity_hypothesis(e1, c1, e2, c2):
    R = default_ring(2, 1, 3)
    x = DaggerSeries.monomial(R, (e1,), c1)
    y = DaggerSeries.monomial(R, (e2,), c2)
    r = F(1, 8)
    gx, gy, gxy = x.gauss_norm(r), y.gauss_norm(r), (x * y).gauss_norm(r)
    if gx.certified and gy.certified and gxy.certified:
        assert gxy.value.value == gx.value.value + gy.value.value
