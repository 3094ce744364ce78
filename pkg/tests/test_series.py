import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fglcheck.exact_arith import IntegerRing, WittCoefRing
from fglcheck.series import (ContextMismatch, NonUnitLinearCoefficient,
                             NonzeroConstantTerm, PolyTruncRing, ResidueZero,
                             TruncSeries, inverse, reversion, substitute,
                             weierstrass_prepare)

Z8 = WittCoefRing(2, 3)
Z4 = WittCoefRing(2, 2)


def xy(ring, bound):
    return (TruncSeries.var(ring, ("x", "y"), bound, "x"),
            TruncSeries.var(ring, ("x", "y"), bound, "y"))


def test_difference_of_squares():
    x, y = xy(Z8, 2)
    assert (x + y) * (x - y) == x * x - y * y


def test_one_plus_x_squared_mod4():
    x = TruncSeries.var(Z4, ("x",), 5, "x")
    one = TruncSeries.one(Z4, ("x",), 5)
    f = (one + x) * (one + x)
    assert f == TruncSeries.from_int_terms(Z4, ("x",), 5, {(0,): 1, (1,): 2, (2,): 1})


def test_truncation_at_bound():
    x = TruncSeries.var(Z8, ("x",), 4, "x")
    assert (x ** 4) * x == TruncSeries.zero(Z8, ("x",), 4)


def test_substitute_square_of_sum():
    f = TruncSeries.from_int_terms(Z8, ("u",), 3, {(2,): 1})
    x, y = xy(Z8, 3)
    out = substitute(f, [x + y])
    assert out == TruncSeries.from_int_terms(Z8, ("x", "y"), 3,
                                             {(2, 0): 1, (1, 1): 2, (0, 2): 1})


def test_substitute_identity():
    x, y = xy(Z8, 4)
    f = x * y + x ** 2 + y.int_scalar(3)
    assert substitute(f, [x, y]) == f


def test_substitute_self_composition_oracle():
    # independent oracle: expand f(f) = (x + x^2) + (x + x^2)^2 term by term
    Z = IntegerRing()
    x = TruncSeries.var(Z, ("x",), 4, "x")
    f = x + x * x
    composed = substitute(f, [f])
    oracle = f + f * f
    assert composed == oracle
    assert composed == TruncSeries.from_int_terms(
        Z, ("x",), 4, {(1,): 1, (2,): 2, (3,): 2, (4,): 1})


def test_substitute_rejects_constant_terms():
    x, _ = xy(Z8, 3)
    f = TruncSeries.var(Z8, ("u",), 3, "u")
    with pytest.raises(NonzeroConstantTerm) as e:
        substitute(f, [x + TruncSeries.one(Z8, ("x", "y"), 3)])
    assert e.value.index == 0


def test_context_mismatch():
    x4 = TruncSeries.var(Z8, ("x",), 4, "x")
    x5 = TruncSeries.var(Z8, ("x",), 5, "x")
    with pytest.raises(ContextMismatch):
        x4 + x5


def test_reversion_identity():
    x = TruncSeries.var(Z8, ("x",), 5, "x")
    assert reversion(x) == x


def test_reversion_frozen_value():
    x = TruncSeries.var(Z8, ("x",), 5, "x")
    r = reversion(x + x * x)
    assert r == TruncSeries.from_int_terms(
        Z8, ("x",), 5, {(1,): 1, (2,): 7, (3,): 2, (4,): 3, (5,): 6})
    assert substitute(x + x * x, [r]) == x
    assert substitute(r, [x + x * x]) == x


def test_reversion_rejects_nonunit():
    x = TruncSeries.var(Z8, ("x",), 5, "x")
    with pytest.raises(NonUnitLinearCoefficient):
        reversion(x.int_scalar(2))


def test_weierstrass_2x_plus_x2():
    x = TruncSeries.var(Z4, ("x",), 5, "x")
    f = x.int_scalar(2) + x * x
    w = weierstrass_prepare(f)
    assert w.degree == 2
    assert w.unit == TruncSeries.one(Z4, ("x",), 5)
    assert w.distinguished == TruncSeries.from_int_terms(Z4, ("x",), 5,
                                                         {(1,): 2, (2,): 1})
    assert w.unit * w.distinguished == f


def test_weierstrass_pure_power_over_field():
    F2 = WittCoefRing(2, 1)
    x = TruncSeries.var(F2, ("x",), 5, "x")
    w = weierstrass_prepare(x ** 3)
    assert w.degree == 3 and w.unit == TruncSeries.one(F2, ("x",), 5)
    assert w.distinguished == x ** 3


def test_weierstrass_unit_case():
    x = TruncSeries.var(Z8, ("x",), 4, "x")
    f = TruncSeries.one(Z8, ("x",), 4) + x.int_scalar(2) + x ** 2
    w = weierstrass_prepare(f)
    assert w.degree == 0
    assert w.distinguished == TruncSeries.one(Z8, ("x",), 4)
    assert w.unit == f


def test_weierstrass_residue_zero():
    x = TruncSeries.var(Z4, ("x",), 4, "x")
    with pytest.raises(ResidueZero):
        weierstrass_prepare(x.int_scalar(2))


def test_weierstrass_recomposition_random():
    import random
    rng = random.Random(5)
    x = TruncSeries.var(Z8, ("x",), 6, "x")
    for _ in range(25):
        d = rng.randrange(0, 4)
        terms = {(d,): Z8.from_int(rng.choice([1, 3, 5, 7]))}
        for k in range(6):
            if rng.random() < 0.5:
                c = Z8.from_int(2 * rng.randrange(4)) if k < d \
                    else Z8.rand(rng)
                terms[(k,)] = terms.get((k,), Z8.zero()) + c
        f = TruncSeries(Z8, ("x",), 6, terms)
        if f.map_coefficients(Z8.residue, ring=Z8.residue_ring()).is_zero():
            continue
        w = weierstrass_prepare(f)
        assert w.unit * w.distinguished == f
        assert Z8.is_unit(w.unit.constant_term())
        assert all(Z8.in_max_ideal(w.distinguished.coefficient((j,)))
                   for j in range(w.degree))


def test_series_inverse():
    x = TruncSeries.var(Z8, ("x",), 6, "x")
    f = TruncSeries.one(Z8, ("x",), 6) + x.int_scalar(3) + x ** 2
    assert inverse(f) * f == TruncSeries.one(Z8, ("x",), 6)


def test_poly_trunc_ring():
    L = PolyTruncRing(Z8, ("u",), 2)
    u = L.var("u")
    x = L.add(L.one(), u)
    assert L.mul(x, L.inv(x)) == L.one()
    assert L.in_max_ideal(L.add(u, L.from_int(2)))
    assert not L.in_max_ideal(x)
    k = L.residue_ring()
    assert k.is_zero(L.residue(u)) and not k.is_zero(L.residue(x))


def test_json_roundtrip():
    x, y = xy(Z8, 8)
    f = x + y + x * y * 3 + (x ** 5) * 7
    data = f.to_json()
    assert TruncSeries.from_json(Z8, data) == f


series_strategy = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(lambda e: sum(e) <= 4),
    st.integers(0, 7), max_size=5)


@settings(max_examples=40, deadline=None)
@given(series_strategy, series_strategy, series_strategy)
def test_mul_associative_commutative(a, b, c):
    f = TruncSeries.from_int_terms(Z8, ("x", "y"), 4, a)
    g = TruncSeries.from_int_terms(Z8, ("x", "y"), 4, b)
    h = TruncSeries.from_int_terms(Z8, ("x", "y"), 4, c)
    assert (f * g) * h == f * (g * h)
    assert f * g == g * f
    assert f * (g + h) == f * g + f * h


@settings(max_examples=30, deadline=None)
@given(st.dictionaries(st.integers(2, 5), st.integers(0, 7), max_size=4),
       st.sampled_from([1, 3, 5, 7]))
def test_reversion_involution(tail, unit):
    terms = {(1,): unit}
    terms.update({(k,): v for k, v in tail.items()})
    f = TruncSeries.from_int_terms(Z8, ("x",), 5, terms)
    r = reversion(f)
    x = TruncSeries.var(Z8, ("x",), 5, "x")
    assert substitute(f, [r]) == x
    assert substitute(r, [f]) == x
