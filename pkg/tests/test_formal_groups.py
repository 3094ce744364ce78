import random

import pytest

from fglcheck.exact_arith import WittCoefRing
from fglcheck.formal_groups import (FormalGroupLaw, MalformedPSeries, NotCharP,
                                    PrecisionExhausted, _frac_into, bcp_module,
                                    fgl_additive, fgl_honda, fgl_multiplicative,
                                    formal_inverse, frobenius_isogeny, height,
                                    lubin_tate_deformation, n_series,
                                    reduce_to_residue, specialize_deformation)
from fglcheck.series import ResidueZero, TruncSeries, substitute


def test_multiplicative_terms():
    G = fgl_multiplicative(WittCoefRing(2, 3), 6)
    assert G.F == TruncSeries.from_int_terms(G.ring, ("x", "y"), 6,
                                             {(1, 0): 1, (0, 1): 1, (1, 1): 1})
    assert all(G.verify().values())


def test_multiplicative_2_series():
    G = fgl_multiplicative(WittCoefRing(2, 4), 6)
    assert n_series(G, 2) == TruncSeries.from_int_terms(
        G.ring, ("x",), 6, {(1,): 2, (2,): 1})


def test_multiplicative_3_series():
    G = fgl_multiplicative(WittCoefRing(5, 2), 5)
    assert n_series(G, 3) == TruncSeries.from_int_terms(
        G.ring, ("x",), 5, {(1,): 3, (2,): 3, (3,): 1})


def test_minus_one_series():
    G = fgl_multiplicative(WittCoefRing(2, 4), 4)
    inv = n_series(G, -1)
    # oracle: the formal inverse must satisfy F(x, [-1](x)) = 0
    x = TruncSeries.var(G.ring, ("x",), 4, "x")
    assert substitute(G.F, [x, inv]).is_zero()
    assert inv == TruncSeries.from_int_terms(
        G.ring, ("x",), 4, {(1,): 15, (2,): 1, (3,): 15, (4,): 1})


def test_n_series_basics():
    G = fgl_honda(2, 2, 3, 6)
    x = TruncSeries.var(G.ring, ("x",), 6, "x")
    assert n_series(G, 0).is_zero()
    assert n_series(G, 1) == x
    # [a+b](x) = F([a](x), [b](x)) spot checks
    for a, b in ((1, 1), (2, 1), (2, 3)):
        lhs = n_series(G, a + b)
        rhs = substitute(G.F, [n_series(G, a), n_series(G, b)])
        assert lhs == rhs
    # inverse axiom: F([1](x), [-1](x)) = 0
    inv = formal_inverse(G)
    assert substitute(G.F, [x, inv]).is_zero()


def test_n_series_multiplicative_law():
    G = fgl_multiplicative(WittCoefRing(3, 2), 6)
    for a, b in ((2, 3), (-1, 2), (2, 2)):
        assert n_series(G, a * b) == substitute(n_series(G, a), [n_series(G, b)])


def test_honda_heights():
    assert height(fgl_honda(2, 1, 3, 6)).value == 1
    assert height(fgl_honda(2, 2, 3, 8)).value == 2
    h31 = fgl_honda(3, 1, 3, 8)
    res = n_series(reduce_to_residue(h31), 3)
    assert res.min_degree() == 3
    assert res.ring.is_unit(res.coefficient((3,)))
    assert height(h31).value == 1


def test_honda_2_2_p_series_mod_2():
    G = fgl_honda(2, 2, 3, 8)
    pser = n_series(reduce_to_residue(G), 2)
    assert pser.min_degree() == 4


def test_additive_height_is_bound():
    G = fgl_additive(WittCoefRing(3, 1), 8)
    h = height(G)
    assert h.value is None and h.at_least == 1


def test_malformed_p_series():
    F2 = WittCoefRing(2, 1)
    # not an FGL (associativity fails), but exercises the degree guard
    F = TruncSeries.from_int_terms(F2, ("x", "y"), 5,
                                   {(1, 0): 1, (0, 1): 1, (2, 1): 1})
    G = FormalGroupLaw(ring=F2, bound=5, F=F)
    with pytest.raises(MalformedPSeries):
        height(G)


def test_lubin_tate_specialization():
    LT = lubin_tate_deformation(2, 2, 3, 2, 8)
    assert all(LT.verify().values())
    sp = reduce_to_residue(specialize_deformation(LT))
    hon = reduce_to_residue(fgl_honda(2, 2, 3, 8))
    assert sp.F == hon.F
    # [2](x) = x^4 modulo the maximal ideal (2, u1)
    L = LT.ring
    red = n_series(LT, 2).map_coefficients(L.residue, ring=L.residue_ring())
    assert red.min_degree() == 4
    assert height(LT).value == 2


def test_lubin_tate_n1_is_honda():
    G = lubin_tate_deformation(3, 1, 2, 2, 6)
    assert isinstance(G.ring, WittCoefRing)
    red = n_series(reduce_to_residue(G), 3)
    assert red.min_degree() == 3


def test_precision_exhaustion_signal():
    from fractions import Fraction
    with pytest.raises(PrecisionExhausted):
        _frac_into(WittCoefRing(2, 3), Fraction(1, 2), "test")


def test_frobenius_isogeny_multiplicative():
    F2 = WittCoefRing(2, 1)
    G = fgl_multiplicative(F2, 6)
    iso = frobenius_isogeny(G)
    assert iso.verify()
    assert iso.target.F == G.F  # coefficients already in F_p
    assert iso.f == TruncSeries.from_int_terms(F2, ("x",), 6, {(2,): 1})


def test_frobenius_isogeny_additive_f3():
    F3 = WittCoefRing(3, 1)
    iso = frobenius_isogeny(fgl_additive(F3, 6))
    assert iso.verify()


def test_frobenius_iterate_is_composite():
    F2 = WittCoefRing(2, 1)
    G = fgl_multiplicative(F2, 6)
    once = frobenius_isogeny(G)
    twice = frobenius_isogeny(once.target).compose(once)
    direct = frobenius_isogeny(G, r=2)
    assert twice.f == direct.f
    assert direct.f == TruncSeries.from_int_terms(F2, ("x",), 6, {(4,): 1})


def test_frobenius_requires_char_p():
    with pytest.raises(NotCharP):
        frobenius_isogeny(fgl_multiplicative(WittCoefRing(2, 2), 4))


def test_height_invariant_under_coordinate_change():
    rng = random.Random(9)
    for G in (fgl_multiplicative(WittCoefRing(2, 1), 6), fgl_honda(2, 2, 1, 8),
              fgl_honda(3, 1, 1, 6)):
        R, D = G.ring, G.bound
        h0 = height(G).value
        for _ in range(3):
            terms = {(1,): R.one()}
            for k in range(2, D + 1):
                c = R.rand(rng)
                if not R.is_zero(c):
                    terms[(k,)] = c
            u = TruncSeries(R, ("x",), D, terms)
            from fglcheck.series import reversion
            uinv = reversion(u)
            x3 = TruncSeries.var(R, ("x", "y"), D, "x")
            y3 = TruncSeries.var(R, ("x", "y"), D, "y")
            conj = substitute(u, [substitute(
                G.F, [substitute(uinv, [x3]), substitute(uinv, [y3])])])
            Gc = FormalGroupLaw(ring=R, bound=D, F=conj)
            assert all(Gc.verify().values())
            assert height(Gc).value == h0


def test_bcp_multiplicative_z8():
    G = fgl_multiplicative(WittCoefRing(2, 3), 6)
    b = bcp_module(G)
    assert b.degree == 2 and b.basis == ("1", "x")
    assert b.distinguished == TruncSeries.from_int_terms(G.ring, ("x",), 6,
                                                         {(1,): 2, (2,): 1})
    assert b.unit * b.distinguished == n_series(G, 2)
    # multiplication by x: x*1 = x, x*x = -2x
    R = G.ring
    assert b.x_matrix[0] == [R.zero(), R.zero()]
    assert b.x_matrix[1] == [R.one(), R.from_int(-2)]


def test_bcp_additive_residue_zero():
    with pytest.raises(ResidueZero):
        bcp_module(fgl_additive(WittCoefRing(3, 1), 6))


def test_fgl_json_roundtrip():
    for G in (fgl_multiplicative(WittCoefRing(2, 3), 5),
              lubin_tate_deformation(2, 2, 2, 1, 4)):
        G2 = FormalGroupLaw.from_json(G.to_json())
        assert G2.F == G.F
