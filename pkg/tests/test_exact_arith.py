import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fglcheck.exact_arith import (NotDivisible, RingMismatch,
                                  WittCoefRing, ring_from_descriptor)


def test_zmod_products():
    Z16 = WittCoefRing(2, 4)
    assert Z16.from_int(3) * Z16.from_int(5) == Z16.from_int(15)
    assert Z16.from_int(8) + Z16.from_int(8) == Z16.zero()
    assert Z16.from_int(3) * 5 == Z16.from_int(15)
    assert 5 * Z16.from_int(3) == 15 + Z16.zero()


def test_witt_f4_product():
    W = WittCoefRing(2, 2, ext=[1, 1, 1])
    t = W.gen()
    assert t * t == W.elem((3, 3))  # -t - 1 mod 4


def test_ring_mismatch():
    a = WittCoefRing(2, 4).from_int(1)
    b = WittCoefRing(2, 3).from_int(1)
    with pytest.raises(RingMismatch):
        a + b


def test_invalid_rings():
    with pytest.raises(ValueError):
        WittCoefRing(4, 2)
    with pytest.raises(ValueError):
        WittCoefRing(2, 0)
    with pytest.raises(ValueError):
        WittCoefRing(2, 2, ext=[1, 0, 1])  # t^2 + 1 = (t+1)^2 mod 2
    with pytest.raises(ValueError):
        WittCoefRing(3, 2, ext=[1, 1, 1])  # t^2 + t + 1 has the root 1 mod 3


def test_frobenius_identity_when_f1():
    W = WittCoefRing(2, 5)
    s = W.frobenius_lift()
    for x in [W.from_int(n) for n in (0, 1, 7, 19)]:
        assert s(x) == x


def test_frobenius_f4():
    W = WittCoefRing(2, 3, ext=[1, 1, 1])
    s = W.frobenius_lift()
    t = W.gen()
    # sigma(t) is the Hensel root congruent to t^2 mod 2
    assert W.in_max_ideal(s(t) - t * t)
    from fglcheck.exact_arith import _poly_eval
    assert W.is_zero(_poly_eval(W, W.lift, s.root))
    assert s(s(t)) == t


def test_frobenius_postconditions_exhaustive():
    W = WittCoefRing(2, 3, ext=[1, 1, 1])
    s = W.frobenius_lift()
    elems = list(W.elements())
    for x in elems:
        assert W.in_max_ideal(s(x) - x * x)
        assert s(s(x)) == x
    for x in elems[::5]:
        for y in elems[::7]:
            assert s(x * y) == s(x) * s(y)
            assert s(x + y) == s(x) + s(y)


def test_frobenius_order_f3():
    W = WittCoefRing(2, 2, ext=[1, 1, 0, 1])  # t^3 + t + 1 irreducible mod 2
    s = W.frobenius_lift()
    t = W.gen()
    assert s(s(s(t))) == t
    assert s(t) != t
    assert W.in_max_ideal(s(t) - t * t)


def test_divide_by_p():
    Z16 = WittCoefRing(2, 4)
    q = Z16.divide_by_p(Z16.from_int(6))
    assert q.ring.N == 3 and q == q.ring.from_int(3)
    with pytest.raises(NotDivisible) as e:
        Z16.divide_by_p(Z16.from_int(3))
    assert e.value.witness == 1
    W = WittCoefRing(2, 3, ext=[1, 1, 1])
    t = W.gen()
    q = W.divide_by_p(2 * t + 2)
    assert q == q.ring.gen() + 1


def test_divide_by_p_of_multiple_is_truncation():
    W = WittCoefRing(3, 3)
    low = W.lower()
    for x in W.elements():
        assert W.divide_by_p(3 * x) == W.truncate_to(low, x)


def test_val_unit_and_inverse():
    W = WittCoefRing(2, 4, ext=[1, 1, 1])
    t = W.gen()
    v, u = W.val_unit(4 * t + 8)
    assert v == 2 and W.is_unit(u)
    assert W.from_int(4) * u == 4 * t + 8
    for x in (t, t + 1, W.from_int(3), 5 * t + 2):
        assert x * W.inv(x) == W.one()
    with pytest.raises(ZeroDivisionError):
        W.inv(W.from_int(2))


def test_descriptor_roundtrip():
    for W in (WittCoefRing(2, 4), WittCoefRing(3, 2, ext=[1, 0, 1])):
        W2 = ring_from_descriptor(W.descriptor())
        assert W.same_ring(W2)
        x = W.from_int(5) if W.f == 1 else W.gen() + 2
        assert W.decode(W.encode(x)) == x


@settings(max_examples=50, deadline=None)
@given(st.integers(), st.integers(), st.integers())
def test_ring_axioms_z27(a, b, c):
    W = WittCoefRing(3, 3)
    x, y, z = W.from_int(a), W.from_int(b), W.from_int(c)
    assert (x + y) * z == x * z + y * z
    assert x * (y * z) == (x * y) * z
    assert x * y == y * x
    assert x + (-x) == W.zero()


@settings(max_examples=40, deadline=None)
@given(st.tuples(st.integers(0, 7), st.integers(0, 7)),
       st.tuples(st.integers(0, 7), st.integers(0, 7)),
       st.tuples(st.integers(0, 7), st.integers(0, 7)))
def test_ring_axioms_witt(a, b, c):
    W = WittCoefRing(2, 3, ext=[1, 1, 1])
    x, y, z = W.elem(a), W.elem(b), W.elem(c)
    assert x * (y * z) == (x * y) * z
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
