import random

import pytest

from fglcheck.exact_arith import WittCoefRing
from fglcheck.graded2 import (GradedMap, GradedObj, NotInvertible, SizeLimit,
                              SymObject, associator, flip_sign, from_z_graded,
                              interchange, left_unitor, omega_obj, omega_sqrt,
                              right_unitor, tensor_map, to_z_graded,
                              twisted_tensor, unit_obj, verify_coherence)
from fglcheck.linalg import Mat

Z8 = WittCoefRing(2, 3)


def standard_objects(ring=Z8):
    return [unit_obj(ring), omega_obj(ring), omega_sqrt(ring),
            GradedObj(ring, ("a",), ("b",))]


def test_tensor_ranks():
    M = GradedObj(Z8, ("m0",), ("m1",))
    N = GradedObj(Z8, ("n0",), ("n1",))
    T = twisted_tensor(M, N)
    assert T.ranks() == (2, 2)
    big = GradedObj(Z8, ("p", "q"), ("r",))
    T2 = twisted_tensor(big, N)
    assert T2.ranks() == (2 * 1 + 1 * 1, 2 * 1 + 1 * 1)


def test_omega_sqrt_squares_to_omega():
    h = omega_sqrt(Z8)
    hh = twisted_tensor(h, h)
    assert hh.ranks() == omega_obj(Z8).ranks() == (1, 0)


def test_unit_tensor_is_isomorphic():
    M = GradedObj(Z8, ("a", "b"), ("c",))
    lu = left_unitor(M)
    ru = right_unitor(M)
    assert lu.m0 == Mat.identity(Z8, 2) and lu.m1 == Mat.identity(Z8, 1)
    assert ru.m0 == Mat.identity(Z8, 2) and ru.m1 == Mat.identity(Z8, 1)


def test_interchange_even_is_plain_swap():
    M = GradedObj(Z8, ("a", "b"), ())
    N = GradedObj(Z8, ("c",), ())
    t = interchange(M, N)
    one, zero = Z8.one(), Z8.zero()
    assert t.m0 == Mat(Z8, [[one, zero], [zero, one]])  # (a,c),(b,c) -> (c,a),(c,b)
    assert all(not Z8.is_zero(e) or True for r in t.m0.rows for e in r)
    assert t.m1.shape == (0, 0)


def test_interchange_omega_sqrt_sign():
    h = omega_sqrt(Z8)
    t = interchange(h, h)
    assert t.m0 == Mat.identity(Z8, 1).scale(Z8.from_int(-1))


def test_interchange_involution_random_ranks():
    rng = random.Random(4)
    names = iter(f"e{i}" for i in range(100))
    for _ in range(6):
        M = GradedObj(Z8, tuple(next(names) for _ in range(rng.randrange(3))),
                      tuple(next(names) for _ in range(rng.randrange(3))))
        N = GradedObj(Z8, tuple(next(names) for _ in range(rng.randrange(3))),
                      tuple(next(names) for _ in range(rng.randrange(3))))
        pair = interchange(N, M).compose(interchange(M, N))
        assert pair.is_identity()


def test_associator_even_is_identity_permutation():
    M = GradedObj(Z8, ("a", "b"), ())
    N = GradedObj(Z8, ("c",), ())
    P = GradedObj(Z8, ("d",), ())
    al = associator(M, N, P)
    assert al.m0 == Mat.identity(Z8, 2)


def test_associator_omega_sqrt_triple():
    h = omega_sqrt(Z8)
    al = associator(h, h, h)
    # ((h@h)@h)^1 and (h@(h@h))^1 are both rank 1; the associator is the
    # 1x1 identity block and is invertible
    assert al.m1 == Mat.identity(Z8, 1)
    assert al.m0.shape == (0, 0)


def test_pentagon_on_omega_sqrt_quadruple():
    h = omega_sqrt(Z8)
    lhs = associator(h, h, twisted_tensor(h, h)).compose(
        associator(twisted_tensor(h, h), h, h))
    rhs = tensor_map(GradedMap.identity(h), associator(h, h, h)).compose(
        associator(h, twisted_tensor(h, h), h)).compose(
        tensor_map(associator(h, h, h), GradedMap.identity(h)))
    assert lhs == rhs


def test_coherence_standard_set():
    rep = verify_coherence(Z8, standard_objects())
    assert rep.verdict
    names = {c.name.split("[")[0] for c in rep.checks}
    assert {"pentagon", "triangle", "symmetry", "hexagon",
            "odd_square_sign"} <= names


def test_coherence_detects_sign_flip():
    objs = standard_objects()
    h = objs[2]

    def tau_fn(X, Y):
        m = interchange(X, Y)
        if X is h and Y is h:
            return flip_sign(m, 0, 0, 0)
        return m

    rep = verify_coherence(Z8, objs, interchange_fn=tau_fn)
    assert not rep.verdict


def test_coherence_size_limit():
    objs = [GradedObj(Z8, tuple(f"x{i}" for i in range(4)), ())]
    with pytest.raises(SizeLimit):
        verify_coherence(Z8, objs, max_rank=3)


def test_tensor_map_functorial():
    rng = random.Random(6)
    A = GradedObj(Z8, ("a0",), ("a1",))
    B = GradedObj(Z8, ("b0",), ("b1",))

    def rand_endo(X):
        return GradedMap(X, X,
                         Mat(Z8, [[Z8.rand(rng) for _ in range(X.rank0)]
                                  for _ in range(X.rank0)]),
                         Mat(Z8, [[Z8.rand(rng) for _ in range(X.rank1)]
                                  for _ in range(X.rank1)]))

    for _ in range(5):
        f, g = rand_endo(A), rand_endo(A)
        h, k = rand_endo(B), rand_endo(B)
        lhs = tensor_map(f.compose(g), h.compose(k))
        rhs = tensor_map(f, h).compose(tensor_map(g, k))
        assert lhs == rhs


def test_sym_object():
    w = SymObject(Z8, "w")
    assert w.as_object().ranks() == (1, 0)


def test_from_z_graded():
    assert from_z_graded(Z8, {0: 2}).ranks() == (2, 0)
    assert from_z_graded(Z8, {-1: 3}).ranks() == (0, 3)
    M = from_z_graded(Z8, {-2: 1, -1: 1, 0: 1, 1: 1, 2: 1})
    assert M.ranks() == (3, 2)
    assert to_z_graded(M) == {-2: 1, -1: 1, 0: 1, 1: 1, 2: 1}
    with pytest.raises(NotInvertible):
        from_z_graded(Z8, {0: 1}, omega_invertible=False)
