import random

import pytest

from fglcheck.exact_arith import WittCoefRing
from fglcheck.linalg import Mat
from fglcheck.theta_congruence import (CharacteristicMismatch, CongruenceFails,
                                       FiniteFreeShape, FrobeniusClassSpec,
                                       IllDefinedPsi, L1Data,
                                       MonicQuotientShape, PolyShape,
                                       PsiRingPresentation,
                                       congruence_stability_under_class_change,
                                       derive_theta,
                                       frobenius_congruence_comodule,
                                       gamma_congruence_check, theta_consistency,
                                       theta_of, verify_weight_p_squares,
                                       wilkerson_check)
from fglcheck.twisted_bialgebra import (algebra_on_w, height1_gamma,
                                        trivial_algebra)

Z32 = WittCoefRing(2, 5)


def poly_pres(W, images, coeffs="id", vars=("x",)):
    return PsiRingPresentation(W=W, shape=PolyShape(vars),
                               psi_on_coeffs=coeffs, psi_gen_images=images)


def test_frobenius_psi_passes():
    P = poly_pres(Z32, {"x": {(2,): Z32.one()}})
    assert wilkerson_check(P).verdict
    td = derive_theta(P)
    assert td.lowered.is_zero(td.theta_gens["x"])


def test_identity_psi_fails_with_witness():
    P = poly_pres(Z32, {"x": {(1,): Z32.one()}})
    rep = wilkerson_check(P)
    assert not rep.verdict
    assert any(n == "generator[x]" for n, _ in rep.witnesses)
    with pytest.raises(CongruenceFails):
        derive_theta(P)


def test_sigma_on_witt_passes():
    W = WittCoefRing(2, 4, ext=[1, 1, 1])
    P = PsiRingPresentation(W=W, shape=PolyShape(()), psi_on_coeffs="sigma")
    assert wilkerson_check(P, sample_bound=60).verdict


def test_theta_integer_values():
    P = PsiRingPresentation(W=WittCoefRing(2, 4), shape=PolyShape(()))
    th = theta_of(P, P.from_coeff(P.W.from_int(3)))
    # theta(3) = (3 - 9)/2 = -3, at precision 3
    assert list(th.values())[0] == P.W.lower().from_int(-3)
    th2 = theta_of(P, P.from_coeff(P.W.from_int(2)))
    assert list(th2.values())[0] == P.W.lower().from_int(-1)
    P3 = PsiRingPresentation(W=WittCoefRing(3, 4), shape=PolyShape(()))
    th3 = theta_of(P3, P3.from_coeff(P3.W.from_int(2)))
    assert list(th3.values())[0] == P3.W.lower().from_int(-2)
    assert theta_of(P, P.zero()) == {}


def test_theta_identities_on_quotient():
    W = WittCoefRing(2, 4)
    shape = MonicQuotientShape("x", (W.zero(), W.from_int(-1), W.one()))
    P = PsiRingPresentation(W=W, shape=shape,
                            psi_gen_images={"x": (W.zero(), W.one())})
    assert wilkerson_check(P).verdict
    assert theta_consistency(P, samples=20).verdict


def test_theta_identities_on_poly():
    P = poly_pres(Z32, {"x": {(2,): Z32.one()}})
    assert theta_consistency(P, samples=30).verdict


def test_ill_defined_psi():
    W = WittCoefRing(2, 3)
    shape = MonicQuotientShape("x", (W.zero(), W.zero(), W.one()))  # x^2 = 0
    P = PsiRingPresentation(W=W, shape=shape,
                            psi_gen_images={"x": (W.one(), W.zero())})
    with pytest.raises(IllDefinedPsi):
        wilkerson_check(P)


def test_finite_free_shape():
    W = WittCoefRing(2, 4)
    z, o = W.zero(), W.one()
    # W[b]/(b^2): basis (1, b)
    mult = ((0, 0, (o, z)), (0, 1, (z, o)), (1, 0, (z, o)), (1, 1, (z, z)))
    P = PsiRingPresentation(W=W, shape=FiniteFreeShape(("1", "b"), mult),
                            psi_gen_images={"b": (z, z)})  # psi(b) = 0 = b^2
    assert wilkerson_check(P).verdict
    td = derive_theta(P)
    assert td.lowered.is_zero(td.theta_gens["b"])


def test_gamma_congruence_paths():
    G = height1_gamma(2, 3, 2, 3)
    R = G.ring
    sigma = FrobeniusClassSpec(gamma=G, coords=(R.one(),))
    assert gamma_congruence_check(sigma, trivial_algebra(G)).verdict
    pert = algebra_on_w(G, {k: Mat(R, [[R.from_int(2) if k == 1 else R.one()]])
                            for k in range(4)})
    rep = gamma_congruence_check(sigma, pert)
    assert not rep.verdict and rep.witnesses
    rng = random.Random(1)
    gammas = [(R.rand(rng),) for _ in range(10)]
    assert congruence_stability_under_class_change(
        sigma, trivial_algebra(G), gammas).verdict


def test_gamma_congruence_records_theorem_a():
    G = height1_gamma(2, 3, 1, 2)
    sigma = FrobeniusClassSpec(gamma=G, coords=(G.ring.one(),))
    rep = gamma_congruence_check(sigma, trivial_algebra(G))
    assert "theorem_a" in rep.meta


def test_comodule_congruence():
    F2 = WittCoefRing(2, 1)
    B = PsiRingPresentation(W=F2, shape=PolyShape(("y",)))
    l1 = L1Data(W=WittCoefRing(2, 3))
    good = frobenius_congruence_comodule(
        l1, B, {"y": [(l1.W.one(), {(2,): F2.one()})]})
    assert good.verdict
    bad = frobenius_congruence_comodule(
        l1, B, {"y": [(l1.W.one(), {(1,): F2.one()})]})
    assert not bad.verdict
    assert any(n == "generator[y]" for n, _ in bad.witnesses)
    # B = F_p itself: trivially a^p = a
    triv = PsiRingPresentation(W=F2, shape=PolyShape(()))
    assert frobenius_congruence_comodule(l1, triv, {}).verdict


def test_comodule_requires_char_p():
    B = PsiRingPresentation(W=WittCoefRing(2, 2), shape=PolyShape(("y",)))
    with pytest.raises(CharacteristicMismatch):
        frobenius_congruence_comodule(L1Data(W=WittCoefRing(2, 3)), B, {})


def test_weight_p_squares():
    rep = verify_weight_p_squares(2, 4)
    assert rep.verdict
    assert rep.meta["pullback_basis"] == [
        ("<1 mod 2^4>", "<1 mod 2^4>"), ("<0 mod 2^4>", "<2 mod 2^4>")]
    assert rep.meta["pullback_divisors"] == [0, 1]
    assert rep.meta["pushout_relation_divisors"] == [0]
    assert rep.meta["generation_precision"] == 3


def test_weight_p_squares_odd_prime():
    assert verify_weight_p_squares(3, 3).verdict


def test_presentation_json_roundtrip():
    W = WittCoefRing(2, 4, ext=[1, 1, 1])
    P = PsiRingPresentation(W=W, shape=PolyShape(("x", "y")),
                            psi_on_coeffs="sigma",
                            psi_gen_images={"x": {(2, 0): W.one()},
                                            "y": {(0, 2): W.gen()}})
    P2 = PsiRingPresentation.from_json(P.to_json())
    assert P2.to_json() == P.to_json()
    assert wilkerson_check(P2, sample_bound=5).verdict == \
        wilkerson_check(P, sample_bound=5).verdict
