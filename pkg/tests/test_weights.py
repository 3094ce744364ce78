import random

import pytest

from fglcheck.exact_arith import IntegerRing, WittCoefRing
from fglcheck.linalg import Mat
from fglcheck.weights import (EpiFamily, InvariantViolation, NotLocal,
                              WeightedMonadData, binomial_gcd,
                              brute_force_surjective, epi_family_check,
                              inherit_structure, kummer_carries,
                              legendre_valuation, regularity_certificate,
                              sym_matrix)

F2 = WittCoefRing(2, 1)
Z8 = WittCoefRing(2, 3)


def test_binomial_gcd_values():
    assert binomial_gcd(4) == 2
    assert binomial_gcd(6) == 1
    assert binomial_gcd(27) == 3
    assert binomial_gcd(2) == 2
    assert binomial_gcd(125) == 5


def test_certificates():
    c = regularity_certificate(5, 3)
    assert (c.tag, c.r, c.index, c.valuation) == ("CoprimeCase", 1, 10, 0)
    c = regularity_certificate(6, 3)
    assert (c.tag, c.d, c.valuation) == ("DivisibleCase", 2, 0)
    # index of the partition stabilizer (S_3 x S_3) . S_2 inside S_6
    assert c.index == 720 // (6 * 6 * 2)
    assert regularity_certificate(2, 2).tag == "Critical"
    assert regularity_certificate(0, 5).tag == "TrivialWeight"
    assert regularity_certificate(1, 2).tag == "TrivialWeight"
    assert regularity_certificate(4, 2).tag == "DivisibleCase"
    assert regularity_certificate(8, 3).tag == "CoprimeCase"


def test_valuation_methods_agree():
    for m in range(2, 120):
        for p in (2, 3, 5, 7):
            if m % p == 0 and m != p:
                d = m // p
                v1 = kummer_carries((p,) * d, p) - legendre_valuation(d, p)
                v2 = (legendre_valuation(m, p) - d * legendre_valuation(p, p)
                      - legendre_valuation(d, p))
                assert v1 == v2


def test_epi_identity():
    fam = EpiFamily(ring=Z8, target_rank=2, maps=[Mat.identity(Z8, 2)])
    assert epi_family_check(fam).surjective


def test_epi_times_two_fails():
    fam = EpiFamily(ring=Z8, target_rank=1, maps=[Mat.from_int_rows(Z8, [[2]])])
    r = epi_family_check(fam)
    assert not r.surjective
    assert r.residue_rank == 0
    k = Z8.residue_ring()
    assert r.witness_functional == (k.one(),)


def test_epi_complementary_coordinates():
    fam = EpiFamily(ring=Z8, target_rank=2,
                    maps=[Mat.from_int_rows(Z8, [[1], [0]]),
                          Mat.from_int_rows(Z8, [[0], [1]])])
    assert epi_family_check(fam).surjective


def test_epi_requires_local_ring():
    fam = EpiFamily(ring=IntegerRing(), target_rank=1,
                    maps=[Mat.from_int_rows(IntegerRing(), [[1]])])
    with pytest.raises(NotLocal):
        epi_family_check(fam)


def test_epi_oracle_agreement():
    rng = random.Random(2)
    F4 = WittCoefRing(2, 1, ext=[1, 1, 1])
    for i in range(40):
        ring = Z8 if i % 2 == 0 else F4
        rank = rng.choice([1, 2])
        maps = []
        for _ in range(rng.choice([1, 2])):
            ncols = rng.choice([1, 2])
            maps.append(Mat(ring, [[ring.rand(rng) for _ in range(ncols)]
                                   for _ in range(rank)]))
        fam = EpiFamily(ring=ring, target_rank=rank, maps=maps)
        assert epi_family_check(fam).surjective == brute_force_surjective(fam)


def rank2_algebra_data(incl_rows):
    # F_2[x]/(x^2 - x): u = 1, w = x
    prod = Mat.from_int_rows(F2, [[1, 0, 0, 0], [0, 1, 1, 1]])
    return WeightedMonadData(ring=F2, m_rank=2, unit=(F2.one(), F2.zero()),
                             product=prod, bound=4,
                             incl=Mat.from_int_rows(F2, incl_rows))


def test_inherit_full_module():
    data = rank2_algebra_data([[1, 0], [0, 1]])
    res = inherit_structure(data, 2)
    assert res.ok
    for m in range(5):
        assert res.psi_n[m] == data.psi[m]


def test_inherit_zero_module():
    data = rank2_algebra_data([[], []])
    res = inherit_structure(data, 2)
    assert res.ok
    assert all(res.psi_n[m].nrows == 0 for m in range(5))


def test_inherit_unit_line():
    data = rank2_algebra_data([[1], [0]])
    res = inherit_structure(data, 2)
    assert res.ok and res.report.verdict
    # every weight acts as the identity on the line through 1
    for m in range(5):
        assert all(not F2.is_zero(c) for c in res.psi_n[m].rows[0][:1])


def test_inherit_unit_missing():
    data = rank2_algebra_data([[0], [1]])
    with pytest.raises(InvariantViolation) as e:
        inherit_structure(data, 2)
    assert e.value.diagram == "iota_weight_0"


def test_inherit_broken_closure_reports_element():
    prod3 = Mat.from_int_rows(F2, [
        [1, 0, 0, 0, 0, 0, 0, 0, 0],
        [0, 1, 0, 1, 0, 0, 0, 0, 0],
        [0, 0, 1, 0, 1, 0, 1, 0, 0]])
    data = WeightedMonadData(ring=F2, m_rank=3,
                             unit=(F2.one(), F2.zero(), F2.zero()),
                             product=prod3, bound=4,
                             incl=Mat.from_int_rows(F2, [[1, 0], [0, 1], [0, 0]]))
    res = inherit_structure(data, 2)
    assert not res.ok
    assert res.offending_weight == 2
    assert res.offending_element == "n1*n1"


def test_invalid_weight_data_rejected():
    data = rank2_algebra_data([[1], [0]])
    rows = [list(r) for r in data.psi[2].rows]
    rows[1][0] = F2.one()
    data.psi[2] = Mat(F2, rows)
    with pytest.raises(InvariantViolation) as e:
        inherit_structure(data, 2)
    assert e.value.diagram.startswith("delta")


def test_sym_matrix_functorial():
    rng = random.Random(8)
    for _ in range(5):
        A = Mat(F2, [[F2.rand(rng) for _ in range(2)] for _ in range(2)])
        B = Mat(F2, [[F2.rand(rng) for _ in range(2)] for _ in range(2)])
        for k in (2, 3):
            assert sym_matrix(F2, k, A @ B) == \
                sym_matrix(F2, k, A) @ sym_matrix(F2, k, B)
