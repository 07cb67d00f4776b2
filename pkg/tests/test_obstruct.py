from __future__ import annotations

import copy

import pytest

from leekit.abelian import make_group
from leekit.obstruct import (
    CountingViolation,
    ObstructionCertificate,
    PdsParams,
    counting_profile,
    identity_suite,
    is_squarefree,
    square_coefficients,
    mod3_classify,
    pds_branch_certificate,
    pds_check,
    pds_route_check,
    quadratic_sum_obstruction,
    verify_certificate,
)
from leekit.witness import Witness


def squarefree_brute(m):
    return all(m % (d * d) for d in range(2, int(m**0.5) + 1))


def sum_squares_mod3_brute(m):
    return sum(i * i for i in range(1, m)) % 3


def test_n3_mod3_structure(w3):
    rep = mod3_classify(w3)
    assert rep["n_mod_3"] == 0
    assert rep["class_sizes"] == {"0": 1, "1": 6, "2": 6, "3": 6}
    assert all(c["ok"] for c in rep["checks"].values())
    prof = counting_profile(w3, "TT2")
    assert prof.beta == 0
    assert prof.sizes() == {0: 1, 1: 6, 2: 6, 3: 6}


def test_n11_structure(w11):
    prof = counting_profile(w11, "TT2")
    assert prof.max_multiplicity == 22
    assert prof.partition.classes[22] == frozenset({w11.H.identity})
    assert prof.sizes() == {1: 22, 2: 220, 22: 1}
    assert prof.beta == 11
    rep = mod3_classify(w11)
    assert rep["n_mod_3"] == 2 and rep["checks"]["X0_empty"]["ok"]


@pytest.mark.parametrize("source", ["TT2", "TT4", "TT5"])
def test_counting_identities(w3, w11, source):
    for w in (w3, w11):
        prof = counting_profile(w, source)
        assert all(rec["ok"] for rec in prof.identities.values())
        assert prof.partition.weighted_total() == 4 * w.n**2


def test_counting_profile_rejects_unknown_source(w3):
    with pytest.raises(ValueError):
        counting_profile(w3, "TT3")


def test_counting_profile_rejects_non_witness():
    with pytest.raises(ValueError):
        counting_profile(Witness.from_residues(3, make_group([19]), [1, 18, 2, 17, 3, 16]), "TT2")


def test_identity_suite(w3, w11):
    for w in (w3, w11):
        out = identity_suite(w)
        assert out and all(out.values()), out


def test_square_dichotomy_direct_count(w3, w11):
    for w in (w3, w11):
        sq = {(2 * t).residues for t in w.T}
        coeffs = square_coefficients(w)
        nonzero = [g.residues for g in w.H.elements() if not g.is_identity]
        for g in nonzero:
            assert coeffs.get(g, 0) == (1 if g in sq else 2)


def test_triples_disjoint(w3, w11):
    for w in (w3, w11):
        assert not (w.T & {3 * t for t in w.T})


def test_n11_is_partial_difference_set(w11):
    v = pds_check(w11.H, w11.T, PdsParams(243, 22, 1, 2))
    assert v.equation and v.prime_divisors
    assert v.detail["prime_divisors"] == {"v": [3], "delta": [3], "v2_over_delta": [3]}
    bad = pds_check(w11.H, w11.T, PdsParams(243, 22, 0, 2))
    assert not bad.equation and "first_mismatch" in bad.detail


def test_pds_check_input_errors(w11):
    H = w11.H
    with pytest.raises(ValueError):
        pds_check(H, set(), PdsParams(243, 0, 0, 0))
    with pytest.raises(ValueError):
        pds_check(H, w11.T | {H.identity}, PdsParams(243, 23, 1, 2))
    with pytest.raises(ValueError):
        pds_check(H, w11.T, PdsParams(243, 21, 1, 2))


def test_pds_route_sweep():
    hits = [n for n in range(3, 10**6 + 1) if pds_route_check(n).holds]
    assert hits == [11]
    r = pds_route_check(11)
    assert (r.a, r.b) == (5, 4)
    assert pds_route_check(2).below_scope


def test_pds_branch_certificates():
    assert pds_branch_certificate(11) is None
    for n in range(3, 60):
        if n == 11:
            continue
        c = pds_branch_certificate(n)
        assert c is not None and verify_certificate(c)


@pytest.mark.parametrize("n,m,factors", [(5, 102, [[2, 1], [3, 1], [17, 1]]), (8, 258, [[2, 1], [3, 1], [43, 1]]), (14, 786, [[2, 1], [3, 1], [131, 1]])])
def test_quadratic_certificates(n, m, factors):
    c = quadratic_sum_obstruction(n)
    assert c.kind == "quadratic_sum_mod3"
    assert c.evidence["modulus"] == m
    assert c.evidence["modulus_factorization"] == factors
    assert verify_certificate(c)


def test_quadratic_sweep_to_500():
    for n in range(3, 501):
        c = quadratic_sum_obstruction(n)
        m = 4 * n * n + 2
        expected = n % 9 in (5, 8) and squarefree_brute(m)
        assert (c is not None) == expected
        if c is not None:
            assert verify_certificate(c)
            assert sum_squares_mod3_brute(m) == c.evidence["rhs_sum_of_squares_mod_3"] != 0
    assert quadratic_sum_obstruction(3) is None
    assert quadratic_sum_obstruction(11) is None


def test_squarefree():
    for m in range(1, 3000):
        assert is_squarefree(m) == squarefree_brute(m)
    with pytest.raises(ValueError):
        is_squarefree(0)


@pytest.mark.parametrize(
    "path,value",
    [
        (("modulus",), 103),
        (("modulus_factorization",), [[2, 1], [51, 1]]),
        (("modulus_factorization",), [[2, 1], [3, 1], [17, 2]]),
        (("rhs_sum_of_squares_mod_3",), 0),
        (("lhs_coefficients",), [1, 2]),
    ],
)
def test_tampered_certificate_rejected(path, value):
    c = quadratic_sum_obstruction(5)
    ev = copy.deepcopy(c.evidence)
    ev[path[0]] = value
    assert not verify_certificate(ObstructionCertificate(5, c.kind, ev))


def test_certificate_for_wrong_n_rejected():
    c = quadratic_sum_obstruction(5)
    assert not verify_certificate(ObstructionCertificate(6, c.kind, c.evidence))


def test_malformed_certificate_raises():
    with pytest.raises(ValueError):
        verify_certificate(ObstructionCertificate(5, "quadratic_sum_mod3", {}))
    with pytest.raises(ValueError):
        verify_certificate(ObstructionCertificate(5, "nonsense", {}))


def test_certificate_json_round_trip():
    c = quadratic_sum_obstruction(8)
    assert ObstructionCertificate.from_json(c.to_json()) == c


def test_forged_counting_violation_rejected(w3):
    ev = {"identity": "TT2:weighted_total", "lhs": 36, "rhs": 36, "witness": w3.to_json()}
    assert not verify_certificate(ObstructionCertificate(3, "counting_violation", ev))
    ev = {"identity": "mod3:X0_size", "lhs": 2, "rhs": 1, "witness": w3.to_json()}
    assert not verify_certificate(ObstructionCertificate(3, "counting_violation", ev))


def test_counting_violation_is_verifiable(monkeypatch, w3):
    # skipping the witness check lets a non-witness reach the counting identities
    from leekit import obstruct

    monkeypatch.setattr(obstruct, "_require_witness", lambda w: w.ring())
    bogus = Witness.from_residues(3, make_group([19]), [1, 18, 2, 17, 3, 16])
    with pytest.raises(CountingViolation) as exc:
        counting_profile(bogus, "TT2")
    assert verify_certificate(exc.value.certificate)
