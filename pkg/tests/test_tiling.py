from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from leekit.abelian import make_group
from leekit.lee import double_lee_sphere
from leekit.tiling import (
    GroupHomomorphism,
    bijection_check,
    hermite_normal_form,
    image_subgroup,
    is_surjective,
    kernel_basis,
    packing_crosscheck,
    verify_kernel_basis,
)


def det(rows):
    # exact Gaussian elimination over the rationals
    M = [[Fraction(x) for x in r] for r in rows]
    n, d = len(M), Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c]), None)
        if p is None:
            return 0
        if p != c:
            M[c], M[p] = M[p], M[c]
            d = -d
        d *= M[c][c]
        for i in range(c + 1, n):
            f = M[i][c] / M[c][c]
            M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return int(d)


def in_lattice_brute(x, basis):
    # solve x = y B over Q and test integrality
    n = len(basis)
    M = [[Fraction(basis[j][i]) for j in range(n)] + [Fraction(x[i])] for i in range(n)]
    for c in range(n):
        p = next(i for i in range(c, n) if M[i][c])
        M[c], M[p] = M[p], M[c]
        M[c] = [v / M[c][c] for v in M[c]]
        for i in range(n):
            if i != c and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return all(row[-1].denominator == 1 for row in M)


@pytest.mark.property
@pytest.mark.parametrize("fs", [[18], [3, 6]])
def test_bijection_iff_packing_exhaustive_n2(fs):
    G = make_group(fs)
    D = double_lee_sphere(2, 2)
    agree = tilings = 0
    for a, b in itertools.product(G.elements(), repeat=2):
        phi = GroupHomomorphism(2, G, (a, b))
        bij = bijection_check(phi, D).ok
        assert bij == packing_crosscheck(phi, D)
        agree += 1
        tilings += bij
    assert agree == G.order**2
    if fs == [18]:
        assert tilings > 0


@pytest.mark.property
@given(st.data())
def test_bijection_iff_packing_random_n3(data):
    G = make_group(data.draw(st.sampled_from([[38], [2, 19]])))
    D = double_lee_sphere(3, 2)
    imgs = [data.draw(st.integers(0, 37)) for _ in range(3)]
    phi = GroupHomomorphism(3, G, tuple(G.element(x % G.order if G.rank == 1 else (x % 2, x % 19)) for x in imgs))
    assert bijection_check(phi, D).ok == packing_crosscheck(phi, D)


def test_known_tilings_agree(phi3, phi11):
    for phi, n in ((phi3, 3), (phi11, 11)):
        D = double_lee_sphere(n, 2)
        assert bijection_check(phi, D).ok
        assert packing_crosscheck(phi, D)


def test_bijection_reports_collision():
    G = make_group([18])
    phi = GroupHomomorphism.from_residues(G, [[0], [0]])
    res = bijection_check(phi, double_lee_sphere(2, 2))
    assert not res.ok
    p, q = res.collision
    assert phi(p) == phi(q) and p != q
    assert res.detail()["bijection"] is False


def test_size_mismatch_raises():
    phi = GroupHomomorphism.from_residues(make_group([17]), [[1], [2]])
    with pytest.raises(ValueError):
        bijection_check(phi, double_lee_sphere(2, 2))


@pytest.mark.property
@given(st.lists(st.lists(st.integers(-20, 20), min_size=3, max_size=3), min_size=1, max_size=5))
def test_hnf_properties(rows):
    H = hermite_normal_form(rows)
    # every input row lies in the HNF lattice and vice versa (same lattice)
    if len(H) == 3:
        for r in rows:
            assert in_lattice_brute(r, H)
    pivots = []
    for r in H:
        c = next(i for i, x in enumerate(r) if x)
        assert r[c] > 0
        pivots.append(c)
    assert pivots == sorted(set(pivots))
    for k, c in enumerate(pivots):
        for i in range(k):
            assert 0 <= H[i][c] < H[k][c]


@pytest.mark.property
@given(st.sampled_from([[7], [12], [3, 3], [2, 6], [38]]), st.data())
def test_kernel_basis_random(fs, data):
    G = make_group(fs)
    n = data.draw(st.integers(1, 3))
    imgs = [data.draw(st.sampled_from(G.elements())) for _ in range(n)]
    phi = GroupHomomorphism(n, G, tuple(imgs))
    if not is_surjective(phi):
        with pytest.raises(ValueError):
            kernel_basis(phi)
        return
    L = kernel_basis(phi)
    assert abs(det(L.basis)) == G.order == L.determinant
    for row in L.basis:
        assert phi(row).is_identity
    ok, _ = verify_kernel_basis(phi, L.basis)
    assert ok
    rng = random.Random(len(imgs))
    for _ in range(10):
        x = [rng.randint(-30, 30) for _ in range(n)]
        assert (x in L) == phi(x).is_identity


def test_code_determinants(phi3, phi11):
    assert kernel_basis(phi3).determinant == 38
    assert kernel_basis(phi11).determinant == 486
    assert abs(det(kernel_basis(phi3).basis)) == 38


def test_verify_kernel_basis_rejects(phi3):
    L = kernel_basis(phi3)
    rows = [list(r) for r in L.basis]
    rows[0][0] += 1
    ok, why = verify_kernel_basis(phi3, rows)
    assert not ok and "not in the kernel" in why
    doubled = [list(r) for r in L.basis]
    doubled[0] = [2 * x for x in doubled[0]]
    ok, why = verify_kernel_basis(phi3, doubled)
    assert not ok and "sublattice" in why
    ok, why = verify_kernel_basis(phi3, rows[:2])
    assert not ok


def test_image_subgroup():
    G = make_group([12])
    phi = GroupHomomorphism.from_residues(G, [[4], [6]])
    assert len(image_subgroup(phi)) == 6
    assert not is_surjective(phi)
