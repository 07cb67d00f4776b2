from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from leekit.abelian import enumerate_elements, make_group
from leekit.groupring import (
    GroupRingElement,
    MassBoundError,
    gr_conjugate,
    gr_from_set,
    gr_full,
    gr_identity,
    gr_mul,
    gr_power_map,
    multiplicity_partition,
)

CYCLIC = [5, 7, 12, 19]
GROUPS = [[5], [7], [12], [19], [3, 3], [2, 4], [3, 6]]


def ring_elements(G, lo=-4, hi=4):
    elems = enumerate_elements(G)
    return st.lists(st.integers(lo, hi), min_size=len(elems), max_size=len(elems)).map(
        lambda cs: GroupRingElement(G, dict(zip(elems, cs)))
    )


@st.composite
def group_and_three(draw, groups=GROUPS):
    G = make_group(draw(st.sampled_from(groups)))
    r = ring_elements(G)
    return G, draw(r), draw(r), draw(r)


def dense(A):
    return np.array([A[g] for g in enumerate_elements(A.group)], dtype=np.int64)


def cyclic_convolution(a, b):
    # oracle: circular convolution by shifted copies
    m = len(a)
    out = np.zeros(m, dtype=np.int64)
    for i in range(m):
        out += a[i] * np.roll(b, i)
    return out


@pytest.mark.property
@given(group_and_three())
def test_ring_axioms(t):
    G, A, B, C = t
    assert gr_mul(A, B) == gr_mul(B, A)
    assert gr_mul(gr_mul(A, B), C) == gr_mul(A, gr_mul(B, C))
    assert gr_mul(A, B + C) == gr_mul(A, B) + gr_mul(A, C)
    assert gr_mul(A, gr_identity(G)) == A
    assert A + (-A) == GroupRingElement(G)
    assert (A * B).mass == A.mass * B.mass


@pytest.mark.property
@given(st.sampled_from(CYCLIC).flatmap(lambda m: st.tuples(st.just(m), ring_elements(make_group([m])), ring_elements(make_group([m])))))
def test_product_matches_dense_convolution(t):
    m, A, B = t
    assert np.array_equal(dense(gr_mul(A, B)), cyclic_convolution(dense(A), dense(B)))


@pytest.mark.property
@given(group_and_three(), st.integers(-7, 7))
def test_power_map_multiplicative(t, k):
    G, A, B, _ = t
    assert gr_power_map(gr_mul(A, B), k) == gr_mul(gr_power_map(A, k), gr_power_map(B, k))
    assert gr_power_map(A + B, k) == gr_power_map(A, k) + gr_power_map(B, k)
    assert gr_power_map(A, -1) == gr_conjugate(A)
    assert gr_power_map(A, k).mass == A.mass


@pytest.mark.property
@given(group_and_three())
def test_partition_reconstruction(t):
    G, A, B, _ = t
    # squares of differences are non-negative, so partition the product's absolute values
    P = GroupRingElement(G, {g: abs(c) for g, c in gr_mul(A, B).items()})
    part = multiplicity_partition(P)
    assert part.reconstruct() == P
    assert sum(part.sizes().values()) == G.order
    assert part.weighted_total() == P.mass
    seen = set()
    for cls in part.classes.values():
        assert not (seen & cls)
        seen |= cls


def test_partition_rejects_negative():
    G = make_group([5])
    with pytest.raises(ValueError):
        multiplicity_partition(gr_identity(G, -1))


def test_set_elements():
    G = make_group([7])
    S = gr_from_set(G, [G.element(1), G.element(3)])
    assert S.is_set()
    assert not (S + S).is_set()
    assert gr_full(G, 2).mass == 14
    assert S.support() == {G.element(1), G.element(3)}


def test_mass_bound():
    G = make_group([3])
    A = gr_full(G, 2**40)
    with pytest.raises(MassBoundError):
        gr_mul(A, A)


def test_mixed_groups_rejected():
    with pytest.raises(ValueError):
        gr_identity(make_group([5])) + gr_identity(make_group([7]))


def test_integer_scaling_and_powers():
    G = make_group([5])
    T = gr_from_set(G, [G.element(1), G.element(4)])
    assert 3 * T == T + T + T
    assert T**3 == gr_mul(gr_mul(T, T), T)
    with pytest.raises(ValueError):
        T**0
