from __future__ import annotations

import io
import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from leekit.lee import (
    double_lee_sphere,
    ds_size_formula,
    lee_distance,
    lee_sphere,
    read_rows,
    sphere_size,
    unit_vector,
)


def brute_ds_count(n: int, r: int) -> int:
    # every point within r of 0 or e_1 lies in the box [-r, r+1] x [-r, r]^(n-1)
    axes = [np.arange(-r, r + 2)] + [np.arange(-r, r + 1)] * (n - 1)
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
    d0 = np.abs(grid).sum(axis=1)
    shifted = grid.copy()
    shifted[:, 0] -= 1
    d1 = np.abs(shifted).sum(axis=1)
    return int(np.count_nonzero((d0 <= r) | (d1 <= r)))


@pytest.mark.parametrize("n,r", [(n, r) for n in range(1, 7) for r in range(0, 5)])
def test_ds_size_formula_brute_force(n, r):
    assert ds_size_formula(n, r) == brute_ds_count(n, r)


@pytest.mark.parametrize("n", range(1, 13))
def test_ds_radius_two(n):
    assert ds_size_formula(n, 2) == 4 * n * n + 2
    if n <= 8:
        assert len(double_lee_sphere(n, 2)) == 4 * n * n + 2


@pytest.mark.parametrize("n,r", [(1, 3), (2, 2), (3, 2), (4, 3), (5, 1)])
def test_sphere_enumeration(n, r):
    S = lee_sphere(n, r)
    assert len(S) == sphere_size(n, r)
    box = itertools.product(range(-r, r + 1), repeat=n)
    assert S.points == frozenset(p for p in box if sum(map(abs, p)) <= r)


@pytest.mark.property
@given(st.lists(st.integers(-50, 50), min_size=1, max_size=6).flatmap(
    lambda u: st.tuples(st.just(u), st.lists(st.integers(-50, 50), min_size=len(u), max_size=len(u)))))
def test_lee_distance_metric(uv):
    u, v = uv
    assert lee_distance(u, v) == lee_distance(v, u) >= 0
    assert (lee_distance(u, v) == 0) == (list(u) == list(v))
    zero = [0] * len(u)
    assert lee_distance(u, v) <= lee_distance(u, zero) + lee_distance(zero, v)


def test_double_sphere_centers():
    D = double_lee_sphere(3, 2)
    assert D.centers == ((0, 0, 0), unit_vector(3, 0))
    assert (0, 0, 0) in D and (3, 0, 0) in D and (-3, 0, 0) not in D
    other = double_lee_sphere(3, 2, (0, 0, 0), (0, 0, -1))
    assert len(other) == len(D)
    with pytest.raises(ValueError):
        double_lee_sphere(3, 2, (0, 0, 0), (1, 1, 0))
    with pytest.raises(ValueError):
        double_lee_sphere(3, 2, (0, 0), (1, 0))


def test_rows_round_trip():
    D = double_lee_sphere(2, 2)
    buf = io.StringIO()
    D.write_rows(buf)
    buf.seek(0)
    assert read_rows(buf) == D.sorted_points()


def test_bad_arguments():
    with pytest.raises(ValueError):
        lee_sphere(0, 1)
    with pytest.raises(ValueError):
        lee_sphere(2, -1)
    with pytest.raises(ValueError):
        ds_size_formula(0, 2)
    with pytest.raises(ValueError):
        lee_distance((1, 2), (1,))


def test_translate():
    S = lee_sphere(2, 1)
    assert S.translate((5, 5)) == lee_sphere(2, 1, (5, 5)).points
