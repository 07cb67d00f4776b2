"""Lee-metric geometry in Z^n: distance, spheres and double spheres."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterator, Sequence, TextIO

Point = tuple[int, ...]


def _point(u: Sequence[int]) -> Point:
    p = tuple(int(x) for x in u)
    if not p:
        raise ValueError("points need dimension >= 1")
    return p


def lee_distance(u: Sequence[int], v: Sequence[int]) -> int:
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")
    return sum(abs(a - b) for a, b in zip(u, v))


def unit_vector(n: int, i: int) -> Point:
    """e_{i+1}: the standard basis vector with a 1 in coordinate ``i`` (0-based)."""
    return tuple(1 if j == i else 0 for j in range(n))


def _ball(n: int, r: int) -> Iterator[Point]:
    # recursive descent on the remaining radius; lexicographic output
    if n == 0:
        yield ()
        return
    for x in range(-r, r + 1):
        for rest in _ball(n - 1, r - abs(x)):
            yield (x,) + rest


@dataclass(frozen=True)
class LeeShape:
    """A finite point set in Z^n together with how it was built."""

    dimension: int
    points: frozenset[Point]
    kind: str
    radius: int
    centers: tuple[Point, ...]

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.sorted_points())

    def __contains__(self, x) -> bool:
        return tuple(x) in self.points

    def sorted_points(self) -> list[Point]:
        return sorted(self.points)

    def translate(self, c: Sequence[int]) -> frozenset[Point]:
        return frozenset(tuple(a + b for a, b in zip(p, c)) for p in self.points)

    def write_rows(self, fh: TextIO) -> None:
        """One point per line, coordinates separated by single spaces."""
        for p in self.sorted_points():
            fh.write(" ".join(str(x) for x in p) + "\n")


def read_rows(fh: TextIO) -> list[Point]:
    return [tuple(int(x) for x in line.split()) for line in fh if line.strip()]


def lee_sphere(n: int, r: int, center: Sequence[int] | None = None) -> LeeShape:
    """All points within Lee distance ``r`` of ``center`` (the origin by default)."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"dimension must be >= 1, got {n!r}")
    if not isinstance(r, int) or r < 0:
        raise ValueError(f"radius must be >= 0, got {r!r}")
    c = (0,) * n if center is None else _point(center)
    if len(c) != n:
        raise ValueError(f"center has dimension {len(c)}, expected {n}")
    pts = frozenset(tuple(a + b for a, b in zip(p, c)) for p in _ball(n, r))
    return LeeShape(n, pts, "sphere", r, (c,))


def double_lee_sphere(
    n: int, r: int, u: Sequence[int] | None = None, v: Sequence[int] | None = None
) -> LeeShape:
    """``S_{n,r}(u) | S_{n,r}(v)`` for adjacent centers; defaults to ``(0, e_1)``."""
    u = (0,) * n if u is None else _point(u)
    v = unit_vector(n, 0) if v is None else _point(v)
    if len(u) != n or len(v) != n:
        raise ValueError("center dimension does not match n")
    if lee_distance(u, v) != 1:
        raise ValueError(f"double sphere centers must be at Lee distance 1, got {lee_distance(u, v)}")
    pts = lee_sphere(n, r, u).points | lee_sphere(n, r, v).points
    return LeeShape(n, pts, "double_sphere", r, (u, v))


def ds_size_formula(n: int, r: int) -> int:
    """Closed-form size of a double Lee sphere of radius ``r`` in dimension ``n``."""
    if n < 1 or r < 0:
        raise ValueError("need n >= 1 and r >= 0")
    return sum(2 ** (i + 1) * comb(n - 1, i) * comb(r + 1, i + 1) for i in range(min(n - 1, r) + 1))


def sphere_size(n: int, r: int) -> int:
    """Number of points in a Lee sphere: sum_i 2^i C(n, i) C(r, i)."""
    return sum(2**i * comb(n, i) * comb(r, i) for i in range(min(n, r) + 1))
