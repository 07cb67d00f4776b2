"""Homomorphisms Z^n -> G, the bijection criterion for lattice tilings, and code lattices."""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence

import numpy as np

from .abelian import AbelianGroup, GroupElement
from .lee import LeeShape, Point


@dataclass(frozen=True)
class GroupHomomorphism:
    """phi: Z^n -> G determined by the images a_1, ..., a_n of the standard basis."""

    source_dim: int
    target: AbelianGroup
    images: tuple[GroupElement, ...]

    def __post_init__(self):
        if len(self.images) != self.source_dim:
            raise ValueError(f"need {self.source_dim} images, got {len(self.images)}")
        for a in self.images:
            if a.group != self.target:
                raise ValueError(f"image {a.residues} is not in {self.target}")

    @classmethod
    def from_residues(cls, target: AbelianGroup, images: Sequence[Sequence[int]]) -> GroupHomomorphism:
        imgs = tuple(target.element(a) for a in images)
        return cls(len(imgs), target, imgs)

    def __call__(self, x: Sequence[int]) -> GroupElement:
        return hom_apply(self, x)

    def image_matrix(self) -> list[list[int]]:
        return [list(a.residues) for a in self.images]


@dataclass(frozen=True)
class CodeLattice:
    """A full-rank sublattice of Z^n given by a row basis in Hermite normal form."""

    basis: tuple[tuple[int, ...], ...]
    determinant: int

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def reduce(self, x: Sequence[int]) -> tuple[int, ...]:
        """Canonical representative of ``x + L`` with 0 <= x_i < basis[i][i]."""
        x = list(x)
        for i, row in enumerate(self.basis):
            q = x[i] // row[i]
            if q:
                for j in range(i, len(x)):
                    x[j] -= q * row[j]
        return tuple(x)

    def __contains__(self, x: Sequence[int]) -> bool:
        return not any(self.reduce(x))

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.basis]


def hom_apply(phi: GroupHomomorphism, x: Sequence[int]) -> GroupElement:
    """sum_i x_i a_i in the target group."""
    if len(x) != phi.source_dim:
        raise ValueError(f"point has dimension {len(x)}, homomorphism expects {phi.source_dim}")
    fs = phi.target.invariant_factors
    acc = [0] * len(fs)
    for xi, a in zip(x, phi.images):
        if xi:
            for k, r in enumerate(a.residues):
                acc[k] += xi * r
    return GroupElement(phi.target, tuple(v % m for v, m in zip(acc, fs)))


@dataclass(frozen=True)
class BijectionResult:
    ok: bool
    collision: tuple[Point, Point] | None = None
    image: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.ok

    def detail(self) -> dict:
        if self.ok:
            return {"bijection": True}
        return {
            "bijection": False,
            "collision": [list(self.collision[0]), list(self.collision[1])],
            "image": list(self.image),
        }


def _check_sizes(phi: GroupHomomorphism, V: LeeShape | Sequence[Point]) -> list[Point]:
    pts = V.sorted_points() if isinstance(V, LeeShape) else sorted(tuple(p) for p in V)
    if len(pts) != phi.target.order:
        raise ValueError(f"|V| = {len(pts)} but |G| = {phi.target.order}; the criterion needs equal sizes")
    if any(len(p) != phi.source_dim for p in pts):
        raise ValueError("shape dimension does not match the homomorphism")
    return pts


def bijection_check(phi: GroupHomomorphism, V: LeeShape | Sequence[Point]) -> BijectionResult:
    """Whether phi restricted to V is injective (hence bijective, as |V| = |G|)."""
    pts = _check_sizes(phi, V)
    seen: dict[tuple[int, ...], Point] = {}
    for p in pts:
        g = hom_apply(phi, p).residues
        if g in seen:
            return BijectionResult(False, (seen[g], p), g)
        seen[g] = p
    return BijectionResult(True)


# ---------------------------------------------------------------------------
# integer lattices


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Returns the nonzero rows: upper echelon, positive pivots, and entries above
    each pivot reduced into ``[0, pivot)``.
    """
    A = [list(map(int, r)) for r in rows if any(r)]
    if not A:
        return []
    ncols = len(A[0])
    pivot_row = 0
    pivots = []
    for c in range(ncols):
        if pivot_row >= len(A):
            break
        # euclid on column c among rows >= pivot_row
        while True:
            nz = [i for i in range(pivot_row, len(A)) if A[i][c]]
            if not nz:
                break
            i_min = min(nz, key=lambda i: abs(A[i][c]))
            A[pivot_row], A[i_min] = A[i_min], A[pivot_row]
            if len(nz) == 1:
                break
            p = A[pivot_row][c]
            done = True
            for i in range(pivot_row + 1, len(A)):
                if A[i][c]:
                    q = A[i][c] // p
                    A[i] = [x - q * y for x, y in zip(A[i], A[pivot_row])]
                    if A[i][c]:
                        done = False
            if done:
                break
        if A[pivot_row][c] == 0:
            continue
        if A[pivot_row][c] < 0:
            A[pivot_row] = [-x for x in A[pivot_row]]
        pivots.append((pivot_row, c))
        pivot_row += 1
    A = A[:pivot_row]
    for r, c in pivots:
        p = A[r][c]
        for i in range(r):
            q = A[i][c] // p
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], A[r])]
    return A


def _kernel_rows(phi: GroupHomomorphism) -> list[list[int]]:
    n = phi.source_dim
    fs = phi.target.invariant_factors
    k = len(fs)
    # [a_i | e_i] for each generator, [m_j e_j | 0] for each relation
    aug = [list(a.residues) + [1 if j == i else 0 for j in range(n)] for i, a in enumerate(phi.images)]
    aug += [[m if j == jj else 0 for j in range(k)] + [0] * n for jj, m in enumerate(fs)]
    H = hermite_normal_form(aug)
    return [row[k:] for row in H if not any(row[:k])]


def _lattice(phi: GroupHomomorphism) -> CodeLattice:
    basis = hermite_normal_form(_kernel_rows(phi))
    if len(basis) != phi.source_dim:
        raise ArithmeticError("kernel lattice is not full rank")
    return CodeLattice(tuple(tuple(r) for r in basis), prod(basis[i][i] for i in range(len(basis))))


def image_subgroup(phi: GroupHomomorphism) -> set[tuple[int, ...]]:
    """The subgroup generated by the images, as residue tuples."""
    fs = phi.target.invariant_factors
    seen = {(0,) * len(fs)}
    frontier = list(seen)
    gens = [a.residues for a in phi.images]
    while frontier:
        nxt = []
        for g in frontier:
            for a in gens:
                h = tuple((x + y) % m for x, y, m in zip(g, a, fs))
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return seen


def is_surjective(phi: GroupHomomorphism) -> bool:
    return len(image_subgroup(phi)) == phi.target.order


def kernel_basis(phi: GroupHomomorphism) -> CodeLattice:
    """HNF basis of ker(phi); its determinant is |G| for surjective phi."""
    if not is_surjective(phi):
        raise ValueError("homomorphism is not surjective")
    L = _lattice(phi)
    if L.determinant != phi.target.order:
        raise ArithmeticError(f"kernel index {L.determinant} differs from |G| = {phi.target.order}")
    return L


def verify_kernel_basis(phi: GroupHomomorphism, basis: Sequence[Sequence[int]]) -> tuple[bool, str]:
    """Check a claimed generator matrix for ker(phi): rows in the kernel and same lattice."""
    basis = [list(map(int, r)) for r in basis]
    if len(basis) != phi.source_dim or any(len(r) != phi.source_dim for r in basis):
        return False, "kernel_basis must be an n x n matrix"
    for r in basis:
        if not hom_apply(phi, r).is_identity:
            return False, f"row {r} is not in the kernel"
    if hermite_normal_form(basis) != [list(r) for r in _lattice(phi).basis]:
        return False, "rows span a proper sublattice of the kernel"
    return True, "ok"


def packing_crosscheck(phi: GroupHomomorphism, V: LeeShape | Sequence[Point], chunk: int = 1 << 15) -> bool:
    """True iff no difference of two distinct points of V lies in the kernel lattice.

    Works with the HNF basis of ker(phi) instead of evaluating phi, so it is an
    independent route to the same answer as :func:`bijection_check`.
    """
    pts = _check_sizes(phi, V)
    L = _lattice(phi)
    B = np.array(L.basis, dtype=np.int64)
    P = np.array(pts, dtype=np.int64)
    iu, ju = np.triu_indices(len(pts), k=1)
    for s in range(0, len(iu), chunk):
        D = P[iu[s : s + chunk]] - P[ju[s : s + chunk]]
        member = np.ones(len(D), dtype=bool)
        # back-substitute through the upper-triangular basis
        for i in range(len(B)):
            q, r = np.divmod(D[:, i], B[i, i])
            member &= r == 0
            D = D - q[:, None] * B[i][None, :]
        if member.any():
            return False
    return True
