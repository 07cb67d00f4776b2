"""Integral group ring Z[G] over a finite abelian group.

Elements are sparse: only nonzero coefficients are stored.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .abelian import AbelianGroup, GroupElement, combine, enumerate_elements, inverse, power

MASS_FACTOR = 2**16
COEFF_LIMIT = 2**63


class MassBoundError(OverflowError):
    """A product would exceed the configured total-mass bound."""


class GroupRingElement:
    """Formal sum ``sum_g a_g g`` with integer coefficients."""

    __slots__ = ("group", "_coeffs")

    def __init__(self, group: AbelianGroup, coefficients: Mapping[GroupElement, int] | None = None):
        self.group = group
        coeffs = {}
        for g, c in (coefficients or {}).items():
            if g.group != group:
                raise ValueError(f"element {g.residues} does not belong to {group}")
            if c:
                if not -COEFF_LIMIT <= c < COEFF_LIMIT:
                    raise OverflowError(f"coefficient {c} does not fit in 64 bits")
                coeffs[g] = int(c)
        self._coeffs = coeffs

    @classmethod
    def _raw(cls, group: AbelianGroup, coeffs: dict) -> GroupRingElement:
        # trusted constructor: drops zeros, checks the 64-bit range
        out = cls.__new__(cls)
        out.group = group
        clean = {}
        for g, c in coeffs.items():
            if c:
                if not -COEFF_LIMIT <= c < COEFF_LIMIT:
                    raise OverflowError(f"coefficient {c} does not fit in 64 bits")
                clean[g] = c
        out._coeffs = clean
        return out

    # mapping-style access ------------------------------------------------
    def __getitem__(self, g: GroupElement) -> int:
        return self._coeffs.get(g, 0)

    def items(self) -> Iterator[tuple[GroupElement, int]]:
        return iter(self._coeffs.items())

    def support(self) -> set[GroupElement]:
        return set(self._coeffs)

    def __len__(self) -> int:
        return len(self._coeffs)

    def __iter__(self):
        return iter(self._coeffs)

    @property
    def mass(self) -> int:
        """Sum of the coefficients, i.e. the value of the trivial character."""
        return sum(self._coeffs.values())

    @property
    def abs_mass(self) -> int:
        return sum(abs(c) for c in self._coeffs.values())

    def is_zero(self) -> bool:
        return not self._coeffs

    def is_set(self) -> bool:
        """True if every coefficient is 0 or 1."""
        return all(c == 1 for c in self._coeffs.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return self.group == other.group and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self.group, frozenset(self._coeffs.items())))

    def __repr__(self) -> str:
        terms = ", ".join(f"{c}*{list(g.residues)}" for g, c in sorted(self._coeffs.items()))
        return f"GroupRingElement({self.group.invariant_factors}, {{{terms}}})"

    # arithmetic ----------------------------------------------------------
    def __add__(self, other):
        return gr_add(self, other)

    def __sub__(self, other):
        return gr_sub(self, other)

    def __neg__(self):
        return gr_scale(-1, self)

    def __mul__(self, other):
        if isinstance(other, GroupRingElement):
            return gr_mul(self, other)
        if isinstance(other, int):
            return gr_scale(other, self)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, int):
            return gr_scale(other, self)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 1:
            raise ValueError("only positive powers are supported")
        out = self
        for _ in range(k - 1):
            out = gr_mul(out, self)
        return out

    def power_map(self, t: int) -> GroupRingElement:
        return gr_power_map(self, t)

    def mod(self, q: int) -> GroupRingElement:
        """Coefficients reduced into [0, q)."""
        return GroupRingElement._raw(self.group, {g: c % q for g, c in self._coeffs.items()})

    def to_json(self) -> list:
        return [[list(g.residues), c] for g, c in sorted(self._coeffs.items())]


def _check(A: GroupRingElement, B: GroupRingElement) -> None:
    if A.group != B.group:
        raise ValueError(f"group-ring elements over different groups: {A.group} vs {B.group}")


def gr_from_set(G: AbelianGroup, S: Iterable[GroupElement]) -> GroupRingElement:
    """Coefficient 1 on every member of ``S`` (repeats are counted as multiplicity)."""
    coeffs: dict[GroupElement, int] = defaultdict(int)
    for g in S:
        if g.group != G:
            raise ValueError(f"element {g.residues} does not belong to {G}")
        coeffs[g] += 1
    return GroupRingElement._raw(G, coeffs)


def gr_identity(G: AbelianGroup, c: int = 1) -> GroupRingElement:
    """``c * e``."""
    return GroupRingElement._raw(G, {G.identity: c})


def gr_full(G: AbelianGroup, c: int = 1) -> GroupRingElement:
    """``c * H``, the sum of all group elements."""
    return GroupRingElement._raw(G, {g: c for g in enumerate_elements(G)})


def gr_add(A: GroupRingElement, B: GroupRingElement) -> GroupRingElement:
    _check(A, B)
    out = dict(A._coeffs)
    for g, c in B._coeffs.items():
        out[g] = out.get(g, 0) + c
    return GroupRingElement._raw(A.group, out)


def gr_sub(A: GroupRingElement, B: GroupRingElement) -> GroupRingElement:
    _check(A, B)
    out = dict(A._coeffs)
    for g, c in B._coeffs.items():
        out[g] = out.get(g, 0) - c
    return GroupRingElement._raw(A.group, out)


def gr_scale(c: int, A: GroupRingElement) -> GroupRingElement:
    return GroupRingElement._raw(A.group, {g: c * a for g, a in A._coeffs.items()})


def gr_mul(A: GroupRingElement, B: GroupRingElement, mass_factor: int = MASS_FACTOR) -> GroupRingElement:
    """Convolution product, computed support by support."""
    _check(A, B)
    bound = A.group.order * mass_factor
    if A.abs_mass * B.abs_mass > bound:
        raise MassBoundError(
            f"product mass {A.abs_mass * B.abs_mass} exceeds bound {bound} for {A.group}"
        )
    out: dict[GroupElement, int] = defaultdict(int)
    for g, a in A._coeffs.items():
        for h, b in B._coeffs.items():
            out[combine(g, h)] += a * b
    return GroupRingElement._raw(A.group, out)


def gr_power_map(A: GroupRingElement, t: int) -> GroupRingElement:
    """``A^(t) = sum a_g g^t``; coefficients landing on the same image add up."""
    out: dict[GroupElement, int] = defaultdict(int)
    for g, a in A._coeffs.items():
        out[power(g, t)] += a
    return GroupRingElement._raw(A.group, out)


def gr_conjugate(A: GroupRingElement) -> GroupRingElement:
    """``A^(-1)``."""
    return GroupRingElement._raw(A.group, {inverse(g): a for g, a in A._coeffs.items()})


@dataclass(frozen=True)
class MultiplicityPartition:
    """Level sets ``X_i = {g : a_g = i}`` of a non-negative group-ring element."""

    group: AbelianGroup
    classes: dict[int, frozenset[GroupElement]]
    max_multiplicity: int

    def size(self, i: int) -> int:
        return len(self.classes.get(i, ()))

    def sizes(self) -> dict[int, int]:
        return {i: len(c) for i, c in sorted(self.classes.items())}

    def weighted_total(self) -> int:
        return sum(i * len(c) for i, c in self.classes.items())

    def reconstruct(self) -> GroupRingElement:
        out = GroupRingElement(self.group)
        for i, cls in self.classes.items():
            if i:
                out = out + gr_scale(i, gr_from_set(self.group, cls))
        return out


def multiplicity_partition(A: GroupRingElement) -> MultiplicityPartition:
    classes: dict[int, set] = defaultdict(set)
    for g in enumerate_elements(A.group):
        c = A[g]
        if c < 0:
            raise ValueError(f"negative coefficient {c} at {g.residues}")
        classes[c].add(g)
    frozen = {i: frozenset(s) for i, s in sorted(classes.items())}
    return MultiplicityPartition(A.group, frozen, max(frozen))
