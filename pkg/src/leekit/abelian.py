"""Finite abelian groups in invariant-factor form, and their characters.

Groups are written additively: an element is a tuple of residues, one per
invariant factor.  Character values are carried exactly as cyclotomic
integers, so a character sum can be tested for zero without rounding.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import gcd, prod
from typing import Callable, Iterable, Iterator, Sequence

ELEMENT_BOUND = 10**6
TRIAL_DIVISION_BOUND = 10**6


class FactorizationError(ValueError):
    """Raised when an integer has a prime factor beyond the trial-division bound."""


def factorize(m: int, bound: int = TRIAL_DIVISION_BOUND) -> dict[int, int]:
    """Prime factorization of ``m`` by trial division, as ``{prime: exponent}``."""
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise ValueError(f"expected a positive integer, got {m!r}")
    out: dict[int, int] = {}
    for p in (2, 3):
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
    p = 5
    step = 2
    while p * p <= m:
        if p > bound:
            raise FactorizationError(f"cofactor {m} has no prime factor <= {bound}")
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
        p += step
        step = 6 - step
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def integer_partitions(e: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of ``e`` as non-increasing tuples, largest first part first."""
    if largest is None:
        largest = e
    if e == 0:
        yield ()
        return
    for first in range(min(e, largest), 0, -1):
        for rest in integer_partitions(e - first, first):
            yield (first,) + rest


def _as_int(x) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        try:
            import numpy as np

            if isinstance(x, np.integer):
                return int(x)
        except ImportError:  # pragma: no cover
            pass
        raise TypeError(f"expected an integer, got {x!r}")
    return x


def _canonical_factors(factors: Sequence[int]) -> tuple[tuple[int, ...], Callable]:
    """Invariant factors of a direct product of cyclic groups plus the isomorphism.

    The returned callable maps a residue tuple over ``factors`` to residues over
    the canonical invariant factors.
    """
    # split every cyclic factor into its prime-power parts
    parts: dict[int, list[tuple[int, int]]] = {}  # p -> [(p^k, source index)]
    for j, m in enumerate(factors):
        for p, k in factorize(m).items():
            parts.setdefault(p, []).append((p**k, j))
    if not parts:
        return (), lambda residues: ()
    for p in parts:
        parts[p].sort(key=lambda t: -t[0])
    length = max(len(v) for v in parts.values())
    # slot s (0 = largest) collects the s-th largest power of every prime
    canon_desc = [prod(v[s][0] for v in parts.values() if s < len(v)) for s in range(length)]
    canonical = tuple(reversed(canon_desc))

    def embed(residues: Sequence[int]) -> tuple[int, ...]:
        out = []
        for s in range(length):
            modulus = canon_desc[s]
            value, mod_so_far = 0, 1
            for v in parts.values():
                if s >= len(v):
                    continue
                q, j = v[s]
                r = residues[j] % q
                # CRT step: value ≡ previous (mod mod_so_far), value ≡ r (mod q)
                t = ((r - value) * pow(mod_so_far, -1, q)) % q
                value += mod_so_far * t
                mod_so_far *= q
            out.append(value % modulus)
        return tuple(reversed(out))

    return canonical, embed


@dataclass(frozen=True)
class AbelianGroup:
    """Finite abelian group ``Z_{m_1} x ... x Z_{m_k}`` with ``m_1 | m_2 | ... | m_k``."""

    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        fs = self.invariant_factors
        if not fs:
            raise ValueError("a group needs at least one invariant factor")
        for a, b in zip(fs, fs[1:]):
            if b % a:
                raise ValueError(f"invariant factors {fs} do not form a divisibility chain")
        if fs[0] < 2:
            raise ValueError("invariant factors must be >= 2")

    @cached_property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def is_cyclic(self) -> bool:
        return len(self.invariant_factors) == 1

    @property
    def identity(self) -> GroupElement:
        return GroupElement(self, (0,) * self.rank)

    def element(self, residues: Iterable[int] | int) -> GroupElement:
        if isinstance(residues, int) and not isinstance(residues, bool):
            residues = (residues,)
        rs = tuple(_as_int(r) for r in residues)
        if len(rs) != self.rank:
            raise ValueError(f"expected {self.rank} residues, got {len(rs)}")
        return GroupElement(self, tuple(r % m for r, m in zip(rs, self.invariant_factors)))

    def elements(self, bound: int = ELEMENT_BOUND) -> list[GroupElement]:
        return enumerate_elements(self, bound)

    def __contains__(self, g) -> bool:
        return isinstance(g, GroupElement) and g.group == self

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"AbelianGroup({list(self.invariant_factors)})"

    def to_json(self) -> dict:
        return {"invariant_factors": list(self.invariant_factors)}

    @classmethod
    def from_json(cls, data: dict) -> AbelianGroup:
        # strict: residues in a document only make sense in the group exactly as written
        return cls(tuple(_as_int(m) for m in data["invariant_factors"]))


@dataclass(frozen=True, slots=True)
class GroupElement:
    group: AbelianGroup = field(repr=False)
    residues: tuple[int, ...]

    def __add__(self, other: GroupElement) -> GroupElement:
        return combine(self, other)

    def __neg__(self) -> GroupElement:
        return inverse(self)

    def __sub__(self, other: GroupElement) -> GroupElement:
        return combine(self, inverse(other))

    def __mul__(self, t: int) -> GroupElement:
        return power(self, t)

    __rmul__ = __mul__

    def __lt__(self, other: GroupElement) -> bool:
        return self.residues < other.residues

    @property
    def is_identity(self) -> bool:
        return not any(self.residues)

    def order(self) -> int:
        out = 1
        for r, m in zip(self.residues, self.group.invariant_factors):
            k = m // gcd(r, m)
            out = out * k // gcd(out, k)
        return out

    def to_json(self) -> list[int]:
        return list(self.residues)


def make_group(invariant_factors: Sequence[int]) -> AbelianGroup:
    """Build a group from any list of cyclic orders, e.g. ``[3, 11] -> [33]``."""
    if isinstance(invariant_factors, (str, bytes)) or not len(invariant_factors):
        raise ValueError("need a non-empty list of integers")
    fs = [_as_int(m) for m in invariant_factors]
    if any(m < 2 for m in fs):
        raise ValueError(f"every factor must be >= 2, got {fs}")
    canonical, _ = _canonical_factors(fs)
    return AbelianGroup(canonical)


def direct_product(factors: Sequence[int]) -> tuple[AbelianGroup, Callable[[Sequence[int]], GroupElement]]:
    """Canonical group for ``Z_{f_1} x ... x Z_{f_k}`` with an explicit isomorphism.

    The callable maps residues over ``factors`` to an element of the canonical group.
    """
    fs = [_as_int(m) for m in factors]
    if any(m < 2 for m in fs):
        raise ValueError(f"every factor must be >= 2, got {fs}")
    canonical, embed = _canonical_factors(fs)
    G = AbelianGroup(canonical)
    return G, lambda residues: GroupElement(G, embed(residues))


def _check_same(g: GroupElement, h: GroupElement) -> None:
    if g.group != h.group:
        raise ValueError(f"elements from different groups: {g.group} vs {h.group}")


def combine(g: GroupElement, h: GroupElement) -> GroupElement:
    _check_same(g, h)
    return GroupElement(
        g.group, tuple((a + b) % m for a, b, m in zip(g.residues, h.residues, g.group.invariant_factors))
    )


def inverse(g: GroupElement) -> GroupElement:
    return GroupElement(g.group, tuple(-a % m for a, m in zip(g.residues, g.group.invariant_factors)))


def power(g: GroupElement, t: int) -> GroupElement:
    t = _as_int(t)
    return GroupElement(g.group, tuple(a * t % m for a, m in zip(g.residues, g.group.invariant_factors)))


def enumerate_elements(G: AbelianGroup, bound: int = ELEMENT_BOUND) -> list[GroupElement]:
    """All elements of ``G`` in lexicographic order of residue tuples."""
    if G.order > bound:
        raise ValueError(f"group order {G.order} exceeds enumeration bound {bound}")
    return [GroupElement(G, r) for r in itertools.product(*(range(m) for m in G.invariant_factors))]


def element_index(g: GroupElement) -> int:
    """Position of ``g`` in :func:`enumerate_elements` order."""
    idx = 0
    for r, m in zip(g.residues, g.group.invariant_factors):
        idx = idx * m + r
    return idx


def abelian_groups_of_order(v: int) -> list[AbelianGroup]:
    """One group per isomorphism class of abelian groups of order ``v``.

    Ordered by the per-prime partitions, largest parts first, so the cyclic
    group always comes first.
    """
    v = _as_int(v)
    if v < 1:
        raise ValueError("order must be >= 1")
    if v == 1:
        return []
    fac = factorize(v)
    primes = sorted(fac)
    out = []
    for choice in itertools.product(*(list(integer_partitions(fac[p])) for p in primes)):
        length = max(len(c) for c in choice)
        desc = [prod(p ** c[s] for p, c in zip(primes, choice) if s < len(c)) for s in range(length)]
        out.append(AbelianGroup(tuple(reversed(desc))))
    return out


# ---------------------------------------------------------------------------
# exact cyclotomic arithmetic


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients (constant term first) of the ``m``-th cyclotomic polynomial."""
    if m < 1:
        raise ValueError("m must be >= 1")
    num = [-1] + [0] * (m - 1) + [1]  # x^m - 1
    for d in range(1, m):
        if m % d == 0:
            num = _exact_divide(num, cyclotomic_polynomial(d))
    return tuple(num)


def _exact_divide(num: list[int], den: Sequence[int]) -> list[int]:
    num = list(num)
    dd = len(den) - 1
    q = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            q[i - dd] = c
            for j, dc in enumerate(den):
                num[i - dd + j] -= c * dc
    if any(num[:dd]):
        raise ArithmeticError("inexact polynomial division")
    return q


def _reduce(coeffs: Sequence[int], m: int) -> tuple[int, ...]:
    """Reduce a polynomial in zeta modulo the m-th cyclotomic polynomial."""
    folded = [0] * m
    for k, c in enumerate(coeffs):
        folded[k % m] += c
    phi = cyclotomic_polynomial(m)
    deg = len(phi) - 1
    for i in range(m - 1, deg - 1, -1):
        c = folded[i]
        if c:
            for j in range(deg + 1):
                folded[i - deg + j] -= c * phi[j]
    return tuple(folded[:deg])


@dataclass(frozen=True)
class CyclotomicValue:
    """An element of Z[zeta_m], stored in the power basis 1, zeta, ..., zeta^(phi(m)-1)."""

    m: int
    coeffs: tuple[int, ...]

    @classmethod
    def from_exponent_counts(cls, m: int, counts: Sequence[int]) -> CyclotomicValue:
        """The value ``sum_k counts[k] * zeta^k``."""
        return cls(m, _reduce(counts, m))

    @classmethod
    def integer(cls, m: int, c: int) -> CyclotomicValue:
        return cls.from_exponent_counts(m, [c])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def _check(self, other: CyclotomicValue) -> None:
        if self.m != other.m:
            raise ValueError("cyclotomic values over different roots of unity")

    def __add__(self, other: CyclotomicValue) -> CyclotomicValue:
        self._check(other)
        return CyclotomicValue(self.m, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: CyclotomicValue) -> CyclotomicValue:
        self._check(other)
        return CyclotomicValue(self.m, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other: CyclotomicValue) -> CyclotomicValue:
        self._check(other)
        prod_ = [0] * (2 * len(self.coeffs))
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    prod_[i + j] += a * b
        return CyclotomicValue(self.m, _reduce(prod_, self.m))

    def as_integer(self) -> int | None:
        """The rational integer this value equals, or None if it is irrational."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0] if self.coeffs else 0

    def to_complex(self) -> complex:
        import cmath

        z = cmath.exp(2j * cmath.pi / self.m)
        return sum(c * z**k for k, c in enumerate(self.coeffs))


@dataclass(frozen=True)
class Character:
    """The character ``g -> zeta^(sum c_i r_i (m / m_i))`` with m the group exponent."""

    group: AbelianGroup = field(repr=False)
    exponent_tuple: tuple[int, ...]

    @property
    def is_trivial(self) -> bool:
        return not any(self.exponent_tuple)

    def exponent_at(self, g: GroupElement) -> int:
        """k such that chi(g) = zeta^k, with 0 <= k < exponent."""
        if g.group != self.group:
            raise ValueError("element and character over different groups")
        m = self.group.exponent
        return sum(c * r * (m // mi) for c, r, mi in zip(self.exponent_tuple, g.residues, self.group.invariant_factors)) % m

    def __call__(self, g: GroupElement) -> CyclotomicValue:
        counts = [0] * self.group.exponent
        counts[self.exponent_at(g)] = 1
        return CyclotomicValue.from_exponent_counts(self.group.exponent, counts)


def characters(G: AbelianGroup, bound: int = ELEMENT_BOUND) -> list[Character]:
    """All characters of ``G``, in the same lexicographic order as its elements."""
    return [Character(G, g.residues) for g in enumerate_elements(G, bound)]


def character_sum(chi: Character, A) -> CyclotomicValue:
    """Exact value of ``sum_g a_g chi(g)`` for a group-ring element ``A``."""
    if A.group != chi.group:
        raise ValueError("character and group-ring element over different groups")
    m = chi.group.exponent
    counts = [0] * m
    for g, c in A.items():
        counts[chi.exponent_at(g)] += c
    return CyclotomicValue.from_exponent_counts(m, counts)
