"""Witness sets T in groups of order 2n^2+1, and the linear DPL(n,6) codes they give.

A witness is a 2n-element inverse-closed set T in an abelian group H of order
2n^2+1 with ``T*T = 2H - T^(2) + (2n-2)e``.  Lifting the pair
representatives t_i to ``(1, t_i)`` in ``Z_2 x H`` gives a homomorphism
``Z^n -> Z_2 x H`` that is bijective on the double sphere DS_{n,2}(0, e_1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .abelian import (
    AbelianGroup,
    GroupElement,
    character_sum,
    characters,
    direct_product,
    enumerate_elements,
    inverse,
    make_group,
)
from .gf import GaloisField
from .groupring import (
    GroupRingElement,
    gr_conjugate,
    gr_from_set,
    gr_full,
    gr_identity,
    gr_mul,
    gr_power_map,
)
from .lee import double_lee_sphere
from .tiling import GroupHomomorphism, bijection_check

# x^5 + 2x + 1, constant term first
DPL11_MODULUS = (1, 2, 0, 0, 0, 1)
DPL11_STEP = 11

# least witness over Z_19 under the pair order; `leekit search --n 3` re-derives it
DPL3_PAIRS = (1, 7, 8)


class LiftError(RuntimeError):
    """A verified witness whose (1, t_i) lift is not bijective on the double sphere."""


@dataclass(frozen=True)
class Witness:
    n: int
    H: AbelianGroup
    T: frozenset[GroupElement]

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        for t in self.T:
            if t.group != self.H:
                raise ValueError(f"element {t.residues} is not in {self.H}")

    @classmethod
    def from_residues(cls, n: int, H: AbelianGroup, residues: Iterable[Sequence[int] | int]) -> Witness:
        return cls(n, H, frozenset(H.element(r) for r in residues))

    def ring(self) -> GroupRingElement:
        return gr_from_set(self.H, self.T)

    def sorted_elements(self) -> list[GroupElement]:
        return sorted(self.T)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "group": self.H.to_json(),
            "T": [list(t.residues) for t in self.sorted_elements()],
        }

    @classmethod
    def from_json(cls, data: dict) -> Witness:
        H = AbelianGroup.from_json(data["group"])
        return cls.from_residues(int(data["n"]), H, data["T"])


@dataclass
class WitnessVerdict:
    ok: bool
    conditions: dict[str, dict] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "conditions": self.conditions}


def target_element(w: Witness) -> GroupRingElement:
    """``2H - T^(2) + (2n-2)e``, what T*T must equal."""
    T = w.ring()
    return gr_full(w.H, 2) - gr_power_map(T, 2) + gr_identity(w.H, 2 * w.n - 2)


def verify_witness(w: Witness) -> WitnessVerdict:
    """Check |T| = 2n, T = T^(-1) and T^2 = 2H - T^(2) + (2n-2)e."""
    n = w.n
    if w.H.order != 2 * n * n + 1:
        raise ValueError(f"|H| = {w.H.order} but 2n^2+1 = {2 * n * n + 1} for n = {n}")
    T = w.ring()
    conds: dict[str, dict] = {}

    conds["size"] = {"ok": len(w.T) == 2 * n, "expected": 2 * n, "actual": len(w.T)}

    missing = sorted(t for t in w.T if inverse(t) not in w.T)
    c2 = {"ok": not missing}
    if missing:
        c2["first_unpaired"] = list(missing[0].residues)
    conds["inverse_closed"] = c2

    lhs = gr_mul(T, T)
    rhs = target_element(w)
    c3: dict = {"ok": True}
    for g in enumerate_elements(w.H):
        if lhs[g] != rhs[g]:
            c3 = {"ok": False, "element": list(g.residues), "expected": rhs[g], "actual": lhs[g]}
            break
    conds["square_equation"] = c3

    return WitnessVerdict(all(c["ok"] for c in conds.values()), conds)


def pair_representatives(w: Witness) -> list[GroupElement]:
    """One element of each pair {t, -t}: the lexicographically smaller one."""
    reps = set()
    for t in w.T:
        s = inverse(t)
        if s == t:
            raise ValueError(f"element {t.residues} is its own inverse")
        if s not in w.T:
            raise ValueError(f"T is not inverse-closed: {s.residues} missing")
        reps.add(min(t, s))
    return sorted(reps)


# ---------------------------------------------------------------------------
# the two known constructions


@dataclass(frozen=True)
class Dpl11Construction:
    modulus_polynomial: tuple[int, ...] = DPL11_MODULUS
    exponent_step: int = DPL11_STEP

    @property
    def field(self) -> GaloisField:
        return GaloisField(3, self.modulus_polynomial)

    @property
    def primitive_element(self) -> tuple[int, ...]:
        return self.field.least_primitive_element()

    def witness(self) -> Witness:
        F = self.field
        g = self.primitive_element
        h = F.pow(g, self.exponent_step)
        H = make_group([3] * F.degree)
        T, x = set(), F.one
        for _ in range((F.order - 1) // self.exponent_step):
            T.add(H.element(x))
            x = F.mul(x, h)
        return Witness(11, H, frozenset(T))


def construct_dpl11() -> Witness:
    """The 11th powers of a primitive element of GF(3^5), read in (GF(3^5), +)."""
    return Dpl11Construction().witness()


def construct_dpl3() -> Witness:
    H = make_group([19])
    return Witness.from_residues(3, H, [x for t in DPL3_PAIRS for x in (t, -t)])


def lift_to_code(w: Witness) -> GroupHomomorphism:
    """phi: Z^n -> Z_2 x H with phi(e_i) = (1, t_i); checked on DS_{n,2}(0, e_1)."""
    verdict = verify_witness(w)
    if not verdict.ok:
        raise ValueError(f"not a witness: {verdict.conditions}")
    reps = pair_representatives(w)
    G, embed = direct_product([2, *w.H.invariant_factors])
    phi = GroupHomomorphism(w.n, G, tuple(embed((1, *t.residues)) for t in reps))
    res = bijection_check(phi, double_lee_sphere(w.n, 2))
    if not res.ok:
        raise LiftError(f"lift of a verified witness collides on DS_{{{w.n},2}}: {res.detail()}")
    return phi


@dataclass
class CharacterVerdict:
    ok: bool
    checked: int
    vanishing: list[tuple[int, ...]]

    def __bool__(self) -> bool:
        return self.ok


def character_nonvanishing(w: Witness, stop_early: bool = False) -> CharacterVerdict:
    """Exact check that chi(T) != 0 for every nontrivial character chi."""
    T = w.ring()
    vanishing, checked = [], 0
    for chi in characters(w.H):
        if chi.is_trivial:
            continue
        checked += 1
        if character_sum(chi, T).is_zero():
            vanishing.append(chi.exponent_tuple)
            if stop_early:
                break
    return CharacterVerdict(not vanishing, checked, vanishing)


def squared_witness(w: Witness) -> Witness:
    """The set T^(2), again a witness over the same H when T is one."""
    return Witness(w.n, w.H, frozenset(2 * t for t in w.T))


def is_inverse_closed(w: Witness) -> bool:
    return gr_conjugate(w.ring()) == w.ring()
