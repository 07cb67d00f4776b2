"""Prime-power finite fields GF(p^k) as polynomials modulo a fixed irreducible.

Field elements are coefficient tuples ``(c_0, ..., c_{k-1})`` for
``c_0 + c_1 x + ... + c_{k-1} x^{k-1}``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .abelian import factorize


def _trim(p: list[int]) -> list[int]:
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    """Remainder of ``a`` divided by the monic polynomial ``m`` over GF(p)."""
    a = _trim([x % p for x in a])
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        c = a[-1]
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _trim(a)
    return a


def is_irreducible(m: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1 .. deg(m)//2."""
    m = [x % p for x in m]
    if not m or m[-1] != 1:
        raise ValueError("modulus must be monic")
    deg = len(m) - 1
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not poly_mod(m, list(low) + [1], p):
                return False
    return True


@dataclass(frozen=True)
class GaloisField:
    p: int
    modulus: tuple[int, ...]  # monic, constant term first

    def __post_init__(self):
        if not is_irreducible(self.modulus, self.p):
            raise ValueError(f"{self.modulus} is not irreducible over GF({self.p})")

    @property
    def degree(self) -> int:
        return len(self.modulus) - 1

    @property
    def order(self) -> int:
        return self.p**self.degree

    def element(self, coeffs: Sequence[int]) -> tuple[int, ...]:
        c = list(poly_mod(coeffs, self.modulus, self.p))
        return tuple(c + [0] * (self.degree - len(c)))

    def from_int(self, v: int) -> tuple[int, ...]:
        """Base-p digits of ``v``, least significant first."""
        out = []
        for _ in range(self.degree):
            v, r = divmod(v, self.p)
            out.append(r)
        return tuple(out)

    def to_int(self, a: Sequence[int]) -> int:
        return sum(c * self.p**i for i, c in enumerate(a))

    def elements(self) -> list[tuple[int, ...]]:
        """All field elements in increasing integer-encoding order."""
        return [self.from_int(v) for v in range(self.order)]

    @property
    def one(self) -> tuple[int, ...]:
        return self.element([1])

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x % self.p for x in a)

    def mul(self, a, b):
        prod = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return self.element(prod)

    def pow(self, a, e: int):
        if e < 0:
            raise ValueError("negative exponents are not supported")
        out, base = self.one, a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def multiplicative_order(self, a) -> int:
        if not any(a):
            raise ValueError("zero has no multiplicative order")
        q1 = self.order - 1
        o = q1
        for prime in factorize(q1):
            while o % prime == 0 and self.pow(a, o // prime) == self.one:
                o //= prime
        return o

    def is_primitive(self, a) -> bool:
        return any(a) and self.multiplicative_order(a) == self.order - 1

    def least_primitive_element(self):
        """First primitive element in integer-encoding order."""
        for v in range(1, self.order):
            a = self.from_int(v)
            if self.is_primitive(a):
                return a
        raise ArithmeticError("no primitive element found")  # unreachable for a field
