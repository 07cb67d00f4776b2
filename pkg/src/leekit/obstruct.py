"""Counting identities on witnesses and self-contained nonexistence certificates.

Instance-level checks work on a concrete witness T: the multiplicity profiles
of TT^(2), TT^(4), TT^(5), the mod-3 congruences for TT^(2), and the
polynomial identities that follow from the square equation.  Certificates
record modular or divisibility arguments that rule out every witness for a
given n, with every number spelled out so they can be re-checked from n alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .abelian import AbelianGroup, FactorizationError, enumerate_elements, factorize, inverse
from .groupring import (
    GroupRingElement,
    MultiplicityPartition,
    gr_from_set,
    gr_full,
    gr_identity,
    gr_mul,
    gr_power_map,
    multiplicity_partition,
)
from .witness import Witness, verify_witness

SOURCES = {"TT2": 2, "TT4": 4, "TT5": 5}
KINDS = ("quadratic_sum_mod3", "pds_power_of_3", "counting_violation")


@dataclass(frozen=True)
class ObstructionCertificate:
    n: int
    kind: str
    evidence: dict

    def to_json(self) -> dict:
        return {"n": self.n, "kind": self.kind, "evidence": self.evidence}

    @classmethod
    def from_json(cls, data: dict) -> ObstructionCertificate:
        return cls(int(data["n"]), data["kind"], dict(data["evidence"]))


class CountingViolation(Exception):
    """A counting identity failed on a set that was supposed to be a witness."""

    def __init__(self, certificate: ObstructionCertificate):
        super().__init__(f"{certificate.evidence['identity']} fails for n={certificate.n}")
        self.certificate = certificate


# ---------------------------------------------------------------------------
# counting profiles


@dataclass
class CountingProfile:
    source: str
    partition: MultiplicityPartition
    beta: int
    gamma: int
    identities: dict[str, dict] = field(default_factory=dict)

    @property
    def max_multiplicity(self) -> int:
        return self.partition.max_multiplicity

    def sizes(self) -> dict[int, int]:
        return self.partition.sizes()

    def to_json(self) -> dict:
        return {
            "source": self.source,
            "class_sizes": {str(k): v for k, v in self.sizes().items()},
            "max_multiplicity": self.max_multiplicity,
            "beta": self.beta,
            "gamma": self.gamma,
            "identities": self.identities,
        }


def _violation(w: Witness, identity: str, lhs, rhs, **extra) -> CountingViolation:
    ev = {"identity": identity, "lhs": lhs, "rhs": rhs, "witness": w.to_json(), **extra}
    return CountingViolation(ObstructionCertificate(w.n, "counting_violation", ev))


def _require_witness(w: Witness) -> GroupRingElement:
    verdict = verify_witness(w)
    if not verdict.ok:
        raise ValueError(f"not a witness: {verdict.conditions}")
    return w.ring()


def _alpha(w: Witness, s: int) -> int:
    """#{i < j : b_i - b_j in T^(2)} over the 2n elements b of T^(s)."""
    sq = {2 * t for t in w.T}
    bs = sorted({s * t for t in w.T})
    return sum(1 for i in range(len(bs)) for j in range(i + 1, len(bs)) if bs[i] - bs[j] in sq)


def counting_profile(w: Witness, source: str = "TT2") -> CountingProfile:
    """Multiplicity classes of ``T T^(s)`` and the counting identities they satisfy.

    Checked: sum of i*|X_i| = 4n^2, sum of |X_i| = 2n^2+1, and
    sum_{i>=1} |X_i| = 2n + alpha + sum_{i>=3} (i-1)(i-2)/2 |X_i|, with
    alpha = 2n - beta for TT2 and 2n - gamma for TT4.
    """
    if source not in SOURCES:
        raise ValueError(f"source must be one of {sorted(SOURCES)}")
    T = _require_witness(w)
    n, s = w.n, SOURCES[source]
    prod_ = gr_mul(T, gr_power_map(T, s))
    part = multiplicity_partition(prod_)
    sizes = part.sizes()
    beta = len(w.T & {2 * t for t in w.T}) // 2
    gamma = len(w.T & {4 * t for t in w.T}) // 2

    ids: dict[str, dict] = {}
    lhs1 = sum(i * c for i, c in sizes.items() if i >= 1)
    ids["weighted_total"] = {"lhs": lhs1, "rhs": 4 * n * n}
    ids["class_total"] = {"lhs": sum(sizes.values()), "rhs": 2 * n * n + 1}
    support = sum(c for i, c in sizes.items() if i >= 1)
    higher = sum((i - 1) * (i - 2) // 2 * c for i, c in sizes.items() if i >= 3)
    alpha = _alpha(w, s)
    if source == "TT2":
        ids["alpha"] = {"lhs": alpha, "rhs": 2 * n - beta}
        ids["support_count"] = {"lhs": support, "rhs": 4 * n - beta + higher}
    elif source == "TT4":
        ids["alpha"] = {"lhs": alpha, "rhs": 2 * n - gamma}
        ids["support_count"] = {"lhs": support, "rhs": 4 * n - gamma + higher}
    else:
        ids["support_count"] = {"lhs": support, "rhs": 2 * n + alpha + higher}
    for name, rec in ids.items():
        rec["ok"] = rec["lhs"] == rec["rhs"]
        if not rec["ok"]:
            raise _violation(w, f"{source}:{name}", rec["lhs"], rec["rhs"])
    return CountingProfile(source, part, beta, gamma, ids)


# ---------------------------------------------------------------------------
# congruences and exact identities


def _first_diff(A: GroupRingElement, B: GroupRingElement, q: int | None = None):
    for g in enumerate_elements(A.group):
        a, b = A[g], B[g]
        if (a - b) % q if q else a != b:
            return g, a, b
    return None


def mod3_classify(w: Witness) -> dict:
    """The mod-3 shape of TT^(2), by the residue of n mod 3.

    n = 1: TT^(2) = H + 2T^(3);  n = 2: TT^(2) = 2H + 2T + 2T^(3);
    n = 0: TT^(2) = T + 2T^(3), and then X_1 = T, |X_0| = 2n^2/3 - 2n + 1,
    |X_3| = 4n^2/3 - 2n, beta = 0 and TT^(2) = T + 2T^(3) + 3X_3 exactly.
    """
    T = _require_witness(w)
    n, H = w.n, w.H
    full = gr_full(H)
    T3 = gr_power_map(T, 3)
    TT2 = gr_mul(T, gr_power_map(T, 2))
    r = n % 3
    if r == 1:
        expected = full + 2 * T3
    elif r == 2:
        expected = 2 * full + 2 * T + 2 * T3
    else:
        expected = T + 2 * T3
    report: dict = {"n_mod_3": r, "checks": {}}
    checks = report["checks"]

    def record(name, ok, lhs=None, rhs=None):
        checks[name] = {"ok": ok, **({} if lhs is None else {"lhs": lhs, "rhs": rhs})}
        if not ok:
            raise _violation(w, f"mod3:{name}", lhs, rhs)

    diff = _first_diff(TT2, expected, 3)
    if diff:
        g, a, b = diff
        record("congruence", False, a % 3, b % 3)
    record("congruence", True)

    part = multiplicity_partition(TT2)
    sizes = part.sizes()
    report["class_sizes"] = {str(k): v for k, v in sizes.items()}
    if r == 0:
        x0, x1, x2, x3 = (part.size(i) for i in range(4))
        record("X1_is_T", part.classes.get(1, frozenset()) == w.T, x1, 2 * n)
        record("X0_size", x0 == 2 * n * n // 3 - 2 * n + 1, x0, 2 * n * n // 3 - 2 * n + 1)
        record("X2_size", x2 == 2 * n, x2, 2 * n)
        record("X3_size", x3 == 4 * n * n // 3 - 2 * n, x3, 4 * n * n // 3 - 2 * n)
        top = max(sizes)
        record("no_multiplicity_above_3", top <= 3, top, 3)
        beta = len(w.T & {2 * t for t in w.T}) // 2
        record("beta_zero", beta == 0, beta, 0)
        X3 = gr_from_set(H, part.classes.get(3, ()))
        exact = T + 2 * T3 + 3 * X3
        record("exact_form", TT2 == exact)
    else:
        record("X0_empty", part.size(0) == 0, part.size(0), 0)
    return report


def identity_suite(w: Witness) -> dict[str, bool]:
    """Exact group-ring identities implied by the square equation, checked on w."""
    T = _require_witness(w)
    n, H = w.n, w.H
    e = lambda c: gr_identity(H, c)  # noqa: E731
    full = lambda c: gr_full(H, c)  # noqa: E731
    T2, T3m, T4m = gr_power_map(T, 2), gr_power_map(T, 3), gr_power_map(T, 4)
    T5m = gr_power_map(T, 5)
    sq = gr_mul(T, T)
    cube = gr_mul(sq, T)
    fourth = gr_mul(cube, T)
    fifth = gr_mul(fourth, T)
    sixth = gr_mul(fifth, T, mass_factor=2**40)
    TT2 = gr_mul(T, T2)
    TT4 = gr_mul(T, T4m)
    TT5 = gr_mul(T, T5m)
    out: dict[str, bool] = {}

    # every non-identity coefficient of T^2 is 1 (on T^(2)) or 2
    squares = {2 * t for t in w.T}
    out["dichotomy"] = all(sq[g] == (1 if g in squares else 2) for g in enumerate_elements(H) if not g.is_identity)
    out["disjoint_from_triples"] = not (w.T & {3 * t for t in w.T})
    out["squares_form_witness"] = verify_witness(Witness(n, H, frozenset(squares))).ok
    out["TT2_expansion"] = TT2 == full(4 * n) + (2 * n - 2) * T - cube
    out["fourth_power"] = fourth == full(8 * n * n - 2) + e(4 * n * n - 6 * n + 2) - T4m - (4 * n - 4) * T2
    out["TT4_expansion"] = TT4 == full(16 * n**3 - 4 * n) + (4 * n * n - 6 * n + 2) * T - (4 * n - 4) * TT2 - fifth
    T2T4 = gr_mul(T2, T4m)
    sixth_rhs = (
        full(32 * n**4 - 16 * n * n + 8 * n - 4)
        - (12 * n * n - 22 * n + 10) * T2
        + T2T4
        - (6 * n - 6) * T4m
        + e(8 * n**3 - 12 * n * n + 4)
    )
    out["sixth_power"] = sixth == sixth_rhs
    # T^5 = T^(5) mod 5, so TT^(5) agrees with the expansion of T^6 mod 5
    out["TT5_mod5"] = _first_diff(TT5, sixth_rhs, 5) is None
    out["frobenius_cube_mod3"] = _first_diff(cube, T3m, 3) is None
    out["T6_power_map_mod"] = _first_diff(sixth, gr_mul(T, T5m), 5) is None
    return out


def square_coefficients(w: Witness) -> dict[tuple[int, ...], int]:
    """Coefficient of every non-identity t in T^2, counted directly over T x T."""
    counts: dict[tuple[int, ...], int] = {}
    for a in w.T:
        for b in w.T:
            g = a + b
            if not g.is_identity:
                counts[g.residues] = counts.get(g.residues, 0) + 1
    return counts


# ---------------------------------------------------------------------------
# partial difference sets


@dataclass(frozen=True)
class PdsParams:
    v: int
    k: int
    lam: int
    mu: int

    @property
    def delta(self) -> int:
        return (self.lam - self.mu) ** 2 + 4 * (self.k - self.mu)

    def to_json(self) -> dict:
        return {"v": self.v, "k": self.k, "lambda": self.lam, "mu": self.mu, "delta": self.delta}


@dataclass
class PdsVerdict:
    equation: bool
    prime_divisors: bool
    detail: dict

    @property
    def ok(self) -> bool:
        return self.equation and self.prime_divisors

    def __bool__(self) -> bool:
        return self.ok


def prime_divisors(m: int) -> list[int]:
    return sorted(factorize(m))


def pds_check(G: AbelianGroup, D, params: PdsParams) -> PdsVerdict:
    """``D D^(-1) = mu G + (lambda - mu) D + (k - mu) e`` and the prime-divisor condition."""
    D = frozenset(D)
    if not D or len(D) >= G.order - 1:
        raise ValueError("degenerate partial difference set (empty or all non-identity elements)")
    if any(d.group != G for d in D):
        raise ValueError("D is not a subset of G")
    if G.identity in D:
        raise ValueError("a regular partial difference set excludes the identity")
    if any(inverse(d) not in D for d in D):
        raise ValueError("a regular partial difference set is inverse-closed")
    if params.v != G.order or params.k != len(D):
        raise ValueError(f"parameters {params} do not match |G| = {G.order}, |D| = {len(D)}")
    Dr = gr_from_set(G, D)
    lhs = gr_mul(Dr, gr_power_map(Dr, -1))
    rhs = gr_full(G, params.mu) + (params.lam - params.mu) * Dr + gr_identity(G, params.k - params.mu)
    detail: dict = {"params": params.to_json()}
    diff = _first_diff(lhs, rhs)
    equation = diff is None
    if diff:
        detail["first_mismatch"] = {"element": list(diff[0].residues), "lhs": diff[1], "rhs": diff[2]}
    v, delta = params.v, params.delta
    if delta <= 0 or (v * v) % delta:
        primes_ok = False
        detail["v2_over_delta"] = None
    else:
        sets = [prime_divisors(v), prime_divisors(delta) if delta > 1 else [], prime_divisors(v * v // delta)]
        detail["prime_divisors"] = {"v": sets[0], "delta": sets[1], "v2_over_delta": sets[2]}
        primes_ok = sets[0] == sets[1] == sets[2]
    return PdsVerdict(equation, primes_ok, detail)


def power_of_3_exponent(m: int) -> int | None:
    if m < 1:
        return None
    a = 0
    while m % 3 == 0:
        m //= 3
        a += 1
    return a if m == 1 else None


@dataclass(frozen=True)
class PdsRoute:
    n: int
    holds: bool
    v: int
    delta: int
    a: int | None
    b: int | None

    @property
    def below_scope(self) -> bool:
        return self.n < 3

    def to_json(self) -> dict:
        return {"n": self.n, "holds": self.holds, "v": self.v, "delta": self.delta, "a": self.a, "b": self.b}


def pds_route_check(n: int) -> PdsRoute:
    """Whether 2n^2+1 and 8n-7 are both powers of 3 (needed when T = T^(2))."""
    v, delta = 2 * n * n + 1, 8 * n - 7
    a = power_of_3_exponent(v)
    b = power_of_3_exponent(delta) if a is not None else None
    return PdsRoute(n, a is not None and b is not None, v, delta, a, b)


def pds_branch_certificate(n: int) -> ObstructionCertificate | None:
    """Certificate that no witness with T = T^(2) exists, or None if the route stays open."""
    route = pds_route_check(n)
    if route.holds:
        return None
    v, delta = route.v, route.delta
    ev = {
        "v": v,
        "delta": delta,
        "gcd": gcd(v, delta),
        "v_factorization": _fact_json(v),
        "delta_factorization": _fact_json(delta) if delta > 1 else [],
        "v2_divisible_by_delta": (v * v) % delta == 0,
        "branch": "T = T^(2)",
    }
    return ObstructionCertificate(n, "pds_power_of_3", ev)


# ---------------------------------------------------------------------------
# quadratic sums


def is_squarefree(m: int) -> bool:
    if m < 1:
        raise ValueError("m must be positive")
    return all(e == 1 for e in factorize(m).values())


def _fact_json(m: int) -> list[list[int]]:
    return [[p, e] for p, e in sorted(factorize(m).items())]


def quadratic_sum_obstruction(n: int) -> ObstructionCertificate | None:
    """Certificate for n = 5, 8 (mod 9) with 4n^2+2 squarefree; None otherwise.

    With 4n^2+2 squarefree the only group of that order is cyclic.  Summing
    the squares of phi over the double sphere gives
    (2n^2+8n+9) a_1^2 + (8n+8) sum_{i>=2} a_i^2, which is 0 mod 3, while the
    squares of all residues 1..4n^2+1 sum to a value not divisible by 3.
    Since 3 divides 4n^2+2 the two cannot agree.
    """
    if n % 9 not in (5, 8):
        return None
    m = 4 * n * n + 2
    if not is_squarefree(m):
        return None
    total = (m - 1) * m * (2 * m - 1) // 6  # sum of i^2 for i < m
    ev = {
        "n_mod_9": n % 9,
        "modulus": m,
        "modulus_factorization": _fact_json(m),
        "squarefree": True,
        "modulus_mod_3": m % 3,
        "lhs_coefficients": [2 * n * n + 8 * n + 9, 8 * n + 8],
        "lhs_coefficients_mod_3": [(2 * n * n + 8 * n + 9) % 3, (8 * n + 8) % 3],
        "rhs_sum_of_squares_mod_3": total % 3,
    }
    return ObstructionCertificate(n, "quadratic_sum_mod3", ev)


# ---------------------------------------------------------------------------
# independent re-checking


def _is_prime(p: int) -> bool:
    """Deterministic Miller-Rabin for p < 3.3e24."""
    if p < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if p % q == 0:
            return p == q
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


def _check_factorization(m: int, fact) -> bool:
    prod_ = 1
    last = 1
    for p, e in fact:
        if p <= last or e < 1 or not _is_prime(p):
            return False
        prod_ *= p**e
        last = p
    return prod_ == m


def verify_certificate(c: ObstructionCertificate) -> bool:
    """Re-derive every number in the evidence from n alone.

    Factorizations are checked by multiplying out and testing primality, and
    the sum of squares mod 3 is recounted (i^2 = 1 mod 3 unless 3 | i), so no
    step reuses the emitting code.
    """
    try:
        ev, n = c.evidence, c.n
        if c.kind == "quadratic_sum_mod3":
            m = 4 * n * n + 2
            if n % 9 not in (5, 8) or ev["n_mod_9"] != n % 9 or ev["modulus"] != m:
                return False
            if not _check_factorization(m, ev["modulus_factorization"]):
                return False
            if not all(e == 1 for _, e in ev["modulus_factorization"]) or ev["squarefree"] is not True:
                return False
            if m % 3 != 0 or ev["modulus_mod_3"] != 0:
                return False
            coeffs = [2 * n * n + 8 * n + 9, 8 * n + 8]
            if ev["lhs_coefficients"] != coeffs or ev["lhs_coefficients_mod_3"] != [x % 3 for x in coeffs]:
                return False
            if any(x % 3 for x in coeffs):
                return False
            N = m - 1
            rhs = (N - N // 3) % 3
            return ev["rhs_sum_of_squares_mod_3"] == rhs and rhs != 0
        if c.kind == "pds_power_of_3":
            v, delta = 2 * n * n + 1, 8 * n - 7
            if ev["v"] != v or ev["delta"] != delta or ev["gcd"] != gcd(v, delta):
                return False
            if not _check_factorization(v, ev["v_factorization"]):
                return False
            if delta > 1 and not _check_factorization(delta, ev["delta_factorization"]):
                return False
            if ev["v2_divisible_by_delta"] != ((v * v) % delta == 0):
                return False
            pv = [p for p, _ in ev["v_factorization"]]
            pd = [p for p, _ in ev["delta_factorization"]]
            return pv != pd or not ev["v2_divisible_by_delta"] or pv != [3]
        if c.kind == "counting_violation":
            return _recheck_violation(c)
    except (KeyError, TypeError, ValueError):
        raise ValueError("malformed certificate evidence") from None
    raise ValueError(f"unknown certificate kind {c.kind!r}")


def _dense_product(w: Witness, s: int) -> dict[tuple[int, ...], int]:
    # T * T^(s) recounted over T x T, without the group-ring module
    counts: dict[tuple[int, ...], int] = {}
    for a in w.T:
        for b in w.T:
            g = (a + s * b).residues
            counts[g] = counts.get(g, 0) + 1
    return counts


def _recheck_violation(c: ObstructionCertificate) -> bool:
    ev = c.evidence
    w = Witness.from_json(ev["witness"])
    n, H = w.n, w.H
    source, _, name = ev["identity"].partition(":")
    Tset = {t.residues for t in w.T}
    if source == "mod3":
        counts = _dense_product(w, 2)
        hist: dict[int, int] = {0: H.order - len(counts)}
        for v in counts.values():
            hist[v] = hist.get(v, 0) + 1
        r = n % 3
        cube = {(3 * t).residues for t in w.T}
        if name == "congruence":
            base = {1: (1, 0), 2: (2, 2), 0: (0, 1)}[r]
            for g in enumerate_elements(H):
                x = g.residues
                want = base[0] + base[1] * (x in Tset) + 2 * (x in cube)
                if (counts.get(x, 0) - want) % 3:
                    return True
            return False
        table = {
            "X0_empty": (hist.get(0, 0), 0),
            "X1_is_T": (sum(1 for x, v in counts.items() if v == 1), 2 * n),
            "X0_size": (hist.get(0, 0), 2 * n * n // 3 - 2 * n + 1),
            "X2_size": (hist.get(2, 0), 2 * n),
            "X3_size": (hist.get(3, 0), 4 * n * n // 3 - 2 * n),
            "no_multiplicity_above_3": (max(hist), 3),
            "beta_zero": (len(Tset & {(2 * t).residues for t in w.T}) // 2, 0),
        }
        if name not in table:
            return False
        lhs, rhs = table[name]
        if name == "X1_is_T":
            bad = {x for x, v in counts.items() if v == 1} != Tset
        elif name == "no_multiplicity_above_3":
            bad = lhs > rhs
        else:
            bad = lhs != rhs
        return bad and lhs == ev["lhs"] and rhs == ev["rhs"]

    if source not in SOURCES:
        return False
    s = SOURCES[source]
    counts = _dense_product(w, s)
    beta = len(Tset & {(2 * t).residues for t in w.T}) // 2
    gamma = len(Tset & {(4 * t).residues for t in w.T}) // 2
    sq = {(2 * t).residues for t in w.T}
    bs = sorted({(s * t).residues for t in w.T})
    alpha = sum(
        1
        for i in range(len(bs))
        for j in range(i + 1, len(bs))
        if (H.element(bs[i]) - H.element(bs[j])).residues in sq
    )
    hist = {}
    for v in counts.values():
        hist[v] = hist.get(v, 0) + 1
    higher = sum((i - 1) * (i - 2) // 2 * c_ for i, c_ in hist.items() if i >= 3)
    if name == "weighted_total":
        lhs, rhs = sum(counts.values()), 4 * n * n
    elif name == "class_total":
        lhs, rhs = H.order, 2 * n * n + 1
    elif name == "alpha" and source in ("TT2", "TT4"):
        lhs, rhs = alpha, 2 * n - (beta if source == "TT2" else gamma)
    elif name == "support_count":
        lhs = len(counts)
        if source == "TT2":
            rhs = 4 * n - beta + higher
        elif source == "TT4":
            rhs = 4 * n - gamma + higher
        else:
            rhs = 2 * n + alpha + higher
    else:
        return False
    return lhs == ev["lhs"] and rhs == ev["rhs"] and lhs != rhs


__all__ = [
    "CountingProfile",
    "CountingViolation",
    "FactorizationError",
    "ObstructionCertificate",
    "PdsParams",
    "PdsRoute",
    "PdsVerdict",
    "counting_profile",
    "identity_suite",
    "is_squarefree",
    "square_coefficients",
    "mod3_classify",
    "pds_branch_certificate",
    "pds_check",
    "pds_route_check",
    "quadratic_sum_obstruction",
    "verify_certificate",
]
