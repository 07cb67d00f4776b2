"""Exhaustive depth-first search for witness sets, one inverse pair at a time.

A set T = {+-t_1, ..., +-t_n} satisfies the square equation exactly when the
"sums" ``2t_i``, ``-2t_i`` and ``+-t_i +- t_j`` (i < j) are pairwise distinct;
there are then exactly |H| - 1 of them and they cover H minus the identity.
The search keeps the used sums as a bitmask and rejects a pair as soon as
one of its new sums collides.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import gcd
from typing import IO, Sequence

from .abelian import AbelianGroup, abelian_groups_of_order, enumerate_elements, make_group
from .witness import Witness, verify_witness

DEFAULT_BUDGET = 30 * 60.0
FRONTIER_DEPTH = 2
TOKEN_VERSION = 1

PRUNE_NONE = 0
PRUNE_COEFFICIENTS = 1
PRUNE_FULL = 2


def default_budget() -> float:
    """Seconds per group class; ``LEEKIT_BUDGET`` overrides the 30 minute default."""
    env = os.environ.get("LEEKIT_BUDGET")
    return parse_duration(env) if env else DEFAULT_BUDGET


def parse_duration(text: str | float | int) -> float:
    """``"10s"``, ``"5m"``, ``"1h"``, ``"250ms"`` or a bare number of seconds."""
    if isinstance(text, (int, float)):
        return float(text)
    t = text.strip().lower()
    for suffix, scale in (("ms", 1e-3), ("s", 1.0), ("m", 60.0), ("h", 3600.0)):
        if t.endswith(suffix) and t[: -len(suffix)].replace(".", "", 1).isdigit():
            return float(t[: -len(suffix)]) * scale
    try:
        return float(t)
    except ValueError:
        raise ValueError(f"cannot parse duration {text!r}") from None


@dataclass(frozen=True)
class SearchOptions:
    prune_level: int = PRUNE_FULL
    parallel_width: int = 1
    canonicalize: bool | None = None  # None: on for cyclic groups only
    time_budget: float | None = None  # seconds; None means default_budget()
    progress_interval: float | None = None
    progress_stream: IO | None = field(default=None, compare=False)


@dataclass(frozen=True)
class SearchTask:
    n: int
    group: AbelianGroup
    options: SearchOptions = SearchOptions()

    def __post_init__(self):
        if self.group.order != 2 * self.n * self.n + 1:
            raise ValueError(f"|H| = {self.group.order} but 2n^2+1 = {2 * self.n**2 + 1}")

    @property
    def canonicalize(self) -> bool:
        c = self.options.canonicalize
        return self.group.is_cyclic if c is None else c


@dataclass
class SearchOutcome:
    status: str  # "found" | "exhausted_none" | "budget_exceeded"
    witness: Witness | None
    nodes_explored: int
    wall_time: float
    resume_token: dict | None = None

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "status": self.status,
            "nodes_explored": self.nodes_explored,
            "witness": self.witness.to_json() if self.witness else None,
        }
        if self.resume_token is not None:
            out["resume_token"] = self.resume_token
        if timing:
            out["wall_time"] = round(self.wall_time, 6)
        return out


class _BudgetExceeded(Exception):
    def __init__(self, cursor: list[int]):
        self.cursor = cursor


# ---------------------------------------------------------------------------
# group tables


class PairSpace:
    """Integer tables for a group: elements are indices in lexicographic order."""

    def __init__(self, group: AbelianGroup):
        self.group = group
        elems = enumerate_elements(group)
        self.elements = elems
        v = group.order
        if v % 2 == 0:
            raise ValueError("pair search needs a group of odd order")
        fs = group.invariant_factors
        index = {g.residues: i for i, g in enumerate(elems)}

        def idx(res):
            return index[tuple(r % m for r, m in zip(res, fs))]

        self.add = [[idx([a + b for a, b in zip(x.residues, y.residues)]) for y in elems] for x in elems]
        self.neg = [idx([-a for a in x.residues]) for x in elems]
        self.times = lambda x, t: idx([a * t for a in elems[x].residues])
        reps = sorted(i for i in range(1, v) if i < self.neg[i])
        self.reps = reps  # pair representative element per pair index
        self.pair_of = {}
        for p, a in enumerate(reps):
            self.pair_of[a] = p
            self.pair_of[self.neg[a]] = p
        self.triple = [self.times(x, 3) for x in range(v)]

    @property
    def num_pairs(self) -> int:
        return len(self.reps)

    def unit_multipliers(self) -> list[list[int]]:
        """Pair permutations induced by the power maps g -> g^u, gcd(u, |G|) = 1.

        Only u < exponent/2 is needed since u and -u act alike on pairs.
        """
        m = self.group.exponent
        out = []
        for u in range(2, (m + 1) // 2):
            if gcd(u, m) == 1:
                out.append([self.pair_of[self.times(a, u)] for a in self.reps])
        return out

    def witness(self, n: int, pairs: Sequence[int]) -> Witness:
        T = []
        for p in pairs:
            a = self.reps[p]
            T.append(self.elements[a])
            T.append(self.elements[self.neg[a]])
        return Witness(n, self.group, frozenset(T))


def canonical_form(T, group: AbelianGroup | None = None):
    """Least image of an inverse-closed set under the power-map automorphisms.

    For cyclic groups these are all automorphisms (multiplication by units).
    Sets are compared as sorted lists of residue tuples.
    """
    elems = sorted(T)
    if group is None:
        group = elems[0].group if elems else None
    if group is None:
        return []
    m = group.exponent
    best = [g.residues for g in elems]
    for u in range(1, m):
        if gcd(u, m) == 1:
            img = sorted((u * g).residues for g in elems)
            if img < best:
                best = img
    return [group.element(r) for r in best]


# ---------------------------------------------------------------------------
# depth-first core


class _Searcher:
    def __init__(self, task: SearchTask, space: PairSpace | None = None):
        self.task = task
        self.n = task.n
        self.space = space or PairSpace(task.group)
        self.prune = task.options.prune_level
        self.multipliers = self.space.unit_multipliers() if task.canonicalize else []
        self.nodes = 0
        self.deadline = None
        self.progress = None
        self.next_report = None
        self.t0 = time.monotonic()
        self.max_depth = 0
        self.collect_all = False
        self.solutions: list[tuple[int, ...]] = []

    # one candidate pair against the current state; returns new masks or None
    def _extend(self, a: int, elems: list[int], used: int, members: int):
        sp = self.space
        na = sp.neg[a]
        add_a, add_na = sp.add[a], sp.add[na]
        new = 0
        for x in (add_a[a], add_na[na]):
            bit = 1 << x
            if (used | new) & bit:
                return None
            new |= bit
        for s in elems:
            for x in (add_a[s], add_na[s]):
                bit = 1 << x
                if (used | new) & bit:
                    return None
                new |= bit
        if self.prune >= PRUNE_FULL:
            tri = sp.triple
            mem = members | (1 << a) | (1 << na)
            if mem >> tri[a] & 1 or mem >> tri[na] & 1:
                return None
            for s in elems:
                if tri[s] == a or tri[s] == na:
                    return None
        return used | new, members | (1 << a) | (1 << na)

    def _canonical_prefix(self, path: list[int]) -> bool:
        for perm in self.multipliers:
            img = sorted(perm[p] for p in path)
            if img < path:
                return False
        return True

    def _tick(self, path: list[int], p: int) -> None:
        now = time.monotonic()
        if self.deadline is not None and now > self.deadline:
            raise _BudgetExceeded(path + [p])
        if self.progress is not None and now >= self.next_report:
            rec = {"nodes": self.nodes, "depth": len(path), "elapsed_ms": int((now - self.t0) * 1000)}
            self.progress.write(json.dumps(rec) + "\n")
            self.progress.flush()
            self.next_report = now + self.task.options.progress_interval

    def _leaf_ok(self, path: list[int]) -> bool:
        w = self.space.witness(self.n, path)
        return verify_witness(w).ok

    def dfs(self, path, elems, used, members, cursor=None):
        """Explore all completions of ``path``; returns the first full selection or None.

        ``cursor`` (a full path) resumes inside this subtree: levels above its last
        entry follow it without re-counting, the last level starts at its last entry.
        """
        depth = len(path)
        if depth == self.n:
            if self.prune == PRUNE_NONE and not self._leaf_ok(path):
                return None
            if self.collect_all:
                self.solutions.append(tuple(path))
                return None
            return tuple(path)
        P = self.space.num_pairs
        lo = path[-1] + 1 if path else 0
        hi = P - (self.n - depth) + 1
        forced = None
        if cursor is not None and len(cursor) > depth:
            if len(cursor) - 1 == depth:
                lo = max(lo, cursor[depth])
            else:
                forced = cursor[depth]
        reps = self.space.reps
        neg = self.space.neg
        for p in range(lo, hi):
            if forced is not None and p < forced:
                continue
            a = reps[p]
            if p == forced:
                # re-enter the interrupted branch; this node was counted before
                state = self._extend(a, elems, used, members) if self.prune else (used, members)
                sub_cursor = cursor
            else:
                if not (self.nodes + 1) & 0x3FF:
                    self._tick(path, p)
                self.nodes += 1
                if self.prune:
                    state = self._extend(a, elems, used, members)
                    if state is None:
                        continue
                else:
                    state = (used, members)
                sub_cursor = None
            if state is None:
                continue
            path.append(p)
            if self.multipliers and not self._canonical_prefix(path):
                path.pop()
                continue
            if depth + 1 > self.max_depth:
                self.max_depth = depth + 1
            found = self.dfs(path, elems + [a, neg[a]], state[0], state[1], sub_cursor)
            path.pop()
            if found is not None:
                return found
        return None

    def replay(self, prefix: Sequence[int]):
        """State (elems, used, members) after applying ``prefix``; None if it is pruned."""
        elems, used, members = [], 1, 0  # bit 0: the identity is never a sum
        for p in prefix:
            a = self.space.reps[p]
            if self.prune:
                st = self._extend(a, elems, used, members)
                if st is None:
                    return None
                used, members = st
            elems = elems + [a, self.space.neg[a]]
        return elems, used, members

    def frontier(self, depth: int) -> list[list[int]]:
        """Surviving prefixes of the given depth, in lexicographic order (nodes counted)."""
        out: list[list[int]] = []
        P = self.space.num_pairs

        def walk(path, elems, used, members):
            if len(path) == depth:
                out.append(list(path))
                return
            lo = path[-1] + 1 if path else 0
            for p in range(lo, P - (self.n - len(path)) + 1):
                a = self.space.reps[p]
                self.nodes += 1
                if self.prune:
                    st = self._extend(a, elems, used, members)
                    if st is None:
                        continue
                else:
                    st = (used, members)
                path.append(p)
                if not self.multipliers or self._canonical_prefix(path):
                    walk(path, elems + [a, self.space.neg[a]], st[0], st[1])
                path.pop()

        walk([], [], 1, 0)
        return out

    def run_branch(self, prefix: list[int], cursor: list[int] | None = None):
        state = self.replay(prefix)
        if state is None:
            return None
        return self.dfs(list(prefix), *state, cursor=cursor)


def _branch_worker(args):
    n, factors, options, prefix, deadline = args
    task = SearchTask(n, AbelianGroup(tuple(factors)), options)
    s = _Searcher(task)
    s.deadline = deadline
    try:
        found = s.run_branch(prefix)
    except _BudgetExceeded as exc:
        return "budget", None, s.nodes, exc.cursor
    return ("found" if found is not None else "none"), found, s.nodes, None


def _token(task: SearchTask, frontier: list[list[int]], cursor, nodes: int) -> dict:
    return {
        "version": TOKEN_VERSION,
        "n": task.n,
        "group": task.group.to_json(),
        "prune_level": task.options.prune_level,
        "canonicalize": task.canonicalize,
        "frontier": frontier,
        "cursor": cursor,
        "nodes_explored": nodes,
    }


def search_witness(task: SearchTask, resume: dict | None = None) -> SearchOutcome:
    """Run the search for one group class.

    ``resume`` is a token from an earlier ``budget_exceeded`` outcome.
    """
    t0 = time.monotonic()
    opts = task.options
    budget = default_budget() if opts.time_budget is None else opts.time_budget
    s = _Searcher(task)
    s.deadline = t0 + budget
    if opts.progress_stream is not None and opts.progress_interval:
        s.progress = opts.progress_stream
        s.next_report = t0 + opts.progress_interval
    depth = min(FRONTIER_DEPTH, task.n)

    if resume is not None:
        _check_token(task, resume)
        frontier = [list(p) for p in resume["frontier"]]
        cursor = resume.get("cursor")
        s.nodes = int(resume["nodes_explored"])
    else:
        frontier = s.frontier(depth)
        cursor = None

    def finish(status, pairs=None, token=None):
        w = None
        if pairs is not None:
            w = s.space.witness(task.n, pairs)
            verdict = verify_witness(w)
            assert verdict.ok, f"search produced an invalid witness: {verdict.conditions}"
        return SearchOutcome(status, w, s.nodes, time.monotonic() - t0, token)

    if opts.parallel_width > 1 and resume is None and len(frontier) > 1:
        return _search_parallel(task, s, frontier, finish)

    for i, prefix in enumerate(frontier):
        try:
            found = s.run_branch(prefix, cursor if i == 0 else None)
        except _BudgetExceeded as exc:
            return finish("budget_exceeded", token=_token(task, frontier[i:], exc.cursor, s.nodes))
        if found is not None:
            return finish("found", found)
    return finish("exhausted_none")


def _search_parallel(task, s, frontier, finish):
    args = [(task.n, task.group.invariant_factors, _picklable(task.options), p, s.deadline) for p in frontier]
    with ProcessPoolExecutor(max_workers=task.options.parallel_width) as ex:
        results = list(ex.map(_branch_worker, args))
    # merge in branch order so counts do not depend on scheduling
    for i, (status, found, nodes, cursor) in enumerate(results):
        s.nodes += nodes
        if status == "found":
            return finish("found", found)
        if status == "budget":
            # later branches are re-run on resume, even if they finished here
            return finish("budget_exceeded", token=_token(task, frontier[i:], cursor, s.nodes))
    return finish("exhausted_none")


def _picklable(options: SearchOptions) -> SearchOptions:
    return SearchOptions(options.prune_level, 1, options.canonicalize, options.time_budget)


def _check_token(task: SearchTask, token: dict) -> None:
    if token.get("version") != TOKEN_VERSION:
        raise ValueError("unsupported resume token version")
    if token["n"] != task.n or make_group(token["group"]["invariant_factors"]) != task.group:
        raise ValueError("resume token belongs to a different search task")
    if token["prune_level"] != task.options.prune_level or token["canonicalize"] != task.canonicalize:
        raise ValueError("resume token was produced with different search options")


def enumerate_witness_pairs(task: SearchTask) -> list[tuple[int, ...]]:
    """Every verifying selection of pair indices (no early stop), in lexicographic order."""
    s = _Searcher(task)
    s.collect_all = True
    s.dfs([], [], 1, 0)
    return s.solutions


def search_all_groups(n: int, options: SearchOptions = SearchOptions(), stop_on_found: bool = False):
    """Search every isomorphism class of abelian groups of order 2n^2+1."""
    if n < 1:
        raise ValueError("n must be positive")
    out = []
    for G in abelian_groups_of_order(2 * n * n + 1):
        outcome = search_witness(SearchTask(n, G, options))
        out.append((G, outcome))
        if stop_on_found and outcome.status == "found":
            break
    return out


def aggregate_status(results) -> str:
    """``found`` if any class has a witness, ``exhausted_none`` only if every class is exhausted."""
    statuses = [o.status for _, o in results]
    if "found" in statuses:
        return "found"
    if all(s == "exhausted_none" for s in statuses):
        return "exhausted_none"
    return "budget_exceeded"
