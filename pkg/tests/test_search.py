from __future__ import annotations

import io

import pytest

from leekit.abelian import make_group
from leekit.search import (
    PRUNE_COEFFICIENTS,
    PRUNE_FULL,
    PRUNE_NONE,
    PairSpace,
    SearchOptions,
    SearchTask,
    aggregate_status,
    canonical_form,
    default_budget,
    enumerate_witness_pairs,
    parse_duration,
    search_all_groups,
    search_witness,
)
from leekit.witness import Witness, verify_witness


def test_n3_found():
    out = search_witness(SearchTask(3, make_group([19])))
    assert out.status == "found"
    assert verify_witness(out.witness).ok
    assert canonical_form(out.witness.T) == canonical_form(
        Witness.from_residues(3, make_group([19]), [1, 18, 7, 12, 8, 11]).T
    )


@pytest.mark.parametrize("n,classes", [(4, [(33,)]), (5, [(51,)]), (6, [(73,)])])
def test_small_n_exhausted(n, classes):
    res = search_all_groups(n, SearchOptions())
    assert [G.invariant_factors for G, _ in res] == classes
    assert aggregate_status(res) == "exhausted_none"


@pytest.mark.parametrize("n,fs", [(3, [19]), (4, [33])])
def test_pruning_levels_complete(n, fs):
    G = make_group(fs)
    sols = [
        enumerate_witness_pairs(SearchTask(n, G, SearchOptions(prune_level=p, canonicalize=False)))
        for p in (PRUNE_NONE, PRUNE_COEFFICIENTS, PRUNE_FULL)
    ]
    assert sols[0] == sols[1] == sols[2]


def test_canonical_search_covers_orbits():
    G = make_group([19])
    space = PairSpace(G)
    full = enumerate_witness_pairs(SearchTask(3, G, SearchOptions(canonicalize=False)))
    canon = enumerate_witness_pairs(SearchTask(3, G, SearchOptions(canonicalize=True)))
    assert set(canon) <= set(full) and canon
    forms = {tuple(g.residues for g in canonical_form(space.witness(3, s).T)) for s in full}
    canon_forms = {tuple(g.residues for g in canonical_form(space.witness(3, s).T)) for s in canon}
    assert forms == canon_forms


def test_canonical_form_is_orbit_invariant():
    G = make_group([19])
    T = Witness.from_residues(3, G, [2, 17, 3, 16, 5, 14]).T
    base = canonical_form(T)
    for u in range(1, 19):
        assert canonical_form({u * t for t in T}) == base


def test_noncyclic_defaults():
    G = make_group([3, 33])
    assert not SearchTask(7, G).canonicalize
    assert SearchTask(7, make_group([99])).canonicalize


def test_order_mismatch():
    with pytest.raises(ValueError):
        SearchTask(3, make_group([17]))


def test_parallel_width_is_deterministic():
    G = make_group([51])
    one = search_witness(SearchTask(5, G, SearchOptions(parallel_width=1)))
    two = search_witness(SearchTask(5, G, SearchOptions(parallel_width=2)))
    assert one.to_json() == two.to_json()
    assert one.status == "exhausted_none"


def test_budget_and_resume_match_uninterrupted():
    G = make_group([73])
    whole = search_witness(SearchTask(6, G, SearchOptions(time_budget=600)))
    assert whole.status == "exhausted_none"
    opts = SearchOptions(time_budget=0.02)
    task = SearchTask(6, G, opts)
    out = search_witness(task)
    rounds = 1
    while out.status == "budget_exceeded":
        assert out.resume_token["nodes_explored"] == out.nodes_explored
        out = search_witness(task, resume=out.resume_token)
        rounds += 1
        assert rounds < 10_000
    assert rounds > 1
    assert out.status == "exhausted_none"
    assert out.nodes_explored == whole.nodes_explored


def test_resume_token_checks_task():
    task = SearchTask(6, make_group([73]), SearchOptions(time_budget=0.0))
    out = search_witness(task)
    assert out.status == "budget_exceeded"
    with pytest.raises(ValueError):
        search_witness(SearchTask(6, make_group([73]), SearchOptions(prune_level=0)), resume=out.resume_token)
    with pytest.raises(ValueError):
        search_witness(SearchTask(4, make_group([33])), resume=out.resume_token)


def test_env_budget(monkeypatch):
    monkeypatch.setenv("LEEKIT_BUDGET", "0s")
    assert default_budget() == 0.0
    out = search_witness(SearchTask(6, make_group([73])))
    assert out.status == "budget_exceeded"
    monkeypatch.delenv("LEEKIT_BUDGET")
    assert default_budget() == 1800.0


@pytest.mark.parametrize("text,secs", [("10s", 10.0), ("5m", 300.0), ("1h", 3600.0), ("250ms", 0.25), ("2.5", 2.5), (7, 7.0)])
def test_parse_duration(text, secs):
    assert parse_duration(text) == secs


def test_parse_duration_rejects():
    with pytest.raises(ValueError):
        parse_duration("soon")


def test_progress_goes_to_stream():
    buf = io.StringIO()
    opts = SearchOptions(progress_interval=1e-9, progress_stream=buf)
    search_witness(SearchTask(5, make_group([51]), opts))
    assert buf.getvalue()


def test_stop_on_found():
    res = search_all_groups(3, stop_on_found=True)
    assert aggregate_status(res) == "found"
