"""Command-line entry point: ``leekit <command> [--flag value ...]``.

Every command prints one JSON report on stdout.  Exit codes: 0 success or
found, 1 refuted or none found, 2 usage or malformed input, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .abelian import abelian_groups_of_order, make_group
from .lee import double_lee_sphere
from .obstruct import (
    pds_branch_certificate,
    pds_route_check,
    quadratic_sum_obstruction,
    verify_certificate,
)
from .search import SearchOptions, SearchTask, parse_duration, search_witness
from .serialize import (
    DocumentError,
    code_from_doc,
    code_to_doc,
    dumps,
    read_json,
    validate,
    witness_from_doc,
    write_json,
)
from .tiling import _lattice, bijection_check, kernel_basis, packing_crosscheck, verify_kernel_basis
from .witness import Dpl11Construction, construct_dpl3, construct_dpl11, lift_to_code, verify_witness

EXIT_OK, EXIT_REFUTED, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class Timer:
    def __init__(self):
        self.phases: dict[str, float] = {}

    def __call__(self, name):
        timer = self

        class _Phase:
            def __enter__(self):
                self.t = time.perf_counter()

            def __exit__(self, *exc):
                timer.phases[name] = round(time.perf_counter() - self.t, 6)

        return _Phase()


def _report(args, command: str, inputs: dict, verdict: dict, artifacts: list[str], timer: Timer) -> None:
    doc = {"command": command, "inputs": inputs, "verdict": verdict, "artifacts": artifacts}
    if args.timing:
        doc["timing"] = timer.phases
    validate(doc, "report")
    sys.stdout.write(dumps(doc))


# ---------------------------------------------------------------------------
# commands


def cmd_construct(args, timer: Timer) -> int:
    n = args.n
    if n not in (3, 11):
        raise UsageError(
            f"no construction for n = {n}: linear DPL(n,6) codes with n >= 3 exist only for n = 3 and n = 11"
        )
    with timer("witness"):
        w = construct_dpl3() if n == 3 else construct_dpl11()
        wv = verify_witness(w)
    with timer("lift"):
        phi = lift_to_code(w)
        ds = double_lee_sphere(n, 2)
        bij = bijection_check(phi, ds)
    with timer("packing"):
        packing = packing_crosscheck(phi, ds)
    with timer("kernel"):
        L = kernel_basis(phi)
    verdict = {
        "witness": wv.to_json(),
        "bijection": bij.detail(),
        "packing_crosscheck": packing,
        "determinant": L.determinant,
        "ds_size": len(ds),
        "ok": wv.ok and bij.ok and packing and L.determinant == 4 * n * n + 2,
    }
    if n == 11:
        c = Dpl11Construction()
        verdict["field"] = {"modulus": list(c.modulus_polynomial), "primitive_element": list(c.primitive_element)}
    artifacts = []
    if verdict["ok"]:
        out = Path(args.out or f"dpl{n}")
        artifacts.append(write_json(out / "witness.json", w.to_json()))
        artifacts.append(write_json(out / "code.json", code_to_doc(phi, L)))
    _report(args, "construct", {"n": n, "out": args.out}, verdict, artifacts, timer)
    return EXIT_OK if verdict["ok"] else EXIT_REFUTED


def cmd_verify(args, timer: Timer) -> int:
    with timer("load"):
        w = witness_from_doc(read_json(args.witness))
    with timer("verify"):
        try:
            v = verify_witness(w)
        except ValueError as exc:
            raise DocumentError(str(exc)) from None
    _report(args, "verify", {"witness": args.witness}, v.to_json(), [], timer)
    return EXIT_OK if v.ok else EXIT_REFUTED


def cmd_check_tiling(args, timer: Timer) -> int:
    with timer("load"):
        doc = read_json(args.code)
        phi = code_from_doc(doc)
    n = phi.source_dim
    ds = double_lee_sphere(n, 2)
    verdict: dict = {"ds_size": len(ds), "group_order": phi.target.order}
    if len(ds) != phi.target.order:
        verdict["ok"] = False
        verdict["error"] = f"|G| = {phi.target.order} differs from |DS_{{{n},2}}| = {len(ds)}"
        _report(args, "check-tiling", {"code": args.code}, verdict, [], timer)
        return EXIT_REFUTED
    with timer("bijection"):
        verdict["bijection"] = bijection_check(phi, ds).detail()
    with timer("packing"):
        verdict["packing_crosscheck"] = packing_crosscheck(phi, ds)
    with timer("kernel"):
        det = _lattice(phi).determinant
        verdict["determinant"] = det
        ok = verdict["bijection"]["bijection"] and verdict["packing_crosscheck"] and det == 4 * n * n + 2
        if ok:
            kernel_basis(phi)
        if "kernel_basis" in doc:
            good, why = verify_kernel_basis(phi, doc["kernel_basis"])
            verdict["kernel_basis"] = {"ok": good, "detail": why}
            ok = ok and good
        if "determinant" in doc:
            verdict["stated_determinant_matches"] = doc["determinant"] == det
            ok = ok and doc["determinant"] == det
    verdict["ok"] = bool(ok)
    _report(args, "check-tiling", {"code": args.code}, verdict, [], timer)
    return EXIT_OK if ok else EXIT_REFUTED


def _parse_group(text: str):
    try:
        return make_group([int(x) for x in text.replace("x", ",").split(",") if x.strip()])
    except ValueError as exc:
        raise UsageError(f"bad --group {text!r}: {exc}") from None


def cmd_search(args, timer: Timer) -> int:
    n = args.n
    if n < 3:
        raise UsageError("search needs n >= 3")
    budget = parse_duration(args.budget) if args.budget else None
    opts = SearchOptions(
        prune_level=args.prune_level,
        parallel_width=args.parallel,
        canonicalize=False if args.no_canon else None,
        time_budget=budget,
        progress_interval=args.progress,
        progress_stream=sys.stderr if args.progress else None,
    )
    order = 2 * n * n + 1
    pending: list[tuple] = []  # (group, resume token or None)
    previous: list[dict] = []
    if args.resume:
        token_file = read_json(args.resume, "resume")
        if token_file["n"] != n:
            raise UsageError(f"resume file is for n = {token_file['n']}")
        for entry in token_file["classes"]:
            G = make_group(entry["group"]["invariant_factors"])
            if entry["status"] == "budget_exceeded":
                pending.append((G, entry["token"]))
            else:
                previous.append(entry)
    elif args.group:
        G = _parse_group(args.group)
        if G.order != order:
            raise UsageError(f"group {list(G.invariant_factors)} has order {G.order}, need {order}")
        pending.append((G, None))
    else:
        pending = [(G, None) for G in abelian_groups_of_order(order)]

    classes = list(previous)
    witness_doc = None
    with timer("search"):
        for G, token in pending:
            outcome = search_witness(SearchTask(n, G, opts), resume=token)
            entry = {"group": G.to_json(), "status": outcome.status, "nodes_explored": outcome.nodes_explored}
            if outcome.resume_token is not None:
                entry["token"] = outcome.resume_token
            if outcome.witness is not None:
                entry["witness"] = outcome.witness.to_json()
                witness_doc = witness_doc or entry["witness"]
            classes.append(entry)
            timer.phases[f"class {G.invariant_factors}"] = round(outcome.wall_time, 6)

    statuses = [c["status"] for c in classes]
    if "found" in statuses:
        status, code = "found", EXIT_OK
    elif all(s == "exhausted_none" for s in statuses):
        status, code = "exhausted_none", EXIT_REFUTED
    else:
        status, code = "budget_exceeded", EXIT_BUDGET

    artifacts = []
    if witness_doc is not None:
        artifacts.append(write_json(args.out or f"search-n{n}.witness.json", witness_doc))
    if status == "budget_exceeded":
        token_path = args.token_out or f"search-n{n}.resume.json"
        token_doc = {
            "version": 1,
            "n": n,
            "classes": [{k: v for k, v in c.items() if k != "witness"} for c in classes],
        }
        validate(token_doc, "resume")
        artifacts.append(write_json(token_path, token_doc))
    verdict = {
        "status": status,
        "classes": [{k: v for k, v in c.items() if k != "token"} for c in classes],
        "witness": witness_doc,
    }
    inputs = {
        "n": n,
        "group": args.group,
        "resume": args.resume,
        "budget": args.budget,
        "no_canon": args.no_canon,
        "prune_level": args.prune_level,
    }
    _report(args, "search", inputs, verdict, artifacts, timer)
    return code


def _parse_range(text: str) -> tuple[int, int]:
    try:
        a, b = text.split("..")
        lo, hi = int(a), int(b)
    except ValueError:
        raise UsageError(f"--range expects a..b, got {text!r}") from None
    if lo > hi:
        raise UsageError("empty --range")
    return lo, hi


def obstruction_record(n: int, branches: bool = False) -> dict:
    """One sweep line: a verified certificate, or an open marker with route details."""
    cert = quadratic_sum_obstruction(n)
    if cert is not None:
        if not verify_certificate(cert):
            raise AssertionError(f"certificate for n={n} failed re-verification")
        return cert.to_json()
    rec: dict = {"n": n, "status": "open", "pds_route": pds_route_check(n).to_json()}
    if branches:
        bc = pds_branch_certificate(n)
        if bc is not None:
            if not verify_certificate(bc):
                raise AssertionError(f"branch certificate for n={n} failed re-verification")
            rec["branch_certificate"] = bc.to_json()
    return rec


def cmd_obstruct(args, timer: Timer) -> int:
    if (args.n is None) == (args.range is None):
        raise UsageError("give exactly one of --n or --range")
    lo, hi = (args.n, args.n) if args.n is not None else _parse_range(args.range)
    if lo < 3:
        raise UsageError("obstruct needs n >= 3")
    with timer("sweep"):
        lines = [obstruction_record(n, args.branches) for n in range(lo, hi + 1)]
    for rec in lines:
        validate(rec, "sweep_line")
    counts: dict[str, int] = {}
    for rec in lines:
        key = rec.get("kind", "open")
        counts[key] = counts.get(key, 0) + 1
    artifacts = []
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        with open(args.out, "w") as fh:
            for rec in lines:
                fh.write(_compact(rec))
        artifacts.append(args.out)
    verdict = {
        "counts": counts,
        "certified": [rec["n"] for rec in lines if "kind" in rec],
        "open": [rec["n"] for rec in lines if "kind" not in rec],
        "pds_route_holds": [rec["n"] for rec in lines if rec.get("pds_route", {}).get("holds")],
        "records": lines,
    }
    _report(args, "obstruct", {"n": args.n, "range": args.range, "branches": args.branches}, verdict, artifacts, timer)
    return EXIT_OK


def _compact(rec) -> str:
    return json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n"


def tiling_grid(phi, window: int):
    """Tile labels on the (x_1, x_2) plane, other coordinates 0.

    Returns rows from x_2 = window down to -window; each cell is (label, is_codeword).
    """
    n = phi.source_dim
    ds = double_lee_sphere(n, 2)
    by_image = {phi(p).residues: p for p in ds.sorted_points()}
    labels: dict[tuple, int] = {}
    rows = []
    for y in range(window, -window - 1, -1):
        row = []
        for x in range(-window, window + 1):
            pt = (x, y) + (0,) * (n - 2) if n >= 2 else (x,)
            v = by_image[phi(pt).residues]
            c = tuple(a - b for a, b in zip(pt, v))
            label = labels.setdefault(c, len(labels))
            row.append((label, not any(v)))
        rows.append(row)
    return rows


def _grid_text(rows) -> str:
    alphabet = "abcdefghijklmnopqrstuvwxyz0123456789"
    out = []
    for row in rows:
        chars = []
        for label, is_code in row:
            ch = alphabet[label % len(alphabet)]
            chars.append(ch.upper() if is_code else ch)
        out.append(" ".join(chars))
    return "\n".join(out) + "\n"


def _grid_svg(rows, cell: int = 16) -> str:
    h, w = len(rows), len(rows[0])
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w * cell}" height="{h * cell}">']
    for i, row in enumerate(rows):
        for j, (label, is_code) in enumerate(row):
            hue = (label * 137) % 360
            parts.append(
                f'<rect x="{j * cell}" y="{i * cell}" width="{cell}" height="{cell}" '
                f'fill="hsl({hue},60%,70%)" stroke="white"/>'
            )
            if is_code:
                parts.append(f'<circle cx="{j * cell + cell / 2}" cy="{i * cell + cell / 2}" r="{cell / 4}" fill="black"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def cmd_plot(args, timer: Timer) -> int:
    phi = code_from_doc(read_json(args.code))
    if phi.target.order != 4 * phi.source_dim**2 + 2:
        raise DocumentError("code group order does not match the double sphere")
    with timer("grid"):
        rows = tiling_grid(phi, args.window)
    artifacts = []
    text = _grid_text(rows)
    if args.svg:
        Path(args.svg).write_text(_grid_svg(rows))
        artifacts.append(args.svg)
    if args.text_out:
        Path(args.text_out).write_text(text)
        artifacts.append(args.text_out)
    verdict = {"window": args.window, "tiles": len({c for r in rows for c, _ in r}), "grid": text.splitlines()}
    _report(args, "plot", {"code": args.code, "window": args.window}, verdict, artifacts, timer)
    return EXIT_OK


def cmd_info(args, timer: Timer) -> int:
    c = Dpl11Construction()
    verdict: dict = {
        "version": __version__,
        "constructions": [3, 11],
        "dpl11_field": {
            "modulus": list(c.modulus_polynomial),
            "primitive_element": list(c.primitive_element),
            "exponent_step": c.exponent_step,
        },
    }
    if args.n is not None:
        order = 2 * args.n * args.n + 1
        verdict["n"] = args.n
        verdict["witness_group_order"] = order
        verdict["group_classes"] = [list(G.invariant_factors) for G in abelian_groups_of_order(order)]
        verdict["code_group_order"] = 2 * order
    _report(args, "info", {"n": args.n}, verdict, [], timer)
    return EXIT_OK


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="leekit", description="Linear diameter-perfect Lee codes DPL(n,6).")
    p.add_argument("--timing", action="store_true", help="include per-phase durations in the report")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("construct", help="build the n=3 or n=11 code and write witness/code JSON")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--out", help="output directory (default: dpl<n>)")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("verify", help="check the three witness conditions")
    s.add_argument("path", nargs="?", help="witness JSON file")
    s.add_argument("--witness")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("check-tiling", help="check a code JSON against DS_{n,2}(0, e_1)")
    s.add_argument("path", nargs="?", help="code JSON file")
    s.add_argument("--code")
    s.set_defaults(func=cmd_check_tiling)

    s = sub.add_parser("search", help="exhaustive witness search over every group of order 2n^2+1")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--group", help="one class only, e.g. 3,33")
    s.add_argument("--resume", help="resume file from an earlier budget-exceeded run")
    s.add_argument("--budget", help="time budget per class, e.g. 10s, 5m (default: LEEKIT_BUDGET or 30m)")
    s.add_argument("--no-canon", action="store_true", help="disable symmetry reduction")
    s.add_argument("--prune-level", type=int, default=2, choices=(0, 1, 2))
    s.add_argument("--parallel", type=int, default=1, help="worker processes for the branch frontier")
    s.add_argument("--progress", type=float, help="seconds between progress lines on stderr")
    s.add_argument("--out", help="found witness path (default: search-n<n>.witness.json)")
    s.add_argument("--token-out", help="resume file path (default: search-n<n>.resume.json)")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("obstruct", help="emit nonexistence certificates")
    s.add_argument("--n", type=int)
    s.add_argument("--range", help="a..b inclusive")
    s.add_argument("--branches", action="store_true", help="also certify the T = T^(2) branch where it fails")
    s.add_argument("--out", help="write the sweep as JSON lines")
    s.set_defaults(func=cmd_obstruct)

    s = sub.add_parser("plot", help="2D cross-section of a code's tiling")
    s.add_argument("path", nargs="?", help="code JSON file")
    s.add_argument("--code")
    s.add_argument("--window", type=int, default=6)
    s.add_argument("--svg", help="write an SVG grid here")
    s.add_argument("--text-out", help="write the text grid here")
    s.set_defaults(func=cmd_plot)

    s = sub.add_parser("info", help="version, constructions and group classes")
    s.add_argument("--n", type=int)
    s.set_defaults(func=cmd_info)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for flag in ("witness", "code"):
        if hasattr(args, flag) and hasattr(args, "path"):
            if (args.path is None) == (getattr(args, flag) is None):
                parser.error(f"{args.command}: give the {flag} file either as PATH or with --{flag}")
            setattr(args, flag, getattr(args, flag) or args.path)
    try:
        return args.func(args, Timer())
    except UsageError as exc:
        sys.stderr.write(f"leekit {args.command}: {exc}\n")
        return EXIT_USAGE
    except DocumentError as exc:
        sys.stderr.write(f"leekit {args.command}: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
