"""Command-line interface: counting, extremal search, structure checks, and
the cyclic-group census, with JSONL persistence and CSV/JSON output.

Exit codes: 0 success, 1 verification failure or store mismatch, 2 usage
error, 3 node budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import os
import sys
from typing import Optional, Sequence

from .core import (
    BUILTIN_PROFILE_IDS,
    IntSet,
    is_sum_free,
    profile_for,
    sigma_contains,
    top_third_interval,
)
from .cyclic import (
    PrimeParams,
    canonical_form,
    dilation_orbit,
    scsf_census,
    scsf_members,
    standard_symmetric_set,
)
from .engine import (
    DEFAULT_NODE_BUDGET,
    CensusMismatchError,
    EnumTask,
    NodeBudgetExceeded,
    census,
    count_admissible,
    max_admissible,
)
from .oracles import (
    count_partitions_distinct,
    freiman_ap_check,
    naive_count,
    stability_probe,
)
from .structures import enumerate_t_special, verify_correspondences
from .store import ResultsStore, export_census_csv

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

STORE_ENV_VAR = "SUMFREE_STORE"
DEFAULT_STORE = "sumfree-results.jsonl"


def _store_path(args) -> str:
    if args.store:
        return args.store
    return os.environ.get(STORE_ENV_VAR, DEFAULT_STORE)


def _emit(rows: list[dict], fmt: str, columns: Sequence[str], out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        json.dump(rows, out, indent=2, default=str)
        out.write("\n")
        return
    if fmt == "csv":
        writer = csv.writer(out)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([row.get(c, "") for c in columns])
        return
    widths = [max(len(str(c)), max((len(str(r.get(c, ""))) for r in rows), default=0)) for c in columns]
    out.write("  ".join(str(c).ljust(w) for c, w in zip(columns, widths)).rstrip() + "\n")
    for row in rows:
        out.write("  ".join(str(row.get(c, "")).ljust(w) for c, w in zip(columns, widths)).rstrip() + "\n")


def _parse_range(text: str) -> tuple[int, int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return int(lo), int(hi)
    n = int(text)
    return n, n


# ---------------------------------------------------------------------------
# subcommands


def _cmd_count(args) -> int:
    profile = profile_for(args.profile, args.n)
    value = count_admissible(
        EnumTask(args.n, profile, "count"), workers=args.workers, node_budget=args.node_budget
    )
    _emit(
        [{"n": args.n, "profile_id": args.profile, "count": value}],
        args.output_format,
        ["n", "profile_id", "count"],
    )
    return EXIT_OK


def _cmd_max(args) -> int:
    profile = profile_for(args.profile, args.n)
    result = max_admissible(
        EnumTask(args.n, profile, "max"),
        workers=args.workers,
        node_budget=args.node_budget,
        witness_cap=args.witness_cap,
    )
    row = {
        "n": args.n,
        "profile_id": args.profile,
        "max_size": result.size,
        "num_max_witnesses": result.num_witnesses,
        "witnesses": "; ".join("{%s}" % ",".join(map(str, w)) for w in result.witnesses),
    }
    _emit([row], args.output_format, ["n", "profile_id", "max_size", "num_max_witnesses", "witnesses"])
    return EXIT_OK


def _cmd_census(args) -> int:
    lo, hi = _parse_range(args.range)
    store = ResultsStore(_store_path(args))
    records = census(
        lo, hi, args.profile, store, workers=args.workers, node_budget=args.node_budget
    )
    rows = [
        {
            "n": r.n,
            "profile_id": r.profile_id,
            "count": r.count,
            "max_size": r.max_size,
            "num_max_witnesses": r.num_max_witnesses,
        }
        for r in records
    ]
    _emit(rows, args.output_format, ["n", "profile_id", "count", "max_size", "num_max_witnesses"])
    return EXIT_OK


def _cmd_export(args) -> int:
    store = ResultsStore(_store_path(args))
    export_census_csv(store, sys.stdout)
    return EXIT_OK


def _cmd_special(args) -> int:
    with_zero = enumerate_t_special(args.t, require_zero=True, node_budget=args.node_budget)
    if args.require_zero:
        shown = with_zero
        count_all: Optional[int] = None
    else:
        shown = enumerate_t_special(args.t, require_zero=False, node_budget=args.node_budget)
        count_all = len(shown)
    if args.store:
        store = ResultsStore(args.store)
        all_count = count_all if count_all is not None else len(
            enumerate_t_special(args.t, require_zero=False, node_budget=args.node_budget)
        )
        existing = store.find_special(args.t)
        if existing is None:
            store.append_special(args.t, len(with_zero), all_count)
        elif (existing["count_with_zero"], existing["count_all"]) != (len(with_zero), all_count):
            print(
                f"store mismatch for t={args.t}: stored "
                f"({existing['count_with_zero']}, {existing['count_all']}) != "
                f"({len(with_zero)}, {all_count})",
                file=sys.stderr,
            )
            return EXIT_VERIFICATION
    rows = [
        {"t": args.t, "members": "{%s}" % ",".join(map(str, s.members))} for s in shown[:50]
    ]
    print(f"{len(shown)} set(s)" + (" containing 0" if args.require_zero else ""))
    _emit(rows, args.output_format, ["t", "members"])
    return EXIT_OK


def _cmd_zp(args) -> int:
    rows = scsf_census(args.p, args.s, workers=args.workers)
    out_rows = [
        {"p": r.p, "s": r.s, "count": r.count, "in_theorem_range": r.in_theorem_range}
        for r in rows
    ]
    _emit(out_rows, args.output_format, ["p", "s", "count", "in_theorem_range"])
    failures = 0
    for row in rows:
        if not row.in_theorem_range:
            continue
        if (args.p - 3 * row.s + 1) % 2 or 4 * row.s < args.p + 3:
            continue
        params = PrimeParams(args.p, row.s)
        specials = enumerate_t_special(params.t, require_zero=False)
        expected = set()
        for sp in specials:
            base = standard_symmetric_set(params, sp.members)
            expected.update(z.mask for z in dilation_orbit(base))
        actual = {z.mask for z in scsf_members(args.p, row.s, workers=args.workers)}
        gap_ok = row.count == (args.p - 1) // 2 * len(specials)
        match = expected == actual
        status = "PASS" if (gap_ok and match) else "FAIL"
        print(
            f"[{status}] p={args.p} s={row.s}: census {row.count} vs "
            f"(p-1)/2 x {len(specials)} marker sets; orbit closure "
            f"{'matches' if match else 'differs'}"
        )
        if not (gap_ok and match):
            failures += 1
    if args.store:
        store = ResultsStore(args.store)
        for row in rows:
            existing = store.find_zp(args.p, row.s)
            if existing is None:
                store.append_zp(row)
            elif existing["count"] != row.count:
                print(
                    f"store mismatch for p={args.p} s={row.s}: "
                    f"stored {existing['count']} != {row.count}",
                    file=sys.stderr,
                )
                return EXIT_VERIFICATION
    return EXIT_VERIFICATION if failures else EXIT_OK


def _cmd_verify(args) -> int:
    failures = 0

    def check(name: str, passed: bool, detail: str = "") -> None:
        nonlocal failures
        print(f"[{'PASS' if passed else 'FAIL'}] {name}" + (f" -- {detail}" if detail else ""))
        if not passed:
            failures += 1

    for profile_id in BUILTIN_PROFILE_IDS:
        ok = True
        bad = ""
        for n in range(0, args.n_max + 1):
            profile = profile_for(profile_id, n)
            engine = count_admissible(
                EnumTask(n, profile, "count"), workers=args.workers,
                node_budget=args.node_budget,
            )
            naive = naive_count(n, profile)
            if engine != naive:
                ok = False
                bad = f"n={n}: engine {engine} != naive {naive}"
                break
        check(f"engine equals the 2^n oracle for {profile_id}, n <= {args.n_max}", ok, bad)

    ok = True
    for n in range(1, args.n_max + 1):
        interval = top_third_interval(n)
        expected = (n + 1) // 3
        for profile_id in ("sf-34a-2n1", "sf-sigma-2n1"):
            result = max_admissible(
                EnumTask(n, profile_for(profile_id, n), "max"), workers=args.workers
            )
            if result.size != expected or interval not in result.witnesses:
                ok = False
    check(f"extremal size law and witness interval, n <= {args.n_max}", ok)

    report = verify_correspondences(min(args.n_max, 14), args.t_max)
    check(
        f"structure correspondences (n <= {min(args.n_max, 14)}, t <= {args.t_max})",
        report.passed,
    )

    rows = scsf_census(31, 10)
    ok = len(rows) == 1 and rows[0].count == 15
    if ok:
        base = standard_symmetric_set(PrimeParams(31, 10), IntSet({0}, hi=1))
        reference = canonical_form(base)
        ok = all(canonical_form(z) == reference for z in scsf_members(31, 10))
    check("Z_31 census: 15 size-10 sets, one dilation orbit", ok)

    ok = True
    for size in range(2, 6):
        for combo in itertools.combinations(range(1, 16), size):
            a = IntSet(combo, lo=1, hi=15)
            res = freiman_ap_check(a)
            if res.applicable and not res.holds:
                ok = False
    check("progression cover bound, sets in [1,15] up to size 5", ok)

    ok = all(
        count_partitions_distinct(k, l) <= (7389056 * k) ** l / (10**6 * l * l) ** l
        for k in range(1, 41)
        for l in range(1, 9)
    )
    check("partition counts below the exponential bound, k <= 40", ok)

    ok = True
    for n in range(1, 101):
        probe = stability_probe(top_third_interval(n), n)
        if (probe.c3.count, probe.c4.count, probe.c5.count, probe.dist) != (0, 0, 0, 0):
            ok = False
    check("witness interval carries no forbidden configurations, n <= 100", ok)

    print("verification " + ("PASSED" if failures == 0 else f"FAILED ({failures} check(s))"))
    return EXIT_OK if failures == 0 else EXIT_VERIFICATION


# ---------------------------------------------------------------------------
# parser


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")
    parser.add_argument(
        "--node-budget",
        type=int,
        default=DEFAULT_NODE_BUDGET,
        help="search node budget; exceeding it aborts with exit code 3",
    )
    parser.add_argument(
        "--output-format",
        choices=("table", "json", "csv"),
        default="table",
        help="how to print result records",
    )
    parser.add_argument(
        "--store",
        default=None,
        help=f"results store path (default ${STORE_ENV_VAR} or ./{DEFAULT_STORE})",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sumfree",
        description="Count, maximize, and verify sum-free integer sets with a forbidden sum.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="count admissible subsets of [1, n]")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--profile", required=True, choices=BUILTIN_PROFILE_IDS)
    _add_common(p)
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("max", help="maximum admissible size and its witnesses")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--profile", required=True, choices=BUILTIN_PROFILE_IDS)
    p.add_argument("--witness-cap", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=_cmd_max)

    p = sub.add_parser("census", help="count + max per n over a range, persisted")
    p.add_argument("--range", required=True, help="e.g. 1..16 or a single n")
    p.add_argument("--profile", required=True, choices=BUILTIN_PROFILE_IDS)
    _add_common(p)
    p.set_defaults(func=_cmd_census)

    p = sub.add_parser("export", help="dump stored census rows as CSV")
    _add_common(p)
    p.set_defaults(func=_cmd_export)

    p = sub.add_parser("special", help="enumerate t-special marker sets")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--require-zero", action="store_true")
    _add_common(p)
    p.set_defaults(func=_cmd_special)

    p = sub.add_parser("zp", help="symmetric complete sum-free census in Z_p")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--s", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=_cmd_zp)

    p = sub.add_parser("verify", help="run the oracle-equivalence and invariant suite")
    p.add_argument("--n-max", type=int, default=12)
    p.add_argument("--t-max", type=int, default=8)
    _add_common(p)
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NodeBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except CensusMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    except (ValueError, KeyError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
