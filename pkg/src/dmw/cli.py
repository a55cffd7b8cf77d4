"""Command-line surface: verify, solve, degree, branch, census, equiv.

Exit codes: 0 all checks pass, 1 a check fails or a solve comes back
empty / without witness, 2 malformed input (missing file, bad label,
schema error).  Dataset arguments may be file paths or names of shipped
datasets; the environment variable DMW_DATA_DIR overrides the dataset
root.  All output is deterministic and byte-stable.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import chardata, constraints, decomp, symbols
from .chardata import DatasetError

FAMILY_OF_PREFIX = {"D": "D", "2D": "2D", "B": "BC", "C": "BC"}


def _load(arg: str) -> chardata.BlockTable:
    p = Path(arg)
    if p.exists():
        return chardata.load_path(p)
    name = p.stem if p.suffix == ".json" else arg
    return chardata.load_dataset(name)


def _parse_assign(items) -> dict[str, int]:
    out = {}
    for item in items or []:
        for piece in item.split(","):
            if not piece:
                continue
            name, _, value = piece.partition("=")
            out[name.strip()] = int(value)
    return out


def cmd_verify(args) -> int:
    table = _load(args.dataset)
    report = decomp.Report()
    report.add("load", True, f"{table.size} rows ({table.group.label}, block {table.block})")
    report.add("square", table.size == len(table.columns), f"{table.size}x{len(table.columns)}")
    if table.kind == "chain":
        report.add("chain", True, "defect-1 chain with exceptional node")
    else:
        decomp.check_unitriangular(table, report)

    known_a = [r.a_value for r in table.rows]
    if all(a is not None for a in known_a):
        ok = all(known_a[i] <= known_a[i + 1] for i in range(len(known_a) - 1))
        report.add("a_order", ok, "non-decreasing" if ok else "violated")
    else:
        report.add("a_order", True, "SKIP (no degree data)")

    recomputed = mismatches = 0
    for i, row in enumerate(table.rows):
        expected = chardata.recompute_degree(table, i)
        if expected is None or row.degree is None:
            continue
        recomputed += 1
        if expected != row.degree:
            mismatches += 1
            report.add("degrees", False, f"row {i + 1} ({row.name}): {row.degree} != {expected}")
    if not mismatches:
        report.add("degrees", True, f"{recomputed} recomputed")

    report.add("defect", True, f"{chardata.block_defect(table)}")
    report.add("census", True, chardata.census_text(chardata.series_census(table)))

    if table.kind != "chain" and all(r.degree is not None for r in table.rows):
        assignment = dict(table.published)
        assignment.update(_parse_assign(args.assign))
        q_samples = tuple(args.q_samples or (2, 3, 5, 7, 8, 9))
        if any(q0 < 2 for q0 in q_samples):
            raise ValueError("q-samples must be integers >= 2")
        missing = table.unknowns() - set(assignment)
        if missing:
            report.add("brauer_positive_at_samples", False, f"unbound unknowns {sorted(missing)}")
        else:
            sub = decomp.brauer_positivity_report(table, assignment, q_samples)
            report.checks.extend(sub.checks)
    else:
        report.add("brauer_positive_at_samples", True, "SKIP (no degree data)")

    print(report.text())
    return 0 if report.ok else 1


def _parse_domains(items) -> dict[str, tuple[int, int]]:
    out = {}
    for item in items or []:
        name, _, span = item.partition("=")
        lo, _, hi = span.partition("..")
        out[name.strip()] = (int(lo), int(hi or lo))
    return out


def cmd_solve(args) -> int:
    table = _load(args.dataset)
    for name, (lo, hi) in _parse_domains(args.domain).items():
        if name not in table.params:
            raise ValueError(f"unknown parameter {name!r}")
        if lo < 0 or lo > hi:
            raise ValueError(f"bad domain {name}={lo}..{hi}")
        table.params[name] = (lo, hi)
    tiers = ["proved"]
    if args.p_gt_5:
        tiers.append("p_gt_5")
    if args.conjectural:
        tiers.append("conjectural")
    result = constraints.solve(table, tuple(tiers))
    print(f"SOLVE {table.name} tiers={'+'.join(tiers)} unknowns={' '.join(result.unknowns) or '-'}")
    print(result.text())
    return 1 if result.empty else 0


def _group_spec(text: str):
    for prefix in ("2D", "D", "B", "C"):
        if text.startswith(prefix) and text[len(prefix):].isdigit():
            return FAMILY_OF_PREFIX[prefix], int(text[len(prefix):])
    raise ValueError(f"bad classical group {text!r} (expected like D4, 2D5, C4, B3)")


def cmd_degree(args) -> int:
    family, rank = _group_spec(args.group)
    bp = symbols.parse_label(args.label, family, rank)
    print(symbols.generic_degree(bp).to_text())
    return 0


def cmd_branch(args) -> int:
    fam_from, rank_from = _group_spec(getattr(args, "from"))
    fam_to, rank_to = _group_spec(args.to)
    if fam_from != fam_to or abs(rank_from - rank_to) != 1:
        raise ValueError("branching runs along the corank-one chain of one family")
    if args.direction == "induce":
        if rank_to != rank_from + 1:
            raise ValueError("induce goes up one rank")
        bp = symbols.parse_label(args.label, fam_from, rank_from)
        outputs = symbols.induce_one_box(bp)
    else:
        if rank_to != rank_from - 1:
            raise ValueError("restrict goes down one rank")
        bp = symbols.parse_label(args.label, fam_from, rank_from)
        outputs = symbols.restrict_one_box(bp)
    counts: dict[str, int] = {}
    for y in outputs:
        counts[y.label()] = counts.get(y.label(), 0) + 1
    for label in sorted(counts):
        print(f"{label} {counts[label]}")
    return 0


def cmd_census(args) -> int:
    table = _load(args.dataset)
    print(chardata.census_text(chardata.series_census(table)))
    return 0


def cmd_equiv(args) -> int:
    t1 = _load(args.dataset1)
    t2 = _load(args.dataset2)
    witness = decomp.permutation_identical(t1, t2)
    if witness is None:
        print("NONE")
        return 1
    rows = " ".join(str(i + 1) for i in witness[0])
    cols = " ".join(str(j + 1) for j in witness[1])
    print(f"WITNESS rows {rows}")
    print(f"WITNESS cols {cols}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dmw", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run all checks on a dataset")
    p.add_argument("dataset")
    p.add_argument("--assign", action="append", metavar="u=v",
                   help="override unknowns for the positivity check")
    p.add_argument("--q-samples", type=int, nargs="+")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", help="run the constraint battery of a dataset")
    p.add_argument("dataset")
    p.add_argument("--p-gt-5", action="store_true", help="include p>5 constraints")
    p.add_argument("--conjectural", action="store_true",
                   help="include the conjectural upper-bound battery")
    p.add_argument("--domain", action="append", metavar="u=lo..hi",
                   help="override the declared domain of an unknown")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("degree", help="generic degree of a classical label")
    p.add_argument("--group", required=True)
    p.add_argument("--label", required=True)
    p.set_defaults(func=cmd_degree)

    p = sub.add_parser("branch", help="one-box induction/restriction of a label")
    p.add_argument("--from", required=True)
    p.add_argument("--to", required=True)
    p.add_argument("--label", required=True)
    p.add_argument("--direction", choices=("induce", "restrict"), required=True)
    p.set_defaults(func=cmd_branch)

    p = sub.add_parser("census", help="Harish-Chandra series census of a dataset")
    p.add_argument("dataset")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("equiv", help="find a permutation identifying two blocks")
    p.add_argument("dataset1")
    p.add_argument("dataset2")
    p.set_defaults(func=cmd_equiv)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FileNotFoundError, DatasetError, ValueError, KeyError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
