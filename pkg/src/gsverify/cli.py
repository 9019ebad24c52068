"""Command-line front end: classify, census, lemmas, inspect, counterexample.

JSON (the default) is the stable machine format; text is for humans and csv
for spreadsheets.  Output for a fixed invocation (including seed) is byte
deterministic: keys are sorted, iteration orders are canonical, and wall
times never enter the rendered report.  Exit codes: 0 success, 1 a
verification check failed (the counterexample is embedded in the report),
2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import classify as classify_mod
from . import constructions
from .errors import GsverifyError
from .prefs import Profile, alternative_name, enumerate_profiles
from .rules import (
    ManipulationWitness,
    Rule,
    find_dictator,
    find_efficiency_violation,
    find_manipulation,
    find_tops_only_violation,
    find_unanimity_violation,
    parse_rule,
)

SCHEMA_VERSION = "1"

_LEMMA_CHOICES = tuple(constructions.LEMMA_DESCRIPTIONS)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--agents", type=int, default=2, help="agent count n (default 2)")
    common.add_argument("--alts", type=int, default=3, help="alternative count m (default 3)")
    common.add_argument(
        "--format", choices=("json", "csv", "text"), default="json",
        help="output format (default json)",
    )
    common.add_argument("--out", help="write the report to this path instead of stdout")
    common.add_argument(
        "--workers", type=int, default=os.cpu_count() or 1,
        help="worker processes for exhaustive scans (default: machine parallelism)",
    )
    common.add_argument(
        "--mode", choices=("auto", "exhaustive", "sampled"), default="auto",
        help="exhaustive when the rule space fits the budget, else sampled",
    )
    common.add_argument("--seed", type=int, default=0, help="seed for sampled modes")
    common.add_argument("--samples", type=int, help="sample size for sampled modes")

    parser = argparse.ArgumentParser(
        prog="gsverify",
        description="Exhaustive verification of social choice axioms at desk scale.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common],
                       help="count manipulable and dictatorial profiles of one rule")
    p.add_argument("--rule", required=True, help="canonical rule string")
    p.add_argument("--sets", action="store_true",
                   help="include hex bitsets over profile codes")
    p.add_argument("--method", choices=("cells", "scan"), default="cells",
                   help="tops-cell fast path or definitional per-profile scan")

    p = sub.add_parser("census", parents=[common],
                       help="count the axiom cascade over the tops-table rule space")
    p.add_argument("--filter", action="append", default=[],
                   choices=constructions.FILTER_NAMES, dest="filters",
                   help="pre-restrict the enumerated rules (repeatable)")
    p.add_argument("--verbose", action="store_true",
                   help="csv only: one row per rule instead of the summary")

    p = sub.add_parser("lemmas", parents=[common],
                       help="run verification suite checks")
    p.add_argument("ids", nargs="*", metavar="ID",
                   help=f"check ids ({', '.join(_LEMMA_CHOICES)}); default: all")
    p.add_argument("--suite", choices=("all",), help="run every check")

    p = sub.add_parser("inspect", parents=[common],
                       help="evaluate the classic axioms for one rule")
    p.add_argument("--rule", required=True, help="canonical rule string")

    sub.add_parser("counterexample", parents=[common],
                   help="certify the two-alternative majority negative control")
    return parser


def run(argv: list[str] | None = None) -> int:
    """Entry point; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        payload, failed = _execute(args)
    except (GsverifyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rendered = _render(payload, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(rendered)
    else:
        sys.stdout.write(rendered)
    return 1 if failed else 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()


# ---------------------------------------------------------------------------
# Command execution.
# ---------------------------------------------------------------------------


def _execute(args: argparse.Namespace) -> tuple[dict, bool]:
    if args.workers < 1:
        raise ValueError("--workers must be at least 1")
    handler = {
        "classify": _cmd_classify,
        "census": _cmd_census,
        "lemmas": _cmd_lemmas,
        "inspect": _cmd_inspect,
        "counterexample": _cmd_counterexample,
    }[args.command]
    return handler(args)


def _base_payload(args: argparse.Namespace) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "agents": args.agents,
        "alternatives": args.alts,
    }


def _witness_payload(witness: ManipulationWitness) -> dict:
    return {
        "profile": witness.profile.to_text(),
        "agent": witness.agent,
        "misreport": witness.misreport.to_text(),
        "sincere_outcome": alternative_name(witness.sincere_outcome),
        "improved_outcome": alternative_name(witness.improved_outcome),
    }


def _cmd_classify(args: argparse.Namespace) -> tuple[dict, bool]:
    rule = parse_rule(args.rule, args.agents, args.alts)
    summary = classify_mod.classify_all(
        rule, materialize_sets=args.sets, method=args.method
    )
    payload = _base_payload(args)
    payload.update(
        {
            "rule": rule.to_string(),
            "method": args.method,
            "unanimous": summary.unanimous,
            "total": summary.total,
            "m_count": summary.m_count,
            "d_count": summary.d_count,
            "examples": _classification_examples(rule, summary),
        }
    )
    if args.sets:
        payload["m_set_hex"] = classify_mod.bitset_to_hex(summary.m_set, summary.total)
        payload["d_set_hex"] = classify_mod.bitset_to_hex(summary.d_set, summary.total)
    return payload, False


def _classification_examples(rule: Rule, summary) -> dict:
    manipulable = None
    dictatorial = None
    for profile in enumerate_profiles(rule.n, rule.m):
        if manipulable is None and summary.m_count > 0:
            witness = classify_mod.find_profile_manipulation(rule, profile)
            if witness is not None:
                manipulable = {
                    "profile": profile.to_text(),
                    "witness": _witness_payload(witness),
                }
        if dictatorial is None and summary.d_count > 0:
            if classify_mod.is_dictatorial_profile(rule, profile):
                dictatorial = {"profile": profile.to_text()}
        want_manip = summary.m_count > 0
        want_dict = summary.d_count > 0
        if (manipulable is not None or not want_manip) and (
            dictatorial is not None or not want_dict
        ):
            break
    return {"manipulable": manipulable, "dictatorial": dictatorial}


def _cmd_census(args: argparse.Namespace) -> tuple[dict, bool]:
    if args.verbose and args.format != "csv":
        raise ValueError("--verbose census output is csv only")
    payload = _base_payload(args)
    if args.verbose:
        rows = list(
            constructions.census_rows(args.agents, args.alts, filters=args.filters)
        )
        payload["per_rule"] = rows
        payload["filters"] = list(constructions._ordered_filters(args.filters))
        return payload, False
    report = constructions.census(
        args.agents,
        args.alts,
        mode=args.mode,
        samples=args.samples,
        seed=args.seed,
        workers=args.workers,
        filters=args.filters,
    )
    payload.update(report.to_json_dict())
    return payload, False


def _cmd_lemmas(args: argparse.Namespace) -> tuple[dict, bool]:
    ids = [i.upper() for i in args.ids]
    if args.suite == "all" or not ids:
        ids = list(_LEMMA_CHOICES)
    results = []
    for lemma in ids:
        report = constructions.verify_lemma(
            lemma,
            args.agents,
            args.alts,
            mode=args.mode,
            samples=args.samples,
            seed=args.seed,
            workers=args.workers,
        )
        results.append(report.to_json_dict())
    payload = _base_payload(args)
    payload["results"] = results
    payload["passed"] = all(r["passed"] for r in results)
    return payload, not payload["passed"]


def _cmd_inspect(args: argparse.Namespace) -> tuple[dict, bool]:
    rule = parse_rule(args.rule, args.agents, args.alts)
    unanimity_violation = find_unanimity_violation(rule)
    tops_violation = find_tops_only_violation(rule)
    efficiency_violation = find_efficiency_violation(rule)
    manipulation = find_manipulation(rule)
    payload = _base_payload(args)
    payload.update(
        {
            "rule": rule.to_string(),
            "unanimous": unanimity_violation is None,
            "tops_only": tops_violation is None,
            "efficient": efficiency_violation is None,
            "strategy_proof": manipulation is None,
            "dictator": find_dictator(rule),
            "witnesses": {
                "unanimity": _maybe_text(unanimity_violation),
                "tops_only": (
                    None
                    if tops_violation is None
                    else [tops_violation[0].to_text(), tops_violation[1].to_text()]
                ),
                "efficiency": (
                    None
                    if efficiency_violation is None
                    else {
                        "profile": efficiency_violation[0].to_text(),
                        "dominating": alternative_name(efficiency_violation[1]),
                    }
                ),
                "manipulation": (
                    None if manipulation is None else _witness_payload(manipulation)
                ),
            },
        }
    )
    return payload, False


def _maybe_text(profile: Profile | None) -> str | None:
    return None if profile is None else profile.to_text()


def _cmd_counterexample(args: argparse.Namespace) -> tuple[dict, bool]:
    if args.alts not in (2, 3):
        raise ValueError("the negative control is a 2-alternative rule")
    certificate = constructions.majority_counterexample(args.agents)
    payload = _base_payload(args)
    payload["alternatives"] = 2
    payload["rule"] = certificate.rule.to_string()
    payload["certificate"] = certificate.to_json_dict()
    return payload, not certificate.valid


# ---------------------------------------------------------------------------
# Rendering.
# ---------------------------------------------------------------------------


def _render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        return _render_csv(payload)
    return _render_text(payload)


def _bool(value: bool) -> str:
    return "true" if value else "false"


def _render_csv(payload: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    command = payload["command"]
    if command == "census" and "per_rule" in payload:
        writer.writerow(
            ["rule_code", "unanimous", "efficient", "strategy_proof",
             "dictatorial", "m_count", "d_count"]
        )
        for code, unan, eff, spf, dic, m_count, d_count in payload["per_rule"]:
            writer.writerow(
                [code, _bool(unan), _bool(eff), _bool(spf), _bool(dic), m_count, d_count]
            )
    elif command == "census":
        writer.writerow(
            ["agents", "alternatives", "mode", "samples", "seed", "total", "unanimous",
             "efficient", "strategy_proof", "dictatorial", "sp_equals_dictators"]
        )
        counts = payload["counts"]
        writer.writerow(
            [payload["agents"], payload["alternatives"], payload["mode"],
             payload["samples"], payload["seed"], counts["total"], counts["unanimous"],
             counts["efficient"], counts["strategy_proof"], counts["dictatorial"],
             _bool(payload["sp_equals_dictators"])]
        )
    elif command == "lemmas":
        writer.writerow(
            ["lemma", "agents", "alternatives", "mode", "samples", "seed",
             "passed", "checks"]
        )
        for result in payload["results"]:
            writer.writerow(
                [result["lemma"], result["agents"], result["alternatives"],
                 result["mode"], result["samples"], result["seed"],
                 _bool(result["passed"]), result["checks"]]
            )
    elif command == "classify":
        header = ["rule", "agents", "alternatives", "unanimous", "total",
                  "m_count", "d_count"]
        row = [payload["rule"], payload["agents"], payload["alternatives"],
               _bool(payload["unanimous"]), payload["total"], payload["m_count"],
               payload["d_count"]]
        if "m_set_hex" in payload:
            header += ["m_set_hex", "d_set_hex"]
            row += [payload["m_set_hex"], payload["d_set_hex"]]
        writer.writerow(header)
        writer.writerow(row)
    elif command == "inspect":
        writer.writerow(
            ["rule", "agents", "alternatives", "unanimous", "tops_only",
             "efficient", "strategy_proof", "dictator"]
        )
        writer.writerow(
            [payload["rule"], payload["agents"], payload["alternatives"],
             _bool(payload["unanimous"]), _bool(payload["tops_only"]),
             _bool(payload["efficient"]), _bool(payload["strategy_proof"]),
             payload["dictator"]]
        )
    else:  # counterexample
        cert = payload["certificate"]
        writer.writerow(
            ["rule", "agents", "alternatives", "unanimous", "strategy_proof",
             "tops_only", "efficient", "dictator", "valid"]
        )
        writer.writerow(
            [payload["rule"], payload["agents"], payload["alternatives"],
             _bool(cert["unanimous"]), _bool(cert["strategy_proof"]),
             _bool(cert["tops_only"]), _bool(cert["efficient"]), cert["dictator"],
             _bool(cert["valid"])]
        )
    return buf.getvalue()


def _render_text(payload: dict) -> str:
    command = payload["command"]
    lines: list[str] = []
    if command == "lemmas":
        for result in payload["results"]:
            status = "PASS" if result["passed"] else "FAIL"
            line = (
                f"{result['lemma']} {status} "
                f"(n={result['agents']}, m={result['alternatives']}, "
                f"mode={result['mode']}, checks={result['checks']})"
            )
            if result["counterexample"] is not None:
                line += f" counterexample={json.dumps(result['counterexample'], sort_keys=True)}"
            lines.append(line)
    elif command == "census":
        counts = payload["counts"]
        lines.append(
            f"census n={payload['agents']} m={payload['alternatives']} "
            f"mode={payload['mode']}"
        )
        for key in ("total", "unanimous", "efficient", "strategy_proof", "dictatorial"):
            lines.append(f"  {key}: {counts[key]}")
        lines.append(f"  strategy_proof_rules: {', '.join(payload['strategy_proof_rules']) or '-'}")
        lines.append(f"  sp_equals_dictators: {_bool(payload['sp_equals_dictators'])}")
    elif command == "classify":
        lines.append(f"rule {payload['rule']}: unanimous={_bool(payload['unanimous'])}")
        lines.append(
            f"  manipulable={payload['m_count']} dictatorial={payload['d_count']} "
            f"of {payload['total']} profiles"
        )
    elif command == "inspect":
        lines.append(f"rule {payload['rule']}:")
        for key in ("unanimous", "tops_only", "efficient", "strategy_proof"):
            lines.append(f"  {key}: {_bool(payload[key])}")
        lines.append(f"  dictator: {payload['dictator']}")
    else:  # counterexample
        cert = payload["certificate"]
        lines.append(f"rule {payload['rule']} at n={payload['agents']}, m=2:")
        for key in ("unanimous", "strategy_proof", "tops_only", "efficient"):
            lines.append(f"  {key}: {_bool(cert[key])}")
        lines.append(f"  dictator: {cert['dictator']}")
        lines.append(f"  valid: {_bool(cert['valid'])}")
    return "\n".join(lines) + "\n"
