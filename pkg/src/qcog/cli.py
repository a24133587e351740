"""Command-line entry point.

Exit codes: 0 success, 1 error, 2 analysis ran and found a violation (so
scripts can branch on findings).  The ``QCOG_SEED`` environment variable
overrides ``--seed`` everywhere.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import os
import sys

import numpy as np

from . import feasibility, framefit, ingest, nosignal, sequential

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FINDING = 2


def _jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {k: _jsonable(v) for k, v in dataclasses.asdict(obj).items()}
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "value"):  # enums
        return obj.value
    return obj


def _emit_json(payload) -> None:
    print(json.dumps(_jsonable(payload), indent=2, sort_keys=True))


def _resolve_seed(args) -> int:
    env = os.environ.get("QCOG_SEED")
    if env is not None:
        return int(env)
    return args.seed


def cmd_check_classical(args) -> int:
    a = ingest.load_survey(args.sample_a)
    b = ingest.load_survey(args.sample_b)
    check = feasibility.classical_consistency_check(
        a.questions[-1], b.questions[-1], args.tol)
    if args.json:
        _emit_json(check)
    else:
        print(f"final question: {a.label!r} vs {b.label!r}")
        print(f"  support-side difference: {check.support_difference:.6g}")
        print(f"  oppose-side difference:  {check.oppose_difference:.6g}")
        if check.polarity_warning:
            print("  note: opposite polarities compared via the "
                  "'not opposing = supporting' reading")
        if check.violation is not None:
            print(f"  VIOLATION of total probability: {check.violation:.6g} "
                  f"> tol {args.tol}")
        else:
            print(f"  consistent within tol {args.tol}")
    return EXIT_FINDING if check.violation is not None else EXIT_OK


def cmd_check_order(args) -> int:
    pair = ingest.load_order_pair(args.pair_file)
    report = feasibility.order_effect_check(
        pair["ordering_1"], pair["ordering_2"], args.tol)
    if args.json:
        _emit_json({"label": pair["label"],
                    "question_names": pair["question_names"],
                    "entries": report.entries})
    else:
        print(pair["label"])
        for e in report.entries:
            name = pair["question_names"][e.question_index]
            mark = "FLAGGED" if e.flagged else "ok"
            print(f"  {name}: {e.marginal_first_ordering.tolist()} vs "
                  f"{e.marginal_second_ordering.tolist()} "
                  f"(diff {e.difference:.6g}) [{mark}]")
    return EXIT_FINDING if report.any_flagged else EXIT_OK


def _print_feasibility(report: feasibility.FeasibilityReport) -> None:
    for t in report.transitions:
        tag = "exempt" if t.exempt else ("ok" if t.feasible_at_tol else "INFEASIBLE")
        print(f"  Q{t.from_index + 1}->Q{t.to_index + 1}: "
              f"max_increase {t.max_increase:.6g}, "
              f"min_decrease {t.min_decrease:.6g}, "
              f"majorization slack {t.majorization_slack:.6g} [{tag}]")


def cmd_check_contraction(args) -> int:
    chain = ingest.load_survey(args.survey)
    report = feasibility.contraction_check(chain, tol=args.tol)
    if args.json:
        _emit_json(report)
    else:
        print(f"contraction report for {chain.label!r}")
        _print_feasibility(report)
    violated = any(t.max_increase > 0 or t.min_decrease > 0
                   for t in report.transitions)
    return EXIT_FINDING if violated else EXIT_OK


def cmd_check_feasibility(args) -> int:
    chain = ingest.load_survey(args.survey)
    report = feasibility.chain_feasibility(chain, args.isolate_first, args.tol)
    if args.json:
        _emit_json(report)
    else:
        mode = "isolated first question" if args.isolate_first else "full chain"
        print(f"feasibility report for {chain.label!r} ({mode}, tol {args.tol})")
        _print_feasibility(report)
    return EXIT_OK if report.all_feasible else EXIT_FINDING


def cmd_fit_chain(args) -> int:
    chain = ingest.load_survey(args.survey)
    options = framefit.FitOptions(seed=_resolve_seed(args),
                                  n_starts=args.starts)
    fit = framefit.fit_chain(chain, args.isolate_first, args.tol, options)
    if args.json:
        _emit_json(framefit.fit_result_to_dict(fit))
    else:
        print(f"fitted {len(fit.frames)} frames for {chain.label!r} "
              f"(seed {options.seed}, {options.n_starts} starts)")
        for i, p in enumerate(fit.achieved):
            print(f"  Q{i + 1} achieved: {np.round(p.probs, 9).tolist()}")
        print(f"  residuals: {[f'{r:.3g}' for r in fit.residuals]}")
        if max(fit.projection_distances) > 0:
            print(f"  projection distances: "
                  f"{[f'{d:.3g}' for d in fit.projection_distances]}")
    return EXIT_OK


def cmd_conjunction_scan(args) -> int:
    results = sequential.interference_region_scan(args.grid)
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["p", "q", "alpha", "p_f_b", "delta", "in_region"])
            for r in results:
                writer.writerow([repr(r.p), repr(r.q), repr(r.alpha),
                                 repr(r.p_f_b), repr(r.delta),
                                 int(r.in_region)])
    n_in = sum(r.in_region for r in results)
    if args.json:
        _emit_json({"grid": args.grid, "cells": len(results),
                    "cells_in_region": n_in, "out": args.out})
    else:
        print(f"{args.grid}x{args.grid} scan: {n_in}/{len(results)} cells "
              f"with P(F) > P^F(B) > P(B)")
        if args.out:
            print(f"wrote {args.out}")
    return EXIT_OK


def cmd_spin_demo(args) -> int:
    direct, after = sequential.spin_order_demo()
    if args.json:
        _emit_json({"p_up_direct": direct, "p_up_after_y": after})
    else:
        print(f"P(X=UP) with no intervening measurement: {direct}")
        print(f"P(X=UP) after a y-spin measurement:      {after}")
    return EXIT_OK


def cmd_nosignal_demo(args) -> int:
    rng = np.random.default_rng(_resolve_seed(args))
    worst = 0.0
    for _ in range(args.trials):
        state = nosignal.random_entangled_state(rng)
        series_a = nosignal.random_local_series(rng, args.steps)
        series_b = nosignal.random_local_series(rng, args.steps)
        worst = max(worst, nosignal.no_signalling_check(state, series_a, series_b))
    if args.json:
        _emit_json({"trials": args.trials, "steps": args.steps,
                    "max_fifth_marginal_deviation": worst})
    else:
        print(f"{args.trials} random entangled states, {args.steps}-step "
              f"local series pairs")
        print(f"max fifth-marginal deviation: {worst:.3g}")
    return EXIT_OK if worst < 1e-10 else EXIT_FINDING


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcog",
        description="Quantum-probability analysis of sequential survey data")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_json(p):
        p.add_argument("--json", action="store_true",
                       help="emit the report as JSON")

    p = sub.add_parser("check-classical",
                       help="total-probability check of the two samples' "
                            "final question")
    p.add_argument("sample_a")
    p.add_argument("sample_b")
    p.add_argument("--tol", type=float, required=True)
    add_json(p)
    p.set_defaults(func=cmd_check_classical)

    p = sub.add_parser("check-order",
                       help="flag marginals that depend on question order")
    p.add_argument("pair_file")
    p.add_argument("--tol", type=float, required=True)
    add_json(p)
    p.set_defaults(func=cmd_check_order)

    p = sub.add_parser("check-contraction",
                       help="max/min contraction report for a question chain")
    p.add_argument("survey")
    p.add_argument("--tol", type=float, default=0.0)
    add_json(p)
    p.set_defaults(func=cmd_check_contraction)

    p = sub.add_parser("check-feasibility",
                       help="majorization feasibility of a question chain")
    p.add_argument("survey")
    p.add_argument("--tol", type=float, required=True)
    p.add_argument("--isolate-first", action="store_true")
    add_json(p)
    p.set_defaults(func=cmd_check_feasibility)

    p = sub.add_parser("fit-chain",
                       help="fit orthonormal frames reproducing the chain")
    p.add_argument("survey")
    p.add_argument("--tol", type=float, required=True)
    p.add_argument("--isolate-first", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--starts", type=int, default=32)
    add_json(p)
    p.set_defaults(func=cmd_fit_chain)

    p = sub.add_parser("conjunction-scan",
                       help="scan the (p, q) square for the interference region")
    p.add_argument("--grid", type=int, default=101)
    p.add_argument("--out", help="write the grid as CSV")
    add_json(p)
    p.set_defaults(func=cmd_conjunction_scan)

    p = sub.add_parser("spin-demo",
                       help="spin-1/2 question-order demonstration")
    add_json(p)
    p.set_defaults(func=cmd_spin_demo)

    p = sub.add_parser("nosignal-demo",
                       help="random-state no-signalling deviation statistics")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--steps", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    add_json(p)
    p.set_defaults(func=cmd_nosignal_demo)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ingest.IngestError, feasibility.PolarityError,
            framefit.InfeasibleTargetError, framefit.ConvergenceError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
