"""Command-line interface: simulate, check-gains, verify."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .harness import (
    ScenarioError,
    SimulationAborted,
    default_output_dir,
    load_scenario,
    run_closed_loop,
    write_log,
    write_states,
)
from .stability import gain_condition_check
from .verification import SUITES, run_suites


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="se23ctl", description="SE2(3) log-linear control toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a closed-loop scenario and write the CSV log")
    sim.add_argument("--scenario", required=True, help="scenario YAML file")
    sim.add_argument("--out", default=None, help="output CSV path (default: <out dir>/run.csv)")
    sim.add_argument("--states-out", default=None, help="optional companion CSV with absolute positions")

    chk = sub.add_parser("check-gains", help="evaluate the gain condition for a scenario")
    chk.add_argument("--scenario", required=True)

    ver = sub.add_parser("verify", help="run oracle verification suites")
    ver.add_argument("--suite", default="all", choices=sorted(SUITES) + ["all"])
    ver.add_argument("--seed", type=int, default=0)
    return p


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)

    try:
        if args.command == "simulate":
            cfg = load_scenario(args.scenario)
            out = Path(args.out) if args.out else default_output_dir() / "run.csv"
            log = run_closed_loop(cfg)
            write_log(log, out)
            if args.states_out:
                write_states(log, args.states_out)
            rep = log.report
            print(f"wrote {out} ({log.t.size} samples); alpha = {rep.alpha:.6g}, "
                  f"margin = {rep.margin:.6g}, condition_holds = {rep.condition_holds}")
            if not rep.condition_holds:
                print("warning: gains violate the exponential-stability condition; "
                      "envelope column written as NaN")
            return 0

        if args.command == "check-gains":
            cfg = load_scenario(args.scenario)
            ref = cfg.build_reference().sample(0.0)
            rep = gain_condition_check(cfg.gains, ref.T_bar)
            print(f"kappa_p = {rep.kappa_p:.6g}, kappa_v = {rep.kappa_v:.6g}, "
                  f"kappa_r = {rep.kappa_r:.6g}, |B| = {rep.B_norm:.6g}")
            print(f"margin = {rep.margin:.6g}, alpha = {rep.alpha:.6g}, "
                  f"condition_holds = {rep.condition_holds}")
            return 0 if rep.condition_holds else 1

        if args.command == "verify":
            names = sorted(SUITES) if args.suite == "all" else [args.suite]
            results = run_suites(names, seed=args.seed)
            failed = [r for r in results if not r.passed]
            for r in results:
                print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}")
            print(f"SUMMARY suites={','.join(names)} checks={len(results)} failures={len(failed)}")
            return 0 if not failed else 1
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return 1
    except SimulationAborted as exc:
        print(f"simulation aborted: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
