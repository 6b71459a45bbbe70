"""Command-line front end.

Commands: validate, strategies, playability, normal-form, nash, stackelberg,
nash-stackelberg, export.  Every run emits a single structured report (JSON)
or its derived text rendering; the two agree on all numbers.  Reports are
byte-stable for identical inputs, flags, and seeds: extended-real values are
rendered through one canonical formatter and the timing section counts work
units rather than wall-clock time.

Exit codes: 0 success, 2 validation failure, 3 capacity exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from .equilibria import (
    OPTIMISTIC,
    PESSIMISTIC,
    StackelbergMode,
    nash_equilibria,
    nash_stackelberg,
    theta_mode,
)
from .errors import CapacityExceeded, GameError
from .gamefile import export_custom, load_game
from .model import check_playability, check_sequential, count_strategies
from .normal_form import (
    Evaluator,
    fmt_value,
    matrix_to_csv,
    normal_form_matrix,
    player_strategy_label,
)
from .preferences import WGame

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CAPACITY = 3

DEFAULT_CAP = 10**6


def _parse_playability_mode(raw: str):
    if raw == "all":
        return "all"
    if raw.startswith("sample="):
        body = raw[len("sample="):]
        parts = dict(p.split("=", 1) for p in ("n=" + body).split(","))
        try:
            return (int(parts["n"]), int(parts.get("seed", "0")))
        except (KeyError, ValueError):
            raise argparse.ArgumentTypeError(
                f"bad playability mode {raw!r}; use all or sample=N,seed=S"
            ) from None
    raise argparse.ArgumentTypeError(f"bad playability mode {raw!r}; use all or sample=N,seed=S")


def _parse_stackelberg_mode(raw: str) -> StackelbergMode:
    if raw == "optimistic":
        return OPTIMISTIC
    if raw == "pessimistic":
        return PESSIMISTIC
    if raw.startswith("theta="):
        try:
            return theta_mode(float(raw[len("theta="):]))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    raise argparse.ArgumentTypeError(
        f"bad mode {raw!r}; use optimistic, pessimistic, or theta=T"
    )


def _count_section(game: WGame) -> dict:
    agents = []
    for a in game.model.agents:
        agents.append(
            {
                "agent": str(a),
                "player": game.players.assignment[a],
                "information_atoms": game.model.info[a].atom_count,
                "actions": game.model.action_factors[a].size,
                "strategies": count_strategies(game.model, a),
            }
        )
    players = []
    profiles = 1
    for p in game.players.players:
        n = 1
        for a in game.agents_of(p):
            n *= count_strategies(game.model, a)
        players.append({"player": p, "strategies": n})
        profiles *= n
    return {"agents": agents, "players": players, "profiles": profiles}


def _validation_section(game: WGame, playability: dict | None = None) -> dict:
    order = check_sequential(game.model)
    if playability is None:
        if order is not None:
            playability = {"playable": True, "mode": "sequential", "profiles_checked": 0}
        else:
            playability = {"playable": None, "mode": "unchecked", "profiles_checked": 0}
    return {
        "self_information": "ok",
        "sequential_order": [str(a) for a in order] if order is not None else None,
        "playability": playability,
    }


def _profile_doc(game: WGame, by_player) -> dict:
    return {p: player_strategy_label(game, ps) for p, ps in by_player}


def _equilibrium_results(game: WGame, report) -> dict:
    out = []
    for rec in report.profiles:
        out.append(
            {
                "profile": _profile_doc(game, rec.by_player),
                "values": {p: fmt_value(v) for p, v in rec.values},
            }
        )
    return {"count": len(out), "equilibria": out}


def _diag_section(cap: int, diag=None, capacity_exceeded: bool = False) -> dict:
    doc = {"cap": cap, "capacity_exceeded": capacity_exceeded}
    if diag is not None:
        doc["profiles_enumerated"] = diag.profiles_enumerated
        doc["ties"] = diag.ties
        doc["infeasible_leader_profiles"] = diag.infeasible_leader_profiles
        doc["all_adverse"] = diag.all_adverse
    return doc


def run(command: str, game_path: str, options: dict, cap: int) -> tuple[dict, int]:
    """Execute one command and return (report, exit_code)."""
    game = load_game(game_path)
    evaluator = Evaluator(game)
    report: dict = {
        "command": command,
        "game": game_path,
        "options": options,
    }
    exit_code = EXIT_OK
    playability_doc = None
    results: dict = {}

    if command == "validate":
        results = {"valid": True}
    elif command == "strategies":
        results = _count_section(game)
    elif command == "playability":
        pr = check_playability(game.model, options["mode_parsed"], cap=cap)
        playability_doc = {
            "playable": pr.playable,
            "mode": pr.mode,
            "profiles_checked": pr.profiles_checked,
        }
        failures = []
        for f in pr.failures:
            failures.append(
                {
                    "nature": list(game.model.nature_space.point_labels(f.nature_point)),
                    "profile": {
                        str(s.agent): list(s.table) for s in f.profile.strategies
                    },
                    "solutions": f.solution_count,
                    "witnesses": [
                        list(game.model.configuration.point_labels(sol)) for sol in f.solutions
                    ],
                }
            )
        results = dict(playability_doc)
        results["failures"] = failures
        if not pr.playable:
            exit_code = EXIT_VALIDATION
    elif command == "normal-form":
        matrix = normal_form_matrix(game, cap=cap, evaluator=evaluator)
        cells = [
            [[fmt_value(a), fmt_value(b)] for a, b in row] for row in matrix.values
        ]
        results = {
            "row_player": matrix.row_player,
            "col_player": matrix.col_player,
            "rows": list(matrix.row_labels),
            "cols": list(matrix.col_labels),
            "cells": cells,
        }
        if options.get("csv"):
            with open(options["csv"], "w", encoding="utf-8", newline="") as fh:
                fh.write(matrix_to_csv(matrix))
    elif command == "nash":
        eq = nash_equilibria(game, evaluator=evaluator, cap=cap)
        results = _equilibrium_results(game, eq)
        report["_diag"] = eq.diagnostics
    elif command in ("stackelberg", "nash-stackelberg"):
        mode: StackelbergMode = options["mode_parsed"]
        eq = nash_stackelberg(game, mode, evaluator=evaluator, cap=cap)
        results = _equilibrium_results(game, eq)
        results["mode"] = mode.describe()
        if command == "stackelberg":
            # Deduplicate to the leader side, preserving order.
            seen = []
            for rec in eq.profiles:
                leaders_doc = {
                    p: player_strategy_label(game, ps)
                    for p, ps in rec.by_player
                    if p in game.leaders
                }
                if leaders_doc not in seen:
                    seen.append(leaders_doc)
            results = {
                "mode": mode.describe(),
                "count": len(seen),
                "leader_profiles": seen,
            }
        report["_diag"] = eq.diagnostics
    elif command == "export":
        results = {"document": export_custom(game)}
    else:  # pragma: no cover - argparse restricts the choices
        raise ValueError(f"unknown command {command!r}")

    diag = report.pop("_diag", None)
    report["validation"] = _validation_section(game, playability_doc)
    report["counts"] = _count_section(game)
    report["results"] = results
    report["timing"] = {"normal_form_evaluations": evaluator.evaluations}
    report["diagnostics"] = _diag_section(cap, diag)
    return report, exit_code


def render_text(report: dict) -> str:
    """Human-readable rendering derived from the structured report."""
    lines = [f"command: {report['command']}", f"game: {report['game']}"]
    if report["options"]:
        opts = " ".join(f"{k}={v}" for k, v in report["options"].items() if not k.endswith("_parsed"))
        if opts:
            lines.append(f"options: {opts}")
    val = report["validation"]
    seq = val["sequential_order"]
    lines.append("self-information: " + val["self_information"])
    lines.append(
        "sequential order: " + (" -> ".join(seq) if seq else "none")
    )
    pl = val["playability"]
    lines.append(
        f"playability: {pl['playable']} (mode={pl['mode']}, "
        f"profiles_checked={pl['profiles_checked']})"
    )
    counts = report["counts"]
    for a in counts["agents"]:
        lines.append(
            f"agent {a['agent']}: {a['information_atoms']} atoms x "
            f"{a['actions']} actions -> {a['strategies']} strategies"
        )
    lines.append(
        "profiles: "
        + " * ".join(str(p["strategies"]) for p in counts["players"])
        + f" = {counts['profiles']}"
    )
    results = report["results"]
    if "equilibria" in results:
        lines.append(f"equilibria found: {results['count']}")
        for rec in results["equilibria"]:
            prof = "; ".join(f"{p}: {s}" for p, s in rec["profile"].items())
            vals = ", ".join(f"{p}={v}" for p, v in rec["values"].items())
            lines.append(f"  [{prof}] values: {vals}")
    elif "leader_profiles" in results:
        lines.append(f"stackelberg leader profiles ({results['mode']}): {results['count']}")
        for prof in results["leader_profiles"]:
            lines.append("  " + "; ".join(f"{p}: {s}" for p, s in prof.items()))
    elif "cells" in results:
        lines.append(f"matrix {len(results['rows'])} x {len(results['cols'])}")
        header = [""] + results["cols"]
        lines.append(" | ".join(header))
        for label, row in zip(results["rows"], results["cells"]):
            lines.append(" | ".join([label] + [f"{a};{b}" for a, b in row]))
    elif "failures" in results:
        for f in results["failures"]:
            lines.append(
                f"  failure at nature={f['nature']}: {f['solutions']} solutions"
            )
    elif "valid" in results:
        lines.append("valid: true")
    elif "document" in results:
        lines.append(json.dumps(results["document"], indent=2))
    timing = report["timing"]
    lines.append(f"normal-form evaluations: {timing['normal_form_evaluations']}")
    diag = report["diagnostics"]
    lines.append(
        "diagnostics: " + ", ".join(f"{k}={v}" for k, v in diag.items())
    )
    return "\n".join(lines) + "\n"


def _emit(report: dict, fmt: str, out: str | None):
    options = report.get("options", {})
    report["options"] = {k: v for k, v in options.items() if not k.endswith("_parsed")}
    if report["command"] == "export":
        # The useful artifact is the game document itself, directly loadable
        # with --game.
        text = json.dumps(report["results"]["document"], indent=2) + "\n"
    elif fmt == "json":
        text = json.dumps(report, indent=2) + "\n"
    else:
        text = render_text(report)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--game", required=True, help="path to a game definition file")
    common.add_argument("--out", help="write the report to this path instead of stdout")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="enumeration cap")
    common.add_argument("--format", choices=("json", "text"), default="json")

    parser = argparse.ArgumentParser(
        prog="infogames",
        description="validate and solve finite games with explicit information structure",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common])
    sub.add_parser("strategies", parents=[common])
    p = sub.add_parser("playability", parents=[common])
    p.add_argument("--mode", default="all", help="all or sample=N,seed=S")
    p = sub.add_parser("normal-form", parents=[common])
    p.add_argument("--csv", help="also write the matrix as CSV to this path")
    sub.add_parser("nash", parents=[common])
    for name in ("stackelberg", "nash-stackelberg"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument(
            "--mode", default="optimistic", help="optimistic, pessimistic, or theta=T"
        )
    sub.add_parser("export", parents=[common])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    options: dict = {}
    if args.command == "playability":
        try:
            options["mode_parsed"] = _parse_playability_mode(args.mode)
        except argparse.ArgumentTypeError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_VALIDATION
        options["mode"] = args.mode
    elif args.command in ("stackelberg", "nash-stackelberg"):
        try:
            options["mode_parsed"] = _parse_stackelberg_mode(args.mode)
        except argparse.ArgumentTypeError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_VALIDATION
        options["mode"] = options["mode_parsed"].describe()
    elif args.command == "normal-form" and args.csv:
        options["csv"] = args.csv

    try:
        report, code = run(args.command, args.game, options, args.cap)
    except CapacityExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (GameError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    _emit(report, args.format, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
