"""Scenario files, command dispatch and CSV emission.

Scenario schema (JSON)::

    {
      "states": ["a", "b"],
      "initial": <model>,
      "transition": <operator> | [<operator>, ...],   # list: one per step
      "horizon": 25,
      "queries": [ {"command": "...", ...}, ... ]     # optional metadata
    }

Credal models::

    {"type": "linear", "mass": [0.9, 0.1]}
    {"type": "vacuous"}
    {"type": "vertices", "points": [[0.6, 0.4], [0.9, 0.1]]}
    {"type": "contamination", "base": [0.15, 0.85], "epsilon": 0.1}
    {"type": "belief", "focal": [{"members": ["a"], "mass": 0.5}, ...]}
    {"type": "prob_interval", "lower": [0.6, 0.1], "upper": [0.9, 0.4]}

Transition operators::

    {"type": "rows", "rows": [<model>, ...]}                  # one per state
    {"type": "matrix", "matrix": [[...], ...]}                # precise
    {"type": "contamination", "matrix": [[...], ...], "epsilon": 0.1}
    {"type": "interval", "lower": [[...], ...], "upper": [[...], ...]}

All commands print CSV with a header row on stdout; numbers carry 12
significant digits, making output byte-stable across runs.  Exit code is
0 on success; failures print ``error:<code>: message`` on stderr and
exit nonzero.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import sys
from dataclasses import dataclass
from importlib import resources

import numpy as np

from . import oracle
from .chain import ImpreciseMarkovChain, PathGamble
from .credal import (
    BeliefFunction,
    Contamination,
    CredalModel,
    CredalValidationError,
    Linear,
    ProbInterval,
    Vacuous,
    VertexSet,
)
from .limits import ConvergenceError, NotRegularError, limit_upper
from .states import Event, Gamble, MassFunction, StateSpace
from .transition import UpperTransitionOperator


class ScenarioError(ValueError):
    """A scenario file failed to parse or validate; `code` names the failure."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class Scenario:
    space: StateSpace
    initial: CredalModel
    transitions: "UpperTransitionOperator | tuple[UpperTransitionOperator, ...]"
    horizon: int
    queries: tuple[dict, ...]

    def to_chain(self) -> ImpreciseMarkovChain:
        return ImpreciseMarkovChain(self.initial, self.transitions, self.horizon)


# ----------------------------------------------------------------------
# Deserialization


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise ScenarioError("schema-error", f"{where}: missing field {key!r}")
    return obj[key]


def model_from_json(space: StateSpace, obj: dict, where: str) -> CredalModel:
    if not isinstance(obj, dict):
        raise ScenarioError("schema-error", f"{where}: model must be an object")
    kind = _require(obj, "type", where)
    try:
        if kind == "linear":
            return Linear(MassFunction(space, _require(obj, "mass", where)))
        if kind == "vacuous":
            return Vacuous(space)
        if kind == "vertices":
            pts = [
                MassFunction(space, p) for p in _require(obj, "points", where)
            ]
            return VertexSet(space, pts)
        if kind == "contamination":
            return Contamination(
                MassFunction(space, _require(obj, "base", where)),
                _require(obj, "epsilon", where),
            )
        if kind == "belief":
            focal = [
                (
                    Event(space, _require(f, "members", f"{where}.focal[{j}]")),
                    _require(f, "mass", f"{where}.focal[{j}]"),
                )
                for j, f in enumerate(_require(obj, "focal", where))
            ]
            return BeliefFunction(space, focal)
        if kind == "prob_interval":
            return ProbInterval(
                space,
                _require(obj, "lower", where),
                _require(obj, "upper", where),
            )
    except (CredalValidationError, ScenarioError):
        raise
    except (ValueError, KeyError) as exc:
        raise ScenarioError("schema-error", f"{where}: {exc}") from exc
    raise ScenarioError("schema-error", f"{where}: unknown model type {kind!r}")


def operator_from_json(
    space: StateSpace, obj: dict, where: str
) -> UpperTransitionOperator:
    if not isinstance(obj, dict):
        raise ScenarioError("schema-error", f"{where}: operator must be an object")
    kind = _require(obj, "type", where)
    try:
        if kind == "rows":
            rows = [
                model_from_json(space, r, f"{where}.rows[{i}]")
                for i, r in enumerate(_require(obj, "rows", where))
            ]
            return UpperTransitionOperator(space, rows)
        if kind == "matrix":
            return UpperTransitionOperator.from_matrix(
                space, _require(obj, "matrix", where)
            )
        if kind == "contamination":
            return UpperTransitionOperator.contamination_of(
                space, _require(obj, "matrix", where), _require(obj, "epsilon", where)
            )
        if kind == "interval":
            return UpperTransitionOperator.from_interval_matrices(
                space, _require(obj, "lower", where), _require(obj, "upper", where)
            )
    except (CredalValidationError, ScenarioError):
        raise
    except ValueError as exc:
        raise ScenarioError("schema-error", f"{where}: {exc}") from exc
    raise ScenarioError("schema-error", f"{where}: unknown operator type {kind!r}")


def scenario_from_json(doc: dict) -> Scenario:
    if not isinstance(doc, dict):
        raise ScenarioError("schema-error", "top level must be an object")
    try:
        space = StateSpace(_require(doc, "states", "scenario"))
    except ValueError as exc:
        raise ScenarioError("schema-error", f"states: {exc}") from exc
    initial = model_from_json(space, _require(doc, "initial", "scenario"), "initial")
    horizon = _require(doc, "horizon", "scenario")
    if not isinstance(horizon, int) or horizon < 1:
        raise ScenarioError("schema-error", "horizon must be a positive integer")
    trans_doc = _require(doc, "transition", "scenario")
    if isinstance(trans_doc, list):
        ops = tuple(
            operator_from_json(space, t, f"transition[{i}]")
            for i, t in enumerate(trans_doc)
        )
        if len(ops) != horizon - 1:
            raise ScenarioError(
                "schema-error",
                f"transition list needs {horizon - 1} operators, got {len(ops)}",
            )
        transitions: "UpperTransitionOperator | tuple" = ops
    else:
        transitions = operator_from_json(space, trans_doc, "transition")
    queries = tuple(doc.get("queries", []))
    return Scenario(space, initial, transitions, horizon, queries)


def load_scenario(path: str) -> Scenario:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ScenarioError("io-error", str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError("parse-error", f"{path}: {exc}") from exc
    return scenario_from_json(doc)


def bundled_scenario_path(name: str):
    """Filesystem path of a scenario shipped with the package."""
    return resources.files("credalmc").joinpath("scenarios", f"{name}.json")


def load_bundled(name: str) -> Scenario:
    path = bundled_scenario_path(name)
    return scenario_from_json(json.loads(path.read_text()))


# ----------------------------------------------------------------------
# Serialization (round-trips through scenario_from_json)


def model_to_json(model: CredalModel) -> dict:
    if isinstance(model, Linear):
        return {"type": "linear", "mass": list(model.mass.weights)}
    if isinstance(model, Vacuous):
        return {"type": "vacuous"}
    if isinstance(model, VertexSet):
        return {"type": "vertices", "points": [list(p.weights) for p in model.points]}
    if isinstance(model, Contamination):
        return {
            "type": "contamination",
            "base": list(model.base.weights),
            "epsilon": model.epsilon,
        }
    if isinstance(model, BeliefFunction):
        return {
            "type": "belief",
            "focal": [
                {"members": sorted(ev.members), "mass": w}
                for ev, w in model.focal
            ],
        }
    if isinstance(model, ProbInterval):
        return {
            "type": "prob_interval",
            "lower": list(model.lower_mass),
            "upper": list(model.upper_mass),
        }
    raise TypeError(f"cannot serialize {type(model).__name__}")


def operator_to_json(op: UpperTransitionOperator) -> dict:
    return {"type": "rows", "rows": [model_to_json(r) for r in op.rows]}


def scenario_to_json(sc: Scenario) -> dict:
    if isinstance(sc.transitions, UpperTransitionOperator):
        trans = operator_to_json(sc.transitions)
    else:
        trans = [operator_to_json(op) for op in sc.transitions]
    return {
        "states": list(sc.space.labels),
        "initial": model_to_json(sc.initial),
        "transition": trans,
        "horizon": sc.horizon,
        "queries": list(sc.queries),
    }


# ----------------------------------------------------------------------
# Commands


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def _emit(header: list[str], rows: list[list], out) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])


def _single_operator(sc: Scenario) -> UpperTransitionOperator:
    if isinstance(sc.transitions, UpperTransitionOperator):
        return sc.transitions
    raise ScenarioError(
        "schema-error", "this command needs a stationary (single) transition"
    )


def parse_gamble(space: StateSpace, text: str) -> Gamble:
    """Parse `label:value` pairs; unspecified labels default to 0."""
    vals = np.zeros(len(space))
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        label, _, num = part.partition(":")
        try:
            vals[space.index(label.strip())] = float(num)
        except (KeyError, ValueError) as exc:
            raise ScenarioError("schema-error", f"bad gamble entry {part!r}") from exc
    return Gamble(space, vals)


def cmd_evolve(sc: Scenario, args) -> tuple[list[str], list[list]]:
    if not args.event:
        raise ScenarioError("schema-error", "evolve needs --event")
    chain = sc.to_chain()
    ind = sc.space.indicator([s.strip() for s in args.event.split(",")])
    rows = []
    for n in range(1, sc.horizon + 1):
        rows.append(
            [n, chain.marginal_lower(n, ind), chain.marginal_upper(n, ind)]
        )
    return ["n", "lower", "upper"], rows


def cmd_limit(sc: Scenario, args) -> tuple[list[str], list[list]]:
    if not args.gamble:
        raise ScenarioError("schema-error", "limit needs --gamble")
    op = _single_operator(sc)
    h = parse_gamble(sc.space, args.gamble)
    report = limit_upper(op, h, tol=args.tol, max_iter=args.max_iter)
    return (
        ["value", "iterations", "residual"],
        [[report.value, report.iterations, report.residual]],
    )


def cmd_regularity(sc: Scenario, args) -> tuple[list[str], list[list]]:
    op = _single_operator(sc)
    n = op.is_regular(args.n_max)
    if n is None:
        n_max = args.n_max if args.n_max is not None else op.default_n_max()
        return ["verdict", "n"], [["not_found", n_max]]
    return ["verdict", "n"], [["found", n]]


def cmd_joint(sc: Scenario, args) -> tuple[list[str], list[list]]:
    chain = sc.to_chain()
    length = args.length or sc.horizon
    rows = []
    for path in itertools.product(sc.space.labels, repeat=length):
        lo, up = chain.path_mass_bounds(path)
        rows.append([">".join(path), lo, up])
    return ["path", "lower", "upper"], rows


def cmd_credal_approx(sc: Scenario, args) -> tuple[list[str], list[list]]:
    chain = sc.to_chain()
    rows = []
    for n in range(1, sc.horizon + 1):
        for x in sc.space:
            ind = sc.space.indicator([x])
            rows.append(
                [n, x, chain.marginal_lower(n, ind), chain.marginal_upper(n, ind)]
            )
    return ["n", "state", "lower", "upper"], rows


def cmd_verify(sc: Scenario, args) -> tuple[list[str], list[list]]:
    chain = sc.to_chain()
    rows = []
    for path in itertools.product(sc.space.labels, repeat=sc.horizon):
        f = PathGamble.path_indicator(sc.space, sc.horizon, path)
        e_lo, e_up = chain.joint_lower(f), chain.joint_upper(f)
        o_lo, o_up = oracle.envelope(chain, f)
        gap = max(abs(e_lo - o_lo), abs(e_up - o_up))
        rows.append([">".join(path), e_lo, e_up, o_lo, o_up, gap])
    rng = np.random.default_rng(args.seed)
    s = len(sc.space)
    for j in range(3):
        f = PathGamble(
            sc.space,
            sc.horizon,
            rng.uniform(-1.0, 1.0, size=(s,) * sc.horizon),
        )
        e_lo, e_up = chain.joint_lower(f), chain.joint_upper(f)
        o_lo, o_up = oracle.envelope(chain, f)
        gap = max(abs(e_lo - o_lo), abs(e_up - o_up))
        rows.append([f"random[{j}]", e_lo, e_up, o_lo, o_up, gap])
    return (
        ["query", "engine_lower", "engine_upper", "oracle_lower", "oracle_upper", "gap"],
        rows,
    )


COMMANDS = {
    "evolve": cmd_evolve,
    "limit": cmd_limit,
    "regularity": cmd_regularity,
    "joint": cmd_joint,
    "credal-approx": cmd_credal_approx,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="credal-mc",
        description="Tight expectation bounds for imprecise Markov chains",
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("scenario", help="path to a scenario JSON file")
    parser.add_argument("--event", help="comma-separated state labels")
    parser.add_argument("--gamble", help="label:value pairs, e.g. a:1,b:0")
    parser.add_argument("--length", type=int, help="path length for `joint`")
    parser.add_argument("--tol", type=float, default=1e-10)
    parser.add_argument("--max-iter", type=int, default=10**6)
    parser.add_argument("--n-max", type=int, default=None)
    parser.add_argument("--seed", type=int, default=0)
    return parser


def run(command: str, sc: Scenario, args, out=None) -> None:
    header, rows = COMMANDS[command](sc, args)
    _emit(header, rows, out if out is not None else sys.stdout)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        sc = load_scenario(args.scenario)
        run(args.command, sc, args)
    except (ScenarioError, CredalValidationError) as exc:
        code = getattr(exc, "code", "invalid")
        print(f"error:{code}: {exc}", file=sys.stderr)
        return 2
    except (ConvergenceError, NotRegularError, oracle.SizeGuardError) as exc:
        name = type(exc).__name__
        print(f"error:{name}: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
