"""Command-line front end.

    qkpr simulate          payoffs for one configuration
    qkpr sweep-p           payoffs over a decoherence grid
    qkpr sweep-angles      payoffs over a (theta, phi) grid of initial states
    qkpr nash-check        best-response search against the configured moves
    qkpr validate-channels completeness of the Kraus sets

Exit status: 0 success, 2 bad arguments, 3 a channel failed validation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import engine
from .channels import (
    FAMILIES,
    ChannelCompletenessError,
    ChannelKind,
    completeness_deviation,
    lift_to_three,
    single_qutrit_kraus,
)
from .engine import GameConfig
from .expr import ExprError, evaluate
from .payoff import PLAYERS
from .states import STATE_PRESETS, InitialState
from .strategies import IDENTITY_PARAMS, U_OPT_PRESETS, StrategyParams, StrategyTriple, u_opt

EXIT_OK, EXIT_USAGE, EXIT_CHANNEL = 0, 2, 3

SWEEP_P_FIELDS = ["p", "channel", "noise_stage", "payoff_alice", "payoff_bob", "payoff_charlie"]
SWEEP_ANGLE_FIELDS = ["theta", "phi", "p", "channel", "payoff_alice", "payoff_bob", "payoff_charlie"]
NASH_FIELDS = [
    "channel",
    "p",
    "noise_stage",
    "player",
    "baseline",
    "best",
    "improvement",
    "nash_holds",
    "grid_evaluations",
    "refine_evaluations",
]
VALIDATE_FIELDS = ["channel", "p", "n_kraus", "single_deviation", "lifted_deviation", "complete"]


class UsageError(Exception):
    pass


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (float, np.floating)):
        return format(float(x), "#.12g")
    return str(x)


def _angle(text: str) -> float:
    try:
        return evaluate(text)
    except ExprError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _common_parser() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    g = parent.add_argument_group("game")
    g.add_argument("--state", choices=["ghz", "mixed", "angles", "preset"], default="ghz")
    g.add_argument("--f", type=float, help="mixing fraction for --state mixed")
    g.add_argument("--theta", type=_angle, help="initial-state theta (expression)")
    g.add_argument("--phi", type=_angle, help="initial-state phi (expression)")
    g.add_argument("--preset", choices=sorted(STATE_PRESETS), default="maximal")
    g.add_argument("--moves", choices=["opt", "identity", "custom"], default="opt")
    g.add_argument("--u-opt", choices=sorted(U_OPT_PRESETS), default="corrected",
                   help="which optimal-strategy angle set 'opt' refers to")
    for name in PLAYERS:
        g.add_argument(f"--{name}", metavar="ANGLES",
                       help=f"{name}'s eight comma-separated angles for --moves custom")
    g.add_argument("--channel", choices=list(FAMILIES) + ["all"], default="all")
    g.add_argument("--pf-variant", choices=["standard", "as-printed"], default="standard")
    g.add_argument("--tpf-variant", choices=["renormalized", "as-printed"], default="renormalized")
    g.add_argument("--p", type=float, default=0.0)
    g.add_argument("--noise-stage", choices=["pre", "post"], default="pre")
    o = parent.add_argument_group("output")
    o.add_argument("--out", help="output file (default stdout)")
    o.add_argument("--format", choices=["csv", "json"], default="csv")
    o.add_argument("--config", help="JSON file of flag values; explicit flags win")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parent = _common_parser()
    parser = argparse.ArgumentParser(prog="qkpr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("simulate", parents=[parent], help="payoffs for one configuration")
    sp = sub.add_parser("sweep-p", parents=[parent], help="sweep the decoherence parameter")
    sp.add_argument("--grid", type=int, default=101)
    sa = sub.add_parser("sweep-angles", parents=[parent], help="sweep initial-state angles")
    sa.add_argument("--theta-grid", type=int, default=50)
    sa.add_argument("--phi-grid", type=int, default=50)
    nc = sub.add_parser("nash-check", parents=[parent], help="best-response search")
    nc.add_argument("--player", choices=list(PLAYERS) + ["all"], default="all")
    nc.add_argument("--budget", type=int, default=50_000)
    nc.add_argument("--tol", type=float, default=1e-3, help="largest improvement still counted as Nash")
    vc = sub.add_parser("validate-channels", parents=[parent], help="check Kraus completeness")
    vc.add_argument("--tol", type=float, default=1e-10)
    return parser


# ---------------------------------------------------------------------------
# config file handling
# ---------------------------------------------------------------------------


def _config_tokens(path: str) -> list[str]:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("config file must hold a JSON object")
    tokens = []
    for key, val in data.items():
        flag = "--" + key.replace("_", "-")
        if flag == "--config":
            raise UsageError("config files cannot nest --config")
        tokens.append(f"{flag}={val}")
    return tokens


def parse_args(argv: list[str]) -> argparse.Namespace:
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config and argv and not argv[0].startswith("-"):
        # config values go first so explicit flags override them
        argv = [argv[0]] + _config_tokens(known.config) + list(argv[1:])
    return parser.parse_args(argv)


# ---------------------------------------------------------------------------
# building domain objects from arguments
# ---------------------------------------------------------------------------


def _initial(args) -> InitialState:
    if args.state == "mixed":
        if args.f is None:
            raise UsageError("--state mixed needs --f")
        return InitialState.mixed(args.f)
    if args.state == "angles":
        if args.theta is None or args.phi is None:
            raise UsageError("--state angles needs --theta and --phi")
        return InitialState.angles(args.theta, args.phi)
    if args.state == "preset":
        return InitialState.from_preset(args.preset)
    return InitialState.ghz()


def _parse_angles(text: str, who: str) -> StrategyParams:
    parts = text.split(",")
    if len(parts) != 8:
        raise UsageError(f"--{who} needs eight comma-separated angles, got {len(parts)}")
    try:
        return StrategyParams(*(evaluate(s) for s in parts))
    except ExprError as exc:
        raise UsageError(f"--{who}: {exc}") from None


def _moves(args) -> StrategyTriple:
    opt = u_opt(args.u_opt)
    if args.moves == "opt":
        return StrategyTriple.all(opt)
    if args.moves == "identity":
        return StrategyTriple.all(IDENTITY_PARAMS)
    picked = []
    for name in PLAYERS:
        text = getattr(args, name)
        picked.append(opt if text is None else _parse_angles(text, name))
    return StrategyTriple(*picked)


def _kinds(args) -> list[ChannelKind]:
    families = FAMILIES if args.channel == "all" else (args.channel,)
    out = []
    for fam in families:
        variant = {"pf": args.pf_variant, "tpf": args.tpf_variant}.get(fam)
        out.append(ChannelKind(fam, variant))
    return out


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_simulate(args):
    initial, moves = _initial(args), _moves(args)
    rows = []
    for kind in _kinds(args):
        pay = engine.play(GameConfig(initial, moves, kind, args.p, args.noise_stage))
        rows.append(dict(zip(SWEEP_P_FIELDS, [args.p, kind.label, engine.normalize_stage(args.noise_stage), *pay])))
    return SWEEP_P_FIELDS, rows, EXIT_OK


def _cmd_sweep_p(args):
    res = engine.sweep_decoherence(_initial(args), _moves(args), _kinds(args), args.grid, args.noise_stage)
    return SWEEP_P_FIELDS, res.rows(), EXIT_OK


def _cmd_sweep_angles(args):
    moves = _moves(args)
    kinds = _kinds(args)
    rows = []
    grids = engine.angle_grids(args.theta_grid, args.phi_grid)
    results = [engine.sweep_state_angles(*grids, moves, k, args.p, args.noise_stage) for k in kinds]
    # keep ascending (theta, phi) order with channels innermost
    per_channel = [r.rows() for r in results]
    for i in range(len(per_channel[0])):
        rows.extend(rc[i] for rc in per_channel)
    return SWEEP_ANGLE_FIELDS, rows, EXIT_OK


def _cmd_nash(args):
    initial, moves = _initial(args), _moves(args)
    players = PLAYERS if args.player == "all" else (args.player,)
    rows = []
    for kind in _kinds(args):
        cfg = GameConfig(initial, moves, kind, args.p, args.noise_stage)
        for rep in engine.nash_check(cfg, players, budget=args.budget):
            rows.append(
                {
                    "channel": kind.label,
                    "p": args.p,
                    "noise_stage": cfg.noise_stage,
                    "player": rep.player,
                    "baseline": rep.baseline,
                    "best": rep.best,
                    "improvement": rep.improvement,
                    "nash_holds": rep.improvement <= args.tol,
                    "grid_evaluations": rep.grid_evaluations,
                    "refine_evaluations": rep.refine_evaluations,
                }
            )
    return NASH_FIELDS, rows, EXIT_OK


def _cmd_validate(args):
    rows, status = [], EXIT_OK
    for kind in _kinds(args):
        single = single_qutrit_kraus(kind, args.p, check=False)
        dev1 = completeness_deviation(single)
        dev3 = completeness_deviation(lift_to_three(single))
        ok = dev1 <= args.tol and dev3 <= args.tol
        rows.append(dict(zip(VALIDATE_FIELDS, [kind.label, args.p, len(single), dev1, dev3, ok])))
        if not ok:
            status = EXIT_CHANNEL
            try:
                single_qutrit_kraus(kind, args.p)
            except ChannelCompletenessError as exc:
                print(f"error: {exc}", file=sys.stderr)
            else:
                print(f"error: {kind.label} at p={args.p} exceeds tolerance {args.tol}", file=sys.stderr)
    return VALIDATE_FIELDS, rows, status


COMMANDS = {
    "simulate": _cmd_simulate,
    "sweep-p": _cmd_sweep_p,
    "sweep-angles": _cmd_sweep_angles,
    "nash-check": _cmd_nash,
    "validate-channels": _cmd_validate,
}


def render(fields, rows, fmt_name: str) -> str:
    if fmt_name == "json":
        clean = [{k: (v.item() if isinstance(v, np.generic) else v) for k, v in r.items()} for r in rows]
        return json.dumps(clean, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for r in rows:
        w.writerow([fmt(r[f]) for f in fields])
    return buf.getvalue()


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
    except UsageError as exc:
        print(f"qkpr: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        fields, rows, status = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"qkpr {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ChannelCompletenessError as exc:
        print(f"qkpr {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_CHANNEL
    except ValueError as exc:
        print(f"qkpr {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render(fields, rows, args.format)
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            print(f"qkpr: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.write(text)
    return status


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
