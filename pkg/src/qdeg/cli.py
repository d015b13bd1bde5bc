"""Command-line interface.

Exit codes: 0 success, 2 invalid input, 3 solver failure (or a bound check
that fails after solving).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from .capacity import capacity_bounds, channel_coherent_information, u_xi
from .errors import QdegError, SolverError
from .sdp.programs import diamond_norm_distance, epsilon_antidegradable, epsilon_degradable
from .serialize import encode_matrix, load_channel
from .sweep import SweepConfig, emit_csv, sweep_bb84, sweep_depolarizing
from .zoo import FAMILIES

EXIT_OK, EXIT_INPUT, EXIT_SOLVER = 0, 2, 3

log = logging.getLogger("qdeg")


class UsageError(Exception):
    pass


def _tol(text: str) -> float:
    v = float(text)
    if not 0 < v <= 1e-2:
        raise argparse.ArgumentTypeError("tol must lie in (0, 1e-2]")
    return v


def _add_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--channel", help="channel JSON file")
    p.add_argument("--family", choices=sorted(FAMILIES))
    p.add_argument("--p", type=float)
    p.add_argument("--p-x", type=float, dest="p_x")
    p.add_argument("--p-z", type=float, dest="p_z")
    p.add_argument("--gamma", type=float)
    p.add_argument("--dim-a", type=int, dest="dim_A", default=2)
    p.add_argument("--dim-b", type=int, dest="dim_B")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=_tol, default=1e-8)


def _channel(args):
    if (args.channel is None) == (args.family is None):
        raise UsageError("give exactly one of --channel or --family")
    if args.channel is not None:
        try:
            return load_channel(args.channel)
        except FileNotFoundError:
            raise UsageError(f"channel file not found: {args.channel}")
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read channel file {args.channel}: {exc}")
    fam = args.family
    needs = {
        "depolarizing": {"p": args.p},
        "erasure": {"p": args.p},
        "bb84": {"p_x": args.p_x, "p_z": args.p_z},
        "amplitude_damping": {"gamma": args.gamma},
        "random_unitary_complement": {"dim_A": args.dim_A, "dim_B": args.dim_B, "seed": args.seed},
        "identity": {"dim": args.dim_A},
        "completely_depolarizing": {"dim": args.dim_A},
    }[fam]
    missing = [k for k, v in needs.items() if v is None]
    if missing:
        raise UsageError(f"family {fam} needs --{missing[0].replace('_', '-')}")
    return FAMILIES[fam](**needs)


def _print(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def cmd_epsilon(args) -> int:
    ch = _channel(args)
    fn = epsilon_antidegradable if args.anti else epsilon_degradable
    _print(fn(ch, args.tol).to_dict())
    return EXIT_OK


def cmd_diamond(args) -> int:
    try:
        a, b = load_channel(args.a), load_channel(args.b)
    except FileNotFoundError as exc:
        raise UsageError(f"channel file not found: {exc.filename}")
    _print({"diamond_distance": diamond_norm_distance(a, b, args.tol)})
    return EXIT_OK


def cmd_q1(args) -> int:
    ch = _channel(args)
    val, rho = channel_coherent_information(ch, starts=args.starts, seed=args.seed)
    _print({"q1": val, "argmax": encode_matrix(rho)})
    return EXIT_OK


def cmd_bounds(args) -> int:
    ch = _channel(args)
    rep = epsilon_degradable(ch, args.tol)
    q1, _ = channel_coherent_information(ch, starts=args.starts, seed=args.seed)
    uxi = u_xi(ch, rep.degrading_map)
    anti = epsilon_antidegradable(ch, args.tol) if args.anti else None
    bounds = capacity_bounds(ch, rep, q1, uxi, anti_report=anti)
    # a failed dominance check means a broken solve or formula
    bad = {k: v for k, v in bounds.upper_bounds().items()
           if k != "anti_upper" and v < q1 - 1e-9}
    if bad:
        print(f"error: upper bounds below q1={q1:.9g}: {bad}", file=sys.stderr)
        return EXIT_SOLVER
    out = bounds.to_dict()
    out["epsilon_report"] = {k: v for k, v in rep.to_dict().items() if k != "degrading_choi"}
    _print(out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.steps < 1:
        raise UsageError("--steps must be positive")
    grid = np.linspace(args.start, args.stop, args.steps)
    cfg = SweepConfig(tol=args.tol, workers=args.workers, with_u_xi=args.u_xi)
    if args.family == "depolarizing":
        table = sweep_depolarizing(grid, cfg)
    else:
        table = sweep_bb84(grid, args.ratio, cfg)
    emit_csv(table, args.out)
    if table.flagged:
        print("warning: some rows failed; see the status column", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qdeg", description="Approximate degradability and capacity bounds.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("epsilon", help="degradability parameter of a channel")
    _add_source(p)
    p.add_argument("--anti", action="store_true", help="anti-degradability instead")
    p.set_defaults(func=cmd_epsilon)

    p = sub.add_parser("diamond", help="diamond distance between two channel files")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--tol", type=_tol, default=1e-8)
    p.set_defaults(func=cmd_diamond)

    p = sub.add_parser("q1", help="channel coherent information")
    _add_source(p)
    p.add_argument("--starts", type=int, default=20)
    p.set_defaults(func=cmd_q1)

    p = sub.add_parser("bounds", help="capacity upper bounds")
    _add_source(p)
    p.add_argument("--starts", type=int, default=20)
    p.add_argument("--anti", action="store_true", help="also evaluate the anti-degradability bound")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("sweep", help="parameter sweep to CSV")
    p.add_argument("--family", choices=["depolarizing", "bb84"], required=True)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--ratio", type=float, default=1.0)
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--u-xi", action="store_true", dest="u_xi")
    p.add_argument("--tol", type=_tol, default=1e-8)
    p.set_defaults(func=cmd_sweep)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (QdegError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
