"""Command-line front end.

Every computation in the package is reachable as a subcommand with plain
flags; ``--config FILE`` loads the same fields from a JSON document
(flags given on the command line win).  Exit codes: 0 success, 2 invalid
input, 3 numerical failure.  Randomized sweeps use a fixed seed, so
identical invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import papersuite, pde
from .critical import (BracketDegenerate, BracketExhausted,
                       ShootUndetermined, cbar, kstar)
from .explicit import (list_cases, residual_trajectory, residual_wave,
                       shoot_deviation, sign_check, CaseKind)
from .model import InvalidParams, p2_eigen, validate_params
from .phaseplane import (IntegrationFailure, IntegrityViolation,
                         reconstruct_profile, shoot)
from .selfmap import (NotCZero, OriginUndefined, TargetOutOfRange,
                      kstar_invariance, map_params)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERICAL = 3

_VALIDATION_ERRORS = (InvalidParams, TargetOutOfRange, OriginUndefined,
                      NotCZero, pde.InvalidTailParams, pde.CFLViolated,
                      pde.WrongVelocitySide, ValueError)
_NUMERICAL_ERRORS = (BracketDegenerate, BracketExhausted,
                     ShootUndetermined, IntegrationFailure,
                     IntegrityViolation, pde.RangeViolated,
                     pde.MonotonicityViolated, pde.DomainTooSmall,
                     pde.NoCrossing, pde.TooFewSamples,
                     pde.InitialOrderViolated, ArithmeticError)


def _add_params(sp, with_k=True):
    sp.add_argument("--n", type=float, required=False)
    sp.add_argument("--p", type=float, required=False)
    sp.add_argument("--q", type=float, required=False)
    if with_k:
        sp.add_argument("--k", type=float, required=False)


def _params_from(args, with_k=True):
    missing = [f for f in (("n", "p", "q") + (("k",) if with_k else ()))
               if getattr(args, f, None) is None]
    if missing:
        raise InvalidParams(f"missing required flags: "
                            f"{', '.join('--' + m for m in missing)}")
    if with_k:
        return validate_params(args.n, args.p, args.q, args.k)
    return (args.n, args.p, args.q)


def cmd_eigen(args) -> int:
    params = _params_from(args)
    e = p2_eigen(params, args.c)
    print(json.dumps({
        "lambda_plus": e.lambda_plus, "lambda_minus": e.lambda_minus,
        "e_plus": list(e.e_plus), "e_minus": list(e.e_minus),
        "discriminant": e.discriminant, "imag_abs": e.imag_abs,
        "p2_class": e.p2_class.value,
    }))
    return EXIT_OK


def cmd_classify(args) -> int:
    params = _params_from(args)
    traj = shoot(params, args.c)
    print(json.dumps({
        "connection": traj.connection.value,
        "x0_crossing": traj.x0_crossing,
        "approach_slope": traj.approach_slope,
        "degenerate_node": traj.degenerate_node,
    }))
    return EXIT_OK


def cmd_cbar(args) -> int:
    result = cbar(_params_from(args), args.tol)
    print(result.to_json())
    return EXIT_OK


def cmd_kstar(args) -> int:
    n, p, q = _params_from(args, with_k=False)
    print(kstar(n, p, q, args.tol).to_json())
    return EXIT_OK


def cmd_profile(args) -> int:
    params = _params_from(args)
    traj = shoot(params, args.c)
    table = reconstruct_profile(traj, params, args.c)
    table.to_csv(args.out)
    print(f"wrote {len(table.xi)} profile rows to {args.out}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    params = _params_from(args)
    kind = {"heaviside": pde.ICKind.HEAVISIDE,
            "anti-heaviside": pde.ICKind.ANTI_HEAVISIDE,
            "tail-general": pde.ICKind.TAIL_GENERAL}[args.ic]
    tail = None
    if kind is pde.ICKind.TAIL_GENERAL:
        if args.cbar is None:
            raise InvalidParams("tail-general needs --cbar")
        tail = pde.TailParams(cbar=args.cbar)
    opts = pde.SimOptions(L=args.L, dx=args.dx, tail_params=tail)
    sim = pde.simulate(params, kind, args.T, opts)
    if args.snapshots:
        sim.snapshots_to_csv(args.snapshots)
    if args.trace:
        sim.trace.to_csv(args.trace)
    print(sim.summary_json())
    return EXIT_OK


def cmd_verify_explicit(args) -> int:
    rows = []
    for case in list_cases():
        if args.case and case.id != args.case:
            continue
        is_traj = case.kind is CaseKind.TRAJECTORY
        rows.append({
            "id": case.id,
            "residual": residual_trajectory(case) if is_traj else "",
            "wave_residual": residual_wave(case)
            if is_traj and case.wave is not None else "",
            "shoot_deviation": shoot_deviation(case) if is_traj else "",
            "sign_ok": "" if is_traj else sign_check(case),
        })
    if args.case and not rows:
        raise InvalidParams(f"unknown case id {args.case!r}")
    header = ["id", "residual", "wave_residual", "shoot_deviation",
              "sign_ok"]
    out = sys.stdout if args.out is None else open(args.out, "w")
    try:
        out.write(",".join(header) + "\n")
        for r in rows:
            out.write(",".join(
                f"{r[h]:.17g}" if isinstance(r[h], float) else str(r[h])
                for h in header) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_selfmap(args) -> int:
    source = _params_from(args)
    pair = map_params(source, args.n2)
    doc = {
        "source": {"n": source.n, "p": source.p, "q": source.q,
                   "k": source.k},
        "target": {"n": pair.target.n, "p": pair.target.p,
                   "q": pair.target.q, "k": pair.target.k},
    }
    if args.check_kstar:
        doc["kstar_invariance"] = kstar_invariance(
            (source.n, source.p, source.q), args.n2)
    print(json.dumps(doc))
    return EXIT_OK


def cmd_paper_suite(args) -> int:
    numbers = ([int(s) for s in args.only.split(",")]
               if args.only else None)
    results = papersuite.run_all(numbers)
    print(papersuite.report(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_NUMERICAL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="frontlab",
        description="Phase-plane and direct-simulation laboratory for "
                    "convective reaction-diffusion fronts.")
    ap.add_argument("--config", help="JSON file with default flag values")
    sub = ap.add_subparsers(dest="command")

    sp = sub.add_parser("eigen", help="eigen-data of the state-1 "
                                      "equilibrium at velocity c")
    _add_params(sp)
    sp.add_argument("--c", type=float, required=True)
    sp.set_defaults(fn=cmd_eigen)

    sp = sub.add_parser("classify", help="shoot from the origin and "
                                         "classify the connection")
    _add_params(sp)
    sp.add_argument("--c", type=float, required=True)
    sp.set_defaults(fn=cmd_classify)

    sp = sub.add_parser("cbar", help="critical velocity by bisection")
    _add_params(sp)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.set_defaults(fn=cmd_cbar)

    sp = sub.add_parser("kstar", help="threshold coefficient by bisection")
    _add_params(sp, with_k=False)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.set_defaults(fn=cmd_kstar)

    sp = sub.add_parser("profile", help="tabulate a wave profile as CSV")
    _add_params(sp)
    sp.add_argument("--c", type=float, required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(fn=cmd_profile)

    sp = sub.add_parser("simulate", help="direct PDE simulation")
    _add_params(sp)
    sp.add_argument("--ic", choices=["heaviside", "anti-heaviside",
                                     "tail-general"], default="heaviside")
    sp.add_argument("--T", type=float, default=30.0)
    sp.add_argument("--L", type=float, default=None)
    sp.add_argument("--dx", type=float, default=0.05)
    sp.add_argument("--cbar", type=float, default=None,
                    help="asymptotic velocity for tail-general data")
    sp.add_argument("--snapshots", help="CSV path for t,x,u snapshots")
    sp.add_argument("--trace", help="CSV path for the t,x_front trace")
    sp.set_defaults(fn=cmd_simulate)

    sp = sub.add_parser("verify-explicit",
                        help="residual/sign table for the catalogue")
    sp.add_argument("--case", help="restrict to one case id")
    sp.add_argument("--out", help="CSV path (default: stdout)")
    sp.set_defaults(fn=cmd_verify_explicit)

    sp = sub.add_parser("selfmap", help="map parameters and optionally "
                                        "check the k* invariant")
    _add_params(sp)
    sp.add_argument("--n2", type=float, required=True)
    sp.add_argument("--check-kstar", action="store_true")
    sp.set_defaults(fn=cmd_selfmap)

    sp = sub.add_parser("paper-suite",
                        help="run the ten-point acceptance matrix")
    sp.add_argument("--only", help="comma-separated criterion numbers")
    sp.set_defaults(fn=cmd_paper_suite)

    ap.add_argument("--paper-suite", action="store_true",
                    help="shorthand for the paper-suite subcommand")
    return ap


def _apply_config(args, parser):
    if not args.config:
        return
    with open(args.config) as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise InvalidParams("--config must contain a JSON object")
    for key, value in doc.items():
        attr = key.replace("-", "_")
        if hasattr(args, attr) and getattr(args, attr) is None:
            setattr(args, attr, value)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "paper_suite", False) and args.command is None:
        args.only = None
        return cmd_paper_suite(args)
    if args.command is None:
        parser.print_help()
        return EXIT_INVALID
    try:
        _apply_config(args, parser)
        return args.fn(args)
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except _VALIDATION_ERRORS as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
