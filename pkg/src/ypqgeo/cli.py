"""Command-line interface: verification suites, geodesic integration,
Jacobian rank analysis, and the toric model, all emitting deterministic
machine-readable reports.

Exit codes form a stable contract: 0 when every check passes, 1 when a
check fails (the report is still well-formed), 2 on usage or configuration
errors.  Reports print to stdout; ``--json`` additionally writes the same
bytes to a file.  Identical configurations produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import dynamics, report, sampling, verification, ypq
from ._accel import USING_NUMBA
from .errors import OutOfChart, OutOfRange, YpqError

__all__ = ["RunConfig", "build_parser", "main",
           "cmd_verify", "cmd_integrate", "cmd_rank", "cmd_toric"]

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

_DOF = 5
_VERDICT_INTEGRABLE = f"completely integrable (rank {_DOF} = dof)"
_VERDICT_DEFICIENT = "rank deficiency detected"


@dataclass(frozen=True)
class RunConfig:
    """One resolved invocation: geometry, seeds, tolerances, output paths."""

    command: str
    p: int
    q: int
    seed: int = 42
    samples: int = 100
    tol: float = 1e-7
    rtol: float = 1e-10
    atol: float = 1e-12
    t_end: float = 50.0
    points: int = 20
    json_path: str | None = None
    csv_path: str | None = None
    init_path: str | None = None


class UsageError(Exception):
    """Configuration problem that maps to exit code 2."""


def _parameter_block(params) -> dict:
    return {"a": params.a, "ell": params.ell, "l": params.l,
            "y1": params.y1, "y2": params.y2, "y3": params.y3}


def cmd_verify(config: RunConfig) -> tuple[int, dict]:
    """Run all identity suites; exit 0 iff every residual beats the
    tolerance."""
    params = ypq.make_params(config.p, config.q)
    rows = verification.run_all(params, config.seed, config.samples,
                                config.tol)
    all_pass = all(row["pass"] for row in rows)
    doc = {
        "command": "verify",
        "p": config.p,
        "q": config.q,
        "seed": config.seed,
        "samples": config.samples,
        "tolerance": config.tol,
        "parameters": _parameter_block(params),
        "suites": rows,
        "all_pass": all_pass,
    }
    return (EXIT_PASS if all_pass else EXIT_FAIL), doc


def _load_initial_state(path: str) -> dynamics.PhaseState:
    try:
        with open(path, encoding="utf-8") as handle:
            raw = json.load(handle)
        return dynamics.PhaseState(np.asarray(raw["coords"], dtype=float),
                                   np.asarray(raw["momenta"], dtype=float))
    except (OSError, json.JSONDecodeError, KeyError, TypeError,
            ValueError) as exc:
        raise UsageError(f"cannot load initial state from {path!r}: {exc}")


def cmd_integrate(config: RunConfig) -> tuple[int, dict]:
    """Integrate one geodesic (random or from ``--init``) and summarize
    conservation drift; a chart exit is a diagnostic, not a failure."""
    params = ypq.make_params(config.p, config.q)
    if config.init_path is not None:
        state0 = _load_initial_state(config.init_path)
    else:
        state0 = sampling.random_phase_states(params, config.seed, 1)[0]
    try:
        traj = dynamics.integrate_geodesic(
            params, state0, t_end=config.t_end, rtol=config.rtol,
            atol=config.atol, n_samples=config.samples)
    except (OutOfChart, OutOfRange, ValueError) as exc:
        raise UsageError(f"invalid integration setup: {exc}")
    if config.csv_path is not None:
        report.write_trajectory_csv(traj, config.csv_path)
    drift = dict(zip(dynamics.INVARIANT_NAMES,
                     (float(v) for v in traj.max_drift)))
    exit_info = None
    if traj.status != "ok":
        exit_info = {"time": traj.t_final,
                     "state": [float(v) for v in traj.final_state]}
    doc = {
        "command": "integrate",
        "p": config.p,
        "q": config.q,
        "seed": config.seed,
        "samples": config.samples,
        "rtol": config.rtol,
        "atol": config.atol,
        "t_end": config.t_end,
        "init": config.init_path,
        "status": traj.status,
        "t_final": traj.t_final,
        "accepted_steps": traj.accepted_steps,
        "rejected_steps": traj.rejected_steps,
        "max_drift": drift,
        "exit": exit_info,
        "csv_path": config.csv_path,
    }
    code = EXIT_FAIL if traj.status == "step_failure" else EXIT_PASS
    return code, doc


def cmd_rank(config: RunConfig) -> tuple[int, dict]:
    """Rank of the invariant Jacobian at seeded random states; verdict
    claims integrability iff every generic state has full rank."""
    if config.points < 1:
        raise UsageError("--points must be a positive integer")
    params = ypq.make_params(config.p, config.q)
    states = sampling.random_phase_states(params, config.seed, config.points)
    results = dynamics.jacobian_rank(params, states)
    generic = [r for r in results if not r.degenerate]
    all_rank_five = (bool(generic)
                     and all(r.rank == _DOF for r in generic)
                     and all(r.rank <= _DOF for r in results))
    doc = {
        "command": "rank",
        "p": config.p,
        "q": config.q,
        "seed": config.seed,
        "points": config.points,
        "invariants": list(dynamics.INVARIANT_NAMES),
        "states": [r.to_dict() for r in results],
        "all_rank_five": all_rank_five,
        "verdict": _VERDICT_INTEGRABLE if all_rank_five
                   else _VERDICT_DEFICIENT,
    }
    return (EXIT_PASS if all_rank_five else EXIT_FAIL), doc


def cmd_toric(config: RunConfig) -> tuple[int, dict]:
    """Emit the toric model and its sampled duality residuals."""
    if config.points < 1:
        raise UsageError("--points must be a positive integer")
    params = ypq.make_params(config.p, config.q)
    rng = np.random.default_rng(config.seed)
    detail = verification.toric_diagnostics(params, rng, config.points)
    model = detail["model"]
    worst = max(detail["residuals"].values())
    passed = worst < config.tol
    doc = {
        "command": "toric",
        "p": config.p,
        "q": config.q,
        "seed": config.seed,
        "points": config.points,
        "tolerance": config.tol,
        "mode": model.mode,
        "normals": [[float(v) for v in row] for row in model.normals],
        "reeb": [float(v) for v in model.reeb],
        "residuals": detail["residuals"],
        "det_constant": detail["det_constant"],
        "pass": passed,
    }
    return (EXIT_PASS if passed else EXIT_FAIL), doc


_COMMANDS = {
    "verify": cmd_verify,
    "integrate": cmd_integrate,
    "rank": cmd_rank,
    "toric": cmd_toric,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ypq",
        description="Seeded numerical checks, geodesic integration, and "
                    "toric data for the Y^{p,q} family.")
    common = argparse.ArgumentParser(add_help=False)
    geo = common.add_argument_group("geometry")
    geo.add_argument("--p", type=int, help="first winding integer (p > q)")
    geo.add_argument("--q", type=int, help="second winding integer (q >= 1)")
    geo.add_argument("--pq-list", nargs="+", metavar="P,Q",
                     help="batch mode: run each comma-separated pair and "
                          "emit an array report (excludes --p/--q/--csv)")
    run = common.add_argument_group("run controls")
    run.add_argument("--seed", type=int, default=42,
                     help="RNG seed for all sampling (default 42)")
    run.add_argument("--samples", type=int, default=100,
                     help="sample budget: verify points / trajectory rows "
                          "(default 100)")
    run.add_argument("--tol", type=float, default=1e-7,
                     help="pass/fail tolerance for verify and toric "
                          "(default 1e-7)")
    run.add_argument("--rtol", type=float, default=1e-10,
                     help="integrator relative tolerance (default 1e-10)")
    run.add_argument("--atol", type=float, default=1e-12,
                     help="integrator absolute tolerance (default 1e-12)")
    run.add_argument("--t-end", type=float, default=50.0,
                     help="integration horizon (default 50)")
    run.add_argument("--points", type=int, default=20,
                     help="state/point count for rank and toric "
                          "(default 20)")
    out = common.add_argument_group("inputs and outputs")
    out.add_argument("--json", metavar="PATH", dest="json_path",
                     help="also write the stdout report to this file")
    out.add_argument("--csv", metavar="PATH", dest="csv_path",
                     help="write the integrate trajectory table here")
    out.add_argument("--init", metavar="PATH", dest="init_path",
                     help="JSON initial state {coords: [5], momenta: [5]} "
                          "for integrate (default: seeded random state)")
    sub = parser.add_subparsers(dest="command", required=True,
                                metavar="{verify,integrate,rank,toric}")
    sub.add_parser("verify", parents=[common],
                   help="run every identity suite and report residuals")
    sub.add_parser("integrate", parents=[common],
                   help="integrate a geodesic and report invariant drift")
    sub.add_parser("rank", parents=[common],
                   help="rank of the invariant Jacobian at random states")
    sub.add_parser("toric", parents=[common],
                   help="emit the toric model and duality residuals")
    return parser


def _apply_thread_cap() -> None:
    raw = os.environ.get("YPQ_THREADS")
    if raw is None:
        return
    try:
        cap = int(raw)
    except ValueError:
        raise UsageError(f"YPQ_THREADS must be an integer, got {raw!r}")
    if cap < 1:
        raise UsageError(f"YPQ_THREADS must be >= 1, got {cap}")
    if USING_NUMBA:
        import numba

        numba.set_num_threads(min(cap, numba.config.NUMBA_NUM_THREADS))


def _parse_pairs(args) -> list[tuple[int, int]]:
    if args.pq_list is not None:
        if args.p is not None or args.q is not None:
            raise UsageError("--pq-list excludes --p/--q")
        if args.csv_path is not None:
            raise UsageError("--csv is only available for single-pair runs")
        pairs = []
        for item in args.pq_list:
            head, sep, tail = item.partition(",")
            try:
                if not sep:
                    raise ValueError
                pairs.append((int(head), int(tail)))
            except ValueError:
                raise UsageError(
                    f"--pq-list entries must look like P,Q; got {item!r}")
        return pairs
    if args.p is None or args.q is None:
        raise UsageError("--p and --q are required (or use --pq-list)")
    return [(args.p, args.q)]


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_thread_cap()
        pairs = _parse_pairs(args)
        runner = _COMMANDS[args.command]
        code = EXIT_PASS
        docs = []
        for p, q in pairs:
            config = RunConfig(
                command=args.command, p=p, q=q, seed=args.seed,
                samples=args.samples, tol=args.tol, rtol=args.rtol,
                atol=args.atol, t_end=args.t_end, points=args.points,
                json_path=args.json_path, csv_path=args.csv_path,
                init_path=args.init_path)
            pair_code, doc = runner(config)
            code = max(code, pair_code)
            docs.append(doc)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except YpqError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    payload = docs if args.pq_list is not None else docs[0]
    text = report.dumps(payload)
    sys.stdout.write(text)
    if args.json_path is not None:
        with open(args.json_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
