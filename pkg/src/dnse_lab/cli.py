"""Command-line front end.

Subcommands: pattern, solve, sweep, map, portrait, random.  Every run
writes a `run.json` into its output directory echoing the fully resolved
options, so any result can be reproduced exactly.  Exit codes: 0 success,
2 input error, 3 no convergence, 4 singular Jacobian.

The only environment variable consulted is DNSE_LAB_OUTDIR (default
output directory); everything else is flags.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import io as lab_io
from .analysis import (
    ClassifyConfig,
    classify_portrait,
    phase_portrait,
    portrait_from_orbit,
)
from .errors import DnseError, NoConvergence, SingularJacobian
from .lattice import Boundary, LatticeState, ModelParams, normalize
from .mapdyn import MapState, iterate_map
from .newton import NewtonConfig, newton_solve, sweep_c
from .patterns import (
    build_asymptotic_state,
    count_pattern,
    parse_pattern,
    random_pattern,
    strong_coupling_energy,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NO_CONVERGENCE = 3
EXIT_SINGULAR = 4


def _default_outdir() -> str:
    return os.environ.get("DNSE_LAB_OUTDIR", ".")


def _ensure_outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_run_json(outdir: Path, command: str, args):
    resolved = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    lab_io.write_json(outdir / "run.json", {"command": command, "options": resolved})


def _newton_config(args) -> NewtonConfig:
    return NewtonConfig(tol_residual=args.tol, max_iter=args.max_iter)


def cmd_pattern(args) -> int:
    spec = parse_pattern(args.text, Boundary(args.bc))
    counts = count_pattern(spec)
    payload = counts.as_dict()
    payload["E_table"] = [[c, strong_coupling_energy(counts, c)] for c in args.c]
    if len(args.c) == 1:
        payload["E_infinity"] = payload["E_table"][0][1]
    print(json.dumps(payload, sort_keys=True))
    outdir = _ensure_outdir(args)
    lab_io.write_json(outdir / "pattern.json", payload)
    _write_run_json(outdir, "pattern", args)
    return EXIT_OK


def _build_initial(args):
    given = [args.pattern is not None, args.state_file is not None, args.random is not None]
    if sum(given) != 1:
        raise DnseError("exactly one of --pattern, --state-file, --random is required")
    if args.pattern is not None:
        spec = parse_pattern(args.pattern, Boundary(args.bc))
        return build_asymptotic_state(spec), None
    if args.state_file is not None:
        state, _meta = lab_io.read_state(args.state_file)
        return normalize(state), None
    spec = random_pattern(args.random, args.seed)
    return build_asymptotic_state(spec), args.seed


def cmd_solve(args) -> int:
    outdir = _ensure_outdir(args)
    initial, seed = _build_initial(args)
    params = ModelParams(args.c, initial.boundary)
    config = _newton_config(args)
    prefix = args.out_prefix

    def _write(state, energy, report, failed: bool | None):
        lab_io.write_state(outdir / f"{prefix}.state.csv", state, args.c, energy)
        payload = report.as_dict()
        if failed:
            payload["failed"] = failed
        lab_io.write_json(outdir / f"{prefix}.report.json", payload)
        if state.n_sites >= 2:
            portrait = phase_portrait(state)
            lab_io.write_portrait(outdir / f"{prefix}.portrait.csv", portrait)
            cls = classify_portrait(portrait, ClassifyConfig(distinct_tol=args.tol_distinct))
            lab_io.write_json(
                outdir / f"{prefix}.class.json", cls.as_dict(args.tol_distinct)
            )
        _write_run_json(outdir, "solve", args)

    try:
        state, energy, report = newton_solve(initial, params, config, seed=seed)
    except NoConvergence as exc:
        _write(exc.state, exc.energy, exc.report, failed="no_convergence")
        print("no convergence", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except SingularJacobian as exc:
        if exc.report is not None:
            _write(exc.state, exc.energy, exc.report, failed="singular_jacobian")
        print(f"singular Jacobian: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    _write(state, energy, report, failed=None)
    print(json.dumps({"E": energy, "iterations": report.iterations,
                      "converged": report.converged}, sort_keys=True))
    return EXIT_OK


def cmd_sweep(args) -> int:
    outdir = _ensure_outdir(args)
    spec = parse_pattern(args.pattern, Boundary(args.bc))
    initial = build_asymptotic_state(spec)
    params = ModelParams(args.c_from, initial.boundary)
    if args.c_step <= 0:
        raise DnseError("--c-step must be positive")
    c_values = []
    c = args.c_from
    while c <= args.c_to + 1e-12 * max(1.0, abs(args.c_to)):
        c_values.append(c)
        c += args.c_step
    records = sweep_c(initial, params, c_values, _newton_config(args))
    lines = ["c,E,converged,n,m,l,max_amp"]
    for rec in records:
        counts = rec.counts
        lines.append(",".join([
            lab_io.fmt(rec.c),
            lab_io.fmt(rec.energy) if rec.energy is not None else "",
            "1" if rec.converged else "0",
            str(counts.n) if counts else "",
            str(counts.m) if counts else "",
            str(counts.l) if counts else "",
            lab_io.fmt(rec.max_amplitude) if rec.max_amplitude is not None else "",
        ]))
    (outdir / "sweep.csv").write_text("\n".join(lines) + "\n")
    _write_run_json(outdir, "sweep", args)
    print(f"{sum(r.converged for r in records)}/{len(records)} points converged")
    return EXIT_OK


def cmd_map(args) -> int:
    outdir = _ensure_outdir(args)
    orbit = iterate_map(
        MapState(args.psi0, args.z0), args.E, args.c, args.steps,
        escape_bound=args.escape,
    )
    lab_io.write_orbit(outdir / "orbit.csv", orbit)
    portrait = portrait_from_orbit(orbit)
    lab_io.write_portrait(outdir / "portrait.csv", portrait)
    cls = classify_portrait(portrait, ClassifyConfig(distinct_tol=args.tol_distinct))
    lab_io.write_json(outdir / "classification.json", cls.as_dict(args.tol_distinct))
    _write_run_json(outdir, "map", args)
    print(json.dumps({"steps_recorded": int(orbit.points.shape[0]),
                      "escaped": orbit.escaped,
                      "escape_index": orbit.escape_index}, sort_keys=True))
    return EXIT_OK


def cmd_portrait(args) -> int:
    outdir = _ensure_outdir(args)
    state, _meta = lab_io.read_state(args.state_file)
    portrait = phase_portrait(state)
    lab_io.write_portrait(outdir / "portrait.csv", portrait)
    cls = classify_portrait(portrait, ClassifyConfig(distinct_tol=args.tol_distinct))
    lab_io.write_json(outdir / "classification.json", cls.as_dict(args.tol_distinct))
    _write_run_json(outdir, "portrait", args)
    print(json.dumps(cls.as_dict(args.tol_distinct), sort_keys=True))
    return EXIT_OK


def cmd_random(args) -> int:
    outdir = _ensure_outdir(args)
    spec = random_pattern(args.n_sites, args.seed)
    text = spec.text()
    print(text)
    (outdir / "pattern.txt").write_text(text + "\n")
    _write_run_json(outdir, "random", args)
    return EXIT_OK


def _add_out(p):
    p.add_argument("--out", default=_default_outdir(),
                   help="output directory (default: $DNSE_LAB_OUTDIR or .)")


def _add_solver_flags(p):
    p.add_argument("--tol", type=float, default=1e-12, help="residual max-norm tolerance")
    p.add_argument("--max-iter", type=int, default=200)
    p.add_argument("--tol-distinct", type=float, default=1e-6,
                   help="clustering tolerance for distinct portrait points")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dnse-lab",
        description="Stationary states of the 1D discrete nonlinear Schrodinger lattice",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pattern", help="counts and strong-coupling energies of a pattern")
    p.add_argument("text")
    p.add_argument("--bc", choices=["periodic", "open"], default="periodic")
    p.add_argument("--c", type=float, nargs="+", default=[0.0])
    _add_out(p)
    p.set_defaults(func=cmd_pattern)

    p = sub.add_parser("solve", help="Newton-solve from a pattern, file or random start")
    p.add_argument("--pattern")
    p.add_argument("--state-file")
    p.add_argument("--random", type=int, metavar="N")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bc", choices=["periodic", "open"], default="periodic")
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--out-prefix", default="solve")
    _add_solver_flags(p)
    _add_out(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="warm-started continuation over the coupling")
    p.add_argument("--pattern", required=True)
    p.add_argument("--bc", choices=["periodic", "open"], default="periodic")
    p.add_argument("--c-from", type=float, required=True)
    p.add_argument("--c-to", type=float, required=True)
    p.add_argument("--c-step", type=float, default=1.0)
    _add_solver_flags(p)
    _add_out(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("map", help="iterate the 2D map from an initial condition")
    p.add_argument("--E", type=float, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--psi0", type=float, required=True)
    p.add_argument("--z0", type=float, required=True)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--escape", type=float, default=1e8)
    p.add_argument("--tol-distinct", type=float, default=1e-6)
    _add_out(p)
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("portrait", help="re-analyze a stored state file")
    p.add_argument("--state-file", required=True)
    p.add_argument("--tol-distinct", type=float, default=1e-6)
    _add_out(p)
    p.set_defaults(func=cmd_portrait)

    p = sub.add_parser("random", help="emit a reproducible random pattern string")
    p.add_argument("n_sites", type=int)
    p.add_argument("--seed", type=int, default=0)
    _add_out(p)
    p.set_defaults(func=cmd_random)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DnseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
