"""Command-line entry point: ``bandlab analytic|simulate|verify|sweep``.

Exit status: 0 success, 1 gated check failed, 2 usage or configuration
error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import _backend
from .analytic import (
    asymptotics,
    bounds_model2,
    eval_model1,
    evaluate,
    half_max_width,
    normalization,
    umax_model1,
)
from .errors import BandlabError, NoCrossing, NumericalFailure
from .io import atomic_write_text, dump_json, write_profile, write_trajectory
from .kernel import KernelSpec, run_kernel
from .params import DEFAULT_RAW, RAW_FIELDS, ModelKind, ModelParams, derive_params, load_params
from .pde import INITS, SCHEMES, SolverConfig, init_state, measure_front_speed, run, traveling_grid
from .verify import SUITES, bounds_precheck, run_suite

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3
SWEEP_AXES = ("tau", "beta", "gamma0", "d", "C7")


class UsageError(Exception):
    pass


# -- configuration -------------------------------------------------------------


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("model parameters (override --params)")
    g.add_argument("--params", type=Path, help="JSON parameter file")
    g.add_argument("--kind", help="UnlimitedNoCrowd | UnlimitedCrowd | LimitedCrowd | LimitedNoCrowd")
    for name in RAW_FIELDS:
        g.add_argument(f"--{name.replace('_', '-')}", dest=name, type=float)
    g.add_argument("--d", type=float, help="set beta = d*mu/2")
    g.add_argument("--C7", type=float, default=1.0, help="translation constant of the crowd profile")


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", type=Path, default=Path("."), help="output directory")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def _add_sim_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("simulation")
    g.add_argument("--engine", default=None, help="pde | kernel (sweep also accepts analytic)")
    g.add_argument("--t-end", type=float, default=1.0, help="hours")
    g.add_argument("--dx", type=float, default=0.01, help="cm")
    g.add_argument("--scheme", choices=sorted(SCHEMES), default="upwind")
    g.add_argument("--snapshots", type=int, default=10, help="stored PDE states after t = 0")
    g.add_argument("--init", choices=INITS, default="analytic")
    g.add_argument("--margin", type=float, default=10.0, help="domain padding in band widths")


def _add_profile_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("profile sampling")
    g.add_argument("--zeta-min", type=float, help="default: -12 band widths")
    g.add_argument("--zeta-max", type=float, help="default: +12 band widths")
    g.add_argument("--points", type=int, default=4801)
    g.add_argument("--times", default="0,1,2,4",
                   help="envelope times in hours (UnlimitedCrowd only)")
    g.add_argument("--at-x", type=float,
                   help="UnlimitedCrowd only: envelope against time at this position [cm]")
    g.add_argument("--t-max", type=float, default=10.0, help="time span for --at-x [h]")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bandlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version="bandlab " + _version())
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("analytic", help="sample closed-form profiles")
    _add_param_flags(p)
    _add_profile_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("simulate", help="run the PDE solver or the jump kernel")
    _add_param_flags(p)
    _add_sim_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("verify", help="run a verification suite")
    _add_param_flags(p)
    p.add_argument("--suite", default="all", help=" | ".join(SUITES))
    _add_output_flags(p)

    p = sub.add_parser("sweep", help="repeat analytic or simulate over one parameter")
    _add_param_flags(p)
    _add_profile_flags(p)
    _add_sim_flags(p)
    p.add_argument("--sweep", required=True, help="<param>=<v1,v2,...>; param in " + ", ".join(SWEEP_AXES))
    _add_output_flags(p)
    return parser


def _version() -> str:
    from importlib.metadata import PackageNotFoundError, version

    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0+unknown"


def resolve_params(args) -> tuple[ModelParams, ModelKind]:
    raw = dict(DEFAULT_RAW)
    kind = ModelKind.UnlimitedNoCrowd
    if args.params is not None:
        try:
            file_params, kind = load_params(args.params)
        except OSError as exc:
            raise UsageError(f"cannot read parameter file: {exc}") from None
        raw.update(file_params.raw())
    for name in RAW_FIELDS:
        value = getattr(args, name, None)
        if value is not None:
            raw[name] = value
    if args.d is not None:
        raw["beta"] = args.d * raw["mu"] / 2.0
    if args.kind is not None:
        kind = ModelKind.parse(args.kind)
    return derive_params(kind=kind, **raw), kind


def param_tag(params: ModelParams, kind: ModelKind, C7: float = 1.0) -> str:
    parts = [f"tau{params.tau:g}", f"mu{params.mu:g}", f"c{params.c:g}", f"beta{params.beta:g}"]
    if kind.crowd:
        parts.append(f"gamma0{params.gamma0:g}")
    parts += [f"k{params.k:g}", f"vinf{params.v_inf:g}"]
    if kind is ModelKind.LimitedCrowd and C7 != 1.0:
        parts.append(f"C7{C7:g}")
    return "_".join(parts)


def _ensure_out(path: Path) -> Path:
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise UsageError(f"cannot create output directory {path}: {exc}") from None
    if not os.access(path, os.W_OK):
        raise UsageError(f"output directory {path} is not writable")
    return path


def _workers(n_jobs: int) -> int:
    cap = os.environ.get("BANDLAB_THREADS")
    limit = os.cpu_count() or 1
    if cap:
        try:
            limit = max(1, int(cap))
        except ValueError:
            raise UsageError("BANDLAB_THREADS must be a positive integer") from None
    return max(1, min(limit, n_jobs))


# -- analytic ------------------------------------------------------------------


def _zeta_axis(args, params: ModelParams) -> np.ndarray:
    bw = params.band_width
    lo = -12.0 * bw if args.zeta_min is None else args.zeta_min
    hi = 12.0 * bw if args.zeta_max is None else args.zeta_max
    if not hi > lo or args.points < 2:
        raise UsageError("need zeta-max > zeta-min and at least 2 points")
    return np.linspace(lo, hi, args.points)


def _parse_floats(text: str, what: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"{what}: expected comma-separated numbers, got {text!r}") from None
    if not values:
        raise UsageError(f"{what}: no values given")
    return values


def analytic_job(params: ModelParams, kind: ModelKind, args, out: Path) -> dict:
    """Write one profile (or envelope) file and return its summary row."""
    zeta = _zeta_axis(args, params)
    tag = param_tag(params, kind, args.C7)
    ext = args.format
    if kind is ModelKind.UnlimitedCrowd and args.at_x is not None:
        return _envelope_in_time(params, kind, args, out, tag)
    if kind is ModelKind.UnlimitedCrowd:
        base = eval_model1(zeta, params)
        times = _parse_floats(args.times, "--times")
        cols = {"zeta_scaled": zeta * params.c / params.mu, "u_base": base.u, "u_normalized": base.u / params.Q}
        for t in times:
            env = bounds_model2(base, t, params)
            cols[f"lower_t{t:g}"] = env.lower
            cols[f"upper_t{t:g}"] = env.upper
        path = out / f"bounds_{kind.value}_{tag}.{ext}"
        write_profile(base, path, ext, cols)
        return {"file": path.name, "lambda_minus": params.lambda_minus, "lambda_plus": params.lambda_plus,
                "alpha": params.alpha, "B": params.B}
    prof = evaluate(kind, zeta, params, args.C7)
    q = normalization(kind, params)
    cols = {
        "zeta_scaled": zeta * params.c / params.mu,
        "u_normalized": prof.u / q,
        "v_over_vinf": prof.v / params.v_inf,
    }
    path = out / f"profile_{kind.value}_{tag}.{ext}"
    write_profile(prof, path, ext, cols)
    row = {"file": path.name, "normalization": q, "u_max_sampled": float(prof.u.max()),
           "plateau": asymptotics(kind, params).u_minus_inf}
    try:
        row["half_max_width"] = half_max_width(zeta, prof.u)
    except NoCrossing:
        row["half_max_width"] = math.nan
    if kind is ModelKind.UnlimitedNoCrowd:
        row["zeta_star"], row["u_max"] = umax_model1(params)
    return row


def _envelope_in_time(params: ModelParams, kind: ModelKind, args, out: Path, tag: str) -> dict:
    if not args.t_max > 0 or args.points < 2:
        raise UsageError("need t-max > 0 and at least 2 points")
    t = np.linspace(0.0, args.t_max, args.points)
    zeta = args.at_x - params.c * t
    base = eval_model1(zeta[::-1], params)  # zeta must increase
    u = base.u[::-1]
    cols = {"t": t, "zeta": zeta, "u_base": u,
            "lower": np.minimum(np.exp(params.lambda_minus * t), np.exp(params.lambda_plus * t)) * u,
            "upper": np.maximum(np.exp(params.lambda_minus * t), np.exp(params.lambda_plus * t)) * u}
    path = out / f"bounds_x{args.at_x:g}_{kind.value}_{tag}.{args.format}"
    if args.format == "json":
        doc = {"kind": kind.value, "params": params.raw(), "x": args.at_x,
               **{k: v.tolist() for k, v in cols.items()}}
        atomic_write_text(path, dump_json(doc))
    else:
        lines = [",".join(cols)]
        lines += [",".join(format(float(x), ".17g") for x in row) for row in zip(*cols.values())]
        atomic_write_text(path, "\n".join(lines) + "\n")
    return {"file": path.name, "lambda_minus": params.lambda_minus, "lambda_plus": params.lambda_plus,
            "alpha": params.alpha, "B": params.B}


def cmd_analytic(args) -> int:
    params, kind = resolve_params(args)
    out = _ensure_out(args.out)
    row = analytic_job(params, kind, args, out)
    print(out / row["file"])
    return EXIT_OK


# -- simulate ------------------------------------------------------------------


def _engine(args, allowed) -> str:
    engine = args.engine or allowed[0]
    if engine not in allowed:
        raise UsageError(f"engine must be one of {', '.join(allowed)}, got {engine!r}")
    return engine


def simulate_job(params: ModelParams, kind: ModelKind, args, out: Path, engine: str) -> dict:
    grid = traveling_grid(params, args.dx, args.t_end, args.margin)
    start = init_state(grid, kind, params, args.init, C7=args.C7)
    t0 = time.perf_counter()
    if engine == "pde":
        cfg = SolverConfig.cfl(grid, params, args.t_end, n_snapshots=max(1, args.snapshots), scheme=args.scheme)
        snaps = run(start, kind, params, cfg)
        dt = cfg.dt
        nsteps = cfg.nsteps
    else:
        snaps = run_kernel(start, params, args.t_end, KernelSpec(), kind)
        dt = params.tau
        nsteps = len(snaps) - 1
    wall = time.perf_counter() - t0

    tag = param_tag(params, kind, args.C7)
    stem = f"trajectory_{engine}_{kind.value}_{tag}"
    path = out / f"{stem}.{args.format}"
    write_trajectory(snaps, path, args.format, engine)

    drift = np.abs(np.gradient(np.log(start.v), grid.dx)).max() * params.beta / params.tau
    meta = {
        "engine": engine,
        "backend": _backend.NAME,
        "kind": kind.value,
        "params": {**params.raw(), "C7": args.C7},
        "grid": {"x_min": grid.x_min, "x_max": grid.x_max, "n": grid.n, "dx": grid.dx},
        "dt": dt,
        "nsteps": nsteps,
        "snapshots": len(snaps),
        "t_end": snaps[-1].t,
        "cfl": {
            "diffusion": params.mu / (2.0 * params.tau) * dt / grid.dx**2,
            "advection": float(drift * dt / grid.dx),
        } if engine == "pde" else {
            "sigma_over_dx": math.sqrt(params.mu) / grid.dx,
            "max_jump_mean_over_dx": float(drift * params.tau / grid.dx),
        },
        "scheme": args.scheme if engine == "pde" else None,
        "init": args.init,
        "wall_time_s": wall,
    }
    try:
        meta["front_speed"] = measure_front_speed(snaps, 0.5, params.v_inf) if len(snaps) >= 3 else None
    except NoCrossing:
        meta["front_speed"] = None
    atomic_write_text(out / f"{stem}.meta.json", dump_json(meta))
    return {"file": path.name, "snapshots": len(snaps), "front_speed": meta["front_speed"],
            "u_max_final": float(snaps[-1].u.max()), "t_end": snaps[-1].t}


def cmd_simulate(args) -> int:
    params, kind = resolve_params(args)
    engine = _engine(args, ("pde", "kernel"))
    out = _ensure_out(args.out)
    row = simulate_job(params, kind, args, out, engine)
    print(out / row["file"])
    return EXIT_OK


# -- verify --------------------------------------------------------------------


def cmd_verify(args) -> int:
    if args.suite not in SUITES:
        raise UsageError(f"suite must be one of {', '.join(SUITES)}, got {args.suite!r}")
    user_params = None
    if args.params is not None or any(getattr(args, n) is not None for n in (*RAW_FIELDS, "d")):
        user_params, _ = resolve_params(args)
        if args.suite in ("bounds", "all"):
            bounds_precheck(user_params)
    out = _ensure_out(args.out)
    report = run_suite(args.suite, params=user_params)
    atomic_write_text(out / f"verify_{args.suite}.json", report.to_json())
    text = report.to_text()
    atomic_write_text(out / f"verify_{args.suite}.txt", text)
    sys.stdout.write(text)
    return EXIT_OK if report.passed else EXIT_FAILED


# -- sweep ---------------------------------------------------------------------


def parse_sweep(text: str) -> tuple[str, list[float]]:
    axis, sep, values = text.partition("=")
    axis = axis.strip()
    if not sep or axis not in SWEEP_AXES:
        raise UsageError(f"--sweep must look like <param>=<v1,v2,...> with param in {', '.join(SWEEP_AXES)}")
    return axis, _parse_floats(values, "--sweep")


def _sweep_entry(params: ModelParams, kind: ModelKind, axis: str, value: float, args):
    c7 = args.C7
    if axis == "d":
        params = params.replace(beta=value * params.mu / 2.0)
    elif axis == "C7":
        c7 = value
    else:
        params = params.replace(**{axis: value})
    derive_params(kind=kind, **params.raw())
    entry = argparse.Namespace(**{**vars(args), "C7": c7})
    return params, entry


def cmd_sweep(args) -> int:
    axis, values = parse_sweep(args.sweep)
    params, kind = resolve_params(args)
    engine = _engine(args, ("analytic", "pde", "kernel"))
    out = _ensure_out(args.out)
    entries = [_sweep_entry(params, kind, axis, v, args) for v in values]

    def job(item):
        p, entry = item
        if engine == "analytic":
            return analytic_job(p, kind, entry, out)
        return simulate_job(p, kind, entry, out, engine)

    with ThreadPoolExecutor(max_workers=_workers(len(entries))) as pool:
        rows = list(pool.map(job, entries))

    keys = sorted({k for r in rows for k in r if k != "file"})
    lines = [",".join([axis, *keys, "file"])]
    for value, row in zip(values, rows):
        cells = [format(value, ".17g")]
        for k in keys:
            x = row.get(k)
            cells.append("" if x is None else format(float(x), ".17g"))
        cells.append(row["file"])
        lines.append(",".join(cells))
    summary = out / f"sweep_{engine}_{kind.value}_{axis}.csv"
    atomic_write_text(summary, "\n".join(lines) + "\n")
    for row in rows:
        print(out / row["file"])
    print(summary)
    return EXIT_OK


COMMANDS = {"analytic": cmd_analytic, "simulate": cmd_simulate, "verify": cmd_verify, "sweep": cmd_sweep}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.verb](args)
    except NumericalFailure as exc:
        print(f"bandlab: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (UsageError, BandlabError, ValueError) as exc:
        print(f"bandlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
