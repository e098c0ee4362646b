"""Compare the compiled core with the numpy fallback on the two hot loops.

    python benchmarks/bench_backends.py [--repeat N] [--json out.json]

Each case is timed ``--repeat`` times per backend and the best time is
reported, along with the maximum difference between the two results.
"""

import argparse
import json
import math
import sys
import time

import numpy as np

from bandlab import _purepy
from bandlab.params import ModelKind, ModelParams
from bandlab.pde import SolverConfig, _solver_args, init_state, traveling_grid

try:
    from bandlab import _core
except ImportError:
    _core = None


def best_of(fn, repeat):
    times, result = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return min(times), result


def pde_case(mod, state, nsteps, cfg, args):
    def go():
        u = state.u.copy()
        w = np.log(state.v)
        mod.advance_pde(u, w, nsteps, cfg.dt, state.grid.dx, **args)
        return u
    return go


def kernel_case(mod, u_pad, means, sigma, dx, radius):
    return lambda: mod.kernel_convolve(u_pad, means, sigma, dx, radius)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", help="also write results to this file")
    opts = ap.parse_args(argv)
    if _core is None:
        print("compiled core not built; nothing to compare", file=sys.stderr)
        return 1

    p = ModelParams(tau=0.05, mu=0.25, c=1.5, beta=0.25, gamma0=25.0)
    rows = []
    for kind, dx, nsteps in ((ModelKind.LimitedNoCrowd, 0.02, 200), (ModelKind.UnlimitedCrowd, 0.01, 100)):
        grid = traveling_grid(p, dx)
        state = init_state(grid, kind, p)
        cfg = SolverConfig.cfl(grid, p, 1.0, scheme="upwind2")
        args = _solver_args(kind, p, cfg)
        t_c, u_c = best_of(pde_case(_core, state, nsteps, cfg, args), opts.repeat)
        t_p, u_p = best_of(pde_case(_purepy, state, nsteps, cfg, args), opts.repeat)
        rows.append({"case": f"advance_pde {kind.value} n={grid.n} steps={nsteps}",
                     "cython_s": t_c, "numpy_s": t_p, "max_abs_diff": float(np.max(np.abs(u_c - u_p)))})

    rng = np.random.default_rng(0)
    for n, dx in ((2000, 0.02), (8000, 0.01)):
        sigma = 0.5
        means = rng.normal(0.0, 0.05, n)
        radius = int(math.ceil((6 * sigma + np.abs(means).max()) / dx))
        u_pad = rng.random(n + 2 * radius)
        t_c, a = best_of(kernel_case(_core, u_pad, means, sigma, dx, radius), opts.repeat)
        t_p, b = best_of(kernel_case(_purepy, u_pad, means, sigma, dx, radius), opts.repeat)
        rows.append({"case": f"kernel_convolve n={n} width={2 * radius + 1}",
                     "cython_s": t_c, "numpy_s": t_p, "max_abs_diff": float(np.max(np.abs(a - b)))})

    width = max(len(r["case"]) for r in rows)
    print(f"{'case'.ljust(width)}  {'cython [s]':>11}  {'numpy [s]':>10}  {'speed-up':>8}  {'max |diff|':>10}")
    for r in rows:
        r["speedup"] = r["numpy_s"] / r["cython_s"]
        print(f"{r['case'].ljust(width)}  {r['cython_s']:11.4f}  {r['numpy_s']:10.4f}  "
              f"{r['speedup']:8.1f}  {r['max_abs_diff']:10.2e}")
    if opts.json:
        with open(opts.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
