"""Acceptance gate: one test and one printed PASS/FAIL line per criterion.

Expensive simulations (criteria 4, 5 and 7) are read from the report of a
``bandlab verify --suite all`` run.  That run happens twice anyway for the
determinism criterion.  Everything else is recomputed here against
independent oracles: 40-digit ``mpmath`` evaluations, ``scipy``'s golden
section search, and hand-derived constants.
"""

import itertools
import json
import subprocess
import sys

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from bandlab.analytic import asymptotics, eval_model1, evaluate, umax_model1
from bandlab.cli import main as cli_main
from bandlab.params import ModelKind, ModelParams
from bandlab.verify import max_ln_v_curvature

from conftest import ACCEPTANCE_LINES, mp_umax

TAUS = (0.05, 0.005)
BETAS = (0.1625, 0.25, 0.375, 0.625)
GAMMA0S = (12.0, 25.0, 100.0)
BASE = dict(mu=0.25, c=1.5, k=1.0, v_inf=1.0)
REF = dict(tau=0.05, beta=0.25, gamma0=25.0, **BASE)


def table1():
    for tau, beta, g0 in itertools.product(TAUS, BETAS, GAMMA0S):
        yield ModelParams(tau=tau, beta=beta, gamma0=g0, **BASE)


def record(n: int, title: str, passed: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if passed else 'FAIL'}  {title} | {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.fixture(scope="module")
def verify_runs(tmp_path_factory):
    """Two independent ``verify --suite all`` processes."""
    dirs = []
    codes = []
    for name in ("run1", "run2"):
        out = tmp_path_factory.mktemp(name)
        proc = subprocess.run([sys.executable, "-m", "bandlab.cli", "verify", "--suite", "all", "--out", str(out)],
                              capture_output=True, text=True)
        codes.append(proc.returncode)
        dirs.append(out)
    report = json.loads((dirs[0] / "verify_all.json").read_text())
    return dirs, codes, {c["name"]: c for c in report["checks"]}


# -- residual oracle, written independently of bandlab.verify ------------------

def _d1(f, h):
    return (-f[4:] + 8 * f[3:-1] - 8 * f[1:-3] + f[:-4]) / (12 * h)


def _d2(f, h):
    return (-f[4:] + 16 * f[3:-1] - 30 * f[2:-2] + 16 * f[1:-3] - f[:-4]) / (12 * h * h)


def reduced_ode_residual(kind, z, u, v, p):
    h = z[1] - z[0]
    lnv = np.log(v)
    ui, vi = u[2:-2], v[2:-2]
    du, d2u, dv, dl, d2l = _d1(u, h), _d2(u, h), _d1(v, h), _d1(lnv, h), _d2(lnv, h)
    if kind is ModelKind.LimitedCrowd:
        r1 = p.tau * p.c * du - p.beta * dl * du + 0.5 * p.mu * d2u - p.tau * p.gamma * ui * d2l
    else:
        r1 = p.tau * p.c * du - p.beta * (du * dl + ui * d2l) + 0.5 * p.mu * d2u
    r2 = p.c * dv - p.k * ui * (vi if kind.limited else 1.0)
    return float(max(np.abs(r1).max(), np.abs(r2).max()))


def test_criterion_1_closed_form_residuals():
    z = np.linspace(-20.0, 20.0, 40001)
    worst = {}
    for kind in (ModelKind.UnlimitedNoCrowd, ModelKind.LimitedCrowd, ModelKind.LimitedNoCrowd):
        worst[kind.model_number] = max(
            reduced_ode_residual(kind, z, prof.u, prof.v, p)
            for p in table1() for prof in [evaluate(kind, z, p)]
        )
    ok = all(w < 1e-6 for w in worst.values())
    record(1, "closed-form residuals", ok,
           ", ".join(f"model {m} max L-inf {w:.2e}" for m, w in worst.items()) + " (tolerance 1e-6, 24 combos)")
    assert ok


def test_criterion_2_umax_formula():
    worst_z = worst_u = 0.0
    for p in table1():
        z_star, u_max = umax_model1(p)
        half = 20.0 / p.s
        f = lambda z: -float(eval_model1(np.array([z, z + 1.0]), p).u[0])
        res = minimize_scalar(f, bracket=(-half, 0.5 * z_star, half), method="golden", tol=1e-12)
        worst_z = max(worst_z, abs(res.x - z_star))
        worst_u = max(worst_u, abs(-res.fun - u_max))
    p13 = ModelParams(tau=0.05, beta=1.3 * 0.25 / 2, gamma0=25.0, **BASE)
    z13, u13 = umax_model1(p13)
    mz, mu_ = (float(x) for x in mp_umax(p13))
    oracle_ok = abs(z13 - mz) < 1e-12 and abs(u13 - mu_) < 1e-12
    ok = worst_z < 1e-6 and worst_u < 1e-6 and oracle_ok
    record(2, "u_max formula", ok,
           f"golden-section gap zeta {worst_z:.2e}, u {worst_u:.2e}; d=1.3: zeta*={z13:.6f} u_max={u13:.7f} "
           f"(40-digit oracle {mz:.6f}, {mu_:.7f})")
    assert ok


def test_criterion_3_asymptotic_limits():
    p = ModelParams(**REF)
    fails = []
    worst = 0.0
    for kind in (ModelKind.UnlimitedNoCrowd, ModelKind.LimitedCrowd, ModelKind.LimitedNoCrowd):
        prof = evaluate(kind, np.array([-40.0, 40.0]), p)
        lim = asymptotics(kind, p)
        for label, got, want in (("u(-40)", prof.u[0], lim.u_minus_inf), ("u(40)", prof.u[1], lim.u_plus_inf),
                                 ("v(-40)", prof.v[0], lim.v_minus_inf), ("v(40)", prof.v[1], lim.v_plus_inf)):
            gap = abs(got - want)
            worst = max(worst, gap)
            if not gap < 1e-6:
                fails.append(f"model {kind.model_number} {label} off by {gap:.3e}")
    plateau3 = asymptotics(ModelKind.LimitedCrowd, p).u_minus_inf
    plateau4 = asymptotics(ModelKind.LimitedNoCrowd, p).u_minus_inf
    # hand-derived: 2*0.05*2.25/0.25/(1 + 1.25) = 0.4 and 0.05*2.25/0.25 = 0.45
    plateau_ok = abs(plateau3 - 0.4) < 1e-14 and abs(plateau4 - 0.45) < 1e-14
    if not plateau_ok:
        fails.append(f"plateaus {plateau3!r}, {plateau4!r}")
    ok = not fails
    detail = f"plateaus {plateau3:.15g}, {plateau4:.15g}; " + ("; ".join(fails) if fails else f"worst gap {worst:.1e}")
    record(3, "asymptotic limits at zeta = +-40", ok, detail)
    assert ok, detail


def test_criterion_4_front_propagation(verify_runs):
    _, _, checks = verify_runs
    front, shape = checks["speed.model4.front"], checks["speed.model4.shape"]
    c_est = front["details"]["c_est"]
    ok = front["passed"] and shape["passed"] and abs(c_est - 1.5) / 1.5 < 0.02 and shape["value"] < 0.02
    record(4, "traveling-band propagation", ok,
           f"c_est {c_est:.7f} cm/h (rel err {front['value']:.2e}), final L-inf/u_max {shape['value']:.2e}")
    assert ok


def test_criterion_5_envelope(verify_runs):
    _, _, checks = verify_runs
    env = checks["envelope.model2.violations"]
    d = env["details"]
    # hand-derived: alpha*B/tau = 0.0625*0.09/0.05
    lam_ok = abs(d["lambda_plus"] - 0.1125) < 1e-12 and abs(d["lambda_minus"] + 0.1125) < 1e-12
    ok = env["passed"] and env["value"] == 0 and lam_ok and abs(d["t_end"] - 0.5) < 1e-12
    record(5, "crowd-effect envelope", ok,
           f"{int(env['value'])} violations to t={d['t_end']:g} h, worst slacked margin {d['worst_margin']:.3e}, "
           f"lambda+- = {d['lambda_plus']:+.4f}/{d['lambda_minus']:+.4f}")
    assert ok


def test_criterion_6_curvature_bound():
    p = ModelParams(**REF)
    estimates = []
    for h in (0.2, 0.1, 0.05, 0.025, 0.0125, 0.00625):
        m = int(round(20.0 / h))
        estimates.append(max_ln_v_curvature(eval_model1(np.arange(-m, m + 1) * h, p)))
    B = 0.09  # (1/(d-1)) tau^2 c^2 / mu^2 at d = 2
    below = all(e <= B * (1 + 1e-3) for e in estimates)
    rising = all(b >= a - 1e-4 for a, b in zip(estimates, estimates[1:]))
    ok = below and rising and abs(estimates[-1] - B) / B < 1e-3 and abs(p.B - B) < 1e-15
    record(6, "curvature bound", ok,
           "estimates " + ", ".join(f"{e:.8f}" for e in estimates) + f" -> B = {B}")
    assert ok


def test_criterion_7_kernel_consistency(verify_runs):
    _, _, checks = verify_runs
    ratios = [checks[n] for n in ("kernel.model4.tau0.05-0.025", "kernel.model4.tau0.025-0.0125")]
    ok = all(c["passed"] and 1.5 <= c["value"] <= 3.0 for c in ratios)
    record(7, "kernel-PDE consistency", ok,
           "discrepancy ratios " + ", ".join(f"{c['value']:.3f}" for c in ratios) + " (expected in [1.5, 3])")
    assert ok


def _rows(path):
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    return [dict(zip(header, line.split(","))) for line in lines[1:]]


def test_criterion_8_figure_monotonicity(tmp_path):
    assert cli_main(["sweep", "--sweep", "tau=0.05,0.025,0.01,0.005", "--kind", "UnlimitedNoCrowd", "--d", "1.3",
                     "--engine", "analytic", "--out", str(tmp_path / "a")]) == 0
    assert cli_main(["sweep", "--sweep", "gamma0=12,25,50,100", "--kind", "LimitedCrowd",
                     "--engine", "analytic", "--out", str(tmp_path / "b")]) == 0
    assert cli_main(["sweep", "--sweep", "d=1.5,2,3,5", "--kind", "LimitedNoCrowd",
                     "--engine", "analytic", "--out", str(tmp_path / "c")]) == 0
    widths = [float(r["half_max_width"]) for r in _rows(tmp_path / "a" / "sweep_analytic_UnlimitedNoCrowd_tau.csv")]
    plateau3 = [float(r["plateau"]) for r in _rows(tmp_path / "b" / "sweep_analytic_LimitedCrowd_gamma0.csv")]
    rows4 = _rows(tmp_path / "c" / "sweep_analytic_LimitedNoCrowd_d.csv")
    d_times_plateau = [float(r["d"]) * float(r["plateau"]) for r in rows4]

    # oracles: the model-1 shape depends on s*zeta only, so width ~ 1/tau;
    # the model-3 plateau is 2 tau c^2 / (k beta (1 + gamma0 tau)); d * plateau = Q2 = 0.9
    oracle_a = [widths[0] * 0.05 / t for t in (0.05, 0.025, 0.01, 0.005)]
    oracle_b = [0.225 / 0.25 / (1 + g * 0.05) for g in (12, 25, 50, 100)]  # 2 tau c^2 = 0.225
    a = all(y > x for x, y in zip(widths, widths[1:])) and np.allclose(widths, oracle_a, rtol=1e-3)
    b = all(y < x for x, y in zip(plateau3, plateau3[1:])) and np.allclose(plateau3, oracle_b, rtol=1e-12)
    c = np.allclose(d_times_plateau, 0.9, rtol=1e-12)
    ok = a and b and c
    record(8, "figure monotonicity", ok,
           f"(a) widths {', '.join(f'{w:.3f}' for w in widths)}; (b) plateaus {', '.join(f'{x:.4f}' for x in plateau3)}; "
           f"(c) d*plateau {min(d_times_plateau):.12f}..{max(d_times_plateau):.12f}")
    assert ok


def test_criterion_9_determinism(verify_runs):
    dirs, codes, _ = verify_runs
    same = all((dirs[0] / n).read_bytes() == (dirs[1] / n).read_bytes() for n in ("verify_all.json", "verify_all.txt"))
    ok = same and codes[0] == codes[1]
    record(9, "deterministic verify reports", ok,
           f"JSON and text reports byte-identical: {same}; exit codes {codes[0]}, {codes[1]}")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
