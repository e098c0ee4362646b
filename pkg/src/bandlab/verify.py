"""Machine-checkable statements about the traveling-band models.

The low-level checks (``ode_residual``, ``check_bounds``,
``max_ln_v_curvature``, ``convergence_order``) are pure functions.  The
``suite_*`` functions bundle them into gated :class:`CheckResult` records
at fixed resolutions; nothing here is randomised, so a report is
reproducible bit for bit.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .analytic import (
    Profile,
    asymptotics,
    eval_model1,
    eval_model4,
    evaluate,
    profile_derivatives,
    umax_model1,
)
from .errors import DegenerateCrowd, DegenerateInput, GridMismatch, UnsupportedKind
from .kernel import compare_to_pde, run_kernel
from .params import ModelKind, ModelParams, derive_params
from .pde import Grid1D, SolverConfig, init_state, measure_front_speed, run, traveling_grid

SUITES = ("residuals", "limits", "bounds", "speed", "convergence", "all")

# parameter grid of the closed-form checks (Table 1 ranges)
TABLE1_TAU = (0.05, 0.005)
TABLE1_BETA = (0.1625, 0.25, 0.375, 0.625)
TABLE1_GAMMA0 = (12.0, 25.0, 100.0)
TABLE1_FIXED = {"mu": 0.25, "c": 1.5, "k": 1.0, "v_inf": 1.0}
# single reference point used by the limit, envelope and propagation checks
REFERENCE = {"tau": 0.05, "mu": 0.25, "c": 1.5, "beta": 0.25, "gamma0": 25.0, "k": 1.0, "v_inf": 1.0}


def table1_params():
    for tau, beta, gamma0 in itertools.product(TABLE1_TAU, TABLE1_BETA, TABLE1_GAMMA0):
        yield ModelParams(tau=tau, beta=beta, gamma0=gamma0, **TABLE1_FIXED)


def reference_params() -> ModelParams:
    return ModelParams(**REFERENCE)


# -- records -----------------------------------------------------------------


@dataclass
class CheckResult:
    """One verdict: ``value`` compared against ``tolerance`` by ``relation``."""

    name: str
    value: float
    tolerance: float | list
    relation: str
    passed: bool
    gated: bool = True
    details: dict = field(default_factory=dict)


@dataclass
class VerifyReport:
    suite: str
    checks: list[CheckResult] = field(default_factory=list)
    residual_norms: dict = field(default_factory=dict)
    front_speed: dict = field(default_factory=dict)
    bound_violations: dict = field(default_factory=dict)
    convergence: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.gated)

    def add(self, check: CheckResult) -> CheckResult:
        self.checks.append(check)
        return check

    def to_dict(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        return out

    def to_json(self) -> str:
        return json.dumps(_clean(self.to_dict()), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        rows = [("check", "value", "relation", "tolerance", "gated", "verdict")]
        for c in self.checks:
            tol = c.tolerance if isinstance(c.tolerance, list) else [c.tolerance]
            rows.append((
                c.name,
                f"{c.value:.6e}",
                c.relation,
                ", ".join(f"{t:.6g}" for t in tol),
                "yes" if c.gated else "no",
                "PASS" if c.passed else "FAIL",
            ))
        widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
        lines.insert(1, "  ".join("-" * w for w in widths))
        lines.append("")
        lines.append(f"suite {self.suite}: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _check(name, value, tolerance, relation="<", gated=True, **details) -> CheckResult:
    value = float(value)
    if relation == "<":
        ok = value < tolerance
    elif relation == "<=":
        ok = value <= tolerance
    elif relation == "in":
        lo, hi = tolerance
        ok = lo <= value <= hi
    elif relation == "==":
        ok = value == tolerance
    else:
        raise ValueError(relation)
    return CheckResult(name, value, list(tolerance) if relation == "in" else tolerance,
                       relation, bool(ok), gated, details)


# -- elementary checks ---------------------------------------------------------


@dataclass(frozen=True)
class ResidualNorms:
    linf: float
    l2: float
    linf_organism: float
    linf_substrate: float
    scale: float


def _uniform_spacing(z: np.ndarray) -> float:
    h = np.diff(z)
    if not np.allclose(h, h[0], rtol=1e-9, atol=0):
        raise ValueError("finite-difference residuals need a uniform zeta grid")
    return float(h[0])


def _fd4(f: np.ndarray, h: float):
    """Fourth-order central first and second derivatives on nodes 2..n-3."""
    d1 = (-f[4:] + 8.0 * f[3:-1] - 8.0 * f[1:-3] + f[:-4]) / (12.0 * h)
    d2 = (-f[4:] + 16.0 * f[3:-1] - 30.0 * f[2:-2] + 16.0 * f[1:-3] - f[:-4]) / (12.0 * h * h)
    return d1, d2


def ode_residual(profile: Profile, kind: ModelKind | None = None, params: ModelParams | None = None,
                 method: str = "analytic", C7: float = 1.0) -> ResidualNorms:
    """Residual of the reduced traveling-wave ODEs along a sampled profile.

    ``method="fd"`` differentiates the samples with fourth-order central
    differences (interior nodes only).  ``method="analytic"`` takes the
    derivatives from the closed form at the sample points and the
    undifferentiated ``u`` and ``v`` from the samples.
    """
    kind = profile.kind if kind is None else kind
    params = profile.params if params is None else params
    if kind is ModelKind.UnlimitedCrowd:
        raise UnsupportedKind("no reduced ODE solution for the crowd-effect system with unlimited substrate")
    tau, mu, c, beta, k = params.tau, params.mu, params.c, params.beta, params.k
    gamma = params.gamma

    if method == "fd":
        h = _uniform_spacing(profile.zeta)
        u = profile.u[2:-2]
        v = profile.v[2:-2]
        du, d2u = _fd4(profile.u, h)
        dv, _ = _fd4(profile.v, h)
        dlnv, d2lnv = _fd4(np.log(profile.v), h)
        weights = h
    elif method == "analytic":
        der = profile_derivatives(kind, profile.zeta, params, C7)
        u, v = profile.u, profile.v
        du, d2u, dv, dlnv, d2lnv = der["du"], der["d2u"], der["dv"], der["dlnv"], der["d2lnv"]
        weights = np.gradient(profile.zeta)
    else:
        raise ValueError("method must be 'fd' or 'analytic'")

    # organism equation, written term by term
    if kind.crowd:
        terms1 = (tau * c * du, -beta * dlnv * du, 0.5 * mu * d2u, -tau * gamma * u * d2lnv)
    else:
        terms1 = (tau * c * du, -beta * (du * dlnv + u * d2lnv), 0.5 * mu * d2u)
    consumption = k * u * v if kind.limited else k * u
    terms2 = (c * dv, -consumption)
    r1 = sum(terms1)
    r2 = sum(terms2)
    scale = max(float(np.max(np.abs(t))) for t in terms1 + terms2)
    r = np.maximum(np.abs(r1), np.abs(r2))
    return ResidualNorms(
        linf=float(np.max(r)),
        l2=float(np.sqrt(np.sum((r1**2 + r2**2) * weights))),
        linf_organism=float(np.max(np.abs(r1))),
        linf_substrate=float(np.max(np.abs(r2))),
        scale=scale,
    )


def max_ln_v_curvature(profile: Profile) -> float:
    """Largest |second difference of ln v| / dx^2 over interior nodes."""
    h = _uniform_spacing(profile.zeta)
    lnv = np.log(profile.v)
    return float(np.max(np.abs(lnv[2:] - 2.0 * lnv[1:-1] + lnv[:-2])) / h**2)


def convergence_order(error_pairs) -> list[float]:
    """Observed orders ``log(e_i/e_{i+1}) / log(h_i/h_{i+1})``.

    For halving ``h`` this is ``log2(e_2h / e_h)``.
    """
    pairs = [(float(h), float(e)) for h, e in error_pairs]
    if len(pairs) < 2:
        raise DegenerateInput("need at least two (h, error) pairs")
    hs = np.array([p[0] for p in pairs])
    es = np.array([p[1] for p in pairs])
    if np.any(es <= 0):
        raise DegenerateInput("errors must be strictly positive")
    if np.any(np.diff(hs) >= 0) or np.any(hs <= 0):
        raise DegenerateInput("h must be positive and strictly decreasing")
    return [float(o) for o in np.log(es[:-1] / es[1:]) / np.log(hs[:-1] / hs[1:])]


@dataclass
class BoundReport:
    violations: int
    worst_margin: float
    worst_margin_unslacked: float
    slack: list[float]
    times: list[float]
    v_violations: int


def _nested_values(fine: np.ndarray, fine_grid: Grid1D, coarse_grid: Grid1D) -> np.ndarray:
    if (fine_grid.x_min, fine_grid.x_max) != (coarse_grid.x_min, coarse_grid.x_max) or \
            fine_grid.n != 2 * coarse_grid.n - 1:
        raise GridMismatch("coarse trajectory must use the same domain with twice the spacing")
    return fine[::2]


def check_bounds(pde_traj, baseline: Profile, params: ModelParams, coarse_traj=None,
                 slack_floor: float = 1e-6, slack_factor: float = 3.0) -> BoundReport:
    """Test ``e^{lambda_- t} u_b(x-ct) <= u(x,t) <= e^{lambda_+ t} u_b(x-ct)``.

    ``u_b`` is the model-1 baseline.  The slack at each time is
    ``max(slack_floor, slack_factor * max|u_dx - u_2dx|)`` when a trajectory
    on the nested coarse grid is supplied, else ``slack_floor``.  The
    substrate envelope is counted in ``v_violations`` but not gated.
    """
    if params.alpha == 0.0:
        raise DegenerateCrowd("gamma0 = 1/tau makes alpha = 0; there is no envelope to check")
    if baseline.kind is not ModelKind.UnlimitedNoCrowd:
        raise UnsupportedKind("the envelope baseline must be a model-1 profile")
    base = baseline.params
    grid = pde_traj[0].grid
    if any(s.grid != grid for s in pde_traj):
        raise GridMismatch("trajectory changes grid")
    coarse_by_t = {}
    if coarse_traj is not None:
        coarse_by_t = {round(s.t, 12): s for s in coarse_traj}
    lo_sign = 1.0 if params.lambda_plus >= 0 else -1.0

    violations = v_violations = 0
    worst = worst_raw = math.inf
    slacks, times = [], []
    x = grid.x
    for snap in pde_traj:
        ref = eval_model1(x - base.c * snap.t, base)
        f_lo = math.exp(params.lambda_minus * snap.t)
        f_hi = math.exp(params.lambda_plus * snap.t)
        if lo_sign < 0:
            f_lo, f_hi = f_hi, f_lo
        est = 0.0
        coarse = coarse_by_t.get(round(snap.t, 12))
        if coarse is not None:
            est = float(np.max(np.abs(_nested_values(snap.u, grid, coarse.grid) - coarse.u)))
        eps = max(slack_floor, slack_factor * est)
        margin_raw = np.minimum(snap.u - f_lo * ref.u, f_hi * ref.u - snap.u)
        margin = margin_raw + eps
        violations += int(np.count_nonzero(margin < 0))
        worst = min(worst, float(margin.min()))
        worst_raw = min(worst_raw, float(margin_raw.min()))
        v_margin = np.minimum(snap.v - f_lo * ref.v, f_hi * ref.v - snap.v) + eps
        v_violations += int(np.count_nonzero(v_margin < 0))
        slacks.append(eps)
        times.append(float(snap.t))
    return BoundReport(violations, worst, worst_raw, slacks, times, v_violations)


def golden_section_max(f, lo: float, hi: float, tol: float = 1e-12, maxiter: int = 500) -> float:
    """Argmax of a unimodal ``f`` on ``[lo, hi]``."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(maxiter):
        if abs(b - a) <= tol * max(1.0, abs(a) + abs(b)):
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


# -- suites ------------------------------------------------------------------

CLOSED_FORM_KINDS = (ModelKind.UnlimitedNoCrowd, ModelKind.LimitedCrowd, ModelKind.LimitedNoCrowd)


def _model1_u_direct(z: float, p: ModelParams) -> float:
    # textbook form, deliberately not the log-space evaluator
    e = math.exp(-p.s * z)
    return p.Q / (p.d - 1.0) * e * (1.0 + e) ** (-p.d / (p.d - 1.0))


def suite_residuals(report: VerifyReport, params: ModelParams | None = None) -> None:
    """Closed forms solve their reduced ODEs; the peak formula is right."""
    zeta = np.linspace(-20.0, 20.0, 40001)  # spacing 1e-3
    for kind in CLOSED_FORM_KINDS:
        worst_fd = worst_an = 0.0
        worst_l2 = 0.0
        for p in table1_params():
            prof = evaluate(kind, zeta, p)
            fd = ode_residual(prof, method="fd")
            an = ode_residual(prof, method="analytic")
            worst_fd = max(worst_fd, fd.linf)
            worst_l2 = max(worst_l2, fd.l2)
            worst_an = max(worst_an, an.linf)
        name = f"residual.model{kind.model_number}"
        report.residual_norms[name] = {"linf_fd": worst_fd, "l2_fd": worst_l2, "linf_analytic": worst_an}
        report.add(_check(name + ".fd", worst_fd, 1e-6, combos=24, spacing=1e-3))
        report.add(_check(name + ".analytic", worst_an, 1e-8, combos=24))

    worst_z = worst_u = 0.0
    for p in table1_params():
        z_star, u_max = umax_model1(p)
        half = 20.0 / p.s
        z_gs = golden_section_max(lambda z: _model1_u_direct(z, p), -half, half)
        u_gs = _model1_u_direct(z_gs, p)
        worst_z = max(worst_z, abs(z_gs - z_star))
        worst_u = max(worst_u, abs(u_gs - u_max))
    report.add(_check("umax.model1.location", worst_z, 1e-6, combos=24))
    report.add(_check("umax.model1.height", worst_u, 1e-6, combos=24))


def limit_deviations(kind: ModelKind, params: ModelParams, at: float = 40.0) -> dict:
    lim = asymptotics(kind, params)
    prof = evaluate(kind, np.array([-at, at]), params)
    return {
        "u_rear": abs(prof.u[0] - lim.u_minus_inf),
        "u_front": abs(prof.u[1] - lim.u_plus_inf),
        "v_rear": abs(prof.v[0] - lim.v_minus_inf),
        "v_front": abs(prof.v[1] - lim.v_plus_inf),
    }


def suite_limits(report: VerifyReport, params: ModelParams | None = None) -> None:
    """Profiles at zeta = +-40 sit on the asymptotes (reference parameters)."""
    p = reference_params()
    for kind in CLOSED_FORM_KINDS:
        dev = limit_deviations(kind, p)
        name = f"limits.model{kind.model_number}"
        report.add(_check(name + ".u", max(dev["u_rear"], dev["u_front"]), 1e-6, **dev))
        report.add(_check(name + ".v", max(dev["v_rear"], dev["v_front"]), 1e-6, **dev))
    # rear plateaus against their independent simplified forms
    lim3 = asymptotics(ModelKind.LimitedCrowd, p).u_minus_inf
    plateau3 = 2 * p.tau * p.c**2 / (p.k * p.beta) / (1 + p.gamma0 * p.tau)
    report.add(_check("limits.model3.plateau", abs(lim3 - plateau3), 1e-12, value_u=lim3))
    lim4 = asymptotics(ModelKind.LimitedNoCrowd, p).u_minus_inf
    report.add(_check("limits.model4.plateau", abs(lim4 - p.Q2 / p.d), 1e-12, value_u=lim4))


def envelope_runs(dx: float = 0.01, t_end: float = 0.5, n_snapshots: int = 5, params=None):
    """Crowd-effect PDE from the model-1 baseline at ``dx`` and ``2*dx``."""
    kind = ModelKind.UnlimitedCrowd
    p = reference_params() if params is None else params
    fine_grid = traveling_grid(p, dx, t_end)
    coarse_grid = Grid1D(fine_grid.x_min, fine_grid.x_max, (fine_grid.n + 1) // 2)
    if coarse_grid.refined() != fine_grid:
        fine_grid = coarse_grid.refined()
    trajs = []
    for grid in (fine_grid, coarse_grid):
        cfg = SolverConfig.cfl(grid, p, t_end, n_snapshots=n_snapshots)
        # identical snapshot times on both grids
        cfg_fine = SolverConfig.cfl(fine_grid, p, t_end, n_snapshots=n_snapshots)
        every = cfg.snapshot_every * round(cfg_fine.dt * cfg_fine.snapshot_every / (cfg.dt * cfg.snapshot_every))
        cfg = SolverConfig(dt=cfg.dt, t_end=t_end, snapshot_every=max(1, every))
        trajs.append(run(init_state(grid, kind, p), kind, p, cfg))
    baseline = eval_model1(fine_grid.x, p)
    return trajs[0], trajs[1], baseline, p


def curvature_refinement(params=None, spacings=(0.2, 0.1, 0.05, 0.025, 0.0125), half_width=20.0):
    p = reference_params() if params is None else params
    values = []
    for h in spacings:
        m = int(round(half_width / h))
        zeta = np.arange(-m, m + 1) * h
        values.append(max_ln_v_curvature(eval_model1(zeta, p)))
    return values


def suite_bounds(report: VerifyReport, params: ModelParams | None = None) -> None:
    """Crowd-effect solution inside the exponential envelope; curvature <= B."""
    if params is not None:
        bounds_precheck(params)
    fine, coarse, baseline, p = envelope_runs(params=params)
    br = check_bounds(fine, baseline, p, coarse_traj=coarse)
    report.bound_violations = asdict(br)
    report.add(_check("envelope.model2.violations", br.violations, 0, "==",
                      worst_margin=br.worst_margin, worst_margin_unslacked=br.worst_margin_unslacked,
                      lambda_plus=p.lambda_plus, lambda_minus=p.lambda_minus, t_end=br.times[-1]))
    report.add(_check("envelope.model2.substrate", br.v_violations, 0, "==", gated=False))

    spacings = (0.2, 0.1, 0.05, 0.025, 0.0125)
    values = curvature_refinement(p, spacings)
    steps = np.diff(values)
    report.add(_check("curvature.model1.max", max(values) / p.B, 1 + 1e-3, "<=",
                      B=p.B, estimates=values, spacings=list(spacings)))
    report.add(_check("curvature.model1.monotone", -float(steps.min()), 1e-4, "<="))
    report.add(_check("curvature.model1.converged", abs(values[-1] - p.B) / p.B, 1e-3))


def speed_run(dx: float = 0.01, t_end: float = 1.0, n_snapshots: int = 10, scheme: str = "upwind"):
    kind = ModelKind.LimitedNoCrowd
    p = reference_params()
    grid = traveling_grid(p, dx, t_end)
    cfg = SolverConfig.cfl(grid, p, t_end, n_snapshots=n_snapshots, scheme=scheme)
    return run(init_state(grid, kind, p), kind, p, cfg), p


def suite_speed(report: VerifyReport, params: ModelParams | None = None) -> None:
    """The limited-substrate band travels at c and keeps its shape."""
    snaps, p = speed_run()
    c_est = measure_front_speed(snaps, level=0.5, v_inf=p.v_inf)
    rel = abs(c_est - p.c) / p.c
    final = snaps[-1]
    exact = eval_model4(final.grid.x - p.c * final.t, p).u
    u_max = asymptotics(ModelKind.LimitedNoCrowd, p).u_minus_inf
    shape_err = float(np.max(np.abs(final.u - exact))) / u_max
    report.front_speed = {"c_est": c_est, "relative_error": rel, "t_end": final.t, "dx": final.grid.dx}
    report.add(_check("speed.model4.front", rel, 0.02, c_est=c_est))
    report.add(_check("speed.model4.shape", shape_err, 0.02, t_end=final.t))


def translated_errors(scheme: str, spacings, t_end: float = 0.1):
    """L-inf errors against the translated model-4 profile (global, front, far)."""
    kind = ModelKind.LimitedNoCrowd
    p = reference_params()
    out = []
    for dx in spacings:
        grid = traveling_grid(p, dx, t_end)
        cfg = SolverConfig.cfl(grid, p, t_end, scheme=scheme)
        final = run(init_state(grid, kind, p), kind, p, cfg)[-1]
        zeta = grid.x - p.c * final.t
        err = np.abs(final.u - eval_model4(zeta, p).u)
        front = np.abs(zeta) <= 2.0 * p.band_width
        out.append((float(err.max()), float(err[front].max()), float(err[~front].max())))
    return out


def kernel_discrepancies(taus=(0.05, 0.025, 0.0125), t_end: float = 0.25, dx: float = 0.02,
                         kind: ModelKind = ModelKind.LimitedNoCrowd):
    """Kernel-vs-PDE L-inf(u) at ``t_end`` with drift and spread per hour fixed."""
    ref = reference_params()
    rate_mu, rate_beta = ref.mu / ref.tau, ref.beta / ref.tau
    out = []
    for tau in taus:
        p = ref.replace(tau=tau, mu=rate_mu * tau, beta=rate_beta * tau)
        grid = traveling_grid(p, dx, t_end)
        start = init_state(grid, kind, p)
        ktraj = run_kernel(start, p, t_end, kind=kind)
        cfg = SolverConfig.cfl(grid, p, t_end, scheme="upwind2")
        ptraj = run(start, kind, p, cfg)
        last = compare_to_pde(ktraj, ptraj)[-1]
        out.append(last.linf_u)
    return out


def suite_convergence(report: VerifyReport, params: ModelParams | None = None) -> None:
    """Spatial order of the PDE solver and tau-consistency of the jump kernel."""
    spacings = (0.02, 0.01, 0.005)
    errs2 = translated_errors("upwind2", spacings)
    for region, idx in (("global", 0), ("front", 1), ("far", 2)):
        orders = convergence_order([(h, e[idx]) for h, e in zip(spacings, errs2)])
        report.convergence.append({"scheme": "upwind2", "region": region,
                                   "pairs": [[a, b] for a, b in zip(spacings[:-1], spacings[1:])],
                                   "errors": [e[idx] for e in errs2], "orders": orders})
        if region == "global":
            for (h1, h2), order in zip(zip(spacings[:-1], spacings[1:]), orders):
                report.add(_check(f"convergence.model4.upwind2.{h1:g}-{h2:g}", order, (1.75, 2.25), "in"))
    spacings1 = (0.02, 0.01)
    errs1 = translated_errors("upwind", spacings1)
    for region, idx in (("global", 0), ("front", 1), ("far", 2)):
        orders = convergence_order([(h, e[idx]) for h, e in zip(spacings1, errs1)])
        report.convergence.append({"scheme": "upwind", "region": region,
                                   "pairs": [list(spacings1)], "errors": [e[idx] for e in errs1],
                                   "orders": orders})
        report.add(_check(f"convergence.model4.upwind.{region}", orders[0], (0.75, 1.25), "in", gated=False))

    taus = (0.05, 0.025, 0.0125)
    disc = kernel_discrepancies(taus)
    for (t1, t2), (d1, d2) in zip(zip(taus[:-1], taus[1:]), zip(disc[:-1], disc[1:])):
        report.add(_check(f"kernel.model4.tau{t1:g}-{t2:g}", d1 / d2, (1.5, 3.0), "in",
                          linf_coarse=d1, linf_fine=d2))


_SUITE_FUNCS = {
    "residuals": (suite_residuals,),
    "limits": (suite_limits,),
    "bounds": (suite_bounds,),
    "speed": (suite_speed,),
    "convergence": (suite_convergence,),
}
_SUITE_FUNCS["all"] = tuple(f for name in SUITES[:-1] for f in _SUITE_FUNCS[name])


def run_suite(name: str, params: ModelParams | None = None) -> VerifyReport:
    """Run a named suite.  ``params`` replaces the reference point of the envelope check."""
    if name not in _SUITE_FUNCS:
        raise ValueError(f"unknown suite {name!r}; expected one of {SUITES}")
    report = VerifyReport(suite=name)
    for func in _SUITE_FUNCS[name]:
        func(report, params)
    return report


def bounds_precheck(params: ModelParams) -> None:
    """Reject parameter sets for which the envelope check is meaningless."""
    if params.alpha == 0.0 or abs(params.gamma0 * params.tau - 1.0) < 1e-12:
        raise DegenerateCrowd(
            "gamma0 = 1/tau gives alpha = gamma*tau - beta = 0: the crowd term vanishes and "
            "the crowd-free closed form applies, so there is no envelope to verify"
        )
    derive_params(kind=ModelKind.UnlimitedCrowd, **params.raw())
