import json

import numpy as np
import pytest

from bandlab.analytic import Profile, eval_model1, evaluate
from bandlab.errors import DegenerateCrowd, DegenerateInput, GridMismatch, UnsupportedKind
from bandlab.params import ModelKind
from bandlab.pde import Grid1D, SolverConfig, init_state, run, traveling_grid
from bandlab.verify import (
    CheckResult,
    VerifyReport,
    check_bounds,
    convergence_order,
    curvature_refinement,
    golden_section_max,
    max_ln_v_curvature,
    ode_residual,
    run_suite,
)

from conftest import params

ZETA = np.linspace(-20.0, 20.0, 40001)


def test_convergence_order_examples():
    assert convergence_order([(0.02, 4e-4), (0.01, 1e-4)]) == pytest.approx([2.0])
    assert len(convergence_order([(0.4, 1.0), (0.2, 0.6)])) == 1
    assert convergence_order([(0.3, 9.0), (0.1, 1.0)]) == pytest.approx([2.0])
    with pytest.raises(DegenerateInput):
        convergence_order([(0.02, 1e-4), (0.01, 0.0)])
    with pytest.raises(DegenerateInput):
        convergence_order([(0.02, 1e-4)])
    with pytest.raises(DegenerateInput):
        convergence_order([(0.01, 1e-4), (0.02, 1e-5)])


@pytest.mark.parametrize("kind", [ModelKind.UnlimitedNoCrowd, ModelKind.LimitedCrowd, ModelKind.LimitedNoCrowd])
def test_residuals_small_for_closed_forms(kind):
    prof = evaluate(kind, ZETA, params())
    assert ode_residual(prof, method="fd").linf < 1e-6
    assert ode_residual(prof, method="analytic").linf < 1e-8


def test_residual_detects_corruption():
    prof = evaluate(ModelKind.LimitedNoCrowd, ZETA, params())
    bad = Profile(prof.zeta, prof.u * 1.01, prof.v, prof.params, prof.kind)
    for method in ("fd", "analytic"):
        res = ode_residual(bad, method=method)
        assert res.linf > 1e-3 * res.scale


def test_residual_rejects_crowd_unlimited_and_nonuniform_grid():
    prof = eval_model1(ZETA, params())
    with pytest.raises(UnsupportedKind):
        ode_residual(prof, kind=ModelKind.UnlimitedCrowd)
    warped = eval_model1(np.sinh(np.linspace(-3, 3, 101)), params())
    with pytest.raises(ValueError):
        ode_residual(warped, method="fd")


def test_curvature_bound_and_constant_v():
    p = params()
    values = curvature_refinement(p)
    assert all(v <= p.B * (1 + 1e-3) for v in values)
    assert all(b >= a - 1e-4 for a, b in zip(values, values[1:]))
    assert values[-1] == pytest.approx(p.B, rel=1e-3)
    flat = Profile(ZETA[:11], np.zeros(11), np.full(11, 0.5), p, ModelKind.LimitedNoCrowd)
    assert max_ln_v_curvature(flat) == 0.0


def test_golden_section():
    assert golden_section_max(lambda z: -(z - 1.234) ** 2, -10, 10) == pytest.approx(1.234, abs=1e-8)


def _short_envelope_run(p, dx=0.05, t_end=0.05):
    kind = ModelKind.UnlimitedCrowd
    coarse = Grid1D.from_spacing(-10 * p.band_width, 10 * p.band_width + p.c * t_end, 2 * dx)
    fine = coarse.refined()
    trajs = []
    for g, scale in ((fine, 1), (coarse, 4)):
        cfg = SolverConfig.cfl(fine, p, t_end, n_snapshots=2)
        cfg = SolverConfig(dt=cfg.dt * scale, t_end=t_end, snapshot_every=cfg.snapshot_every // scale)
        trajs.append(run(init_state(g, kind, p), kind, p, cfg))
    return trajs[0], trajs[1], eval_model1(fine.x, p)


def test_check_bounds_short_run():
    p = params()
    fine, coarse, base = _short_envelope_run(p)
    rep = check_bounds(fine, base, p, coarse_traj=coarse)
    assert rep.violations == 0
    assert rep.times == pytest.approx([0.0, 0.025, 0.05])
    assert all(s >= 1e-6 for s in rep.slack)
    # the initial snapshot is the baseline itself
    first = check_bounds(fine[:1], base, p)
    assert first.violations == 0 and first.worst_margin_unslacked >= -1e-8


def test_check_bounds_catches_outsider():
    p = params()
    fine, _, base = _short_envelope_run(p)
    from bandlab.pde import FieldState

    last = fine[-1]
    pumped = FieldState(last.grid, last.t, last.u * 1.05, last.v)
    assert check_bounds([pumped], base, p).violations > 0


def test_check_bounds_errors():
    p = params()
    fine, coarse, base = _short_envelope_run(p)
    with pytest.raises(DegenerateCrowd):
        check_bounds(fine, base, params(gamma0=20.0))
    g = traveling_grid(p, 0.07)
    odd = [init_state(g, ModelKind.UnlimitedCrowd, p)]
    with pytest.raises(GridMismatch):
        check_bounds(fine, base, p, coarse_traj=odd)


def test_report_serialisation():
    rep = VerifyReport(suite="demo")
    rep.add(CheckResult("a", 1e-9, 1e-6, "<", True))
    rep.add(CheckResult("b", 3.0, [1.5, 3.0], "in", False, gated=False))
    assert rep.passed
    doc = json.loads(rep.to_json())
    assert doc["passed"] is True and [c["name"] for c in doc["checks"]] == ["a", "b"]
    text = rep.to_text()
    assert "suite demo: PASS" in text and "FAIL" in text
    rep.add(CheckResult("c", 1.0, 0.5, "<", False))
    assert not rep.passed


def test_fast_suites_contents():
    rep = run_suite("residuals")
    names = [c.name for c in rep.checks]
    for m in (1, 3, 4):
        assert f"residual.model{m}.fd" in names
    assert "umax.model1.location" in names
    assert rep.passed
    lim = run_suite("limits")
    assert {c.name for c in lim.checks} >= {"limits.model1.u", "limits.model3.v", "limits.model4.plateau"}
    assert all(isinstance(c.passed, bool) and c.tolerance is not None for c in lim.checks)
    with pytest.raises(ValueError):
        run_suite("nonsense")
