import numpy as np
import pytest

from bandlab.analytic import eval_model3
from bandlab.io import atomic_write_text, read_profile, read_trajectory, write_profile, write_trajectory
from bandlab.params import ModelKind
from bandlab.pde import SolverConfig, init_state, run, traveling_grid

from conftest import params


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_profile_round_trip_is_exact(tmp_path, fmt):
    p = params(tau=0.005)
    prof = eval_model3(np.linspace(-3, 3, 61) / 7.0, p, C7=2.0)
    path = write_profile(prof, tmp_path / f"p.{fmt}", fmt, {"u_normalized": prof.u / p.Q1})
    back = read_profile(path)
    assert back.kind is ModelKind.LimitedCrowd and back.params == p
    assert np.array_equal(back.zeta, prof.zeta)
    assert np.array_equal(back.u, prof.u)
    assert np.array_equal(back.v, prof.v)


def test_profile_csv_header(tmp_path):
    prof = eval_model3(np.linspace(-1, 1, 5), params())
    text = write_profile(prof, tmp_path / "p.csv").read_text()
    header = [line for line in text.splitlines() if not line.startswith("#")][0]
    assert header == "zeta,u,v"


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_trajectory_round_trip(tmp_path, fmt):
    p = params()
    g = traveling_grid(p, 0.05, 0.05)
    cfg = SolverConfig.cfl(g, p, 0.05, n_snapshots=2)
    snaps = run(init_state(g, ModelKind.LimitedNoCrowd, p), ModelKind.LimitedNoCrowd, p, cfg)
    path = write_trajectory(snaps, tmp_path / f"t.{fmt}", fmt, engine="pde")
    back, engine = read_trajectory(path)
    assert engine == "pde" and len(back) == 3
    for a, b in zip(snaps, back):
        assert a.t == b.t and a.grid == b.grid
        assert np.array_equal(a.u, b.u) and np.array_equal(a.v, b.v)
    if fmt == "csv":
        assert path.read_text().count("# t=") == 3


def test_atomic_write_leaves_no_temp_files(tmp_path):
    atomic_write_text(tmp_path / "sub" / "x.txt", "hello\n")
    assert (tmp_path / "sub" / "x.txt").read_text() == "hello\n"
    assert [f.name for f in (tmp_path / "sub").iterdir()] == ["x.txt"]
