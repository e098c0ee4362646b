"""Method-of-lines finite-difference solver for the four band systems.

The organism equation is

    u_t = -(beta/tau) (ln v)_x u_x + (mu/2tau) u_xx - gamma u (ln v)_xx

for the crowd kinds; the crowd-free kinds use the conservative form
``u_t = -(beta/tau) (u (ln v)_x)_x + (mu/2tau) u_xx``.  Substrate is
consumed locally, ``v_t = -k u`` or ``v_t = -k u v``.  Drift is upwinded
against the sign of ``(ln v)_x``; diffusion and curvature of ``ln v`` use
three-point centred differences.  Time stepping is classical RK4.

Internally substrate is carried as ``ln v``.  ``u`` is held at its
end-node values (the asymptotes for analytic initial data).  The substrate
equation has no spatial derivative, but ``u`` pinned at an end node would
freeze ``v`` there while its neighbour is still consumed; the end values of
``ln v`` therefore follow the linearly extrapolated interior tendency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import _backend
from .analytic import asymptotics, eval_model1, evaluate
from .errors import GridTooCoarse, NegativityBreach, NoCrossing, StabilityViolation
from .params import ModelKind, ModelParams, check_kind, effective_gamma

CFL_DIFFUSION = 0.4
INITS = ("analytic", "step", "gaussian-bump")
SCHEMES = {"upwind": 1, "upwind2": 2}


@dataclass(frozen=True)
class Grid1D:
    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if not self.x_max > self.x_min:
            raise ValueError("grid needs x_max > x_min")
        if self.n < 16:
            raise ValueError(f"grid needs at least 16 nodes, got {self.n}")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n)

    @classmethod
    def from_spacing(cls, x_min: float, x_max: float, dx: float) -> "Grid1D":
        n = int(round((x_max - x_min) / dx)) + 1
        return cls(x_min, x_min + (n - 1) * dx, n)

    def refined(self) -> "Grid1D":
        """Same domain with the spacing halved (nodes nest)."""
        return Grid1D(self.x_min, self.x_max, 2 * self.n - 1)


@dataclass(frozen=True)
class FieldState:
    grid: Grid1D
    t: float
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        for name in ("u", "v"):
            a = np.array(getattr(self, name), dtype=float)
            if a.shape != (self.grid.n,):
                raise ValueError(f"{name} must have one value per grid node")
            a.setflags(write=False)
            object.__setattr__(self, name, a)


@dataclass(frozen=True)
class SolverConfig:
    """Time-stepping controls.

    ``snapshot_every`` counts steps between stored states; 0 stores only
    the initial and final state.  ``scheme`` selects first-order
    (``upwind``) or second-order upwind-biased (``upwind2``) drift.
    """

    dt: float
    t_end: float
    v_floor: float = 1e-12
    boundary: str = "clamp-to-asymptote"
    snapshot_every: int = 0
    scheme: str = "upwind"

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.t_end < 0:
            raise ValueError("t_end must be non-negative")
        if self.boundary != "clamp-to-asymptote":
            raise ValueError(f"unsupported boundary {self.boundary!r}")
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {sorted(SCHEMES)}")
        if not 0 < self.v_floor < 1:
            raise ValueError("v_floor must lie in (0, 1)")

    @property
    def nsteps(self) -> int:
        return int(math.ceil(self.t_end / self.dt - 1e-9))

    @classmethod
    def cfl(cls, grid: Grid1D, params: ModelParams, t_end: float, *, n_snapshots: int = 1,
            safety: float = CFL_DIFFUSION, **kwargs) -> "SolverConfig":
        """Largest stable ``dt`` that divides ``t_end`` into whole steps.

        ``n_snapshots`` is the number of stored states after t = 0; it is
        honoured exactly when it divides the step count.
        """
        dt_max = max_stable_dt(grid, params, safety)
        if t_end <= 0:
            return cls(dt=dt_max, t_end=0.0, **kwargs)
        nsteps = int(math.ceil(t_end / dt_max - 1e-12))
        if n_snapshots > 1:
            nsteps = n_snapshots * int(math.ceil(nsteps / n_snapshots))
        every = max(1, nsteps // max(1, n_snapshots))
        return cls(dt=t_end / nsteps, t_end=t_end, snapshot_every=every, **kwargs)

    def check_stability(self, grid: Grid1D, params: ModelParams) -> None:
        limit = max_stable_dt(grid, params)
        if self.dt > limit * (1 + 1e-12):
            raise StabilityViolation(
                f"dt = {self.dt:.6g} h exceeds the diffusion limit {limit:.6g} h "
                f"(0.4*dx^2*tau/mu with dx = {grid.dx:.6g} cm)"
            )


def max_stable_dt(grid: Grid1D, params: ModelParams, safety: float = CFL_DIFFUSION) -> float:
    return safety * grid.dx**2 * params.tau / params.mu


def traveling_grid(params: ModelParams, dx: float, t_end: float = 0.0, margin: float = 10.0) -> Grid1D:
    """Domain holding the band plus ``margin`` band widths on both sides.

    The band starts centred on x = 0 and moves ``c*t_end`` to the right.
    """
    w = margin * params.band_width
    return Grid1D.from_spacing(-w, w + params.c * t_end, dx)


def _boundary_values(kind: ModelKind, params: ModelParams):
    if kind is ModelKind.UnlimitedCrowd:
        kind = ModelKind.UnlimitedNoCrowd
    return asymptotics(kind, params)


def init_state(grid: Grid1D, kind: ModelKind, params: ModelParams, init: str = "analytic", *,
               C7: float = 1.0, v_floor: float = 1e-12, x0: float = 0.0,
               mass: float = 1.0, width: float | None = None) -> FieldState:
    """Initial fields at t = 0.

    ``analytic`` samples the closed form at ``zeta = x`` (the model-1
    baseline for the unlimited crowd system) and pins the end nodes to the
    asymptotes.  ``step`` has no organisms and a substrate edge at ``x0``
    ramped over 4 nodes.  ``gaussian-bump`` places organisms of total
    ``mass`` (trapezoid rule) around ``x0`` in uniform substrate.
    """
    check_kind(params, kind)
    if params.band_width / grid.dx < 8:
        raise GridTooCoarse(
            f"band width {params.band_width:.4g} cm spans fewer than 8 nodes at dx = {grid.dx:.4g} cm"
        )
    x = grid.x
    floor = v_floor * params.v_inf
    if init == "analytic":
        if kind is ModelKind.UnlimitedCrowd:
            prof = eval_model1(x, params)
        else:
            prof = evaluate(kind, x, params, C7)
        u = prof.u.copy()
        v = prof.v.copy()
        lim = _boundary_values(kind, params)
        u[0], u[-1] = lim.u_minus_inf, lim.u_plus_inf
        v[-1] = lim.v_plus_inf
    elif init == "step":
        u = np.zeros(grid.n)
        ramp = np.clip((x - x0) / (4.0 * grid.dx) + 0.5, 0.0, 1.0)
        v = params.v_inf * ramp
    elif init == "gaussian-bump":
        width = params.band_width if width is None else float(width)
        u = np.exp(-0.5 * ((x - x0) / width) ** 2)
        u *= mass / np.trapezoid(u, x)
        v = np.full(grid.n, params.v_inf)
    else:
        raise ValueError(f"init must be one of {INITS}, got {init!r}")
    return FieldState(grid, 0.0, u, np.maximum(v, floor))


def _solver_args(kind: ModelKind, params: ModelParams, config: SolverConfig):
    return dict(
        vb=params.beta / params.tau,
        diff=params.mu / (2.0 * params.tau),
        gamma=effective_gamma(params, kind),
        k=params.k,
        limited=kind.limited,
        conservative=not kind.crowd,
        order=SCHEMES[config.scheme],
        lnfloor=math.log(config.v_floor * params.v_inf),
    )


def _advance(state: FieldState, nsteps: int, kind: ModelKind, params: ModelParams,
             config: SolverConfig, t0_steps: int, t_origin: float) -> tuple[FieldState, int]:
    u = state.u.copy()
    w = np.log(state.v)
    status, done = _backend.advance_pde(
        u, w, nsteps, config.dt, state.grid.dx, **_solver_args(kind, params, config)
    )
    if status != _backend.OK:
        t_fail = t_origin + (t0_steps + done) * config.dt
        if status == _backend.NEGATIVE:
            raise NegativityBreach("organism density went negative", t=t_fail)
        raise StabilityViolation("non-finite field values", t=t_fail)
    steps = t0_steps + nsteps
    return FieldState(state.grid, t_origin + steps * config.dt, u, np.exp(w)), steps


def step(state: FieldState, kind: ModelKind, params: ModelParams, config: SolverConfig) -> FieldState:
    """Advance one time step ``config.dt``."""
    check_kind(params, kind)
    config.check_stability(state.grid, params)
    new, _ = _advance(state, 1, kind, params, config, 0, state.t)
    return new


def run(state: FieldState, kind: ModelKind, params: ModelParams, config: SolverConfig) -> list[FieldState]:
    """Integrate to ``config.t_end``; returns the initial state and snapshots.

    Snapshot times are ``state.t + m*dt`` computed by multiplication, so no
    time drift accumulates.  The final state is always included.
    """
    check_kind(params, kind)
    config.check_stability(state.grid, params)
    total = config.nsteps
    every = config.snapshot_every or max(total, 1)
    snaps = [state]
    current, done = state, 0
    while done < total:
        chunk = min(every, total - done)
        current, done = _advance(current, chunk, kind, params, config, done, state.t)
        snaps.append(current)
    return snaps


def level_crossing(x: np.ndarray, v: np.ndarray, level: float) -> float:
    """First position where ``v`` rises through ``level`` (linear interpolation)."""
    above = np.nonzero(v >= level)[0]
    if above.size == 0 or above[0] == 0:
        raise NoCrossing(f"profile does not cross level {level:.6g}")
    i = above[0]
    return x[i - 1] + (level - v[i - 1]) * (x[i] - x[i - 1]) / (v[i] - v[i - 1])


def measure_front_speed(snapshots: list[FieldState], level: float = 0.5, v_inf: float | None = None) -> float:
    """Least-squares slope of the substrate front position against time.

    ``level`` is a fraction of ``v_inf`` (default: the largest substrate
    value of the first snapshot).
    """
    if len(snapshots) < 3:
        raise ValueError("front speed needs at least 3 snapshots")
    if v_inf is None:
        v_inf = float(snapshots[0].v.max())
    t = np.array([s.t for s in snapshots])
    pos = np.array([level_crossing(s.grid.x, s.v, level * v_inf) for s in snapshots])
    slope, _ = np.polyfit(t, pos, 1)
    return float(slope)


def with_time(state: FieldState, t: float) -> FieldState:
    return replace(state, t=float(t))
