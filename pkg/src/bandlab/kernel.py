"""Discrete jump-kernel (master equation) integrator.

One step of length tau replaces the organism density by its average over
Gaussian jumps whose mean is the chemotactic displacement
``-beta (ln v)_x`` and whose variance is the motility ``mu``, then adds the
quorum source ``-tau*gamma*u*(ln v)_xx``.  Substrate is consumed over the
same interval by a forward-Euler update.

The jump is read in Einstein's convention: the density at ``x`` after one
step is the average of ``u(x + Delta)``.  Organisms therefore move by
``-Delta`` on average, which is up the substrate gradient.  No PDE is discretised here; the
continuum equations only emerge as tau -> 0, which is what
``compare_to_pde`` measures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend, _purepy
from .errors import GridMismatch, NegativityBreach, ResolutionError, StabilityViolation
from .params import ModelKind, ModelParams, check_kind, effective_gamma
from .pde import FieldState

MIN_SIGMA_NODES = 3.0


@dataclass(frozen=True)
class KernelSpec:
    family: str = "gaussian"
    truncation_radius: float = 6.0  # in units of sigma

    def __post_init__(self):
        if self.family != "gaussian":
            raise ValueError(f"unsupported kernel family {self.family!r}")
        if self.truncation_radius < 4.0:
            raise ValueError("truncation radius must be at least 4 sigma")


@dataclass(frozen=True)
class KernelWeights:
    """Per-node kernel sampled at offsets ``offsets * dx``.

    Row i of ``weights`` is the kernel of node i; rows sum to one.
    ``tail_mass`` is the largest mass discarded by truncation before
    renormalisation.
    """

    offsets: np.ndarray
    weights: np.ndarray
    means: np.ndarray
    dx: float
    tail_mass: float

    def moments(self) -> tuple[np.ndarray, np.ndarray]:
        """First moment and second central moment of each row."""
        delta = self.offsets * self.dx
        m1 = self.weights @ delta
        m2 = self.weights @ delta**2 - m1**2
        return m1, m2


def log_gradients(state: FieldState) -> tuple[np.ndarray, np.ndarray]:
    """Centred first and second differences of ``ln v`` (one-sided at ends)."""
    w = np.log(state.v)
    dx = state.grid.dx
    dw = np.gradient(w, dx, edge_order=2)
    d2w = np.empty_like(w)
    d2w[1:-1] = (w[2:] - 2.0 * w[1:-1] + w[:-2]) / dx**2
    d2w[0] = d2w[1]
    d2w[-1] = d2w[-2]
    return dw, d2w


def _sigma(params: ModelParams, dx: float) -> float:
    sigma = math.sqrt(params.mu)
    if sigma < MIN_SIGMA_NODES * dx:
        raise ResolutionError(
            f"jump spread sqrt(mu) = {sigma:.4g} cm is below {MIN_SIGMA_NODES:g}*dx = {MIN_SIGMA_NODES * dx:.4g} cm"
        )
    return sigma


def _radius(means: np.ndarray, sigma: float, dx: float, spec: KernelSpec) -> int:
    reach = spec.truncation_radius * sigma + float(np.max(np.abs(means), initial=0.0))
    return int(math.ceil(reach / dx))


def build_kernel(state: FieldState, params: ModelParams, spec: KernelSpec = KernelSpec()) -> KernelWeights:
    """Midpoint-sampled, renormalised Gaussian jump kernel at every node."""
    dx = state.grid.dx
    sigma = _sigma(params, dx)
    dw, _ = log_gradients(state)
    means = -params.beta * dw
    radius = _radius(means, sigma, dx, spec)
    offsets = np.arange(-radius, radius + 1)
    z = (offsets[None, :] * dx - means[:, None]) / sigma
    raw = np.exp(-0.5 * z * z) * dx / (sigma * math.sqrt(2.0 * math.pi))
    mass = raw.sum(axis=1)
    return KernelWeights(
        offsets=offsets,
        weights=raw / mass[:, None],
        means=means,
        dx=dx,
        tail_mass=float(np.max(np.abs(1.0 - mass))),
    )


def kernel_step(state: FieldState, params: ModelParams, spec: KernelSpec = KernelSpec(),
                kind: ModelKind = ModelKind.UnlimitedNoCrowd, v_floor: float = 1e-12) -> FieldState:
    """Advance the density by one collision interval tau.

    End nodes of ``u`` are kept fixed; beyond the domain ``u`` is
    continued by its end values.  The substrate update is the explicit
    consumption step written as a change of ``ln v``, with the end-node
    change extrapolated from the interior as in the PDE solver.
    """
    check_kind(params, kind)
    dx = state.grid.dx
    sigma = _sigma(params, dx)
    dw, d2w = log_gradients(state)
    means = -params.beta * dw
    radius = _radius(means, sigma, dx, spec)
    u, v = state.u, state.v

    u_pad = np.pad(u, radius, mode="edge")
    u_new = _backend.kernel_convolve(u_pad, np.ascontiguousarray(means), sigma, dx, radius)
    u_new -= params.tau * effective_gamma(params, kind) * u * d2w
    u_new[0], u_new[-1] = u[0], u[-1]

    if kind.limited:
        factor = 1.0 - params.tau * params.k * u
    else:
        factor = 1.0 - params.tau * params.k * u / v
    dlnv = np.log(np.maximum(factor, 1e-300))
    _purepy.extrapolate_ends(dlnv)
    v_new = np.maximum(v * np.exp(dlnv), v_floor * params.v_inf)

    t_new = state.t + params.tau
    if not (np.all(np.isfinite(u_new)) and np.all(np.isfinite(v_new))):
        raise StabilityViolation("non-finite density after jump step", t=state.t)
    if u_new.min() < -1e-10 * u_new.max():
        raise NegativityBreach("organism density went negative", t=state.t)
    return FieldState(state.grid, t_new, u_new, v_new)


def run_kernel(state: FieldState, params: ModelParams, t_end: float, spec: KernelSpec = KernelSpec(),
               kind: ModelKind = ModelKind.UnlimitedNoCrowd, v_floor: float = 1e-12) -> list[FieldState]:
    """Apply ``floor(t_end/tau)`` jump steps, keeping every state.

    Times are ``state.t + m*tau`` (multiplied, not accumulated).
    """
    nsteps = int(math.floor(t_end / params.tau + 1e-9))
    snaps = [state]
    current = state
    for m in range(1, nsteps + 1):
        current = kernel_step(current, params, spec, kind, v_floor)
        current = FieldState(current.grid, state.t + m * params.tau, current.u, current.v)
        snaps.append(current)
    return snaps


@dataclass(frozen=True)
class Discrepancy:
    t: float
    linf_u: float
    l2_u: float
    linf_v: float
    l2_v: float


def compare_to_pde(kernel_traj: list[FieldState], pde_traj: list[FieldState],
                   rtol_time: float = 1e-9) -> list[Discrepancy]:
    """Norms of the field differences at every time both trajectories share."""
    if not kernel_traj or not pde_traj:
        return []
    if kernel_traj[0].grid != pde_traj[0].grid:
        raise GridMismatch("trajectories live on different grids")
    dx = kernel_traj[0].grid.dx
    out = []
    pde_times = np.array([s.t for s in pde_traj])
    for ks in kernel_traj:
        if ks.grid != pde_traj[0].grid:
            raise GridMismatch("kernel trajectory changes grid")
        idx = np.nonzero(np.abs(pde_times - ks.t) <= rtol_time * max(1.0, abs(ks.t)))[0]
        if idx.size == 0:
            continue
        ps = pde_traj[idx[0]]
        du = ks.u - ps.u
        dv = ks.v - ps.v
        out.append(Discrepancy(
            t=ks.t,
            linf_u=float(np.max(np.abs(du))),
            l2_u=float(np.sqrt(np.sum(du * du) * dx)),
            linf_v=float(np.max(np.abs(dv))),
            l2_v=float(np.sqrt(np.sum(dv * dv) * dx)),
        ))
    return out
