"""Pure-numpy implementation of the hot loops.

This module defines the discretisation; ``_core.pyx`` mirrors it
statement for statement and the test-suite checks they agree.

State is ``(u, w)`` with ``w = ln v``.  Boundary nodes of ``u`` are held
fixed (Dirichlet).  ``w`` follows its local ODE in the interior; its end
values move with the linearly extrapolated interior tendency, so a pinned
``u`` at the ends cannot put a kink into ``ln v``.
"""

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

OK, NONFINITE, NEGATIVE = 0, 1, 2

# u may dip below zero by this fraction of max(u) before a step is rejected
NEGATIVITY_RTOL = 1e-10


def pde_rhs(u, w, dx, vb, diff, gamma, k, limited, conservative, order):
    """Semi-discrete right-hand side ``(du/dt, dw/dt)``."""
    n = u.size
    du = np.zeros(n)
    lap_u = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / (dx * dx)
    if conservative:
        a = vb * (w[1:] - w[:-1]) / dx
        left = u[:-1].copy()
        right = u[1:].copy()
        if order == 2:
            left[1:] = 1.5 * u[1:-1] - 0.5 * u[:-2]
            right[:-1] = 1.5 * u[1:-1] - 0.5 * u[2:]
        flux = a * np.where(a >= 0.0, left, right)
        du[1:-1] = -(flux[1:] - flux[:-1]) / dx + diff * lap_u
    else:
        a = vb * (w[2:] - w[:-2]) / (2.0 * dx)
        back = (u[1:-1] - u[:-2]) / dx
        fwd = (u[2:] - u[1:-1]) / dx
        if order == 2:
            back[1:] = (3.0 * u[2:-1] - 4.0 * u[1:-2] + u[:-3]) / (2.0 * dx)
            fwd[:-1] = (-3.0 * u[1:-2] + 4.0 * u[2:-1] - u[3:]) / (2.0 * dx)
        ux = np.where(a >= 0.0, back, fwd)
        lap_w = (w[2:] - 2.0 * w[1:-1] + w[:-2]) / (dx * dx)
        du[1:-1] = -a * ux + diff * lap_u - gamma * u[1:-1] * lap_w
    if limited:
        dw = -k * u
    else:
        dw = -k * u * np.exp(-w)
    extrapolate_ends(dw)
    return du, dw


def extrapolate_ends(a):
    """Overwrite end values by linear extrapolation from the interior."""
    a[0] = 2.0 * a[1] - a[2]
    a[-1] = 2.0 * a[-2] - a[-3]


def advance_pde(u, w, nsteps, dt, dx, vb, diff, gamma, k, limited, conservative, order, lnfloor):
    """Take ``nsteps`` classical RK4 steps in place.

    Returns ``(status, steps_done)``; on failure ``steps_done`` counts the
    steps completed before the failing one.
    """
    args = (dx, vb, diff, gamma, k, limited, conservative, order)
    for step in range(nsteps):
        k1u, k1w = pde_rhs(u, w, *args)
        k2u, k2w = pde_rhs(u + 0.5 * dt * k1u, w + 0.5 * dt * k1w, *args)
        k3u, k3w = pde_rhs(u + 0.5 * dt * k2u, w + 0.5 * dt * k2w, *args)
        k4u, k4w = pde_rhs(u + dt * k3u, w + dt * k3w, *args)
        u += (dt / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        w += (dt / 6.0) * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)
        np.maximum(w, lnfloor, out=w)
        if not (np.all(np.isfinite(u)) and np.all(np.isfinite(w))):
            return NONFINITE, step
        if u.min() < -NEGATIVITY_RTOL * u.max():
            return NEGATIVE, step
    return OK, nsteps


def kernel_convolve(u_pad, means, sigma, dx, radius):
    """Gather ``u`` through a per-node Gaussian jump kernel.

    ``u_pad`` is ``u`` extended by ``radius`` nodes on each side.  The
    kernel at node i has mean ``means[i]`` and is sampled at offsets
    ``j*dx`` for ``|j| <= radius``, then renormalised to unit mass.
    """
    offsets = np.arange(-radius, radius + 1) * dx
    z = (offsets[None, :] - means[:, None]) / sigma
    g = np.exp(-0.5 * z * z)
    windows = sliding_window_view(u_pad, 2 * radius + 1)
    return (g * windows).sum(axis=1) / g.sum(axis=1)
