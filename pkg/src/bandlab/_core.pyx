# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled counterparts of the loops in ``_purepy``.

Same discretisation, same argument order.  The integration loop runs
without the GIL so independent runs can share a thread pool.
"""

import numpy as np
from libc.math cimport exp, isfinite

cdef enum:
    OK = 0
    NONFINITE = 1
    NEGATIVE = 2

cdef double NEGATIVITY_RTOL = 1e-10


cdef void _rhs(const double[::1] u, const double[::1] w, double[::1] du, double[::1] dw,
               double[::1] flux, Py_ssize_t n, double dx, double vb, double diff,
               double gamma, double k, bint limited, bint conservative, int order) noexcept nogil:
    cdef Py_ssize_t i
    cdef double inv_dx = 1.0 / dx
    cdef double inv_dx2 = 1.0 / (dx * dx)
    cdef double a, uf, ux, lap_u, lap_w

    if conservative:
        for i in range(n - 1):
            a = vb * (w[i + 1] - w[i]) * inv_dx
            if a >= 0.0:
                if order == 2 and i >= 1:
                    uf = 1.5 * u[i] - 0.5 * u[i - 1]
                else:
                    uf = u[i]
            else:
                if order == 2 and i + 2 <= n - 1:
                    uf = 1.5 * u[i + 1] - 0.5 * u[i + 2]
                else:
                    uf = u[i + 1]
            flux[i] = a * uf
        for i in range(1, n - 1):
            lap_u = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * inv_dx2
            du[i] = -(flux[i] - flux[i - 1]) * inv_dx + diff * lap_u
    else:
        for i in range(1, n - 1):
            a = vb * (w[i + 1] - w[i - 1]) / (2.0 * dx)
            if a >= 0.0:
                if order == 2 and i >= 2:
                    ux = (3.0 * u[i] - 4.0 * u[i - 1] + u[i - 2]) / (2.0 * dx)
                else:
                    ux = (u[i] - u[i - 1]) * inv_dx
            else:
                if order == 2 and i <= n - 3:
                    ux = (-3.0 * u[i] + 4.0 * u[i + 1] - u[i + 2]) / (2.0 * dx)
                else:
                    ux = (u[i + 1] - u[i]) * inv_dx
            lap_u = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * inv_dx2
            lap_w = (w[i + 1] - 2.0 * w[i] + w[i - 1]) * inv_dx2
            du[i] = -a * ux + diff * lap_u - gamma * u[i] * lap_w
    du[0] = 0.0
    du[n - 1] = 0.0
    if limited:
        for i in range(n):
            dw[i] = -k * u[i]
    else:
        for i in range(n):
            dw[i] = -k * u[i] * exp(-w[i])
    dw[0] = 2.0 * dw[1] - dw[2]
    dw[n - 1] = 2.0 * dw[n - 2] - dw[n - 3]


def advance_pde(double[::1] u, double[::1] w, Py_ssize_t nsteps, double dt, double dx,
                double vb, double diff, double gamma, double k, bint limited,
                bint conservative, int order, double lnfloor):
    """Take ``nsteps`` RK4 steps in place; returns ``(status, steps_done)``."""
    cdef Py_ssize_t n = u.shape[0]
    cdef Py_ssize_t i, step
    cdef double[:, ::1] buf = np.empty((11, n))
    cdef double[::1] k1u = buf[0], k1w = buf[1], k2u = buf[2], k2w = buf[3]
    cdef double[::1] k3u = buf[4], k3w = buf[5], k4u = buf[6], k4w = buf[7]
    cdef double[::1] tu = buf[8], tw = buf[9], flux = buf[10]
    cdef double h = 0.5 * dt, sixth = dt / 6.0
    cdef double umax, umin
    cdef int status = OK
    cdef Py_ssize_t done = nsteps

    with nogil:
        for step in range(nsteps):
            _rhs(u, w, k1u, k1w, flux, n, dx, vb, diff, gamma, k, limited, conservative, order)
            for i in range(n):
                tu[i] = u[i] + h * k1u[i]
                tw[i] = w[i] + h * k1w[i]
            _rhs(tu, tw, k2u, k2w, flux, n, dx, vb, diff, gamma, k, limited, conservative, order)
            for i in range(n):
                tu[i] = u[i] + h * k2u[i]
                tw[i] = w[i] + h * k2w[i]
            _rhs(tu, tw, k3u, k3w, flux, n, dx, vb, diff, gamma, k, limited, conservative, order)
            for i in range(n):
                tu[i] = u[i] + dt * k3u[i]
                tw[i] = w[i] + dt * k3w[i]
            _rhs(tu, tw, k4u, k4w, flux, n, dx, vb, diff, gamma, k, limited, conservative, order)

            umax = -1e308
            umin = 1e308
            for i in range(n):
                u[i] += sixth * (k1u[i] + 2.0 * k2u[i] + 2.0 * k3u[i] + k4u[i])
                w[i] += sixth * (k1w[i] + 2.0 * k2w[i] + 2.0 * k3w[i] + k4w[i])
                if w[i] < lnfloor:
                    w[i] = lnfloor
                if not (isfinite(u[i]) and isfinite(w[i])):
                    status = NONFINITE
                if u[i] > umax:
                    umax = u[i]
                if u[i] < umin:
                    umin = u[i]
            if status == OK and umin < -NEGATIVITY_RTOL * umax:
                status = NEGATIVE
            if status != OK:
                done = step
                break
    return status, done


def kernel_convolve(const double[::1] u_pad, const double[::1] means, double sigma,
                    double dx, Py_ssize_t radius):
    """Per-node Gaussian gather, renormalised; see ``_purepy.kernel_convolve``."""
    cdef Py_ssize_t n = means.shape[0]
    cdef Py_ssize_t i, j
    cdef double z, g, total, acc
    cdef double inv_sigma = 1.0 / sigma
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    with nogil:
        for i in range(n):
            total = 0.0
            acc = 0.0
            for j in range(-radius, radius + 1):
                z = (j * dx - means[i]) * inv_sigma
                g = exp(-0.5 * z * z)
                total += g
                acc += g * u_pad[i + radius + j]
            out[i] = acc / total
    return out_arr
