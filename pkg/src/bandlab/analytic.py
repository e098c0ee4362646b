"""Closed-form traveling-band profiles and the crowd-effect envelope.

Profiles are functions of the traveling coordinate ``zeta = x - c*t``.
Every exponential ``exp(+-s*zeta)`` with ``s = 2*tau*c/mu`` is evaluated
through ``logaddexp`` so the far tails reach their limits without overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ConstraintViolation, DegenerateCrowd, NoCrossing, NonPositiveParameter, UnsupportedKind
from .params import ModelKind, ModelParams, check_kind


@dataclass(frozen=True)
class Profile:
    """A sampled traveling-band profile.

    ``v`` is positive in exact arithmetic; far in the rear tail it may
    underflow to 0.0 in floating point.
    """

    zeta: np.ndarray
    u: np.ndarray
    v: np.ndarray
    params: ModelParams
    kind: ModelKind

    def __post_init__(self):
        arrays = []
        for name in ("zeta", "u", "v"):
            a = np.array(getattr(self, name), dtype=float)
            a.setflags(write=False)
            object.__setattr__(self, name, a)
            arrays.append(a)
        zeta, u, v = arrays
        if zeta.ndim != 1 or zeta.size < 2:
            raise ValueError("profile needs at least two samples")
        if u.shape != zeta.shape or v.shape != zeta.shape:
            raise ValueError("zeta, u and v must have equal length")
        if not np.all(np.diff(zeta) > 0):
            raise ValueError("zeta must be strictly increasing")
        if np.any(u < 0) or np.any(v < 0) or np.any(v > self.params.v_inf * (1 + 1e-12)):
            raise ValueError("profile violates u >= 0, 0 <= v <= v_inf")

    def __len__(self):
        return self.zeta.size


@dataclass(frozen=True)
class BoundPair:
    """Envelope ``exp(lambda_-+ t) * u`` around a crowd-free baseline.

    ``u_minus`` always carries the ``lambda_minus`` factor; which of the two
    is the lower estimate depends on the sign of alpha (see ``lower``).
    """

    u_minus: np.ndarray
    u_plus: np.ndarray
    lambda_minus: float
    lambda_plus: float
    t: float

    @property
    def lower(self) -> np.ndarray:
        return self.u_minus if self.lambda_plus >= 0 else self.u_plus

    @property
    def upper(self) -> np.ndarray:
        return self.u_plus if self.lambda_plus >= 0 else self.u_minus


class Asymptotes(NamedTuple):
    u_minus_inf: float
    u_plus_inf: float
    v_minus_inf: float
    v_plus_inf: float


def _softplus(x):
    # log(1 + exp(x)) without overflow
    return np.logaddexp(0.0, x)


def _sigmoid(x):
    # exp(x) / (1 + exp(x))
    return np.exp(x - _softplus(x))


def _require_d_gt_1(params: ModelParams) -> None:
    if not params.d > 1.0:
        raise ConstraintViolation(f"unlimited-substrate band requires d > 1, got d = {params.d!r}")


def _check_c7(C7: float) -> float:
    C7 = float(C7)
    if not (math.isfinite(C7) and C7 > 0):
        raise NonPositiveParameter("C7", C7)
    return C7


def eval_model1(zeta, params: ModelParams) -> Profile:
    """Crowd-free band with unlimited substrate (normalised member).

    ``v = v_inf (1 + e^{-s zeta})^{-1/(d-1)}`` and ``u = c v' / k``.
    """
    _require_d_gt_1(params)
    zeta = np.asarray(zeta, dtype=float)
    p = 1.0 / (params.d - 1.0)
    x = -params.s * zeta
    L = _softplus(x)
    v = params.v_inf * np.exp(-p * L)
    u = params.Q * p * np.exp(x - params.d * p * L)
    return Profile(zeta, u, v, params, ModelKind.UnlimitedNoCrowd)


def umax_model1(params: ModelParams) -> tuple[float, float]:
    """Location and height of the model-1 organism peak."""
    _require_d_gt_1(params)
    d = params.d
    zeta_star = math.log(1.0 / (d - 1.0)) / params.s
    u_max = params.Q * d ** (-d / (d - 1.0))
    return zeta_star, u_max


def model3_plateau(params: ModelParams) -> float:
    """Rear organism plateau of the limited-substrate crowd band."""
    return 2.0 * params.tau * params.c**2 / (params.k * (params.beta + params.gamma * params.tau))


def eval_model3(zeta, params: ModelParams, C7: float = 1.0) -> Profile:
    """Limited substrate with crowd effect.

    ``C7`` selects the member of the translation family (``C5 = 1/C7``).
    """
    C7 = _check_c7(C7)
    zeta = np.asarray(zeta, dtype=float)
    y = params.s * zeta - math.log(C7)
    expo = params.mu / (params.beta + params.gamma * params.tau)
    u = model3_plateau(params) * np.exp(-_softplus(y))
    v = params.v_inf * np.exp(-expo * _softplus(-y))
    return Profile(zeta, u, v, params, ModelKind.LimitedCrowd)


def eval_model4(zeta, params: ModelParams) -> Profile:
    """Limited substrate without crowd effect."""
    zeta = np.asarray(zeta, dtype=float)
    d = params.d
    y = params.s * zeta - math.log(d)
    u = (params.Q2 / d) * np.exp(-_softplus(y))
    v = params.v_inf * np.exp(-_softplus(-y) / d)
    return Profile(zeta, u, v, params, ModelKind.LimitedNoCrowd)


def evaluate(kind: ModelKind, zeta, params: ModelParams, C7: float = 1.0) -> Profile:
    """Dispatch to the closed form of ``kind``."""
    if kind is ModelKind.UnlimitedNoCrowd:
        return eval_model1(zeta, params)
    if kind is ModelKind.LimitedCrowd:
        return eval_model3(zeta, params, C7)
    if kind is ModelKind.LimitedNoCrowd:
        return eval_model4(zeta, params)
    raise UnsupportedKind("the crowd-effect system with unlimited substrate has no closed form")


def profile_derivatives(kind: ModelKind, zeta, params: ModelParams, C7: float = 1.0) -> dict:
    """Exact ``u, u', u'', v, v', ln v, (ln v)', (ln v)''`` of a closed form."""
    zeta = np.asarray(zeta, dtype=float)
    s = params.s
    if kind is ModelKind.UnlimitedNoCrowd:
        _require_d_gt_1(params)
        p = 1.0 / (params.d - 1.0)
        x = -s * zeta
        sig = _sigmoid(x)
        L = _softplus(x)
        lnv = math.log(params.v_inf) - p * L
        dlnv = p * s * sig
        d2lnv = -p * s * s * sig * (1.0 - sig)
        u = params.Q * p * np.exp(x - params.d * p * L)
        dlnu = -s + params.d * p * s * sig
        d2lnu = -params.d * p * s * s * sig * (1.0 - sig)
        du = u * dlnu
        d2u = u * (d2lnu + dlnu**2)
    elif kind in (ModelKind.LimitedCrowd, ModelKind.LimitedNoCrowd):
        if kind is ModelKind.LimitedCrowd:
            C7 = _check_c7(C7)
            U = model3_plateau(params)
            y = s * zeta - math.log(C7)
            expo = params.mu / (params.beta + params.gamma * params.tau)
        else:
            U = params.Q2 / params.d
            y = s * zeta - math.log(params.d)
            expo = 1.0 / params.d
        sig = _sigmoid(y)
        u = U * (1.0 - sig)
        du = -U * s * sig * (1.0 - sig)
        d2u = -U * s * s * sig * (1.0 - sig) * (1.0 - 2.0 * sig)
        lnv = math.log(params.v_inf) - expo * _softplus(-y)
        dlnv = expo * s * (1.0 - sig)
        d2lnv = -expo * s * s * sig * (1.0 - sig)
    else:
        raise UnsupportedKind(f"no closed form for {kind.value}")
    v = np.exp(lnv)
    return {
        "u": u, "du": du, "d2u": d2u,
        "v": v, "dv": v * dlnv,
        "lnv": lnv, "dlnv": dlnv, "d2lnv": d2lnv,
    }


def bounds_model2(baseline: Profile, t: float, params: ModelParams) -> BoundPair:
    """Scale a crowd-free baseline by ``exp(lambda_-+ t)``.

    The baseline must be the model-1 profile built from the same
    ``tau, mu, c, beta, k, v_inf``; ``params`` supplies gamma0.
    """
    if baseline.kind is not ModelKind.UnlimitedNoCrowd:
        raise UnsupportedKind("envelope baseline must be a model-1 profile")
    check_kind(params, ModelKind.UnlimitedCrowd)
    base = baseline.params
    if any(getattr(base, n) != getattr(params, n) for n in ("tau", "mu", "c", "beta", "k", "v_inf")):
        raise ValueError("baseline was built from different parameters")
    if params.alpha == 0.0:
        raise DegenerateCrowd("alpha = gamma*tau - beta = 0 (gamma0 = 1/tau); use the crowd-free model")
    t = float(t)
    return BoundPair(
        u_minus=math.exp(params.lambda_minus * t) * baseline.u,
        u_plus=math.exp(params.lambda_plus * t) * baseline.u,
        lambda_minus=params.lambda_minus,
        lambda_plus=params.lambda_plus,
        t=t,
    )


def asymptotics(kind: ModelKind, params: ModelParams) -> Asymptotes:
    """Limits ``(u(-inf), u(+inf), v(-inf), v(+inf))`` of the closed form."""
    if kind is ModelKind.UnlimitedCrowd:
        raise UnsupportedKind("only bounds are known for the crowd-effect system with unlimited substrate")
    check_kind(params, kind)
    if kind is ModelKind.UnlimitedNoCrowd:
        rear = 0.0
    elif kind is ModelKind.LimitedCrowd:
        rear = model3_plateau(params)
    else:
        rear = params.tau * params.c**2 / (params.k * params.beta)
    return Asymptotes(rear, 0.0, 0.0, params.v_inf)


def normalization(kind: ModelKind, params: ModelParams) -> float:
    """Scale used when plotting u for ``kind`` (Q, Q1 or Q2)."""
    if kind is ModelKind.LimitedCrowd:
        return params.Q1
    if kind is ModelKind.LimitedNoCrowd:
        return params.Q2
    return params.Q


def half_max_width(zeta, u) -> float:
    """Width of the region where ``u >= max(u)/2`` (peaked profiles only).

    Crossings are located by linear interpolation.  Raises ``NoCrossing``
    when ``u`` does not fall below half its maximum on both sides.
    """
    zeta = np.asarray(zeta, dtype=float)
    u = np.asarray(u, dtype=float)
    half = 0.5 * u.max()
    above = np.nonzero(u >= half)[0]
    i, j = above[0], above[-1]
    if i == 0 or j == u.size - 1:
        raise NoCrossing("profile does not drop to half its maximum on both sides")
    left = zeta[i - 1] + (half - u[i - 1]) * (zeta[i] - zeta[i - 1]) / (u[i] - u[i - 1])
    right = zeta[j] + (half - u[j]) * (zeta[j + 1] - zeta[j]) / (u[j + 1] - u[j])
    return float(right - left)
