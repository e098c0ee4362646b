"""Model kinds, physical parameters and their derived constants.

All lengths are in cm and times in hours.  Only the seven raw parameters
are stored; everything else is recomputed on construction so a record can
never carry inconsistent derived values.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field, fields

from .errors import ConstraintViolation, NonPositiveParameter

RAW_FIELDS = ("tau", "mu", "c", "beta", "gamma0", "k", "v_inf")

# relative tolerance on |gamma0*tau - 1| for treating the crowd term as absent
CROWD_NEUTRAL_RTOL = 1e-12


class ModelKind(enum.Enum):
    """The four traveling-band systems.

    ``UnlimitedNoCrowd`` is the Keller-Segel-like system with constant
    consumption, ``UnlimitedCrowd`` adds the quorum term, and the two
    ``Limited*`` kinds consume substrate at rate ``k*v``.
    """

    UnlimitedNoCrowd = "UnlimitedNoCrowd"
    UnlimitedCrowd = "UnlimitedCrowd"
    LimitedCrowd = "LimitedCrowd"
    LimitedNoCrowd = "LimitedNoCrowd"

    @property
    def limited(self) -> bool:
        return self in (ModelKind.LimitedCrowd, ModelKind.LimitedNoCrowd)

    @property
    def crowd(self) -> bool:
        """True when the quorum term ``gamma*tau*u*(ln v)_xx`` is present."""
        return self in (ModelKind.UnlimitedCrowd, ModelKind.LimitedCrowd)

    @property
    def requires_d_gt_1(self) -> bool:
        return not self.limited

    @property
    def model_number(self) -> int:
        return _MODEL_NUMBERS[self]

    @classmethod
    def parse(cls, text: str) -> "ModelKind":
        """Accept enum names, kebab/snake spellings and ``model1``..``model4``."""
        key = text.strip().lower().replace("-", "").replace("_", "")
        for kind in cls:
            if key == kind.value.lower() or key == f"model{kind.model_number}":
                return kind
        names = ", ".join(k.value for k in cls)
        raise ValueError(f"unknown model kind {text!r} (expected one of {names} or model1..model4)")


_MODEL_NUMBERS = {
    ModelKind.UnlimitedNoCrowd: 1,
    ModelKind.UnlimitedCrowd: 2,
    ModelKind.LimitedCrowd: 3,
    ModelKind.LimitedNoCrowd: 4,
}


@dataclass(frozen=True)
class ModelParams:
    """Raw physical parameters plus derived constants.

    Attributes:
        tau: collision interval [h].
        mu: motility, the jump variance per collision [cm^2].
        c: band speed [cm/h].
        beta: chemotactic coefficient [cm^2].
        gamma0: quorum rate [1/h].
        k: substrate consumption rate [1/h].
        v_inf: far-field substrate concentration.

    Derived (read-only): ``d``, ``gamma``, ``alpha``, ``B``,
    ``lambda_plus``, ``lambda_minus``, ``Q``, ``Q1``, ``Q2``.  ``B`` and the
    growth rates are NaN when ``d <= 1`` since the curvature bound only
    exists for the unlimited-substrate band.
    """

    tau: float
    mu: float
    c: float
    beta: float
    gamma0: float
    k: float = 1.0
    v_inf: float = 1.0

    d: float = field(init=False, repr=False)
    gamma: float = field(init=False, repr=False)
    alpha: float = field(init=False, repr=False)
    B: float = field(init=False, repr=False)
    lambda_plus: float = field(init=False, repr=False)
    lambda_minus: float = field(init=False, repr=False)
    Q: float = field(init=False, repr=False)
    Q1: float = field(init=False, repr=False)
    Q2: float = field(init=False, repr=False)

    def __post_init__(self):
        for name in RAW_FIELDS:
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise NonPositiveParameter(name, value) from None
            if not (math.isfinite(value) and value > 0.0):
                raise NonPositiveParameter(name, value)
            object.__setattr__(self, name, value)

        tau, mu, c, beta, k = self.tau, self.mu, self.c, self.beta, self.k
        d = 2.0 * beta / mu
        gamma = beta * self.gamma0
        alpha = gamma * tau - beta
        if d > 1.0:
            B = tau**2 * c**2 / (mu**2 * (d - 1.0))
            lam = alpha * B / tau
        else:
            B = lam = math.nan
        q2 = 2.0 * tau * c**2 / (k * mu)
        derived = {
            "d": d,
            "gamma": gamma,
            "alpha": alpha,
            "B": B,
            "lambda_plus": lam,
            "lambda_minus": -lam,
            "Q": q2 * self.v_inf,
            "Q1": 2.0 * tau * c**2 / (k * beta),
            "Q2": q2,
        }
        for name, value in derived.items():
            object.__setattr__(self, name, value)

    @property
    def s(self) -> float:
        """Spatial decay rate 2*tau*c/mu of the band [1/cm]."""
        return 2.0 * self.tau * self.c / self.mu

    @property
    def band_width(self) -> float:
        """Characteristic band width mu/(tau*c) [cm]."""
        return self.mu / (self.tau * self.c)

    def raw(self) -> dict:
        return {name: getattr(self, name) for name in RAW_FIELDS}

    def replace(self, **changes) -> "ModelParams":
        values = self.raw()
        values.update(changes)
        return ModelParams(**values)

    def derived(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self) if not f.init}


def derive_params(
    tau: float,
    mu: float,
    c: float,
    beta: float,
    gamma0: float,
    k: float = 1.0,
    v_inf: float = 1.0,
    kind: ModelKind = ModelKind.UnlimitedNoCrowd,
) -> ModelParams:
    """Validate raw parameters for ``kind`` and compute derived constants.

    Raises:
        NonPositiveParameter: a raw value is zero, negative or not finite.
        ConstraintViolation: ``d <= 1`` for an unlimited-substrate kind.
    """
    params = ModelParams(tau=tau, mu=mu, c=c, beta=beta, gamma0=gamma0, k=k, v_inf=v_inf)
    check_kind(params, kind)
    return params


def check_kind(params: ModelParams, kind: ModelKind) -> None:
    if kind.requires_d_gt_1 and not params.d > 1.0:
        raise ConstraintViolation(
            f"{kind.value} requires d = 2*beta/mu > 1, got d = {params.d!r}"
        )


def crowd_neutral(params: ModelParams) -> bool:
    """True when gamma*tau == beta, i.e. gamma0 == 1/tau, to rounding."""
    return abs(params.gamma0 * params.tau - 1.0) < CROWD_NEUTRAL_RTOL


def effective_gamma(params: ModelParams, kind: ModelKind) -> float:
    """Crowd coefficient entering the dynamics.

    Crowd-free kinds are the special case gamma*tau == beta regardless of
    the stored ``gamma0``.
    """
    return params.gamma if kind.crowd else params.beta / params.tau


# Table 1 mid-range values; k and v_inf are normalisation choices.
DEFAULT_RAW = {"tau": 0.05, "mu": 0.25, "c": 1.5, "beta": 0.25, "gamma0": 25.0, "k": 1.0, "v_inf": 1.0}


def params_to_dict(params: ModelParams, kind: ModelKind) -> dict:
    out = params.raw()
    out["kind"] = kind.value
    return out


def params_from_dict(data: dict) -> tuple[ModelParams, ModelKind]:
    """Read a parameter record; derived fields in ``data`` are rejected."""
    unknown = set(data) - set(RAW_FIELDS) - {"kind"}
    if unknown:
        raise ValueError(f"unexpected keys in parameter record: {sorted(unknown)}")
    missing = [name for name in RAW_FIELDS[:5] if name not in data]
    if missing:
        raise ValueError(f"parameter record is missing {missing}")
    kind = ModelKind.parse(data.get("kind", ModelKind.UnlimitedNoCrowd.value))
    raw = {name: data[name] for name in RAW_FIELDS if name in data}
    return derive_params(kind=kind, **raw), kind


def dump_params(params: ModelParams, kind: ModelKind, path) -> None:
    with open(path, "w") as fh:
        json.dump(params_to_dict(params, kind), fh, indent=2)
        fh.write("\n")


def load_params(path) -> tuple[ModelParams, ModelKind]:
    with open(path) as fh:
        return params_from_dict(json.load(fh))
