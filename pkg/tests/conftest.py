"""Shared fixtures and independent reference formulas.

The ``mp_*`` helpers evaluate the closed forms in 40-digit arithmetic
straight from their textbook expressions.  They share no code with the
package and serve as the oracle for value tests.
"""

import mpmath as mp
import pytest

from bandlab.params import ModelParams

mp.mp.dps = 40

REF = dict(tau=0.05, mu=0.25, c=1.5, beta=0.25, gamma0=25.0, k=1.0, v_inf=1.0)


def params(**changes) -> ModelParams:
    return ModelParams(**{**REF, **changes})


@pytest.fixture
def ref():
    return params()


def _mp(p):
    tau, mu, c, beta, g0, k, vinf = (mp.mpf(x) for x in (p.tau, p.mu, p.c, p.beta, p.gamma0, p.k, p.v_inf))
    return tau, mu, c, beta, g0, k, vinf, 2 * tau * c / mu, 2 * beta / mu


def mp_model1(z, p):
    tau, mu, c, beta, g0, k, vinf, s, d = _mp(p)
    Q = 2 * tau * c**2 * vinf / (k * mu)
    e = mp.exp(-s * mp.mpf(z))
    u = Q / (d - 1) * e * (1 + e) ** (-d / (d - 1))
    v = vinf * (1 + e) ** (-1 / (d - 1))
    return u, v


def mp_model3(z, p, C7=1):
    tau, mu, c, beta, g0, k, vinf, s, d = _mp(p)
    gamma = beta * g0
    C7 = mp.mpf(C7)
    u = 2 * tau * c**2 / (k * (beta + gamma * tau)) / (1 + mp.exp(s * mp.mpf(z)) / C7)
    v = vinf * (1 + C7 * mp.exp(-s * mp.mpf(z))) ** (-mu / (beta + gamma * tau))
    return u, v


def mp_model4(z, p):
    tau, mu, c, beta, g0, k, vinf, s, d = _mp(p)
    Q2 = 2 * tau * c**2 / (k * mu)
    u = Q2 / (d + mp.exp(s * mp.mpf(z)))
    v = vinf * (1 + d * mp.exp(-s * mp.mpf(z))) ** (-1 / d)
    return u, v


def mp_umax(p):
    tau, mu, c, beta, g0, k, vinf, s, d = _mp(p)
    Q = 2 * tau * c**2 * vinf / (k * mu)
    return mp.log(1 / (d - 1)) / s, Q * d ** (-d / (d - 1))


# acceptance criteria append "criterion N: PASS|FAIL ..." lines here
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
