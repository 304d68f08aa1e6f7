"""Shared fixtures for the expensive ODE scans.

The three-way period comparison over the full exponent/energy grid and
the long-horizon drift/reversal scan each take tens of seconds, and
several modules plus the acceptance gate assert against the same
numbers, so both are computed once per session and cached here.
"""

from __future__ import annotations

import math
import time
from typing import NamedTuple

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from fracmech import (
    InitialConditions,
    IntegratorConfig,
    OscillatorSpec,
    integrate,
    measure_period,
    period,
    period_quadrature,
)

settings.register_profile(
    "fracmech",
    max_examples=60,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.filter_too_much],
)
settings.load_profile("fracmech")

GRID_EXPONENTS = (1.1, 1.25, 1.5, 1.75, 2.0)
GRID_ENERGIES = (0.5, 1.0, 2.0, 10.0)

DRIFT_EXPONENTS = (1.1, 1.5, 1.9, 2.0)
DRIFT_ENERGIES = (0.5, 1.0, 5.0)

# The embedded 5(4) pair leaves ~3e-7 relative energy drift over ten
# periods when run at the default rel_tol of 1e-10 (checked against an
# independent implementation of the same pair, which drifts identically).
# Meeting the 1e-8 drift budget therefore needs the tighter setting below;
# it is pinned here rather than silently changing the library defaults.
TIGHT_CFG = IntegratorConfig(rel_tol=1e-13, abs_tol=1e-15)


class PeriodPoint(NamedTuple):
    alpha: float
    beta: float
    energy: float
    closed: float
    quadrature: float
    ode: float


class DriftPoint(NamedTuple):
    alpha: float
    beta: float
    energy: float
    drift: float
    reversal_err: float


class GridResult(NamedTuple):
    rows: list
    elapsed: float


@pytest.fixture(scope="session")
def period_grid() -> GridResult:
    """Closed-form, quadrature, and ODE-measured periods on the full grid."""
    rows = []
    started = time.perf_counter()
    for a in GRID_EXPONENTS:
        for b in GRID_EXPONENTS:
            for e in GRID_ENERGIES:
                spec = OscillatorSpec.from_exponents(a, b, energy=e)
                rows.append(
                    PeriodPoint(
                        a,
                        b,
                        e,
                        period(spec),
                        period_quadrature(spec),
                        measure_period(spec.params, spec.pot, e),
                    )
                )
    return GridResult(rows, time.perf_counter() - started)


def _drift_point(a: float, b: float, e: float) -> DriftPoint:
    spec = OscillatorSpec.from_exponents(a, b, energy=e)
    full = period(spec)
    p_launch = (e / spec.params.d_alpha) ** (1.0 / a)
    ic = InitialConditions(q0=np.array([0.0]), p0=np.array([p_launch]))

    traj, _ = integrate(spec.params, spec.pot, ic, (0.0, 10.0 * full), TIGHT_CFG)
    drift = traj.energy_drift()

    # reversibility at the default tolerances: forward one period, flip the
    # momentum, forward again; must land on the momentum-flipped start
    fwd, _ = integrate(spec.params, spec.pot, ic, (0.0, full))
    mid = fwd.state(len(fwd.times) - 1)
    back_ic = InitialConditions(q0=mid.q.copy(), p0=-mid.p)
    back, _ = integrate(spec.params, spec.pot, back_ic, (0.0, full))
    end = back.state(len(back.times) - 1)
    reversal = max(
        abs(float(end.q[0]) - 0.0) / spec.q_turn,
        abs(float(end.p[0]) + p_launch) / p_launch,
    )
    return DriftPoint(a, b, e, drift, reversal)


@pytest.fixture(scope="session")
def drift_grid() -> GridResult:
    """Ten-period energy drift and time-reversal error per grid point."""
    started = time.perf_counter()
    rows = [
        _drift_point(a, b, e)
        for a in DRIFT_EXPONENTS
        for b in DRIFT_EXPONENTS
        for e in DRIFT_ENERGIES
    ]
    return GridResult(rows, time.perf_counter() - started)
