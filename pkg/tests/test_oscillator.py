"""Oscillator closed forms, time-of-flight inversion, and level spacing.

Frozen constants were produced offline with 40-digit arithmetic; the
grid-wide comparisons consume the session period grid from conftest.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from fracmech import (
    DomainError,
    FractionalParams,
    InitialConditions,
    IntegratorConfig,
    OscillatorSpec,
    PowerLawPotential,
    classical_limit_solution,
    hj_position,
    hj_time_of_flight,
    hj_trajectory,
    integrate,
    period,
    period_quadrature,
    period_report,
    quantum_levels,
    velocity_from_momentum,
)

HARMONIC = OscillatorSpec(FractionalParams.from_mass(1.0), PowerLawPotential(1.0, 2.0), 1.0)
OMEGA = math.sqrt(2.0)


def test_spec_validation():
    params = FractionalParams(1.5, 1.0)
    with pytest.raises(DomainError):
        OscillatorSpec(params, PowerLawPotential(1.0, 2.0), 0.0)
    with pytest.raises(DomainError):
        OscillatorSpec(params, PowerLawPotential(-1.0, 2.0), 1.0)
    with pytest.raises(DomainError):
        OscillatorSpec(params, PowerLawPotential(1.0, 2.5), 1.0)
    spec = OscillatorSpec.from_exponents(1.5, 1.5)
    assert spec.alpha == 1.5
    assert spec.beta == 1.5
    assert spec.q_turn == pytest.approx(1.0)


def test_period_harmonic_closed_form():
    assert period(HARMONIC) == pytest.approx(math.pi * math.sqrt(2.0), rel=1e-14)


def test_period_harmonic_energy_independent_exactly():
    hi = OscillatorSpec(HARMONIC.params, HARMONIC.pot, 10.0)
    assert period(HARMONIC) == period(hi)


def test_period_frozen_values():
    # 40-digit references for unit scale factors at unit energy
    assert period(OscillatorSpec.from_exponents(1.5, 2.0)) == pytest.approx(
        3.4494794123063874, rel=1e-12
    )
    assert period(OscillatorSpec.from_exponents(1.5, 1.5)) == pytest.approx(
        3.6504714985585372, rel=1e-12
    )


def test_period_quadrature_harmonic():
    assert period_quadrature(HARMONIC) == pytest.approx(math.pi * math.sqrt(2.0), rel=1e-12)


def test_period_closed_vs_quadrature_on_grid(period_grid):
    for row in period_grid.rows:
        assert abs(row.closed - row.quadrature) / row.closed < 1e-10, row


def test_period_closed_vs_ode_on_grid(period_grid):
    for row in period_grid.rows:
        assert abs(row.closed - row.ode) / row.closed < 1e-5, row


def test_period_energy_scaling_closed_form():
    for a, b in [(1.1, 1.9), (1.5, 1.5), (1.75, 1.25)]:
        lo = OscillatorSpec.from_exponents(a, b, energy=1.0)
        hi = OscillatorSpec.from_exponents(a, b, energy=7.0)
        expected = 7.0 ** (1.0 / a + 1.0 / b - 1.0)
        assert period(hi) / period(lo) == pytest.approx(expected, rel=1e-14)


def test_period_energy_scaling_from_ode(period_grid):
    # measured-period ratios across the energy axis follow the same power law
    by_pair = {}
    for row in period_grid.rows:
        by_pair.setdefault((row.alpha, row.beta), []).append(row)
    for (a, b), rows in by_pair.items():
        rows.sort(key=lambda r: r.energy)
        base = rows[0]
        for other in rows[1:]:
            expected = (other.energy / base.energy) ** (1.0 / a + 1.0 / b - 1.0)
            assert other.ode / base.ode == pytest.approx(expected, rel=1e-5)


def test_period_report_shape():
    rep = period_report(HARMONIC)
    assert rep.closed_form == pytest.approx(math.pi * math.sqrt(2.0), rel=1e-12)
    assert rep.ode_measured is not None
    assert rep.max_pairwise_rel_diff < 1e-5
    rep2 = period_report(HARMONIC, include_ode=False)
    assert rep2.ode_measured is None


# ---------------------------------------------------------- time of flight


def test_time_of_flight_endpoints():
    spec = OscillatorSpec.from_exponents(1.75, 1.5)
    assert hj_time_of_flight(spec, 0.0) == 0.0
    assert hj_time_of_flight(spec, spec.q_turn) == pytest.approx(period(spec) / 4.0, rel=1e-12)


def test_time_of_flight_harmonic_frozen():
    # q = sin(0.7) is reached at t = 0.7/omega
    got = hj_time_of_flight(HARMONIC, math.sin(0.7))
    assert got == pytest.approx(0.49497474683058327, rel=1e-12)


def test_time_of_flight_domain():
    spec = OscillatorSpec.from_exponents(1.5, 1.5)
    with pytest.raises(DomainError):
        hj_time_of_flight(spec, -0.1)
    with pytest.raises(DomainError):
        hj_time_of_flight(spec, spec.q_turn * 1.01)


def test_time_of_flight_strictly_increasing():
    spec = OscillatorSpec.from_exponents(1.2, 1.9)
    qs = np.linspace(0.0, spec.q_turn, 50)
    ts = [hj_time_of_flight(spec, float(q)) for q in qs]
    assert all(t2 > t1 for t1, t2 in zip(ts, ts[1:]))


def test_time_of_flight_derivative_is_inverse_speed():
    # dt/dq = 1/|qdot| with qdot given by the momentum on the energy shell
    for a, b in [(2.0, 2.0), (1.5, 1.75), (1.8, 1.2)]:
        spec = OscillatorSpec.from_exponents(a, b, energy=1.3)
        d_alpha = spec.params.d_alpha
        for frac in (0.15, 0.5, 0.85):
            q = frac * spec.q_turn
            h = 1e-6 * spec.q_turn
            dt_dq = (hj_time_of_flight(spec, q + h) - hj_time_of_flight(spec, q - h)) / (2.0 * h)
            kinetic = spec.energy - spec.pot.strength * abs(q) ** spec.pot.degree
            p_shell = (kinetic / d_alpha) ** (1.0 / a)
            speed = float(velocity_from_momentum(spec.params, np.array([p_shell]))[0])
            assert dt_dq == pytest.approx(1.0 / speed, rel=1e-8)


# -------------------------------------------------------------- inversion


def test_position_endpoints():
    spec = OscillatorSpec.from_exponents(1.75, 1.5)
    assert hj_position(spec, 0.0) == 0.0
    assert hj_position(spec, period(spec) / 4.0) == pytest.approx(spec.q_turn, rel=1e-10)


def test_position_harmonic_is_sine():
    quarter = period(HARMONIC) / 4.0
    for t in np.linspace(0.0, quarter, 40):
        assert hj_position(HARMONIC, float(t)) == pytest.approx(
            math.sin(OMEGA * float(t)), abs=1e-10
        )


def test_position_domain():
    with pytest.raises(DomainError):
        hj_position(HARMONIC, -1e-3)
    with pytest.raises(DomainError):
        hj_position(HARMONIC, period(HARMONIC) / 4.0 + 1e-3)


@pytest.mark.parametrize("exps", [(2.0, 2.0), (1.5, 2.0), (1.75, 1.5), (1.2, 1.2)])
def test_position_time_roundtrip(exps):
    spec = OscillatorSpec.from_exponents(*exps, energy=1.7)
    for frac in np.linspace(0.001, 0.999, 25):
        q = float(frac) * spec.q_turn
        back = hj_position(spec, hj_time_of_flight(spec, q))
        assert back == pytest.approx(q, rel=1e-9)


# ------------------------------------------------------ full-period extension


def test_trajectory_symmetry_points():
    spec = OscillatorSpec.from_exponents(1.6, 1.4)
    full = period(spec)
    assert abs(hj_trajectory(spec, 0.0)) == 0.0
    assert abs(hj_trajectory(spec, full / 2.0)) < 1e-9 * spec.q_turn
    assert hj_trajectory(spec, full / 4.0) == pytest.approx(spec.q_turn, rel=1e-9)
    assert hj_trajectory(spec, 3.0 * full / 4.0) == pytest.approx(-spec.q_turn, rel=1e-9)


def test_trajectory_harmonic_globally():
    full = period(HARMONIC)
    for t in np.linspace(-full, 2.0 * full, 121):
        assert hj_trajectory(HARMONIC, float(t)) == pytest.approx(
            math.sin(OMEGA * float(t)), abs=1e-10
        )


def test_trajectory_periodic_and_odd():
    spec = OscillatorSpec.from_exponents(1.3, 1.7, energy=2.0)
    full = period(spec)
    for t in (0.13, 0.61, 1.9):
        q = hj_trajectory(spec, t)
        assert hj_trajectory(spec, t + full) == pytest.approx(q, rel=1e-9, abs=1e-12)
        assert hj_trajectory(spec, -t) == pytest.approx(-q, rel=1e-9, abs=1e-12)


def test_trajectory_phase_offset():
    spec = OscillatorSpec.from_exponents(1.5, 1.5)
    for t in (0.0, 0.4, 1.1):
        assert hj_trajectory(spec, t, delta=0.25) == pytest.approx(
            hj_trajectory(spec, t + 0.25), rel=1e-10, abs=1e-12
        )


@pytest.mark.parametrize("exps", [(1.75, 1.5), (1.2, 1.2)])
def test_trajectory_matches_integration(exps):
    spec = OscillatorSpec.from_exponents(*exps)
    full = period(spec)
    p0 = (spec.energy / spec.params.d_alpha) ** (1.0 / spec.alpha)
    ic = InitialConditions(q0=np.array([0.0]), p0=np.array([p0]))
    traj, _ = integrate(spec.params, spec.pot, ic, (0.0, full))
    worst = max(
        abs(hj_trajectory(spec, float(t)) - float(traj.eval(float(t)).q[0]))
        for t in np.linspace(0.0, full, 50)
    )
    assert worst < 1e-6 * spec.q_turn


# ----------------------------------------------------------- quantum levels


def test_quantum_levels_harmonic_values():
    # hbar * omega * (n + 1/2) with omega = sqrt(2)
    assert quantum_levels(HARMONIC, 1.0, 0) == pytest.approx(0.7071067811865476, rel=1e-13)
    for n in range(5):
        expected = math.sqrt(2.0) * (n + 0.5)
        assert quantum_levels(HARMONIC, 1.0, n) == pytest.approx(expected, rel=1e-13)


def test_quantum_levels_harmonic_equidistant():
    levels = [quantum_levels(HARMONIC, 1.0, n) for n in range(8)]
    gaps = np.diff(levels)
    assert np.ptp(gaps) < 1e-12 * gaps[0]


def test_quantum_levels_fractional_spacing_shrinks():
    spec = OscillatorSpec.from_exponents(1.5, 1.5)
    levels = [quantum_levels(spec, 1.0, n) for n in range(10)]
    gaps = np.diff(levels)
    assert np.all(gaps > 0)
    assert np.all(np.diff(gaps) < 0)


def test_quantum_levels_exponent():
    # level growth follows (n + 1/2)^(alpha*beta/(alpha+beta))
    spec = OscillatorSpec.from_exponents(1.5, 1.5)
    ex = 0.75
    ratios = [quantum_levels(spec, 1.0, n) / (n + 0.5) ** ex for n in range(6)]
    assert max(ratios) - min(ratios) < 1e-12 * ratios[0]


def test_quantum_levels_validation():
    with pytest.raises(DomainError):
        quantum_levels(HARMONIC, 1.0, -1)
    with pytest.raises(DomainError):
        quantum_levels(HARMONIC, 0.0, 0)


# ----------------------------------------------------------- classical limit


def test_classical_limit_shape():
    assert classical_limit_solution(1.0, 1.0, 1.0, 0.0, 0.0) == 0.0
    # amplitude reaches the turning point of the quadratic well
    quarter = math.pi / (2.0 * OMEGA)
    assert classical_limit_solution(1.0, 1.0, 1.0, 0.0, quarter) == pytest.approx(1.0, rel=1e-12)
    got = classical_limit_solution(2.0, 1.0, 1.0, 0.0, quarter)
    assert got == pytest.approx(math.sqrt(2.0), rel=1e-12)


def test_classical_limit_matches_extension():
    full = period(HARMONIC)
    for t in np.linspace(0.0, 2.0 * full, 41):
        assert classical_limit_solution(1.0, 1.0, 1.0, 0.0, float(t)) == pytest.approx(
            hj_trajectory(HARMONIC, float(t)), abs=1e-10
        )
