"""Mechanical-similarity scaling laws and their empirical verification.

For a homogeneous potential V(rho q) = rho^beta V(q) the canonical
equations map trajectories to trajectories under q -> rho q,
t -> rho^(1 - beta + beta/alpha) t.  This module computes the exponents,
applies the map to integrated trajectories, measures landmark-to-landmark
times to confirm the time exponent, and runs the orbital special case
beta = -1 whose time exponent 2 - 1/alpha generalizes Kepler's third law
(T^alpha proportional to l^(2 alpha - 1)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, IntegrationError, UnsuitablePhysicsError
from .integrate import IntegratorConfig, integrate
from .model import (
    FractionalParams,
    InitialConditions,
    PhaseState,
    PowerLawPotential,
    hamiltonian,
    velocity_from_momentum,
)
from .trajectory import DenseSegment, Trajectory

__all__ = [
    "SimilarityExponents",
    "ScalingRow",
    "KeplerReport",
    "exponents",
    "scale_trajectory",
    "verify_scaling",
    "fractional_kepler_check",
    "kepler_gamma",
    "fit_time_exponent",
]


@dataclass(frozen=True)
class SimilarityExponents:
    """Scaling exponents relating trajectory families of one system.

    With lengths scaled by rho: times scale by rho^time_vs_length,
    velocities by rho^velocity_vs_length, energies by rho^energy_vs_length;
    time_vs_energy restates the time exponent per unit of energy ratio.
    """

    time_vs_length: float
    velocity_vs_length: float
    energy_vs_length: float
    time_vs_energy: float


def exponents(alpha: float, beta_degree: float) -> SimilarityExponents:
    """The four similarity exponents for kinetic exponent alpha and
    potential degree beta_degree."""
    if not 1.0 < alpha <= 2.0:
        raise DomainError(f"alpha must lie in (1, 2], got {alpha}")
    if beta_degree == 0.0:
        raise DomainError("potential degree must be nonzero")
    b = beta_degree
    return SimilarityExponents(
        time_vs_length=1.0 - b + b / alpha,
        velocity_vs_length=b - b / alpha,
        energy_vs_length=b,
        time_vs_energy=1.0 / alpha + 1.0 / b - 1.0,
    )


def _momentum_factor(rho: float, alpha: float, beta_degree: float) -> float:
    # velocities scale by rho^(beta - beta/alpha); through the momentum map
    # |p| ~ |qdot|^(1/(alpha-1)) this is exactly rho^(beta/alpha)
    return rho ** (beta_degree / alpha)


def scale_trajectory(
    traj: Trajectory, rho: float, alpha: float, beta_degree: float
) -> Trajectory:
    """Map an integrated trajectory through the similarity transformation.

    q -> rho q, t -> rho^(1-beta+beta/alpha) t, p -> rho^(beta/alpha) p
    (equivalently: the momentum of the scaled velocity), energies scaled
    by rho^beta.  Dense segments are remapped too, so the result
    interpolates exactly like a directly integrated trajectory.
    """
    if not rho > 0.0:
        raise DomainError(f"length factor must be positive, got {rho}")
    exps = exponents(alpha, beta_degree)
    lam_t = rho**exps.time_vs_length
    lam_p = _momentum_factor(rho, alpha, beta_degree)
    lam_e = rho**exps.energy_vs_length
    d = traj.dimension
    stretch = np.concatenate([np.full(d, rho), np.full(d, lam_p)])
    segments = tuple(
        DenseSegment(
            t_start=seg.t_start * lam_t,
            width=seg.width * lam_t,
            y_start=seg.y_start * stretch,
            coef=(seg.coef * stretch[:, None]) / lam_t,
        )
        for seg in traj.segments
    )
    return Trajectory(
        times=traj.times * lam_t,
        positions=traj.positions * rho,
        momenta=traj.momenta * lam_p,
        energies=traj.energies * lam_e,
        segments=segments,
        accepted_steps=traj.accepted_steps,
        rejected_steps=traj.rejected_steps,
    )


@dataclass(frozen=True)
class ScalingRow:
    """One scale factor's outcome: predicted vs measured landmark-time ratio."""

    rho: float
    predicted_ratio: float
    measured_ratio: float
    rel_err: float


def _scaled_ics(
    q0: np.ndarray, p0: np.ndarray, rho: float, alpha: float, beta_degree: float
) -> InitialConditions:
    return InitialConditions(
        q0=q0 * rho, p0=p0 * _momentum_factor(rho, alpha, beta_degree)
    )


def _first_landmark_time(
    params: FractionalParams,
    pot: PowerLawPotential,
    ic: InitialConditions,
    cfg: IntegratorConfig | None,
    kind: str,
    level: float | None,
    horizon: float,
) -> float:
    """Time of the first landmark event, doubling the horizon until found."""
    levels = [] if level is None else [(0, level)]
    for _ in range(40):
        _, events = integrate(
            params,
            pot,
            ic,
            (0.0, horizon),
            cfg,
            q_levels=levels,
            stop_after=(kind, 1),
        )
        hits = [ev for ev in events if ev.kind == kind]
        if hits:
            return hits[0].time
        horizon *= 2.0
    raise IntegrationError(f"no {kind} landmark found within horizon {horizon}")


def _base_horizon(
    params: FractionalParams, pot: PowerLawPotential, q0: np.ndarray, p0: np.ndarray
) -> float:
    e0 = hamiltonian(params, pot, PhaseState(0.0, q0, p0))
    try:
        pot.require_oscillator()
        if e0 > 0.0:
            from .oscillator import OscillatorSpec, period

            return 1.5 * period(OscillatorSpec(params, pot, e0))
    except DomainError:
        pass
    v0 = float(np.linalg.norm(velocity_from_momentum(params, p0)))
    r0 = float(np.linalg.norm(q0))
    if v0 > 0.0 and r0 > 0.0:
        return 10.0 * r0 / v0
    return 1.0


def verify_scaling(
    params: FractionalParams,
    pot: PowerLawPotential,
    ic: InitialConditions,
    rho_list: Sequence[float],
    cfg: IntegratorConfig | None = None,
) -> list[ScalingRow]:
    """Measure landmark times across similarity-scaled copies of one motion.

    The landmark is the first turning point for confining potentials with
    degree > 1, the first origin crossing for confining degree <= 1
    (straight fall to the minimum), and the crossing of half the initial
    position for attractive potentials (plunge toward the singular
    origin, which must not be reached).  Each scaled system launches from
    rho q0 with momentum rho^(beta/alpha) p0; the measured time ratio is
    compared to rho^(1-beta+beta/alpha).
    """
    q0, p0 = ic.resolve(params)
    beta_degree = pot.degree
    t_exp = exponents(params.alpha, beta_degree).time_vs_length
    if pot.strength > 0.0 and pot.degree > 1.0:
        kind, level_of = "turning_point", None
    elif pot.strength > 0.0:
        kind, level_of = "origin_crossing", None
    else:
        if float(np.linalg.norm(q0)) == 0.0:
            raise DomainError("attractive-potential landmark needs q0 != 0")
        kind, level_of = "custom", 0.5 * float(q0[0])
    guess = _base_horizon(params, pot, q0, p0)
    base_time = _first_landmark_time(
        params, pot, InitialConditions(q0=q0, p0=p0), cfg, kind, level_of, guess
    )
    rows = []
    for rho in rho_list:
        if not rho > 0.0:
            raise DomainError(f"scale factors must be positive, got {rho}")
        scaled_level = None if level_of is None else level_of * rho
        t_rho = _first_landmark_time(
            params,
            pot,
            _scaled_ics(q0, p0, rho, params.alpha, beta_degree),
            cfg,
            kind,
            scaled_level,
            guess * rho**t_exp * 1.5,
        )
        measured = t_rho / base_time
        predicted = rho**t_exp
        rows.append(
            ScalingRow(rho, predicted, measured, abs(measured - predicted) / predicted)
        )
    return rows


def fit_time_exponent(rows: Sequence[ScalingRow]) -> tuple[float, float] | None:
    """Log-log fit of measured ratios vs rho: (slope, max abs residual).

    Needs at least two distinct scale factors; returns None otherwise.
    """
    rhos = [r.rho for r in rows]
    if len(set(rhos)) < 2:
        return None
    x = np.log([r.rho for r in rows])
    y = np.log([r.measured_ratio for r in rows])
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.max(np.abs(slope * x + intercept - y)))
    return float(slope), resid


@dataclass(frozen=True)
class KeplerReport:
    """Radial-period scaling of similarity-mapped orbits in the plane."""

    rows: tuple[ScalingRow, ...]
    base_radial_period: float
    predicted_slope: float
    fitted_slope: float | None
    fit_residual: float | None


def _radial_period(
    params: FractionalParams,
    pot: PowerLawPotential,
    ic: InitialConditions,
    cfg: IntegratorConfig | None,
    horizon: float,
) -> float:
    """Time between two successive closest approaches (rising q.p zeros)."""
    for _ in range(20):
        _, events = integrate(
            params,
            pot,
            ic,
            (0.0, horizon),
            cfg,
            radial_direction=+1,
            stop_after=("custom", 2),
        )
        hits = [ev for ev in events if ev.kind == "custom"]
        if len(hits) >= 2:
            return hits[1].time - hits[0].time
        horizon *= 2.0
    raise IntegrationError(
        f"orbit not radially recurrent within horizon {horizon}"
    )


def fractional_kepler_check(
    alpha: float,
    ic: InitialConditions,
    rho_list: Sequence[float],
    cfg: IntegratorConfig | None = None,
    *,
    d_alpha: float = 1.0,
    strength: float = -1.0,
) -> KeplerReport:
    """Verify T^alpha ~ l^(2 alpha - 1) on similarity-scaled planar orbits.

    The potential is the attractive inverse distance (degree -1); the
    orbit scale l is the perihelion distance, which maps exactly to
    rho l under the similarity transformation, so the radial-period
    ratio must follow rho^(2 - 1/alpha).  The fitted log-log slope of
    the measured ratios is reported beside that prediction.
    """
    params = FractionalParams(alpha, d_alpha)
    if not strength < 0.0:
        raise UnsuitablePhysicsError(
            f"orbital check needs an attractive potential, got strength {strength}"
        )
    pot = PowerLawPotential(strength, -1.0)
    q0, p0 = ic.resolve(params)
    if q0.size != 2:
        raise DomainError(f"orbital check runs in the plane, got dimension {q0.size}")
    e0 = hamiltonian(params, pot, PhaseState(0.0, q0, p0))
    if e0 >= 0.0:
        raise UnsuitablePhysicsError(
            f"orbit is unbounded (energy {e0} >= 0); choose slower initial conditions"
        )
    angular = float(q0[0] * p0[1] - q0[1] * p0[0])
    if angular == 0.0:
        raise UnsuitablePhysicsError(
            "zero angular momentum puts the orbit on a collision course"
        )
    t_exp = 2.0 - 1.0 / alpha
    v0 = float(np.linalg.norm(velocity_from_momentum(params, p0)))
    r0 = float(np.linalg.norm(q0))
    base_T = _radial_period(
        params, pot, InitialConditions(q0=q0, p0=p0), cfg, 40.0 * r0 / v0
    )
    rows = []
    for rho in rho_list:
        if not rho > 0.0:
            raise DomainError(f"scale factors must be positive, got {rho}")
        T_rho = _radial_period(
            params,
            pot,
            _scaled_ics(q0, p0, rho, alpha, -1.0),
            cfg,
            3.0 * base_T * rho**t_exp,
        )
        measured = T_rho / base_T
        predicted = rho**t_exp
        rows.append(
            ScalingRow(rho, predicted, measured, abs(measured - predicted) / predicted)
        )
    fit = fit_time_exponent(rows)
    slope, resid = fit if fit is not None else (None, None)
    return KeplerReport(
        rows=tuple(rows),
        base_radial_period=base_T,
        predicted_slope=t_exp,
        fitted_slope=slope,
        fit_residual=resid,
    )


def kepler_gamma(alpha: float) -> float:
    """Potential decay rate gamma for which the classical third law survives.

    For V ~ -1/|q|^gamma under kinetic exponent alpha, the time exponent
    1 + gamma - gamma/alpha equals 3/2 exactly when
    gamma = alpha / (2 (alpha - 1)); at alpha = 2 this is Newtonian
    gravity, gamma = 1.
    """
    if not 1.0 < alpha <= 2.0:
        raise DomainError(f"alpha must lie in (1, 2], got {alpha}")
    return alpha / (2.0 * (alpha - 1.0))
