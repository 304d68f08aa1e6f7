"""Trajectory containers with dense output, and the action functional.

A Trajectory is the ordered record an integration run produces: phase-space
samples with per-sample energy, plus one quartic interpolation segment per
accepted step so states can be evaluated anywhere inside the span.
"""

from __future__ import annotations

import bisect
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ToleranceWarning
from .model import (
    FractionalParams,
    PhaseState,
    PowerLawPotential,
    lagrangian,
    velocity_from_momentum,
)

__all__ = ["DenseSegment", "Trajectory", "action"]


@dataclass(frozen=True)
class DenseSegment:
    """Quartic dense-output polynomial for one accepted step.

    Over t in [t_start, t_start + width] the stacked state vector is
    y(theta) = y_start + width * coef @ [theta, theta^2, theta^3, theta^4]
    with theta = (t - t_start) / width.
    """

    t_start: float
    width: float
    y_start: np.ndarray
    coef: np.ndarray  # shape (len(y_start), 4)

    @property
    def t_end(self) -> float:
        return self.t_start + self.width

    def _theta(self, t: float) -> float:
        theta = (t - self.t_start) / self.width
        if not -1e-9 <= theta <= 1.0 + 1e-9:
            raise DomainError(f"time {t} outside segment [{self.t_start}, {self.t_end}]")
        return min(max(theta, 0.0), 1.0)

    def eval(self, t: float) -> np.ndarray:
        th = self._theta(t)
        powers = np.array([th, th * th, th**3, th**4])
        return self.y_start + self.width * (self.coef @ powers)

    def eval_derivative(self, t: float) -> np.ndarray:
        th = self._theta(t)
        dpowers = np.array([1.0, 2.0 * th, 3.0 * th * th, 4.0 * th**3])
        return self.coef @ dpowers


@dataclass(frozen=True)
class Trajectory:
    """Ordered phase-space samples plus interpolation and step accounting.

    times: shape (n,), strictly increasing
    positions, momenta: shape (n, d)
    energies: shape (n,), the Hamiltonian at each sample
    segments: n - 1 dense segments covering consecutive sample intervals
    """

    times: np.ndarray
    positions: np.ndarray
    momenta: np.ndarray
    energies: np.ndarray
    segments: tuple[DenseSegment, ...] = field(default=())
    accepted_steps: int = 0
    rejected_steps: int = 0

    def __post_init__(self) -> None:
        n = len(self.times)
        if n == 0:
            raise DomainError("trajectory needs at least one sample")
        if self.positions.shape != self.momenta.shape or self.positions.shape[0] != n:
            raise DomainError("trajectory arrays have inconsistent shapes")
        if n > 1 and not np.all(np.diff(self.times) > 0.0):
            raise DomainError("trajectory times must be strictly increasing")

    @property
    def dimension(self) -> int:
        return self.positions.shape[1]

    @property
    def t0(self) -> float:
        return float(self.times[0])

    @property
    def t_end(self) -> float:
        return float(self.times[-1])

    @property
    def samples(self) -> list[tuple[PhaseState, float]]:
        return [(self.state(i), float(self.energies[i])) for i in range(len(self.times))]

    def state(self, i: int) -> PhaseState:
        return PhaseState(float(self.times[i]), self.positions[i], self.momenta[i])

    def _segment_at(self, t: float) -> DenseSegment:
        if not self.segments:
            raise DomainError("trajectory has no dense segments to interpolate")
        lo, hi = self.t0, self.t_end
        slop = 1e-9 * max(1.0, abs(lo), abs(hi))
        if not lo - slop <= t <= hi + slop:
            raise DomainError(f"time {t} outside trajectory span [{lo}, {hi}]")
        i = bisect.bisect_right(self.times.tolist(), t) - 1
        i = min(max(i, 0), len(self.segments) - 1)
        return self.segments[i]

    def eval(self, t: float) -> PhaseState:
        y = self._segment_at(t).eval(t)
        d = self.dimension
        return PhaseState(float(t), y[:d], y[d:])

    def derivative(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        dy = self._segment_at(t).eval_derivative(t)
        d = self.dimension
        return dy[:d].copy(), dy[d:].copy()

    def energy_drift(self) -> float:
        """Largest relative deviation of sampled energy from the initial energy."""
        e0 = float(self.energies[0])
        scale = max(abs(e0), 1e-300)
        return float(np.max(np.abs(self.energies - e0)) / scale)


# 8-point Gauss-Legendre on [0, 1]
_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)
_GL_X = 0.5 * (_GL_X + 1.0)
_GL_W = 0.5 * _GL_W


def _segment_action(
    params: FractionalParams, pot: PowerLawPotential, seg: DenseSegment, d: int,
    t_lo: float, t_hi: float,
) -> float:
    span = t_hi - t_lo
    total = 0.0
    for x, w in zip(_GL_X, _GL_W):
        y = seg.eval(t_lo + span * x)
        qdot = velocity_from_momentum(params, y[d:])
        total += w * lagrangian(params, pot, y[:d], qdot)
    return span * total


def action(
    params: FractionalParams,
    pot: PowerLawPotential,
    traj: Trajectory,
    quad_tol: float = 1e-9,
) -> float:
    """Integral of the Lagrangian along the trajectory's dense output.

    Each dense segment is integrated by 8-point Gauss-Legendre; the
    estimate is refined by halving and the difference reported as the
    quadrature error.  Warns when that error exceeds quad_tol, which means
    the stored step data is too coarse for the requested accuracy.
    """
    if len(traj.times) < 2 or not traj.segments:
        return 0.0
    d = traj.dimension
    total = 0.0
    err = 0.0
    for seg in traj.segments:
        coarse = _segment_action(params, pot, seg, d, seg.t_start, seg.t_end)
        mid = seg.t_start + 0.5 * seg.width
        fine = _segment_action(params, pot, seg, d, seg.t_start, mid) + _segment_action(
            params, pot, seg, d, mid, seg.t_end
        )
        total += fine
        err += abs(fine - coarse)
    if err > quad_tol * max(1.0, abs(total)):
        warnings.warn(
            f"action quadrature error estimate {err:.3e} exceeds tolerance {quad_tol:.3e}",
            ToleranceWarning,
            stacklevel=2,
        )
    return total
