"""Adaptive integration of the canonical equations with event detection.

The stepper is an embedded Dormand-Prince 5(4) pair with the standard
quartic dense-output interpolant, FSAL evaluation reuse, and a PI-free
step controller (safety 0.9, growth clipped to [0.2, 10]).  The kinetic
term's velocity map |p|^(alpha-1) is continuous but not Lipschitz at
p = 0 for alpha < 2; the error estimate shrinks steps through turning
points on its own, and a hard step cap applies while |p| is tiny so no
single step can jump far past a turning point.

Events are sign crossings located by bisection on the dense-output
polynomial: momentum components (turning points), position components
(origin crossings), optional position-level crossings, and the optional
radial flux q.p whose rising zeros mark closest approach on orbits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DomainError, MaxStepsExceeded, StepSizeUnderflow
from .model import (
    FractionalParams,
    InitialConditions,
    PhaseState,
    PowerLawPotential,
    abs_power,
    hamiltonian,
    turning_point,
    velocity_from_momentum,
)
from .trajectory import DenseSegment, Trajectory

__all__ = ["IntegratorConfig", "EventRecord", "integrate", "measure_period"]


@dataclass(frozen=True)
class IntegratorConfig:
    """Error-control and event-location knobs for one integration run."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_steps: int = 1_000_000
    initial_step: float | None = None
    event_tol: float = 1e-12

    def __post_init__(self) -> None:
        if not (self.rel_tol > 0.0 and self.abs_tol > 0.0 and self.event_tol > 0.0):
            raise DomainError("integrator tolerances must be positive")
        if self.max_steps <= 0:
            raise DomainError("max_steps must be positive")
        if self.initial_step is not None and not self.initial_step > 0.0:
            raise DomainError("initial_step must be positive when given")


@dataclass(frozen=True)
class EventRecord:
    """A located zero crossing: its kind, time, interpolated state, and the
    state component that crossed (None for scalar-valued event functions)."""

    kind: str
    time: float
    state: PhaseState
    component: int | None = None


# Dormand-Prince 5(4) tableau
_C = (0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0)
_A = (
    (),
    (1.0 / 5.0,),
    (3.0 / 40.0, 9.0 / 40.0),
    (44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0),
    (19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0),
    (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0),
    (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0),
)
# difference between the 5th- and 4th-order weights; dotted with the stages
# (including the FSAL stage) it yields the local error estimate
_ERR = np.array(
    [
        71.0 / 57600.0,
        0.0,
        -71.0 / 16695.0,
        71.0 / 1920.0,
        -17253.0 / 339200.0,
        22.0 / 525.0,
        -1.0 / 40.0,
    ]
)
# dense-output matrix: row i gives stage i's contribution to the four
# polynomial coefficients of the quartic interpolant
_DENSE = np.array(
    [
        [1.0, -8048581381.0 / 2820520608.0, 8663915743.0 / 2820520608.0, -12715105075.0 / 11282082432.0],
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 131558114200.0 / 32700410799.0, -68118460800.0 / 10900136933.0, 87487479700.0 / 32700410799.0],
        [0.0, -1754552775.0 / 470086768.0, 14199869525.0 / 1410260304.0, -10690763975.0 / 1880347072.0],
        [0.0, 127303824393.0 / 49829197408.0, -318862633887.0 / 49829197408.0, 701980252875.0 / 199316789632.0],
        [0.0, -282668133.0 / 205662961.0, 2019193451.0 / 616988883.0, -1453857185.0 / 822651844.0],
        [0.0, 40617522.0 / 29380423.0, -110615467.0 / 29380423.0, 69997945.0 / 29380423.0],
    ]
)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 10.0
_ORDER_EXP = -1.0 / 5.0


def _rms(v: np.ndarray) -> float:
    return float(np.sqrt(np.mean(v * v)))


def _initial_step(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    t0: float,
    y0: np.ndarray,
    f0: np.ndarray,
    scale: np.ndarray,
    span: float,
) -> float:
    """Starting step size from the local magnitude and curvature of the RHS."""
    d0 = _rms(y0 / scale)
    d1 = _rms(f0 / scale)
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, span)
    y1 = y0 + h0 * f0
    f1 = rhs(t0 + h0, y1)
    d2 = _rms((f1 - f0) / scale) / h0
    if d1 <= 1e-15 and d2 <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100.0 * h0, h1, span)


class _EventFunc:
    """One scanned scalar function of the stacked state vector."""

    __slots__ = ("kind", "index", "component", "direction", "level", "dim")

    def __init__(self, kind: str, dim: int, component: int | None = None,
                 direction: int = 0, level: float = 0.0):
        self.kind = kind
        self.dim = dim
        self.component = component
        self.direction = direction
        self.level = level

    def __call__(self, y: np.ndarray) -> float:
        if self.kind == "turning_point":
            return float(y[self.dim + self.component])
        if self.kind == "origin_crossing":
            return float(y[self.component])
        if self.level != 0.0 or self.component is not None:
            return float(y[self.component] - self.level)
        # radial flux q.p
        return float(np.dot(y[: self.dim], y[self.dim :]))


def _build_events(
    dim: int,
    q_levels: Iterable[tuple[int, float]],
    radial_direction: int | None,
) -> list[_EventFunc]:
    funcs: list[_EventFunc] = []
    for j in range(dim):
        funcs.append(_EventFunc("turning_point", dim, component=j))
    for j in range(dim):
        funcs.append(_EventFunc("origin_crossing", dim, component=j))
    for comp, level in q_levels:
        if not 0 <= comp < dim:
            raise DomainError(f"level-crossing component {comp} outside dimension {dim}")
        funcs.append(_EventFunc("custom", dim, component=comp, level=float(level)))
    if radial_direction is not None:
        funcs.append(_EventFunc("custom", dim, direction=int(radial_direction)))
    return funcs


def _locate(
    func: _EventFunc, seg: DenseSegment, t_lo: float, t_hi: float,
    g_lo: float, event_tol: float,
) -> float:
    """Bisection for the crossing time inside [t_lo, t_hi] on dense output."""
    lo, hi = t_lo, t_hi
    neg = g_lo < 0.0
    while hi - lo > event_tol:
        mid = 0.5 * (lo + hi)
        gm = func(seg.eval(mid))
        if gm == 0.0:
            return mid
        if (gm < 0.0) == neg:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def integrate(
    params: FractionalParams,
    pot: PowerLawPotential,
    ic: InitialConditions,
    span: tuple[float, float],
    cfg: IntegratorConfig | None = None,
    *,
    q_levels: Sequence[tuple[int, float]] = (),
    radial_direction: int | None = None,
    stop_after: tuple[str, int] | None = None,
) -> tuple[Trajectory, list[EventRecord]]:
    """Integrate the canonical equations over span = (t0, t1), t1 > t0.

    Returns the trajectory (a sample per accepted step with dense output)
    and the chronological list of located events.  ``q_levels`` adds
    crossings of q[component] through a level as kind "custom";
    ``radial_direction`` adds zeros of q.p (+1 rising only, -1 falling
    only, 0 both).  ``stop_after=(kind, n)`` truncates the run at the
    n-th event of that kind.
    """
    if cfg is None:
        cfg = IntegratorConfig()
    t0, t1 = float(span[0]), float(span[1])
    if not t1 > t0:
        raise DomainError(f"integration span must have t1 > t0, got {span}")
    q0, p0 = ic.resolve(params)
    d = q0.size
    y = np.concatenate([q0, p0]).astype(float)
    state0 = PhaseState(t0, q0, p0)
    e0 = hamiltonian(params, pot, state0)

    # characteristic magnitudes for absolute-tolerance scaling
    try:
        q_scale = turning_point(pot, e0)
    except DomainError:
        q_scale = max(float(np.max(np.abs(q0))), 1.0)
    if abs(e0) > 0.0:
        p_scale = abs_power(abs(e0) / params.d_alpha, 1.0 / params.alpha)
    else:
        p_scale = max(float(np.max(np.abs(p0))), 1.0)
    atol = np.concatenate(
        [np.full(d, cfg.abs_tol * q_scale), np.full(d, cfg.abs_tol * p_scale)]
    )
    p_small = 1e-6 * p_scale
    cap_small_p = (t1 - t0) / 1000.0
    # For alpha < 2 the velocity map |p|^(alpha-1) has unbounded slope at
    # p = 0 and the embedded error estimate degrades there; keep the
    # relative momentum change per step bounded while |p| is small so
    # steps shrink geometrically into a turning point and out again.
    p_band = 0.1 * p_scale if params.alpha < 2.0 else 0.0

    alpha, d_alpha = params.alpha, params.d_alpha
    strength, degree = pot.strength, pot.degree

    def rhs(t: float, yv: np.ndarray) -> np.ndarray:
        qv = yv[:d]
        pv = yv[d:]
        pn = math.sqrt(float(np.dot(pv, pv)))
        qdot = (alpha * d_alpha * abs_power(pn, alpha - 2.0)) * pv if pn > 0.0 else np.zeros(d)
        qn = math.sqrt(float(np.dot(qv, qv)))
        if qn > 0.0:
            pdot = (-strength * degree * abs_power(qn, degree - 2.0)) * qv
        elif degree > 1.0:
            pdot = np.zeros(d)
        else:
            raise DomainError("force is singular at q = 0 for degree <= 1")
        return np.concatenate([qdot, pdot])

    funcs = _build_events(d, q_levels, radial_direction)

    times = [t0]
    ys = [y.copy()]
    energies = [e0]
    segments: list[DenseSegment] = []
    events: list[EventRecord] = []
    stop_count = 0
    accepted = 0
    rejected = 0

    f = rhs(t0, y)
    scale0 = atol + cfg.rel_tol * np.abs(y)
    h = cfg.initial_step if cfg.initial_step is not None else _initial_step(
        rhs, t0, y, f, scale0, t1 - t0
    )
    t = t0
    g_old = [fn(y) for fn in funcs]
    K = np.empty((7, 2 * d))
    finished = False

    while not finished:
        if accepted + rejected >= cfg.max_steps:
            raise MaxStepsExceeded(
                f"exceeded {cfg.max_steps} steps at t = {t}", t=t, y=y.copy()
            )
        h_min = 10.0 * abs(math.ulp(t))
        if h < h_min:
            raise StepSizeUnderflow(
                f"step size underflow ({h:.3e}) at t = {t}", t=t, y=y.copy()
            )
        p_norm = math.sqrt(float(np.dot(y[d:], y[d:])))
        if p_norm < p_small:
            h = min(h, cap_small_p)
        if p_norm < p_band:
            pdot_norm = math.sqrt(float(np.dot(f[d:], f[d:])))
            if pdot_norm > 0.0:
                h = min(h, (0.5 * p_norm + 1e-5 * p_scale) / pdot_norm)
        if t + h >= t1:
            h = t1 - t
            finished = True

        # one embedded attempt
        K[0] = f
        for i in range(1, 6):
            ysum = y + h * sum(a * K[j] for j, a in enumerate(_A[i]) if a != 0.0)
            K[i] = rhs(t + _C[i] * h, ysum)
        y_new = y + h * sum(a * K[j] for j, a in enumerate(_A[6]) if a != 0.0)
        t_new = t + h
        f_new = rhs(t_new, y_new)
        K[6] = f_new
        err_vec = h * (_ERR @ K)
        scale = atol + cfg.rel_tol * np.maximum(np.abs(y), np.abs(y_new))
        err_norm = _rms(err_vec / scale)

        if err_norm > 1.0:
            rejected += 1
            finished = False
            h *= max(_MIN_FACTOR, _SAFETY * err_norm**_ORDER_EXP)
            continue

        accepted += 1
        coef = K.T @ _DENSE
        seg = DenseSegment(t, h, y.copy(), coef)

        # scan and bisect sign crossings of the event functions
        g_new = [fn(y_new) for fn in funcs]
        step_hits: list[tuple[float, _EventFunc]] = []
        for fn, ga, gb in zip(funcs, g_old, g_new):
            if ga == 0.0:
                continue  # departing an exact event state, not a crossing
            if not (ga < 0.0 <= gb or ga > 0.0 >= gb):
                continue
            if fn.direction > 0 and not ga < 0.0:
                continue
            if fn.direction < 0 and not ga > 0.0:
                continue
            step_hits.append((_locate(fn, seg, t, t_new, ga, cfg.event_tol), fn))
        step_hits.sort(key=lambda item: item[0])

        truncate_at: float | None = None
        for t_ev, fn in step_hits:
            y_ev = seg.eval(t_ev)
            st = PhaseState(t_ev, y_ev[:d], y_ev[d:])
            events.append(EventRecord(fn.kind, t_ev, st, fn.component))
            if stop_after is not None and fn.kind == stop_after[0]:
                stop_count += 1
                if stop_count >= stop_after[1]:
                    truncate_at = t_ev
                    break

        segments.append(seg)
        if truncate_at is not None and truncate_at > t:
            y_stop = seg.eval(truncate_at)
            times.append(truncate_at)
            ys.append(y_stop)
            energies.append(
                hamiltonian(params, pot, PhaseState(truncate_at, y_stop[:d], y_stop[d:]))
            )
            break
        times.append(t_new)
        ys.append(y_new)
        energies.append(hamiltonian(params, pot, PhaseState(t_new, y_new[:d], y_new[d:])))

        t, y, f, g_old = t_new, y_new, f_new, g_new
        if not finished:
            factor = _MAX_FACTOR if err_norm == 0.0 else _SAFETY * err_norm**_ORDER_EXP
            h *= min(_MAX_FACTOR, max(_MIN_FACTOR, factor))

    arr = np.asarray(ys)
    traj = Trajectory(
        times=np.asarray(times),
        positions=arr[:, :d],
        momenta=arr[:, d:],
        energies=np.asarray(energies),
        segments=tuple(segments),
        accepted_steps=accepted,
        rejected_steps=rejected,
    )
    return traj, events


def measure_period(
    params: FractionalParams,
    pot: PowerLawPotential,
    energy: float,
    cfg: IntegratorConfig | None = None,
) -> float:
    """Oscillation period measured from the integrated motion.

    Launches from the turning point (q = q_turn, p = 0) and integrates
    until four momentum zero crossings have been located; successive
    crossings sit half a period apart, so the gap between the second and
    the fourth is one full cycle, with both endpoints event-located so
    start-up effects cancel.
    """
    pot.require_oscillator()
    if not energy > 0.0:
        raise DomainError(f"oscillator energy must be positive, got {energy}")
    q_turn = turning_point(pot, energy)
    ic = InitialConditions(q0=np.array([q_turn]), p0=np.array([0.0]))

    # period prefactor; the Beta factor is bounded by pi on the exponent range
    a, b = params.alpha, pot.degree
    tau = (
        abs_power(energy, 1.0 / a + 1.0 / b - 1.0)
        / (a * b * abs_power(params.d_alpha, 1.0 / a) * abs_power(pot.strength, 1.0 / b))
    )
    horizon = 8.5 * math.pi * tau
    for _ in range(3):
        _, events = integrate(
            params, pot, ic, (0.0, horizon), cfg, stop_after=("turning_point", 4)
        )
        turning = [ev.time for ev in events if ev.kind == "turning_point"]
        if len(turning) >= 4:
            return turning[3] - turning[1]
        horizon *= 2.0
    raise MaxStepsExceeded(
        f"fewer than four turning points found within horizon {horizon}"
    )
