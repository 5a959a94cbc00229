"""Direct simulation of u_t = u_xx + k(u^n)_x + u^p - u^q on a line.

Method of lines on a truncated domain with pinned Dirichlet equilibria at
the ends: second-order central differences for the diffusion and for the
convective flux u^n, pointwise reaction, explicit two-stage (Heun) time
stepping under the CFL bound dt <= safety * min(dx^2/2, dx/(kn)).
Front tracking, speed fitting, convergence-in-form measurement, and
sub/supersolution comparison live here as well.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._backend import kernels as _K
from .critical import cbar
from .model import ModelParams, ctilde, p2_eigen
from .phaseplane import (ConnectionClass, ProfileTable, ShootOptions,
                         backward_orbit_from_p2, reconstruct_profile,
                         shoot)


class InvalidTailParams(ValueError):
    pass


class CFLViolated(ValueError):
    pass


class RangeViolated(RuntimeError):
    pass


class MonotonicityViolated(RuntimeError):
    pass


class DomainTooSmall(RuntimeError):
    pass


class NoCrossing(ValueError):
    pass


class TooFewSamples(ValueError):
    pass


class WrongVelocitySide(ValueError):
    pass


class InitialOrderViolated(ValueError):
    pass


class ICKind(enum.Enum):
    HEAVISIDE = "Heaviside"
    ANTI_HEAVISIDE = "AntiHeaviside"
    TAIL_GENERAL = "TailGeneral"


@dataclass(frozen=True)
class Grid:
    L: float
    dx: float

    def __post_init__(self):
        if self.dx <= 0 or self.L <= 0:
            raise ValueError("need positive L and dx")
        if self.n_nodes < 101:
            raise ValueError("grid must have at least 100 intervals")

    @property
    def n_nodes(self) -> int:
        return int(round(2.0 * self.L / self.dx)) + 1

    @property
    def x(self) -> np.ndarray:
        return -self.L + self.dx * np.arange(self.n_nodes)


@dataclass
class Field:
    t: float
    u: np.ndarray


@dataclass
class FrontTrace:
    t: np.ndarray
    x_front: np.ndarray
    fitted_speed: Optional[float] = None
    fit_window: Optional[tuple[float, float]] = None
    fit_residual: Optional[float] = None

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("t,x_front\n")
            for t, x in zip(self.t, self.x_front):
                fh.write(f"{t:.17g},{x:.17g}\n")


@dataclass(frozen=True)
class TailParams:
    cbar: float
    C_minus: float = 1.0
    C_plus: float = 1.0
    R_minus: float = -5.0
    R_plus: float = 5.0


def initial_condition(kind: ICKind, grid: Grid,
                      tail_params: Optional[TailParams] = None,
                      params: Optional[ModelParams] = None) -> Field:
    """Heaviside step, its complement, or a monotone tailed profile.

    TailGeneral builds a nondecreasing profile lying below the admissible
    decay bound left of R_minus and above 1 - C_+ e^{lambda_-(cbar) x}
    right of R_plus (supported for q > 1 and cbar != 0 only; the q = 1
    left tail has a different closed form and a plain zero left state is
    used instead, which satisfies any upper bound).
    """
    x = grid.x
    if kind is ICKind.HEAVISIDE:
        return Field(0.0, np.where(x < 0.0, 0.0, 1.0))
    if kind is ICKind.ANTI_HEAVISIDE:
        return Field(0.0, np.where(x < 0.0, 1.0, 0.0))

    if tail_params is None or params is None:
        raise InvalidTailParams("TailGeneral needs tail_params and params")
    tp = tail_params
    if tp.cbar == 0.0:
        raise InvalidTailParams("general tails are stated for cbar != 0")
    if tp.C_minus <= 0 or tp.C_plus <= 0 or tp.R_minus >= tp.R_plus:
        raise InvalidTailParams("need C_-> 0, C_+ > 0 and R_- < R_+")
    lam = p2_eigen(params, tp.cbar).lambda_minus
    q = params.q

    def upper_left(xs):
        if q == 1.0:
            return np.zeros_like(xs)
        if tp.cbar > 0.0:
            return tp.C_minus * np.exp(tp.cbar * xs)
        amp = (abs(tp.cbar) / (q - 1.0)) ** (1.0 / (q - 1.0))
        return amp * np.abs(xs) ** (-1.0 / (q - 1.0))

    def lower_right(xs):
        return 1.0 - tp.C_plus * np.exp(lam * xs)

    a = float(np.clip(upper_left(np.array([tp.R_minus]))[0], 0.0, 1.0))
    b = float(np.clip(lower_right(np.array([tp.R_plus]))[0], 0.0, 1.0))
    if a > b:
        raise InvalidTailParams(
            f"tail bounds cross: left bound {a} at R_- exceeds right "
            f"bound {b} at R_+")
    u = np.empty_like(x)
    left = x < tp.R_minus
    right = x > tp.R_plus
    mid = ~(left | right)
    u[left] = np.clip(upper_left(x[left]), 0.0, a)
    u[right] = np.clip(lower_right(x[right]), b, 1.0)
    u[mid] = a + (b - a) * (x[mid] - tp.R_minus) / (tp.R_plus - tp.R_minus)
    u = np.maximum.accumulate(np.clip(u, 0.0, 1.0))
    return Field(0.0, u)


def cfl_dt(params: ModelParams, dx: float, safety: float = 0.4) -> float:
    return safety * min(0.5 * dx * dx, dx / (params.k * params.n))


def step(params: ModelParams, f: Field, dt: float, grid: Grid) -> Field:
    """One Heun step; boundary nodes are pinned at their current values."""
    if dt > cfl_dt(params, grid.dx, 1.0):
        raise CFLViolated(f"dt={dt} exceeds the stability bound")
    u = f.u.copy()
    umin, umax = _K.pde_advance(u, grid.dx, dt, 1, params.n, params.p,
                                params.q, params.k)
    if umin < -1e-9 or umax > 1.0 + 1e-9:
        raise RangeViolated(f"u left [0,1]: min={umin}, max={umax}")
    return Field(f.t + dt, u)


@dataclass
class SimOptions:
    L: Optional[float] = None      # auto-sized from the predicted speed
    dx: float = 0.05
    safety: float = 0.4
    snapshot_dt: float = 1.0
    tail_params: Optional[TailParams] = None
    check_monotone: bool = True


@dataclass
class Simulation:
    params: ModelParams
    ic: ICKind
    grid: Grid
    times: list
    snapshots: list            # list of np.ndarray, aligned with times
    trace: FrontTrace
    fitted_speed: Optional[float] = None
    fit_residual: Optional[float] = None
    shape_error_final: Optional[float] = None

    def field(self, i: int) -> Field:
        return Field(self.times[i], self.snapshots[i])

    def snapshots_to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("t,x,u\n")
            x = self.grid.x
            for t, u in zip(self.times, self.snapshots):
                for xi, ui in zip(x, u):
                    fh.write(f"{t:.17g},{xi:.17g},{ui:.17g}\n")

    def summary_json(self) -> str:
        p = self.params
        return json.dumps({
            "params": {"n": p.n, "p": p.p, "q": p.q, "k": p.k},
            "ic": self.ic.value,
            "fitted_speed": self.fitted_speed,
            "fit_residual": self.fit_residual,
            "shape_error_final": self.shape_error_final,
        })


def predicted_speed(params: ModelParams, ic: ICKind,
                    tol: float = 1e-6) -> float:
    """Magnitude of the asymptotic front speed used for domain sizing."""
    if ic is ICKind.ANTI_HEAVISIDE:
        return ctilde(params)
    return abs(cbar(params, tol).value)


def front_position(f: Field, grid: Grid, level: float = 0.5) -> float:
    u = f.u
    if not (u.min() < level < u.max()):
        raise NoCrossing(f"level {level} outside field range "
                         f"[{u.min()}, {u.max()}]")
    increasing = u[-1] >= u[0]
    v = u if increasing else u[::-1]
    i = int(np.searchsorted(v, level, side="left"))
    i = min(max(i, 1), len(v) - 1)
    x = grid.x if increasing else -grid.x[::-1]
    x0 = x[i - 1] + (level - v[i - 1]) / (v[i] - v[i - 1]) * (x[i] - x[i - 1])
    return float(x0 if increasing else -x0)


def fit_speed(trace: FrontTrace,
              window_fraction: float = 1.0 / 3.0) -> float:
    """Least-squares slope of x_front(t) over the trailing window."""
    t, x = trace.t, trace.x_front
    t0 = t[-1] - window_fraction * (t[-1] - t[0])
    sel = t >= t0
    if sel.sum() < 10:
        raise TooFewSamples(
            f"only {int(sel.sum())} front samples in the fit window")
    coef, res, *_ = np.polyfit(t[sel], x[sel], 1, full=True)
    trace.fitted_speed = float(coef[0])
    trace.fit_window = (float(t0), float(t[-1]))
    trace.fit_residual = float(np.sqrt(res[0] / sel.sum())) if len(res) \
        else 0.0
    return trace.fitted_speed


def simulate(params: ModelParams, ic_kind: ICKind, T: float,
             opts: SimOptions = SimOptions()) -> Simulation:
    if opts.L is not None:
        grid = Grid(opts.L, opts.dx)
    else:
        L = predicted_speed(params, ic_kind) * T + 20.0
        grid = Grid(math.ceil(L), opts.dx)

    f0 = initial_condition(ic_kind, grid, opts.tail_params, params)
    monotone_sign = (1.0 if f0.u[-1] >= f0.u[0] else -1.0)

    dt0 = cfl_dt(params, grid.dx, opts.safety)
    steps_per = max(1, math.ceil(opts.snapshot_dt / dt0))
    n_snaps = max(1, round(T / opts.snapshot_dt))
    dt = T / (n_snaps * steps_per)

    u = f0.u.copy()
    times = [0.0]
    snaps = [u.copy()]
    fronts = [front_position(f0, grid)]
    edge = 5 * grid.dx
    for j in range(1, n_snaps + 1):
        umin, umax = _K.pde_advance(u, grid.dx, dt, steps_per,
                                    params.n, params.p, params.q, params.k)
        if umin < -1e-9 or umax > 1.0 + 1e-9:
            raise RangeViolated(
                f"u left [0,1] by t={j * steps_per * dt}: "
                f"min={umin}, max={umax}")
        t = j * steps_per * dt
        if opts.check_monotone:
            d = monotone_sign * np.diff(u)
            if d.min() < -1e-9:
                raise MonotonicityViolated(
                    f"monotonicity lost at t={t}: worst step {d.min()}")
        xf = front_position(Field(t, u), grid)
        if xf < grid.x[0] + edge or xf > grid.x[-1] - edge:
            raise DomainTooSmall(
                f"front at {xf} within 5 cells of the boundary at t={t}")
        times.append(t)
        snaps.append(u.copy())
        fronts.append(xf)

    trace = FrontTrace(np.asarray(times), np.asarray(fronts))
    sim = Simulation(params=params, ic=ic_kind, grid=grid, times=times,
                     snapshots=snaps, trace=trace)
    if len(times) >= 30:
        sim.fitted_speed = fit_speed(trace)
        sim.fit_residual = trace.fit_residual
    return sim


def shape_error(f: Field, grid: Grid, profile: ProfileTable) -> float:
    """Sup distance to the profile after half-level phase alignment."""
    xf = front_position(f, grid)
    x = grid.x
    increasing = f.u[-1] >= f.u[0]
    arg = (x - xf) if increasing else -(x - xf)
    inside = (arg >= profile.xi[0]) & (arg <= profile.xi[-1])
    return float(np.abs(f.u[inside] - profile(arg[inside])).max())


class WaveKind(enum.Enum):
    SUBSOLUTION = "Subsolution"
    SUPERSOLUTION = "Supersolution"


@dataclass
class TruncatedWave:
    """Traveling-wave bracket U(x, t) = f(x + ct) with a flat extension.

    A subsolution vanishes on (-inf, R]; a supersolution equals 1 on
    [R, +inf).  The interior is tabulated from the phase-plane orbit.
    """

    xi: np.ndarray
    f: np.ndarray
    c: float
    R: float
    kind: WaveKind

    def eval(self, x, t: float = 0.0):
        arg = np.asarray(x, dtype=float) + self.c * t
        left = 0.0 if self.kind is WaveKind.SUBSOLUTION else self.f[0]
        right = self.f[-1] if self.kind is WaveKind.SUBSOLUTION else 1.0
        return np.interp(arg, self.xi, self.f, left=left, right=right)


def build_subsolution(params: ModelParams, c: float,
                      R: float = 0.0) -> TruncatedWave:
    """Wave vanishing left of R, from the orbit into P2 tangent to e_-.

    Requires c below the critical velocity (the forward shot at c must be
    DirectLeading); the orbit is integrated backward from P2 until it
    meets X = 0 with positive slope, which becomes the interface at R.
    """
    traj = shoot(params, c)
    if traj.connection is not ConnectionClass.DIRECT_LEADING:
        raise WrongVelocitySide(
            f"subsolution needs a DirectLeading velocity, got "
            f"{traj.connection} at c={c}")
    xi, X, _Y = backward_orbit_from_p2(params, c)
    xi = xi - xi[0] + R
    keep = X < 1.0 - 1e-9
    return TruncatedWave(xi=xi[keep], f=X[keep], c=c, R=R,
                         kind=WaveKind.SUBSOLUTION)


def build_supersolution(params: ModelParams, c: float,
                        R: float = 0.0) -> TruncatedWave:
    """Wave equal to 1 right of R, from an overshooting orbit cut at f = 1."""
    traj = shoot(params, c, ShootOptions(max_step=0.01))
    if traj.connection is not ConnectionClass.OVERSHOOT:
        raise WrongVelocitySide(
            f"supersolution needs an Overshoot velocity, got "
            f"{traj.connection} at c={c}")
    keep = traj.X < 1.0
    xi = traj.xi[keep]
    X = traj.X[keep]
    # locate the f = 1 crossing recorded during the shot and pin it to R
    cross = [e for e in traj.events if e[0].name == "CROSSED_X1"]
    xi_cross = cross[0][1] if cross else xi[-1]
    xi = np.append(xi - xi_cross + R, R)
    X = np.append(X, 1.0)
    return TruncatedWave(xi=xi, f=X, c=c, R=R, kind=WaveKind.SUPERSOLUTION)


def comparison_check(sim: Simulation, wave: TruncatedWave,
                     tol: float = 1e-6) -> bool:
    """Whether the bracket ordering holds at every snapshot and node."""
    x = sim.grid.x
    sign = 1.0 if wave.kind is WaveKind.SUBSOLUTION else -1.0
    w0 = wave.eval(x, 0.0)
    if np.any(sign * (sim.snapshots[0] - w0) < -tol):
        raise InitialOrderViolated(
            "ordering does not hold at t = 0; shift the wave")
    for t, u in zip(sim.times, sim.snapshots):
        w = wave.eval(x, t)
        if np.any(sign * (u - w) < -tol):
            return False
    return True


__all__ = [
    "Field", "FrontTrace", "Grid", "ICKind", "SimOptions", "Simulation",
    "TailParams", "TruncatedWave", "WaveKind", "build_subsolution",
    "build_supersolution", "cfl_dt", "comparison_check", "front_position",
    "fit_speed", "initial_condition", "predicted_speed",
    "reconstruct_profile", "shape_error", "simulate", "step",
]
