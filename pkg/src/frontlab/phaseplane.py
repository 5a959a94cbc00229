"""Phase-plane shooting for the traveling-wave system.

Profiles f(x+ct) satisfy X' = Y, Y' = cY - kn X^{n-1} Y - X^p + X^q with
equilibria P1 = (0,0) and P2 = (1,0).  A shot launches on the unique
trajectory leaving P1 into the open quadrant X, Y > 0 (local expansions
below), integrates until a terminal event, and classifies the qualitative
outcome.  The classification drives the bisections in
:mod:`frontlab.critical`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from ._backend import kernels as _K
from .model import ModelParams, P2Class, p2_eigen


class DeltaOutOfRange(ValueError):
    pass


class IntegrationFailure(RuntimeError):
    """Adaptive step size underflowed; the shot cannot be trusted."""


class IntegrityViolation(RuntimeError):
    """A trajectory crossed Y = 0 at X in (0, 1].

    The flow satisfies Y' = X^q - X^p > 0 on that segment, so the crossing
    is impossible for the exact system; it signals a numerical problem.
    """


class NotAConnection(ValueError):
    pass


class ConnectionClass(enum.Enum):
    DIRECT_LEADING = "DirectLeading"
    DIRECT_CRITICAL = "DirectCritical"
    OVERSHOOT = "Overshoot"
    UNDETERMINED = "Undetermined"


#: Classes admitting a heteroclinic interpretation (no X-axis crossing).
DIRECT_CLASSES = (ConnectionClass.DIRECT_LEADING,
                  ConnectionClass.DIRECT_CRITICAL)


class EventKind(enum.Enum):
    CROSSED_X1 = "CrossedX1"
    HIT_X_AXIS = "HitXAxis"
    NEAR_P2 = "NearP2"
    CROSSED_Y_AXIS = "CrossedYAxis"
    CAPPED = "Capped"


@dataclass(frozen=True)
class ShootOptions:
    delta: float = 1e-6
    rtol: float = 1e-12
    atol: float = 1e-14
    # no geometric cap: in the degenerate slow regimes near P1 the xi-span
    # can reach 1e12 and only error control can size the steps sensibly
    max_step: float = math.inf
    eps_p2: float = 1e-10
    x_max: float = 10.0
    arc_cap: float = 1e4
    max_steps: int = 2_000_000
    retry_deltas: tuple[float, ...] = (1e-7, 1e-8)
    # below this eigenvalue gap the two approach directions at P2 merge
    # and the tangency test is meaningless; report DirectCritical, flagged
    eigen_gap: float = 1e-4


@dataclass
class Trajectory:
    params: ModelParams
    c: float
    delta: float
    xi: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    events: list = field(default_factory=list)
    connection: ConnectionClass = ConnectionClass.UNDETERMINED
    x0_crossing: float | None = None
    approach_slope: float | None = None
    degenerate_node: bool = False

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("xi,X,Y\n")
            for t, x, y in zip(self.xi, self.X, self.Y):
                fh.write(f"{t:.17g},{x:.17g},{y:.17g}\n")


@dataclass
class ProfileTable:
    xi: np.ndarray
    f: np.ndarray
    c: float

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("xi,f\n")
            for t, v in zip(self.xi, self.f):
                fh.write(f"{t:.17g},{v:.17g}\n")

    def __call__(self, x):
        """Piecewise-linear evaluation with constant extension."""
        return np.interp(x, self.xi, self.f)


def vector_field(params: ModelParams, c: float, pt) -> tuple[float, float]:
    x, y = pt
    n, p, q, k = params.n, params.p, params.q, params.k
    if x > 0.0:
        xq = x ** q
        xp = x ** p
        xn1 = x ** (n - 1.0)
    else:
        xq = xp = 0.0
        xn1 = 1.0 if n == 1.0 else 0.0
    return (y, c * y - k * n * xn1 * y - xp + xq)


def launch_state(params: ModelParams, c: float,
                 delta: float) -> tuple[float, float]:
    """First-order launch point on the unique outgoing trajectory of P1.

    q = 1 makes P1 a saddle with unstable eigenvalue
    lam1 = (c + sqrt(c^2+4))/2.  For q > 1 the origin is degenerate and
    the leading balance depends on the sign of c; at c = 0 it depends on
    how n compares with (q+1)/2.
    """
    if not (0.0 < delta <= 1e-3):
        raise DeltaOutOfRange(f"delta must be in (0, 1e-3], got {delta}")
    n, q, k = params.n, params.q, params.k
    if q == 1.0:
        lam1 = 0.5 * (c + math.sqrt(c * c + 4.0))
        return (delta, lam1 * delta)
    if c > 0.0:
        return (delta, c * delta)
    if c < 0.0:
        return (delta, delta ** q / abs(c))
    half = 0.5 * (q + 1.0)
    if n > half:
        return (delta, math.sqrt(2.0 / (q + 1.0)) * delta ** half)
    if n == half:
        v1 = (math.sqrt(k * k * n * n + 4.0 * n) - k * n) / (2.0 * n)
        return (delta, v1 * delta ** n)
    return (delta, delta ** (q + 1.0 - n) / (k * n))


def _launch_effective(params: ModelParams, c: float,
                      delta: float) -> tuple[float, float]:
    """Start point actually handed to the integrator.

    For q > 1 and c < 0 the outgoing trajectory hugs the slow manifold
    Y = (X^q - X^p) / (|c| + kn X^{n-1}) while the transverse relaxation
    rate stays ~|c|; integrating from X = delta would cost ~|c|^2
    delta^{1-q} steps.  Instead the start is placed at an abscissa X0
    where the manifold expansion (with its first-order correction) is
    accurate to ~1e-10, which bounds the step count by ~q/1e-5
    independently of c.  The launch point is still on the same unique
    trajectory, so the classification is unchanged.
    """
    n, p, q, k = params.n, params.p, params.q, params.k
    if q <= 1.0 or c >= 0.0:
        return launch_state(params, c, delta)
    a = -c
    etg = 1e-5
    x0 = min(0.1,
             (etg * a * a / q) ** (1.0 / (q - 1.0)),
             (etg * a / (k * n)) ** (1.0 / (n - 1.0)) if n > 1.0 else 0.1)
    if x0 <= delta:
        return launch_state(params, c, delta)
    num = x0 ** q - x0 ** p
    den = a + k * n * x0 ** (n - 1.0)
    y_sm = num / den
    dnum = q * x0 ** (q - 1.0) - p * x0 ** (p - 1.0)
    dden = k * n * (n - 1.0) * x0 ** (n - 2.0) if n != 1.0 else 0.0
    dy_sm = (dnum * den - num * dden) / (den * den)
    return (x0, y_sm - y_sm * dy_sm / den)


def _classify_near_p2(params, c, opts, ev, slopes):
    ed = p2_eigen(params, c)
    s1x, s1y, s2x, s2y = slopes
    if math.isnan(s2x) or opts.eps_p2 >= 1e-4:
        slope = ev[2] / (ev[1] - 1.0) if ev[1] != 1.0 else math.inf
    elif math.isnan(s1x):
        slope = s2y / (s2x - 1.0)
    else:
        # Richardson extrapolation of the chord slope to distance zero
        # removes the leading curvature bias of the samples
        slope = 2.0 * (s2y / (s2x - 1.0)) - (s1y / (s1x - 1.0))
    if (ed.discriminant < 0.0
            or ed.lambda_plus - ed.lambda_minus <= opts.eigen_gap):
        return ConnectionClass.DIRECT_CRITICAL, slope, True
    mid = 0.5 * (ed.lambda_plus + ed.lambda_minus)
    if slope < mid:
        return ConnectionClass.DIRECT_CRITICAL, slope, False
    return ConnectionClass.DIRECT_LEADING, slope, False


def _shoot_once(params: ModelParams, c: float, opts: ShootOptions,
                delta: float) -> Trajectory:
    # a direct connection needs a stable node at P2; in the focus and
    # unstable bands every orbit crosses the axis, so the proximity test
    # is disabled there and the (possibly shallow) crossing is awaited
    stable_node = p2_eigen(params, c).p2_class is P2Class.STABLE_NODE
    eps_eff = opts.eps_p2 if stable_node else 0.0

    x0, y0 = _launch_effective(params, c, delta)
    (status, xi, X, Y, ev, cross1, slopes) = _K.shoot_core(
        params.n, params.p, params.q, params.k, c, x0, y0,
        opts.rtol, opts.atol, opts.max_step, eps_eff,
        opts.x_max, opts.arc_cap, opts.max_steps, True)

    # a true direct connection keeps X < 1 throughout; reaching the
    # proximity ball after crossing X = 1 at an appreciable height means
    # the orbit flew over P2 and will cross the axis just beyond it
    if (status == _K.STATUS_NEAR_P2 and not math.isnan(cross1[0])
            and cross1[1] > max(10.0 * opts.eps_p2, 1e-9)):
        (status, xi, X, Y, ev, cross1, slopes) = _K.shoot_core(
            params.n, params.p, params.q, params.k, c, x0, y0,
            opts.rtol, opts.atol, opts.max_step, 0.0,
            opts.x_max, opts.arc_cap, opts.max_steps, True)

    traj = Trajectory(params=params, c=c, delta=delta, xi=xi, X=X, Y=Y)
    if not math.isnan(cross1[0]):
        traj.events.append((EventKind.CROSSED_X1, cross1[0],
                            (1.0, cross1[1])))

    if status == _K.STATUS_NEAR_P2:
        traj.events.append((EventKind.NEAR_P2, ev[0], (ev[1], ev[2])))
        cls, slope, degen = _classify_near_p2(params, c, opts, ev, slopes)
        traj.connection = cls
        traj.approach_slope = slope
        traj.degenerate_node = degen
    elif status == _K.STATUS_OVERSHOOT or (
            status == _K.STATUS_AXIS_INNER and ev[1] > 1.0 - 1e-6):
        # crossings within roundoff of P2 count as overshoot: an exact
        # direct connection never reaches the axis in finite xi
        traj.events.append((EventKind.HIT_X_AXIS, ev[0], (ev[1], 0.0)))
        traj.connection = ConnectionClass.OVERSHOOT
        traj.x0_crossing = ev[1]
    elif status == _K.STATUS_AXIS_INNER:
        raise IntegrityViolation(
            f"trajectory hit Y=0 at X={ev[1]:.6g} <= 1 "
            f"(params={params}, c={c}, delta={delta})")
    elif status == _K.STATUS_STEP_UNDERFLOW:
        raise IntegrationFailure(
            f"step size underflow at xi={ev[0]:.6g} "
            f"(params={params}, c={c})")
    else:
        traj.events.append((EventKind.CAPPED, ev[0], (ev[1], ev[2])))
        traj.connection = ConnectionClass.UNDETERMINED
    return traj


def shoot(params: ModelParams, c: float,
          opts: ShootOptions = ShootOptions()) -> Trajectory:
    """Shoot from P1 and classify the outcome.

    An Undetermined outcome (cap hit) is retried with the smaller launch
    offsets in ``opts.retry_deltas`` before being returned as is.
    """
    traj = _shoot_once(params, c, opts, opts.delta)
    if traj.connection is not ConnectionClass.UNDETERMINED:
        return traj
    for d in opts.retry_deltas:
        traj = _shoot_once(params, c, opts, d)
        if traj.connection is not ConnectionClass.UNDETERMINED:
            return traj
    return traj


def _hermite_eval(xg, yg, dg, x):
    """Evaluate the C1 cubic Hermite interpolant of (xg, yg, y'=dg) at x."""
    i = np.clip(np.searchsorted(xg, x) - 1, 0, len(xg) - 2)
    h = xg[i + 1] - xg[i]
    t = (x - xg[i]) / h
    t2 = t * t
    t3 = t2 * t
    return ((2 * t3 - 3 * t2 + 1) * yg[i]
            + (t3 - 2 * t2 + t) * h * dg[i]
            + (-2 * t3 + 3 * t2) * yg[i + 1]
            + (t3 - t2) * h * dg[i + 1])


def _hermite_root(xg, yg, dg, level):
    """Abscissa where the Hermite interpolant of monotone data hits level."""
    j = int(np.searchsorted(yg, level))
    a, b = xg[j - 1], xg[j]
    for _ in range(200):
        m = 0.5 * (a + b)
        if _hermite_eval(xg, yg, dg, m) < level:
            a = m
        else:
            b = m
        if b - a < 1e-14 * max(1.0, abs(a)):
            break
    return 0.5 * (a + b)


def reconstruct_profile(traj: Trajectory, params: ModelParams,
                        c: float) -> ProfileTable:
    """Wave profile f(xi) of a direct connection, anchored at f(0) = 1/2.

    Re-integrates the connection with a small step cap and resamples to a
    uniform grid (cubic Hermite, using Y = f') when the xi-span is
    moderate; degenerate launches with algebraically slow tails keep the
    natural adaptive nodes instead.
    """
    if traj.connection not in DIRECT_CLASSES:
        raise NotAConnection(
            f"profile requires a direct connection, got {traj.connection}")

    opts = ShootOptions(delta=5e-7, max_step=0.01)
    x0, y0 = _launch_effective(params, c, opts.delta)
    span_est = traj.xi[-1] - traj.xi[0]
    if span_est > 400.0:
        # avoid millions of capped steps along the slow tail
        opts = replace(opts, max_step=math.inf)
    (status, xi, X, Y, ev, _cross1, _s) = _K.shoot_core(
        params.n, params.p, params.q, params.k, c, x0, y0,
        opts.rtol, opts.atol, opts.max_step, opts.eps_p2,
        opts.x_max, opts.arc_cap, opts.max_steps, True)
    if status != _K.STATUS_NEAR_P2:
        raise IntegrationFailure(
            f"profile re-integration ended with kernel status {status}")

    xi0 = _hermite_root(xi, X, Y, 0.5)
    xi = xi - xi0
    if span_est <= 400.0:
        h = 0.005
        grid = np.arange(math.ceil(xi[0] / h), math.floor(xi[-1] / h) + 1)
        grid = grid * h
        f = _hermite_eval(xi, X, Y, grid)
        xi, f = grid, f
    else:
        f = X
    keep = (f > 1e-6) & (f < 1.0 - 1e-6)
    return ProfileTable(xi=xi[keep], f=np.maximum.accumulate(f[keep]), c=c)


def flow_sign_across(params: ModelParams, c: float, curve_value: float,
                     curve_slope: float, X: float) -> float:
    """Flow direction across the graph Y = g(X) at abscissa X.

    Returns the inner product of the vector field at (X, g(X)) with the
    downward normal (g'(X), -1); positive values mean the flow enters the
    region below the curve.
    """
    g = curve_value
    _, fy = vector_field(params, c, (X, g))
    return g * curve_slope - fy


def backward_orbit_from_p2(params: ModelParams, c: float,
                           delta: float = 1e-8,
                           opts: ShootOptions = ShootOptions()):
    """Orbit through P2 along -e_-(c), integrated backward until X = 0.

    Starting point (1 - delta, -lambda_- delta) sits on the local
    non-leading direction in the quadrant X < 1, Y > 0.  Returns
    (xi, X, Y) arrays in increasing-xi order with xi = 0 at the start
    point; used to build compactly supported subsolutions.
    """
    ed = p2_eigen(params, c)
    x0 = 1.0 - delta
    y0 = -ed.lambda_minus * delta
    (status, xi, X, Y, ev, _c1, _s) = _K.shoot_core(
        params.n, params.p, params.q, params.k, c, x0, y0,
        opts.rtol, opts.atol, opts.max_step, opts.eps_p2,
        opts.x_max, opts.arc_cap, opts.max_steps, False)
    if status != _K.STATUS_YAXIS:
        raise IntegrationFailure(
            f"backward orbit from P2 ended with kernel status {status} "
            f"(params={params}, c={c})")
    order = np.argsort(xi)
    return xi[order], X[order], Y[order]
