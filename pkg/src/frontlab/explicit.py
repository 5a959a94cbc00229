"""Catalogue of closed-form trajectories, invariant curves, and waves.

Each case packages a parameter set together with an exact curve Y(X) on
[0, 1] (value and derivative in closed form, never splines) and, where it
exists, the traveling-wave profile.  Trajectory cases are exact orbits of
the phase-plane system and serve as ground truth for the shooting code;
invariant-curve cases carry the sign function certifying the flow
direction across them.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .model import ModelParams, validate_params
from .phaseplane import ShootOptions, shoot


class WrongKind(ValueError):
    pass


class NoWaveForm(ValueError):
    pass


class CaseKind(enum.Enum):
    TRAJECTORY = "Trajectory"
    INVARIANT_CURVE_INWARD = "InvariantCurveInward"
    INVARIANT_CURVE_OUTWARD = "InvariantCurveOutward"


@dataclass(frozen=True)
class WaveForm:
    """Profile f(xi) = (1 + C e^{-a xi})^{-b} with C fixed by f(0) = 1/2.

    All catalogued wave solutions share this shape; a is the decay rate
    k(n-1) (or c_i(n-1)), b = 1/(n-1).
    """

    a: float
    b: float

    @property
    def C(self) -> float:
        return 2.0 ** (1.0 / self.b) - 1.0

    def f(self, xi):
        g = 1.0 + self.C * np.exp(-self.a * np.asarray(xi, dtype=float))
        return g ** (-self.b)

    def df(self, xi):
        g = 1.0 + self.C * np.exp(-self.a * np.asarray(xi, dtype=float))
        return self.a * self.b * (g - 1.0) * g ** (-self.b - 1.0)

    def d2f(self, xi):
        g = 1.0 + self.C * np.exp(-self.a * np.asarray(xi, dtype=float))
        return (-self.a ** 2 * self.b * (g - 1.0)
                * (g ** (-self.b - 1.0)
                   - (self.b + 1.0) * (g - 1.0) * g ** (-self.b - 2.0)))


@dataclass(frozen=True)
class ExplicitCase:
    id: str
    params: ModelParams
    c: float
    curve: Callable
    curve_deriv: Callable
    kind: CaseKind
    valid: bool
    critical: bool = False
    wave: Optional[WaveForm] = None
    sign_function: Optional[Callable] = None


def _poly_curve(coef: float, e1: float, e2: float):
    """Y = coef (X^e1 - X^e2) with its derivative."""
    def curve(X):
        X = np.asarray(X, dtype=float)
        return coef * (X ** e1 - X ** e2)

    def deriv(X):
        X = np.asarray(X, dtype=float)
        return coef * (e1 * X ** (e1 - 1.0) - e2 * X ** (e2 - 1.0))

    return curve, deriv


def make_basic(n: float = 3.0) -> ExplicitCase:
    """Y = X - X^n, a trajectory for p = n, q = 1, k = 1, c = 0."""
    curve, deriv = _poly_curve(1.0, 1.0, n)
    return ExplicitCase(
        id="BASIC", params=validate_params(n, n, 1.0, 1.0), c=0.0,
        curve=curve, curve_deriv=deriv, kind=CaseKind.TRAJECTORY,
        valid=n > 1.0, critical=n > 2.0,
        wave=WaveForm(a=n - 1.0, b=1.0 / (n - 1.0)))


def make_curve0(n: float = 3.0, k: float = 2.0) -> ExplicitCase:
    """Y = k (X - X^n) with c = (k^2-1)/k; critical when k^2(n-1) > 1."""
    curve, deriv = _poly_curve(k, 1.0, n)
    return ExplicitCase(
        id="CURVE0", params=validate_params(n, n, 1.0, k),
        c=(k * k - 1.0) / k,
        curve=curve, curve_deriv=deriv, kind=CaseKind.TRAJECTORY,
        valid=True, critical=k * k * (n - 1.0) > 1.0,
        wave=WaveForm(a=k * (n - 1.0), b=1.0 / (n - 1.0)))


def expl2_velocities(n: float, k: float) -> tuple[float, float]:
    s = math.sqrt(k * k * n * n - 4.0 * n)
    return ((k * n + s) / (2.0 * n), (k * n - s) / (2.0 * n))


def make_expl2(n: float = 3.0, k: float = 2.0,
               branch: int = 1) -> ExplicitCase:
    """Y = c_i (X - X^n) for p = 2n-1, q = n, real for k > 2/sqrt(n).

    The faster velocity c_1 is the critical one when
    k > (2n-1)/(n sqrt(n-1)); no criticality claim is recorded for c_2.
    """
    valid = k > 2.0 / math.sqrt(n)
    c1, c2 = expl2_velocities(n, k) if valid else (math.nan, math.nan)
    ci = c1 if branch == 1 else c2
    curve, deriv = _poly_curve(ci, 1.0, n)
    critical = (branch == 1
                and k > (2.0 * n - 1.0) / (n * math.sqrt(n - 1.0)))
    return ExplicitCase(
        id=f"EXPL2_C{branch}",
        params=validate_params(n, 2.0 * n - 1.0, n, k), c=ci,
        curve=curve, curve_deriv=deriv, kind=CaseKind.TRAJECTORY,
        valid=valid, critical=critical,
        wave=WaveForm(a=ci * (n - 1.0), b=1.0 / (n - 1.0))
        if valid else None)


def make_curve1(n: float = 3.0) -> ExplicitCase:
    """Y = X - X^n for p = 2n-1, q = 1, k = (n+1)/n, c = 0 (critical)."""
    curve, deriv = _poly_curve(1.0, 1.0, n)
    return ExplicitCase(
        id="CURVE1", params=validate_params(n, 2.0 * n - 1.0, 1.0,
                                            (n + 1.0) / n),
        c=0.0, curve=curve, curve_deriv=deriv, kind=CaseKind.TRAJECTORY,
        valid=True, critical=True,
        wave=WaveForm(a=n - 1.0, b=1.0 / (n - 1.0)))


def _curve3(n: float, q: float):
    d = 2.0 / math.sqrt(2.0 * (q + 1.0))
    return _poly_curve(d, 0.5 * (q + 1.0), n)


def make_curve3_e3(n: float = 7.0, q: float = 1.0) -> ExplicitCase:
    """Y = d (X^{(q+1)/2} - X^n), p = 2n-1, k = (2n+q+1)/(n sqrt(2(q+1))).

    Critical exactly when n > 3(q+1)/2, pinning k*(n, 2n-1, q).
    """
    curve, deriv = _curve3(n, q)
    k = (2.0 * n + q + 1.0) / (n * math.sqrt(2.0 * (q + 1.0)))
    wave = (WaveForm(a=n - 1.0, b=1.0 / (n - 1.0)) if q == 1.0 else None)
    return ExplicitCase(
        id="CURVE3_E3", params=validate_params(n, 2.0 * n - 1.0, q, k),
        c=0.0, curve=curve, curve_deriv=deriv, kind=CaseKind.TRAJECTORY,
        valid=True, critical=n > 1.5 * (q + 1.0), wave=wave)


def make_curve3_e4(n: float = 5.0, q: float = 3.0) -> ExplicitCase:
    """Same curve for p = n + (q-1)/2, k = 2/sqrt(2(q+1)).

    Critical exactly when n > q+1, pinning k*(n, n+(q-1)/2, q).
    """
    curve, deriv = _curve3(n, q)
    k = 2.0 / math.sqrt(2.0 * (q + 1.0))
    wave = (WaveForm(a=n - 1.0, b=1.0 / (n - 1.0)) if q == 1.0 else None)
    return ExplicitCase(
        id="CURVE3_E4",
        params=validate_params(n, n + 0.5 * (q - 1.0), q, k),
        c=0.0, curve=curve, curve_deriv=deriv, kind=CaseKind.TRAJECTORY,
        valid=True, critical=n > q + 1.0, wave=wave)


def make_complex(n: float = 2.0, p: float = 4.0, q: float = 3.0,
                 A: float = 1.0) -> ExplicitCase:
    """Inward invariant curve Y = A (X^{q+1-n} - X^{p+1-n}) at c = 0.

    Exists for k = (A^2(p-q)+1)/(An); the flow enters the region below it
    whenever n <= (q+1)/2, certified by the sign of
    F(X) = A^2 X^q (1 - X^{p-q}) G(X) with
    G(X) = p - q + (q+1-n) X^{q+1-2n} - (p+1-n) X^{p+1-2n}.
    """
    k = (A * A * (p - q) + 1.0) / (A * n)
    curve, deriv = _poly_curve(A, q + 1.0 - n, p + 1.0 - n)

    def sign_function(X):
        X = np.asarray(X, dtype=float)
        with np.errstate(divide="ignore"):
            G = (p - q
                 + (q + 1.0 - n) * X ** (q + 1.0 - 2.0 * n)
                 - (p + 1.0 - n) * X ** (p + 1.0 - 2.0 * n))
        F = A * A * X ** q * (1.0 - X ** (p - q)) * G
        return np.where(X == 0.0, 0.0, F)

    return ExplicitCase(
        id="COMPLEX", params=validate_params(n, p, q, k), c=0.0,
        curve=curve, curve_deriv=deriv,
        kind=CaseKind.INVARIANT_CURVE_INWARD,
        valid=n <= 0.5 * (q + 1.0), sign_function=sign_function)


def make_epscurve(n: float = 3.0, q: float = 2.0) -> ExplicitCase:
    """Outward invariant curve Y = k(1+eps)(X^q - X^n) for p = n.

    With k = 2 sqrt(n-q)/n and eps = q(q-1)/(n(n-1) - q(q-1)) the flow
    exits the region below the curve:
    F_eps(X) = (1+eps)^2 q X^{q-1} - eps(1+eps) n X^{n-1} - n^2/(4(n-q))
    stays <= 0 on [0, 1].  Valid for q in (1, n-1].
    """
    k = 2.0 * math.sqrt(n - q) / n
    eps = q * (q - 1.0) / (n * (n - 1.0) - q * (q - 1.0))
    curve, deriv = _poly_curve(k * (1.0 + eps), q, n)

    def sign_function(X):
        X = np.asarray(X, dtype=float)
        return ((1.0 + eps) ** 2 * q * X ** (q - 1.0)
                - eps * (1.0 + eps) * n * X ** (n - 1.0)
                - n * n / (4.0 * (n - q)))

    return ExplicitCase(
        id="EPSCURVE", params=validate_params(n, n, q, k), c=0.0,
        curve=curve, curve_deriv=deriv,
        kind=CaseKind.INVARIANT_CURVE_OUTWARD,
        valid=1.0 < q <= n - 1.0, sign_function=sign_function)


def make_basic_inward(n: float = 3.0, q: float = 2.0,
                      k: float = 1.5) -> ExplicitCase:
    """Y = X - X^n as an inward invariant curve for p = n, q > 1, k > 1.

    F(X) = (k-1) n X^{n-1} (X - X^n) + X - X^q >= 0 on [0, 1] when k > 1.
    """
    curve, deriv = _poly_curve(1.0, 1.0, n)

    def sign_function(X):
        X = np.asarray(X, dtype=float)
        return ((k - 1.0) * n * X ** (n - 1.0) * (X - X ** n)
                + X - X ** q)

    return ExplicitCase(
        id="BASIC_INWARD", params=validate_params(n, n, q, k), c=0.0,
        curve=curve, curve_deriv=deriv,
        kind=CaseKind.INVARIANT_CURVE_INWARD,
        valid=k > 1.0, sign_function=sign_function)


def list_cases() -> list[ExplicitCase]:
    return [
        make_basic(),
        make_curve0(),
        make_expl2(branch=1),
        make_expl2(branch=2),
        make_curve1(),
        make_curve3_e3(),
        make_curve3_e4(),
        make_complex(),
        make_epscurve(),
        make_basic_inward(),
    ]


def _orbit_residual(case: ExplicitCase, X):
    n, p, q, k = (case.params.n, case.params.p, case.params.q,
                  case.params.k)
    Y = case.curve(X)
    dY = case.curve_deriv(X)
    rhs = (case.c * Y - k * n * X ** (n - 1.0) * Y - X ** p + X ** q)
    return Y * dY - rhs


def residual_trajectory(case: ExplicitCase, n_samples: int = 200) -> float:
    """Sup residual of the orbit equation Y Y' = cY - knX^{n-1}Y - X^p + X^q.

    Samples the interior X in [0.05, 0.95]; the endpoints are excluded
    because the orbit equation degenerates with Y -> 0 there.
    """
    if case.kind is not CaseKind.TRAJECTORY:
        raise WrongKind(f"{case.id} is {case.kind.value}, not a trajectory")
    if n_samples < 10:
        raise ValueError("n_samples must be >= 10")
    X = np.linspace(0.05, 0.95, n_samples)
    return float(np.abs(_orbit_residual(case, X)).max())


def residual_wave(case: ExplicitCase, n_samples: int = 400) -> float:
    """Sup residual of the wave profile in the second-order profile ODE."""
    if case.wave is None:
        raise NoWaveForm(f"{case.id} has no closed-form wave")
    w = case.wave
    n, p, q, k = (case.params.n, case.params.p, case.params.q,
                  case.params.k)
    xi = np.linspace(-20.0, 20.0, n_samples)
    f, df, d2f = w.f(xi), w.df(xi), w.d2f(xi)
    res = d2f - (case.c * df - k * n * f ** (n - 1.0) * df
                 - f ** p + f ** q)
    return float(np.abs(res).max())


def sign_check(case: ExplicitCase, n_samples: int = 2000) -> bool:
    """Whether the flow-direction sign matches the declared curve kind."""
    if case.kind is CaseKind.TRAJECTORY:
        raise WrongKind(f"{case.id} is a trajectory, not an invariant curve")
    X = np.linspace(0.0, 1.0, n_samples)
    F = case.sign_function(X)
    tol = 1e-12
    if case.kind is CaseKind.INVARIANT_CURVE_INWARD:
        return bool(np.all(F >= -tol))
    return bool(np.all(F <= tol))


def shoot_deviation(case: ExplicitCase,
                    opts: ShootOptions = ShootOptions()) -> float:
    """Sup deviation in Y between the shot orbit and the exact curve.

    Only meaningful for critical trajectory cases: there the curve *is*
    the orbit leaving P1.  The shot polyline is compared at its own
    sample abscissas X in [0.05, 0.95].
    """
    if case.kind is not CaseKind.TRAJECTORY:
        raise WrongKind(f"{case.id} is {case.kind.value}, not a trajectory")
    traj = shoot(case.params, case.c, opts)
    mask = (traj.X >= 0.05) & (traj.X <= 0.95) & (traj.Y > 0)
    return float(np.abs(traj.Y[mask] - case.curve(traj.X[mask])).max())
