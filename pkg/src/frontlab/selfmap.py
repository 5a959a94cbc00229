"""Parameter self-map of the c = 0 phase-plane system.

The change of variables U = X^{p-q}, W = Y X^{-(1+q)/2} / d with
d = sqrt(2/(q+1)) and rescaled independent variable eta1 defined by
d eta1/d xi = X^{(q-1)/2} / d turns the c = 0 system into

    U'  = [2(p-q)/(q+1)] U W
    W'  = -[kn sqrt(2)/sqrt(1+q)] U^{(2n-1-q)/(2(p-q))} W - U + 1 - W^2

whose three coefficient groups are invariant under the parameter map

    p2 = (p1+1) n2/n1 - 1,  q2 = (q1+1) n2/n1 - 1,  k2 = k1 sqrt(n1/n2).

Two systems related by the map are therefore identical in (U, W, eta1),
which makes k* sqrt(n) constant along map orbits.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .critical import kstar
from .model import ModelParams, validate_params
from .phaseplane import Trajectory


class TargetOutOfRange(ValueError):
    pass


class OriginUndefined(ValueError):
    pass


class NotCZero(ValueError):
    pass


@dataclass(frozen=True)
class SelfMapPair:
    source: ModelParams
    target: ModelParams
    n2: float


def map_params(source: ModelParams, n2: float) -> SelfMapPair:
    if n2 < 1.0:
        raise TargetOutOfRange(f"n2 must be >= 1, got {n2}")
    r = n2 / source.n
    p2 = (source.p + 1.0) * r - 1.0
    q2 = (source.q + 1.0) * r - 1.0
    k2 = source.k * math.sqrt(source.n / n2)
    if q2 < 1.0:
        raise TargetOutOfRange(
            f"mapped q = {q2} < 1 (need n2/n1 >= 2/(q1+1))")
    return SelfMapPair(source=source,
                       target=validate_params(n2, p2, q2, k2), n2=n2)


def transform_point(source: ModelParams, pt) -> tuple[float, float]:
    """(U, W) image of a phase point under the c = 0 change of variables."""
    x, y = pt
    if x <= 0.0:
        raise OriginUndefined("the transform requires X > 0")
    d = math.sqrt(2.0 / (source.q + 1.0))
    u = x ** (source.p - source.q)
    w = y * x ** (-0.5 * (1.0 + source.q)) / d
    return (u, w)


def _map_raw(source: ModelParams, n2: float):
    """Mapped (n, p, q, k) as plain floats, without range validation."""
    r = n2 / source.n
    return (n2, (source.p + 1.0) * r - 1.0, (source.q + 1.0) * r - 1.0,
            source.k * math.sqrt(source.n / n2))


def _system_residual(npqk, eta1, U, W):
    """Sup residual of the transformed system on the interior samples."""
    n, p, q, k = npqk
    dU = np.gradient(U, eta1)
    dW = np.gradient(W, eta1)
    e = (2.0 * n - 1.0 - q) / (2.0 * (p - q))
    rU = dU - (2.0 * (p - q) / (q + 1.0)) * U * W
    rW = (dW + k * n * math.sqrt(2.0) / math.sqrt(1.0 + q) * U ** e * W
          + U - 1.0 + W * W)
    sl = slice(2, -2)
    return float(max(np.abs(rU[sl]).max(), np.abs(rW[sl]).max()))


def transformed_residual(source: ModelParams, traj: Trajectory,
                         n2: float) -> float:
    """Residual of a mapped c = 0 trajectory in the transformed system.

    The trajectory is transformed pointwise, eta1 is recovered by
    trapezoidal quadrature of X^{(q-1)/2}/d along xi, and the system is
    evaluated with the *mapped* parameter set.  By the coefficient
    invariances the value matches the source-parameter residual up to
    the finite-difference error of the polyline.  The mapped exponents
    are used formally here, so targets outside the model range (e.g.
    mapped q < 1) are allowed, unlike in :func:`map_params`.
    """
    if traj.c != 0.0:
        raise NotCZero(f"self-map residual needs c = 0, got c = {traj.c}")
    target = _map_raw(source, n2)
    q = source.q
    d = math.sqrt(2.0 / (q + 1.0))

    mask = traj.X > 0.0
    xi = traj.xi[mask]
    X = traj.X[mask]
    Y = traj.Y[mask]
    U = X ** (source.p - q)
    W = Y * X ** (-0.5 * (1.0 + q)) / d
    integrand = X ** (0.5 * (q - 1.0)) / d
    eta1 = np.concatenate(
        ([0.0], np.cumsum(0.5 * (integrand[1:] + integrand[:-1])
                          * np.diff(xi))))
    return _system_residual(target, eta1, U, W)


def kstar_invariance(source_npq: tuple[float, float, float], n2: float,
                     tol: float = 1e-6) -> dict:
    """Check that k* sqrt(n) is constant along a self-map orbit.

    Computes k* for the source triple and its image by bisection (the two
    run concurrently) and reports the invariant defect
    |k*_2 sqrt(n2) - k*_1 sqrt(n1)|.
    """
    n1, p1, q1 = source_npq
    pair = map_params(validate_params(n1, p1, q1, 1.0), n2)
    t = pair.target
    with ThreadPoolExecutor(max_workers=2) as ex:
        f1 = ex.submit(kstar, n1, p1, q1, tol)
        f2 = ex.submit(kstar, t.n, t.p, t.q, tol)
        r1, r2 = f1.result(), f2.result()
    defect = abs(r2.value * math.sqrt(t.n) - r1.value * math.sqrt(n1))
    return {
        "source": {"n": n1, "p": p1, "q": q1, "kstar": r1.value},
        "target": {"n": t.n, "p": t.p, "q": t.q, "kstar": r2.value},
        "invariant_defect": defect,
        "tol": tol,
    }
