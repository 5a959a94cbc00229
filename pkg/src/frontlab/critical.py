"""Bisection solvers for the critical velocity and threshold coefficient.

The critical velocity cbar(n,p,q,k) is the supremum of velocities whose
shot trajectory reaches P2 without crossing the X-axis; below cbar the
outcome is Direct*, above it Overshoot, with a single changeover.  The
threshold coefficient k*(n,p,q) is the convection strength at which
cbar changes sign, found by bisecting k at c = 0.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .model import ModelParams, validate_params
from .phaseplane import (DIRECT_CLASSES, ConnectionClass, ShootOptions,
                         shoot)


class BracketDegenerate(RuntimeError):
    pass


class BracketExhausted(RuntimeError):
    pass


class ShootUndetermined(RuntimeError):
    pass


@dataclass(frozen=True)
class CriticalResult:
    value: float
    bracket_lo: float
    bracket_hi: float
    tol: float
    evaluations: int
    endpoint_classes: tuple[ConnectionClass, ConnectionClass]

    def to_json(self) -> str:
        return json.dumps({
            "value": self.value,
            "bracket_lo": self.bracket_lo,
            "bracket_hi": self.bracket_hi,
            "tol": self.tol,
            "evaluations": self.evaluations,
        })


def _max_workers() -> int:
    cap = os.environ.get("FRONTLAB_THREADS")
    if cap:
        return max(1, int(cap))
    return min(4, os.cpu_count() or 1)


def _is_direct(traj) -> bool:
    if traj.connection is ConnectionClass.UNDETERMINED:
        raise ShootUndetermined(
            f"shoot stayed undetermined after retries (c={traj.c}, "
            f"params={traj.params})")
    return traj.connection in DIRECT_CLASSES


def cbar(params: ModelParams, tol: float = 1e-8,
         opts: ShootOptions = ShootOptions()) -> CriticalResult:
    """Critical velocity by bisection on the shoot outcome.

    The initial bracket [-2 sqrt(p-q), kn - 2 sqrt(p-q)] contains cbar
    for every admissible parameter set; the lower endpoint is always on
    the Direct side, the upper on the Overshoot side (if the upper
    endpoint still connects directly, it *is* the critical velocity,
    reached when P2 degenerates).
    """
    if tol < 1e-10:
        raise ValueError(f"tol must be >= 1e-10, got {tol}")
    root = 2.0 * math.sqrt(params.p - params.q)
    lo = -root
    hi = params.k * params.n - root
    if hi <= lo:
        raise BracketDegenerate(
            f"bracket [{lo}, {hi}] is empty; kn = {params.k * params.n} "
            "must be positive")

    with ThreadPoolExecutor(max_workers=_max_workers()) as ex:
        f_lo = ex.submit(shoot, params, lo, opts)
        f_hi = ex.submit(shoot, params, hi, opts)
        lo_traj, hi_traj = f_lo.result(), f_hi.result()
    evals = 2
    lo_cls, hi_cls = lo_traj.connection, hi_traj.connection
    if not _is_direct(lo_traj):
        raise BracketDegenerate(
            f"lower endpoint c={lo} classified {lo_cls}, expected Direct")
    if _is_direct(hi_traj):
        # degenerate-node boundary: the connection persists up to the
        # bracket's upper end, which is then the critical velocity
        return CriticalResult(hi, hi, hi, tol, evals, (lo_cls, hi_cls))

    while hi - lo > tol and evals < 80:
        mid = 0.5 * (lo + hi)
        traj = shoot(params, mid, opts)
        evals += 1
        if _is_direct(traj):
            lo, lo_cls = mid, traj.connection
        else:
            hi, hi_cls = mid, traj.connection
    return CriticalResult(0.5 * (lo + hi), lo, hi, tol, evals,
                          (lo_cls, hi_cls))


def kstar(n: float, p: float, q: float, tol: float = 1e-8,
          opts: ShootOptions = ShootOptions()) -> CriticalResult:
    """Threshold coefficient by bisection of k at c = 0.

    The predicate [shoot at c=0 is Direct] holds for k >= k* and fails
    below.  When n <= (q+1)/2 the closed form k* = 2 sqrt(p-q)/n is exact
    and is returned after checking the predicate flips across it.
    """
    if tol < 1e-10:
        raise ValueError(f"tol must be >= 1e-10, got {tol}")
    root = 2.0 * math.sqrt(p - q)

    def direct_at(k: float) -> bool:
        return _is_direct(shoot(validate_params(n, p, q, k), 0.0, opts))

    if n <= 0.5 * (q + 1.0):
        k0 = root / n
        lo_k, hi_k = k0 * (1.0 - 1e-3), k0 * (1.0 + 1e-3)
        with ThreadPoolExecutor(max_workers=_max_workers()) as ex:
            f_lo = ex.submit(direct_at, lo_k)
            f_hi = ex.submit(direct_at, hi_k)
            below, above = f_lo.result(), f_hi.result()
        if below or not above:
            raise BracketExhausted(
                f"closed-form threshold {k0} not confirmed: predicate is "
                f"{below} below and {above} above")
        return CriticalResult(k0, lo_k, hi_k, tol, 2,
                              (ConnectionClass.OVERSHOOT,
                               ConnectionClass.DIRECT_LEADING))

    lo = root / n
    hi = max(1.0, p / n)
    evals = 0
    lo_cls = hi_cls = None
    for _ in range(10):
        with ThreadPoolExecutor(max_workers=_max_workers()) as ex:
            f_lo = ex.submit(shoot, validate_params(n, p, q, lo), 0.0, opts)
            f_hi = ex.submit(shoot, validate_params(n, p, q, hi), 0.0, opts)
            lo_traj, hi_traj = f_lo.result(), f_hi.result()
        evals += 2
        lo_cls, hi_cls = lo_traj.connection, hi_traj.connection
        lo_ok = not _is_direct(lo_traj)
        hi_ok = _is_direct(hi_traj)
        if lo_ok and hi_ok:
            break
        if not lo_ok:
            lo /= 1.5
        if not hi_ok:
            hi *= 1.5
    else:
        raise BracketExhausted(
            f"no sign change in k on [{lo}, {hi}] after widening")

    while hi - lo > tol and evals < 80:
        mid = 0.5 * (lo + hi)
        traj = shoot(validate_params(n, p, q, mid), 0.0, opts)
        evals += 1
        if _is_direct(traj):
            hi, hi_cls = mid, traj.connection
        else:
            lo, lo_cls = mid, traj.connection
    return CriticalResult(0.5 * (lo + hi), lo, hi, tol, evals,
                          (lo_cls, hi_cls))


def cbar_explicit(params: ModelParams) -> float | None:
    """Closed-form critical velocity for the catalogued patterns.

    Two families admit explicit critical trajectories: p = n, q = 1 with
    k^2(n-1) > 1 gives cbar = (k^2-1)/k; p = 2n-1, q = n with
    k > (2n-1)/(n sqrt(n-1)) gives cbar = (kn + sqrt(k^2 n^2 - 4n))/(2n).
    Returns None when no pattern (or its validity condition) matches.
    """
    n, p, q, k = params.n, params.p, params.q, params.k
    if p == n and q == 1.0 and k * k * (n - 1.0) > 1.0:
        return (k * k - 1.0) / k
    if (p == 2.0 * n - 1.0 and q == n and n > 1.0
            and k > (2.0 * n - 1.0) / (n * math.sqrt(n - 1.0))):
        return (k * n + math.sqrt(k * k * n * n - 4.0 * n)) / (2.0 * n)
    return None
