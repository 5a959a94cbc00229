"""Model parameters and spectral data at the rest states.

The equation under study is

    u_t = u_xx + k (u^n)_x + u^p - u^q,    n >= 2,  p > q >= 1,  k > 0,

whose traveling waves u(x,t) = f(x+ct) solve a planar system with
equilibria P1 = (0,0) and P2 = (1,0).  This module validates parameter
tuples and provides the closed-form eigen-data and stability
classification of P2.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass


class InvalidParams(ValueError):
    """Base class for parameter-validation failures."""


class NonPositiveK(InvalidParams):
    pass


class ExponentOrder(InvalidParams):
    pass


class QTooSmall(InvalidParams):
    pass


class NTooSmall(InvalidParams):
    pass


@dataclass(frozen=True)
class ModelParams:
    """Validated parameter tuple (n, p, q, k).

    Exponents are accepted as reals: every formula used here is valid for
    real exponents on the clamped state X >= 0.  ``n`` in [1, 2) is
    admitted solely for the parameter self-map's reference computation and
    is flagged by :attr:`reference_range`.
    """

    n: float
    p: float
    q: float
    k: float

    def __post_init__(self):
        for name in ("n", "p", "q", "k"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise InvalidParams(f"{name} must be finite, got {v!r}")
        if self.k <= 0:
            raise NonPositiveK(
                f"k must be positive, got {self.k}; negative convection is "
                "equivalent to the reflection x -> -x of a positive-k model"
            )
        if self.q < 1:
            raise QTooSmall(f"q must be >= 1, got {self.q}")
        if self.p <= self.q:
            raise ExponentOrder(f"need p > q, got p={self.p}, q={self.q}")
        if self.n < 1:
            raise NTooSmall(f"n must be >= 1, got {self.n}")

    @property
    def reference_range(self) -> bool:
        """True when n < 2 (self-map reference case, outside the main range)."""
        return self.n < 2


def validate_params(n: float, p: float, q: float, k: float) -> ModelParams:
    return ModelParams(float(n), float(p), float(q), float(k))


class P2Class(enum.Enum):
    UNSTABLE_NODE = "UnstableNode"
    UNSTABLE_FOCUS = "UnstableFocus"
    STABLE_FOCUS = "StableFocus"
    STABLE_NODE = "StableNode"


@dataclass(frozen=True)
class EigenData:
    """Eigen-data of the linearization at P2 = (1, 0).

    The eigenvalues are

        lambda_pm(c) = ((c - kn) +- sqrt((c - kn)^2 - 4(p - q))) / 2

    with eigenvectors (1, lambda_pm).  For a negative discriminant the
    fields hold the common real part and ``imag_abs`` the imaginary
    magnitude, keeping the public type real-valued.
    """

    lambda_plus: float
    lambda_minus: float
    e_plus: tuple[float, float]
    e_minus: tuple[float, float]
    discriminant: float
    imag_abs: float
    p2_class: P2Class


def p2_eigen(params: ModelParams, c: float) -> EigenData:
    n, p, q, k = params.n, params.p, params.q, params.k
    mu = c - k * n
    disc = mu * mu - 4.0 * (p - q)
    root = 2.0 * math.sqrt(p - q)

    # stability bands in c, split at kn -+ 2 sqrt(p-q); the Hopf line
    # c = kn is the marginal focus boundary and is lumped with the
    # stable side
    if c >= k * n + root:
        cls = P2Class.UNSTABLE_NODE
    elif c > k * n:
        cls = P2Class.UNSTABLE_FOCUS
    elif c > k * n - root:
        cls = P2Class.STABLE_FOCUS
    else:
        cls = P2Class.STABLE_NODE

    if disc >= 0.0:
        s = math.sqrt(disc)
        lp = 0.5 * (mu + s)
        lm = 0.5 * (mu - s)
        imag = 0.0
    else:
        lp = lm = 0.5 * mu
        imag = 0.5 * math.sqrt(-disc)
    return EigenData(
        lambda_plus=lp,
        lambda_minus=lm,
        e_plus=(1.0, lp),
        e_minus=(1.0, lm),
        discriminant=disc,
        imag_abs=imag,
        p2_class=cls,
    )


def ctilde(params: ModelParams) -> float:
    """Velocity kn + 2 sqrt(p-q) selected by anti-Heaviside data."""
    return params.k * params.n + 2.0 * math.sqrt(params.p - params.q)
