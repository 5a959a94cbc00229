"""Numerical laboratory for fronts of u_t = u_xx + k(u^n)_x + u^p - u^q.

Submodules:

- ``model``       parameter records and eigen-data of the equilibria
- ``phaseplane``  adaptive shooting and connection classification
- ``critical``    bisection for the critical velocity and threshold k*
- ``explicit``    catalogue of closed-form trajectories and waves
- ``selfmap``     c = 0 parameter self-map and its invariants
- ``pde``         direct finite-difference simulation and comparison
- ``papersuite``  the ten-point acceptance matrix
- ``cli``         command-line front end (``frontlab`` entry point)

The integration kernels come from a compiled extension when available
(set ``FRONTLAB_BACKEND=python`` to force the pure-Python fallback).
"""

from ._backend import backend_name
from .critical import CriticalResult, cbar, cbar_explicit, kstar
from .model import (EigenData, InvalidParams, ModelParams, P2Class, ctilde,
                    p2_eigen, validate_params)
from .phaseplane import (ConnectionClass, ProfileTable, ShootOptions,
                         Trajectory, reconstruct_profile, shoot)

__version__ = "0.1.0"

__all__ = [
    "ConnectionClass", "CriticalResult", "EigenData", "InvalidParams",
    "ModelParams", "P2Class", "ProfileTable", "ShootOptions", "Trajectory",
    "backend_name", "cbar", "cbar_explicit", "ctilde", "kstar", "p2_eigen",
    "reconstruct_profile", "shoot", "validate_params", "__version__",
]
