"""Kernel backend selection.

The environment variable FRONTLAB_BACKEND controls which implementation of
the hot loops is used:

* ``auto`` (default) — the compiled extension if importable, else pure Python
* ``cython`` — require the compiled extension, raise if missing
* ``python`` — force the pure-Python reference kernels
"""

import os

from . import _kernels_py


def _load():
    choice = os.environ.get("FRONTLAB_BACKEND", "auto").strip().lower()
    if choice not in ("auto", "cython", "python"):
        raise ValueError(
            f"FRONTLAB_BACKEND must be auto, cython or python, got {choice!r}"
        )
    if choice == "python":
        return _kernels_py
    try:
        from . import _kernels
        return _kernels
    except ImportError:
        if choice == "cython":
            raise ImportError(
                "FRONTLAB_BACKEND=cython but the compiled extension "
                "frontlab._kernels is not available"
            )
        return _kernels_py


kernels = _load()
backend_name = kernels.BACKEND_NAME
