"""Kernel backend selection: compiled extension when available, numpy otherwise.

Set ``CAUCHYMIMO_BACKEND=python`` (or ``compiled``) to force a choice; the
default tries the Cython extension first and falls back silently.
"""

import os

from . import _kernels_py

_requested = os.environ.get("CAUCHYMIMO_BACKEND", "").strip().lower()

if _requested in ("python", "py", "pure"):
    _impl = _kernels_py
elif _requested in ("compiled", "c", "cython"):
    from . import _kernels as _impl  # noqa: F401  (raises if not built)
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

solve_cauchy_lsq = _impl.solve_cauchy_lsq
ldpc_bp_decode = _impl.ldpc_bp_decode
cauchy_objective = _kernels_py.cauchy_objective


def backend_name() -> str:
    """Name of the active kernel implementation ('compiled' or 'python')."""
    return _impl.BACKEND_NAME
