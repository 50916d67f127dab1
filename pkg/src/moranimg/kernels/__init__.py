"""Hot numeric kernels with a numba backend and a pure-numpy fallback.

The backend is chosen once at import from ``MORANIMG_BACKEND``
(``numba`` or ``numpy``).  Without the variable, numba is used when it can
be imported.  Both backends expose the same functions with the same
lane-by-lane results; ``get_backend`` returns either one explicitly, which
is what the tests and the benchmark use.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _numpy

ENV_VAR = "MORANIMG_BACKEND"


def get_backend(name: str) -> ModuleType:
    if name == "numpy":
        return _numpy
    if name == "numba":
        from . import _numba
        return _numba
    raise ValueError(f"unknown kernel backend {name!r} (expected 'numba' or 'numpy')")


def _select() -> ModuleType:
    requested = os.environ.get(ENV_VAR, "").strip().lower()
    if requested:
        return get_backend(requested)
    try:
        return get_backend("numba")
    except ImportError:
        return _numpy


backend = _select()

add = backend.add
sub = backend.sub
mul = backend.mul
div = backend.div
pow_int = backend.pow_int
pow_real = backend.pow_real
sin = backend.sin
cos = backend.cos
exp = backend.exp
log = backend.log
merge_sorted = backend.merge_sorted

__all__ = [
    "ENV_VAR", "backend", "get_backend",
    "add", "sub", "mul", "div", "pow_int", "pow_real",
    "sin", "cos", "exp", "log", "merge_sorted",
]
