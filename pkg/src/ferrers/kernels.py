"""Backend selection for the homology kernels.

The Cython extension ``_kernels`` is used when it has been built; otherwise,
or when the environment variable ``FERRERS_PURE_PYTHON`` is set to a
non-empty value, the pure-Python module ``_pykernels`` is used. Computations
over the rationals always go through the pure-Python path.
"""
from __future__ import annotations

import os

from . import _pykernels

_compiled = None
if not os.environ.get("FERRERS_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

COMPILED = _compiled is not None
BACKEND = "cython" if COMPILED else "python"


def _impl(p: int, backend: str | None):
    if backend == "python" or p == 0 or _compiled is None:
        if backend == "cython" and _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return _pykernels
    return _compiled


def simplicial_betti(masks, p: int, backend: str | None = None) -> list[int]:
    return _impl(p, backend).simplicial_betti(masks, p)


def cell_betti(rows, cols, p: int, backend: str | None = None) -> list[int]:
    return _impl(p, backend).cell_betti(rows, cols, p)


def taylor_betti(keys, p: int, backend: str | None = None) -> dict[int, list[int]]:
    return _impl(p, backend).taylor_betti(keys, p)
