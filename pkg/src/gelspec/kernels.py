"""Backend selection for the hot loops.

The compiled extension is used when importable; set ``GELSPEC_PURE_PYTHON=1``
to force the pure-Python implementation.
"""
from __future__ import annotations

import os
from types import ModuleType

from . import _pykernels

python_backend: ModuleType = _pykernels
compiled_backend: ModuleType | None

try:
    from . import _ckernels as compiled_backend  # type: ignore[attr-defined]
except ImportError:  # extension not built
    compiled_backend = None

if compiled_backend is not None and not os.environ.get("GELSPEC_PURE_PYTHON"):
    backend: ModuleType = compiled_backend
else:
    backend = python_backend

BACKEND: str = backend.BACKEND


def available() -> list[ModuleType]:
    """Every importable backend, pure Python first."""
    out = [python_backend]
    if compiled_backend is not None:
        out.append(compiled_backend)
    return out


def jacobi_hermitian(a, eps, max_sweeps):
    return backend.jacobi_hermitian(a, eps, max_sweeps)


def enumerate_opens(nchars, in_ptr, in_edges, src, pre, cap):
    return backend.enumerate_opens(nchars, in_ptr, in_edges, src, pre, cap)


def search_sections(nchars, out_ptr, out_edges, dst, pre, store_limit, stop_after):
    return backend.search_sections(nchars, out_ptr, out_edges, dst, pre, store_limit, stop_after)
