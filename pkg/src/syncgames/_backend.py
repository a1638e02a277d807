"""Kernel backend selection.

The compiled Cython module is used when it imports; otherwise, or when
``SYNCGAMES_PURE_PYTHON=1`` is set, the numpy fallback is used. Both expose
``sync_search``, ``alice_search`` and ``jacobi_eigh``.
"""
from __future__ import annotations

import os
from types import ModuleType

from . import _pykernels


def _load_compiled() -> ModuleType | None:
    if os.environ.get("SYNCGAMES_PURE_PYTHON", "") not in ("", "0"):
        return None
    try:
        from . import _kernels
    except ImportError:
        return None
    return _kernels


compiled = _load_compiled()
kernels: ModuleType = compiled if compiled is not None else _pykernels
BACKEND = "cython" if compiled is not None else "python"


def get(name: str | None = None) -> ModuleType:
    """Return a kernel module by name (``"cython"``, ``"python"``) or the active one."""
    if name is None:
        return kernels
    if name == "python":
        return _pykernels
    if name == "cython":
        if compiled is None:
            raise ImportError("compiled kernels are not available")
        return compiled
    raise ValueError(f"unknown backend {name!r}")
