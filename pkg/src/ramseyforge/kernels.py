"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
pure-Python ``_pykernels`` module. Setting ``RAMSEYFORGE_PURE_PYTHON=1``
forces the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("RAMSEYFORGE_PURE_PYTHON", "") not in ("", "0"):
    _backend = _pykernels
else:
    try:
        from . import _ckernels as _backend  # type: ignore[no-redef]
    except ImportError:  # extension not built
        _backend = _pykernels

BACKEND = "cython" if _backend is not _pykernels else "python"

embed_search = _backend.embed_search
canon_search = _backend.canon_search
defeat_search = _backend.defeat_search

__all__ = ["BACKEND", "embed_search", "canon_search", "defeat_search"]
