"""Backend selection for the hot kernels.

The compiled extension is used when it imports cleanly, unless
``POLYRECON_PURE=1`` forces the Python fallback.
"""
from __future__ import annotations

import os

from . import _fallback

python_backend = _fallback

try:
    from . import _kernels as compiled_backend
except ImportError:  # extension not built
    compiled_backend = None

if compiled_backend is not None and os.environ.get("POLYRECON_PURE", "") in ("", "0"):
    active = compiled_backend
else:
    active = _fallback

BACKEND = active.BACKEND


def get_backend(name: str | None = None):
    """Return the kernel module for ``name`` ('compiled', 'python' or None for the active one)."""
    if name in (None, "auto"):
        return active
    if name == "python":
        return _fallback
    if name == "compiled":
        if compiled_backend is None:
            raise RuntimeError("compiled kernels are not built; run `pip install -e .`")
        return compiled_backend
    raise ValueError(f"unknown backend {name!r}")
