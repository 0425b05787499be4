"""Search-kernel selection: compiled extension when available, else Python.

MAGTILE_PURE=1 forces the pure-Python kernel regardless of what is built.
"""

from __future__ import annotations

import os

from . import _kernel_py

_FORCE_PURE = os.environ.get("MAGTILE_PURE") == "1"

try:
    if _FORCE_PURE:
        raise ImportError
    from . import _kernel as _impl  # type: ignore[attr-defined]
except ImportError:
    _impl = _kernel_py


def kernel_module(name: str | None = None):
    """The active kernel module, or a specific one ('python'/'cython')."""
    if name is None:
        return _impl
    if name == "python":
        return _kernel_py
    if name == "cython":
        from . import _kernel  # raises ImportError if not built

        return _kernel
    raise ValueError(f"unknown kernel backend {name!r}")


def kernel_backend() -> str:
    return _impl.BACKEND


def available_backends() -> list[str]:
    out = ["python"]
    try:
        from . import _kernel  # noqa: F401

        out.append("cython")
    except ImportError:
        pass
    return out
