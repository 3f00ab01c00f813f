"""Kernel backend selection.

The compiled extension is preferred when importable; otherwise the pure
Python kernel takes over with identical behavior.  Set GRIDLOOM_KERNEL to
``pure`` or ``compiled`` to force a backend (the latter raises if the
extension is missing, rather than silently falling back).
"""

from __future__ import annotations

import os

from ._pykernel import STATUS_CONTRADICTION, STATUS_SOLVED, PureKernel

try:
    from ._kernel import CompiledKernel
except ImportError:
    CompiledKernel = None

__all__ = [
    "STATUS_SOLVED",
    "STATUS_CONTRADICTION",
    "PureKernel",
    "CompiledKernel",
    "select_kernel",
    "kernel_backend",
]


def select_kernel(name=None):
    """Return the kernel class for ``name`` (or the env/default choice)."""
    if name is None:
        name = os.environ.get("GRIDLOOM_KERNEL", "").strip().lower() or None
    if name == "pure":
        return PureKernel
    if name == "compiled":
        if CompiledKernel is None:
            raise RuntimeError(
                "compiled kernel requested but the gridloom._kernel extension "
                "is not built"
            )
        return CompiledKernel
    if name is not None:
        raise ValueError(f"unknown kernel backend {name!r}")
    return CompiledKernel if CompiledKernel is not None else PureKernel


def kernel_backend():
    """Name of the backend picked by default ('compiled' or 'pure')."""
    return select_kernel().backend
