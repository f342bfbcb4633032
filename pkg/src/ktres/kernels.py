"""Kernel dispatch: compiled extension when importable, pure Python otherwise.

Set ``KTRES_PURE_PYTHON=1`` to force the fallback.
"""
import os

if os.environ.get("KTRES_PURE_PYTHON") == "1":
    from . import _kernels_py as _impl
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as _impl
        BACKEND = "python"

mono_mul = _impl.mono_mul
sparse_rank = _impl.sparse_rank
bareiss_rank = _impl.bareiss_rank

__all__ = ["BACKEND", "mono_mul", "sparse_rank", "bareiss_rank"]
