"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy
fallback. Set ``GOSSIPPOWER_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("GOSSIPPOWER_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        _impl = _compiled
        BACKEND = "cython"

gossip_rounds = _impl.gossip_rounds
jacobi_eigh = _impl.jacobi_eigh
jacobi_svd = _impl.jacobi_svd

__all__ = ["BACKEND", "gossip_rounds", "jacobi_eigh", "jacobi_svd"]
