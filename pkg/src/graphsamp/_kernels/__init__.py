"""Hot-loop kernels with a compiled core and a pure-numpy fallback.

The Cython extension is preferred when importable; set ``GRAPHSAMP_PURE=1``
to force the numpy implementation (used by the kernel benchmark and CI).
Both backends implement identical semantics, including lowest-index
tie-breaking in the argmax selections.
"""

import os

from . import _slow

if os.environ.get("GRAPHSAMP_PURE"):
    _impl = _slow
    BACKEND = "python"
else:
    try:
        from . import _fast as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _slow
        BACKEND = "python"

edge_sweep = _impl.edge_sweep
importance_sweep = _impl.importance_sweep
greedy_steps = _impl.greedy_steps
repulsion_steps = _impl.repulsion_steps

__all__ = [
    "BACKEND",
    "edge_sweep",
    "importance_sweep",
    "greedy_steps",
    "repulsion_steps",
]
