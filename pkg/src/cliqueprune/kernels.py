"""Backend selection for the hot kernels.

The compiled extension is preferred when importable; the pure-Python
bitset implementation is the fallback. Set ``CLIQUEPRUNE_PURE_PYTHON=1``
to force the fallback (used by the backend comparison benchmark).
"""

import os

from . import _purekern

if os.environ.get("CLIQUEPRUNE_PURE_PYTHON"):
    _impl = _purekern
else:
    try:
        from . import _ckern as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _purekern

BACKEND = _impl.BACKEND_NAME

triangle_counts = _impl.triangle_counts
k4_counts = _impl.k4_counts
solve_max_cliques = _impl.solve_max_cliques


def available_backends():
    names = ["python"]
    try:
        from . import _ckern  # noqa: F401

        names.insert(0, "c")
    except ImportError:
        pass
    return names
