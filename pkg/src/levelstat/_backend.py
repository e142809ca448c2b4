"""Kernel selection.

The compiled extension is used when it imports; otherwise the pure-Python
module with the same interface.  Setting ``LEVELSTAT_PURE_PYTHON=1`` forces
the fallback.
"""

import os

if os.environ.get("LEVELSTAT_PURE_PYTHON") == "1":
    from . import _fallback as kernels
else:
    try:
        from . import _kernels as kernels
    except ImportError:  # extension not built
        from . import _fallback as kernels

BACKEND = kernels.BACKEND
