"""Selects the compiled hot loops when available, else the pure-Python ones.

Set GRPRING_PURE_PYTHON=1 to force the fallback.
"""

import os

if os.environ.get("GRPRING_PURE_PYTHON"):
    from ._pykernels import BACKEND, id0_scan, order_mul, unit_scan
else:
    try:
        from ._ckernels import BACKEND, id0_scan, order_mul, unit_scan
    except ImportError:
        from ._pykernels import BACKEND, id0_scan, order_mul, unit_scan

__all__ = ["BACKEND", "id0_scan", "order_mul", "unit_scan"]
