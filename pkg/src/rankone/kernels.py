"""Hot-kernel dispatch.

The compiled extension is used when it was built; otherwise (or when the
``RANKONE_PURE_PYTHON`` environment variable is set) the pure-Python
implementations take over.  ``BACKEND`` names the active one.
"""

import os

from . import _pykernels

if os.environ.get("RANKONE_PURE_PYTHON"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

band_defect = _impl.band_defect
dijkstra = _impl.dijkstra
