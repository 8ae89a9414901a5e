"""Kernel backend selection.

Prefers the compiled extension when it imported cleanly; otherwise uses
the numpy fallback, which meets the same budgets with headroom.  Set
CONTRAGRID_PURE=1 to force the fallback (used by the benchmark and by
tests comparing the two paths).
"""

from __future__ import annotations

import os

if os.environ.get("CONTRAGRID_PURE") == "1":
    from . import _ckcore_py as _impl

    BACKEND = "pure"
else:
    try:
        from . import _ckcore as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _ckcore_py as _impl

        BACKEND = "pure"

scan_two_coloring_diameters = _impl.scan_two_coloring_diameters
min_two_color_diameter = _impl.min_two_color_diameter
