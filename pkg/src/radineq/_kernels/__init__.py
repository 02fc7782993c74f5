"""Kernel backend selection: compiled Cython core with numpy fallback."""

from __future__ import annotations

import os

if os.environ.get("RADINEQ_FORCE_FALLBACK"):
    from . import _fallback as _impl

    BACKEND = "python"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _fallback as _impl

        BACKEND = "python"

smoothed_cone_eval = _impl.smoothed_cone_eval
ball_volume_integral_smoothed_cone = _impl.ball_volume_integral_smoothed_cone

__all__ = [
    "BACKEND",
    "smoothed_cone_eval",
    "ball_volume_integral_smoothed_cone",
]
