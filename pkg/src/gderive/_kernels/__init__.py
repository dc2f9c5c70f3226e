"""Row-reduction kernel selection.

Prefers the compiled extension when present, otherwise falls back to the
pure Python twin. ``BACKEND`` records which one is active.
"""

from __future__ import annotations

try:
    from gderive._kernels._rref_c import rref_int

    BACKEND = "c"
except ImportError:  # pragma: no cover - depends on build environment
    from gderive._kernels.rref_py import rref_int

    BACKEND = "python"

__all__ = ["rref_int", "BACKEND"]
