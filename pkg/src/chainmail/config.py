"""Global resource limits.

All caps exist to keep exhaustive computations (TMD families, powerset
lattices, enumeration depth) from silently exploding; they are not
correctness bounds.  CHM_MAX_N overrides the element-count cap.
"""

from __future__ import annotations

import os

DEFAULT_MAX_N = 64
DEFAULT_MAX_TMD_SETS = 1 << 20
DEFAULT_VERTEX_CAP = 5
DEFAULT_POSET_ENUM_CAP = 9
DEFAULT_CHAINMAIL_ENUM_CAP = 8
DEEP_CHAINMAIL_ENUM_CAP = 10


def max_n() -> int:
    """Element-count cap for posets built from external input."""
    raw = os.environ.get("CHM_MAX_N")
    if raw is None:
        return DEFAULT_MAX_N
    try:
        value = int(raw)
    except ValueError:
        return DEFAULT_MAX_N
    return value if value > 0 else DEFAULT_MAX_N
