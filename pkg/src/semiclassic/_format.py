"""Number formatting shared by every CSV/text emitter.

17 significant digits round-trip any double exactly, so reruns of a
deterministic computation produce byte-identical files.
"""

from __future__ import annotations

import math


def format_float(x) -> str:
    if x is None:
        return ""
    x = float(x)
    if math.isnan(x):
        return "nan"
    return f"{x:.17g}"
