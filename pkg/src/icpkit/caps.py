"""Resource caps for the exhaustive routines, overridable via ``ICPKIT_CAPS``.

``ICPKIT_CAPS`` holds comma-separated ``name=value`` pairs, e.g.
``ICPKIT_CAPS="lattice_volume=50000,tu_exhaustive=10"``.
"""

from __future__ import annotations

import os

DEFAULTS = {
    "lattice_volume": 200_000,  # lattice points scanned by enumerations
    "tu_exhaustive": 8,  # largest row/column count checked exhaustively for TU
    "tu_samples": 20_000,  # random submatrices when sampling is enabled
    "k_max": 6,  # default k range for idp/icp/rank checks
    "ground_size": 16,  # largest submodular ground set
    "box_count": 200_000,  # boxes scanned by check_box_integral
    "rank_budget_seconds": 300,  # wall clock for Caratheodory rank searches
}


def caps() -> dict:
    out = dict(DEFAULTS)
    raw = os.environ.get("ICPKIT_CAPS", "").strip()
    if not raw:
        return out
    for part in raw.split(","):
        if not part.strip():
            continue
        name, _, value = part.partition("=")
        name = name.strip()
        if name not in DEFAULTS:
            raise ValueError(f"unknown cap {name!r} in ICPKIT_CAPS")
        out[name] = type(DEFAULTS[name])(value.strip())
    return out


def cap(name: str):
    return caps()[name]
