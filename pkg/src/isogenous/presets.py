"""Branch data for the four abelian groups with p_g = q = 0.

Each curve is given by a spherical generating vector: one stabilizer
generator per branch point, summing to zero and generating G. The D-side
vectors use stabilizers disjoint from the C-side ones so that the diagonal
action on C x D is free.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping

from .algebra import FinAbGroup
from .curve import CurveWithAction
from .surface import ProductQuotientSurface

PRESET_DATA: dict[str, dict[str, Any]] = {
    "z3^2": {
        "group": [3, 3],
        "C": {"genus": 4, "orbits": [[1, 0], [0, 1], [2, 0], [0, 2]]},
        "D": {"genus": 4, "orbits": [[1, 1], [1, 2], [2, 2], [2, 1]]},
    },
    "z5^2": {
        "group": [5, 5],
        "C": {"genus": 6, "orbits": [[1, 0], [0, 1], [4, 4]]},
        "D": {"genus": 6, "orbits": [[1, 2], [3, 4], [1, 4]]},
    },
    "z2^3": {
        "group": [2, 2, 2],
        "C": {"genus": 3, "orbits": [[1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1], [0, 0, 1]]},
        "D": {"genus": 5, "orbits": [[1, 0, 1], [1, 0, 1], [0, 1, 1], [0, 1, 1], [1, 1, 1], [1, 1, 1]]},
    },
    "z2^4": {
        "group": [2, 2, 2, 2],
        "C": {
            "genus": 5,
            "orbits": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 1, 1, 1]],
        },
        "D": {
            "genus": 5,
            "orbits": [[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1], [1, 1, 1, 0], [0, 1, 1, 1]],
        },
    },
}

PRESETS = tuple(PRESET_DATA)

_cache: dict[str, ProductQuotientSurface] = {}


def surface_from_dict(data: Mapping[str, Any], label: str | None = None) -> ProductQuotientSurface:
    """Build a surface from ``{"group": [...], "C": {...}, "D": {...}}``."""
    try:
        G = FinAbGroup(tuple(data["group"]))
        C = CurveWithAction.from_generating_vector(data["C"]["genus"], G, data["C"]["orbits"], "E", "C")
        D = CurveWithAction.from_generating_vector(data["D"]["genus"], G, data["D"]["orbits"], "F", "D")
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed surface description: {exc}") from exc
    return ProductQuotientSurface(C, D, label)


def load_surface(path: str | Path) -> ProductQuotientSurface:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    label = data.get("label")
    # a label only unlocks the preset invariant tables when the branch data is identical
    if label is not None:
        ref = PRESET_DATA.get(label)
        if ref is None or any(data.get(k) != ref[k] for k in ("group", "C", "D")):
            label = None
    return surface_from_dict(data, label)


def preset(label: str) -> ProductQuotientSurface:
    if label not in PRESET_DATA:
        raise KeyError(f"unknown preset {label!r}; expected one of {', '.join(PRESETS)}")
    if label not in _cache:
        _cache[label] = surface_from_dict(PRESET_DATA[label], label)
    return _cache[label]
