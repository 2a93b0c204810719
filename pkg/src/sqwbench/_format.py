"""Deterministic number formatting for emitted CSV/JSON artifacts."""

from __future__ import annotations

import json
import re

__all__ = ["fmt17", "dumps_17g"]


def fmt17(x: float) -> str:
    """Render a float at 17 significant digits (lossless round-trip)."""
    return format(float(x), ".17g")


def dumps_17g(payload) -> str:
    """json.dumps with every float rendered at 17 significant digits.

    The stock encoder hard-codes repr() for floats, so floats are
    swapped for sentinel strings first and substituted back afterwards.
    """
    floats: list[float] = []

    def stash(obj):
        if isinstance(obj, float):
            floats.append(obj)
            return f"\x00{len(floats) - 1}\x00"
        if isinstance(obj, dict):
            return {k: stash(v) for k, v in obj.items()}
        if isinstance(obj, (list, tuple)):
            return [stash(v) for v in obj]
        return obj

    text = json.dumps(stash(payload), indent=2)
    # the NUL sentinel is escaped to \u0000 in the encoded text
    return re.sub(r'"\\u0000(\d+)\\u0000"', lambda m: fmt17(floats[int(m.group(1))]), text)
