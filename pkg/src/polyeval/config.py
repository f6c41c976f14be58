"""Runtime knobs shared by the certified routines."""

import os

DEFAULT_ESCALATION_CAP = 6


def escalation_cap() -> int:
    """Maximum number of precision doublings (``POLYEVAL_ESCALATION_CAP`` overrides)."""
    raw = os.environ.get("POLYEVAL_ESCALATION_CAP")
    if raw is None or raw.strip() == "":
        return DEFAULT_ESCALATION_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"POLYEVAL_ESCALATION_CAP must be an integer, got {raw!r}") from None
    return max(0, cap)
