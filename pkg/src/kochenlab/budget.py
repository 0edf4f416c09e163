"""The global enumeration cap, read from KOCHENLAB_BUDGET."""

import os

from .errors import InputError, ResourceError

DEFAULT_BUDGET = 10**7


def enumeration_budget():
    raw = os.environ.get("KOCHENLAB_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError as exc:
        raise InputError(f"KOCHENLAB_BUDGET must be an integer, got {raw!r}") from exc
    if value < 1:
        raise InputError("KOCHENLAB_BUDGET must be positive")
    return value


def require_budget(count, what, budget=None):
    budget = enumeration_budget() if budget is None else budget
    if count > budget:
        raise ResourceError(f"{what}: {count} exceeds the enumeration budget {budget}")
    return budget
