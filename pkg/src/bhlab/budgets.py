"""Enumeration budgets and the refusal exception.

Every brute-force enumeration in the library is guarded by a budget so a
typo'd parameter fails fast instead of running for hours.  The environment
variable BHLAB_BUDGET (a positive integer) overrides all defaults at once.
"""

import os

DEFAULT_FAMILY_BUDGET = 10**8       # exhaustive |Poly_d(H)| traversals
DEFAULT_RESIDUE_BUDGET = 10**7      # residue-polynomial enumerations (k^(d+1))
DEFAULT_PROGRESSION_BUDGET = 10**6  # sieve limit X for progression error sums


class BudgetError(Exception):
    """An enumeration was refused because it exceeds its budget."""

    def __init__(self, name, requested, budget):
        self.name = name
        self.requested = requested
        self.budget = budget
        super().__init__(
            f"{name}: requested size {requested} exceeds budget {budget} "
            f"(override with BHLAB_BUDGET)"
        )


def _env_override():
    raw = os.environ.get("BHLAB_BUDGET")
    if raw is None:
        return None
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"BHLAB_BUDGET must be an integer, got {raw!r}") from exc
    if value <= 0:
        raise ValueError(f"BHLAB_BUDGET must be positive, got {value}")
    return value


def family_budget():
    return _env_override() or DEFAULT_FAMILY_BUDGET


def residue_budget():
    return _env_override() or DEFAULT_RESIDUE_BUDGET


def progression_budget():
    return _env_override() or DEFAULT_PROGRESSION_BUDGET


def check(name, requested, budget):
    """Raise BudgetError when requested exceeds budget."""
    if requested > budget:
        raise BudgetError(name, requested, budget)
