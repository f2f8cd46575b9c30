"""Size budgets and backend selection.

Budgets are process-wide defaults; ``ELAB_BUDGET_BITS`` overrides the bitset
budget, and ``DIGITWARING_DISABLE_NUMBA=1`` forces the pure-numpy kernels.
"""
from __future__ import annotations

import os
from contextlib import contextmanager
from dataclasses import dataclass, replace

from .errors import BudgetExceeded


@dataclass(frozen=True)
class Budgets:
    enumeration_log2: int = 24
    bitset_bits: int = 1 << 30
    pair_evaluations: int = 1 << 26


def _from_env() -> Budgets:
    b = Budgets()
    raw = os.environ.get("ELAB_BUDGET_BITS")
    if raw:
        b = replace(b, bitset_bits=int(raw, 0))
    return b


_budgets = _from_env()


def budgets() -> Budgets:
    return _budgets


def set_budgets(**changes) -> Budgets:
    global _budgets
    _budgets = replace(_budgets, **changes)
    return _budgets


@contextmanager
def budget_override(**changes):
    global _budgets
    saved = _budgets
    _budgets = replace(_budgets, **changes)
    try:
        yield _budgets
    finally:
        _budgets = saved


def check_enumeration(n: int) -> None:
    if n > budgets().enumeration_log2:
        raise BudgetExceeded(
            f"2^{n} words exceeds enumeration budget 2^{budgets().enumeration_log2}"
        )


def check_bits(size: int, what: str = "bitset") -> None:
    if size > budgets().bitset_bits:
        raise BudgetExceeded(f"{what} of {size} bits exceeds budget {budgets().bitset_bits}")


def check_pairs(count: int, what: str = "evaluation") -> None:
    if count > budgets().pair_evaluations:
        raise BudgetExceeded(f"{what} needs {count} steps, budget {budgets().pair_evaluations}")


def numba_requested() -> bool:
    return os.environ.get("DIGITWARING_DISABLE_NUMBA", "0") not in ("1", "true", "yes")
