"""Search budgets for the exhaustive algorithms.

Defaults can be overridden process-wide with the ``DYERCAT_BUDGET``
environment variable, e.g. ``DYERCAT_BUDGET="length=30,closure=200000"``.
A bare integer is read as the closure size.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from functools import lru_cache

ENV_VAR = "DYERCAT_BUDGET"


@dataclass(frozen=True)
class Budget:
    max_length: int = 24          # syllables per word handed to the rewriting search
    max_closure: int = 10**6      # words visited in one move-closure
    max_order: int = 10**4        # elements in one finite group table

    def __post_init__(self):
        for name in ("max_length", "max_closure", "max_order"):
            if getattr(self, name) <= 0:
                raise ValueError(f"budget {name} must be positive")


_KEYS = {"length": "max_length", "closure": "max_closure", "order": "max_order"}


def parse_budget(text: str, base: Budget | None = None) -> Budget:
    base = base or Budget()
    text = text.strip()
    if not text:
        return base
    if text.isdigit():
        return replace(base, max_closure=int(text))
    changes = {}
    for item in text.split(","):
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in _KEYS:
            raise ValueError(f"unknown budget key {key!r}")
        changes[_KEYS[key]] = int(value)
    return replace(base, **changes)


@lru_cache(maxsize=8)
def _parsed(text: str) -> Budget:
    return parse_budget(text)


def default_budget() -> Budget:
    return _parsed(os.environ.get(ENV_VAR, ""))
