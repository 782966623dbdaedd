"""Shared verdict container for predicate checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Verdict:
    """Outcome of a predicate check.

    value is True/False for a decided predicate and None for "unknown"
    (budget refusals are raised as BudgetExceeded instead, None is reserved
    for genuinely inconclusive searches such as isomorphism hunts).
    A False verdict carries a concrete witness whenever one exists.
    """

    value: bool | None
    witness: Any = None
    note: str = ""

    def __bool__(self) -> bool:
        return self.value is True

    def to_json(self):
        out: dict[str, Any] = {"value": self.value}
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        if self.note:
            out["note"] = self.note
        return out


def _jsonable(obj):
    import numpy as np

    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (list, tuple)):
        return [_jsonable(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if hasattr(obj, "to_json"):
        return obj.to_json()
    return obj
