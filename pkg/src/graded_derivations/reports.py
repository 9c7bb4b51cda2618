"""Check reports, error types and seeded sampling shared by every check."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Sequence


class PreconditionError(ValueError):
    """An operation was called outside its stated preconditions."""


class GroupMismatch(ValueError):
    pass


class ParseError(ValueError):
    """Malformed literal. ``line``/``column`` are 1-based when known."""

    def __init__(self, message: str, text: str = "", column: int | None = None, line: int | None = None):
        self.text = text
        self.column = column
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        suffix = f" ({', '.join(where)})" if where else ""
        super().__init__(f"{message}{suffix}" + (f": {text!r}" if text else ""))


# Default ceiling on the number of pairs/triples a single check visits
# exhaustively before switching to seeded sampling.
DEFAULT_SAMPLE_CAP = 250_000


def limit(items: Sequence, cap: int | None = None, seed: int = 0):
    """Return ``(chosen, fraction)``; ``chosen`` is ``items`` itself when within ``cap``."""
    cap = DEFAULT_SAMPLE_CAP if cap is None else cap
    n = len(items)
    if n <= cap:
        return items, 1.0
    idx = sorted(random.Random(seed).sample(range(n), cap))
    return [items[i] for i in idx], cap / n


def _plain(value: Any):
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, float):
        return value
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, Report):
        return value.to_dict()
    return str(value)


@dataclass
class Report:
    """Outcome of a check.

    ``counterexamples`` hold live library objects so that a failure can be
    replayed; :meth:`to_dict` renders them as exact strings.
    """

    check: str
    passed: bool
    counterexamples: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.passed

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "status": self.status,
            "counterexamples": _plain(self.counterexamples),
            "details": _plain(self.details),
        }
