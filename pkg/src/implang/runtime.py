"""Shared execution machinery: stores, traces, outcomes, cons lists.

Both interpreters produce the same Trace shape so traces can be compared,
serialized, and scored uniformly.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any, Generic, Iterator, TypeVar

Value = int | bool

DEFAULT_STEP_LIMIT = 1_000_000

T = TypeVar("T")


class Stuck(Exception):
    """No rule applies to a non-terminal configuration: a catalog gap."""


class PopEmpty(Exception):
    """A pop on an empty control stack: an interpreter bug, not a program error."""


class RequiresTermination(Exception):
    """Metric or gold asked for, but the trace did not terminate cleanly."""


class Outcome(enum.Enum):
    NORMAL = "normal"  # focus reduced to the empty list
    HALTED = "halted"  # halt statement executed
    ERROR = "error"  # runtime fault (division by zero, type fault, ...)
    STEP_LIMIT = "step_limit"

    @property
    def terminated(self) -> bool:
        return self in (Outcome.NORMAL, Outcome.HALTED)


@dataclass(frozen=True)
class TraceStep:
    rule: int
    post_state: dict[str, Value]


@dataclass
class Trace:
    steps: list[TraceStep]
    outcome: Outcome
    final_store: dict[str, Value]
    # Deepest dynamic nesting actually entered during execution.
    taken_loop_depth: int = 0
    taken_if_depth: int = 0
    # Number of rules applied; equals len(steps) unless collection was off.
    n_steps: int = 0

    def rule_sequence(self) -> list[int]:
        return [s.rule for s in self.steps]


def render_store(store: dict[str, Value]) -> str:
    items = ", ".join(f"{k} -> {_fmt_value(v)}" for k, v in store.items())
    return "{" + items + "}"


def _fmt_value(v: Value) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


# ---------------------------------------------------------------------------
# Immutable cons list: O(1) head operations for the machine's work list
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Cons(Generic[T]):
    head: T
    tail: "Cons[T] | None"


CList = Cons[T] | None


def cons_from(items: tuple[Any, ...] | list[Any], tail: CList = None) -> CList:
    out = tail
    for item in reversed(items):
        out = Cons(item, out)
    return out


def cons_iter(lst: CList) -> Iterator[Any]:
    while lst is not None:
        yield lst.head
        lst = lst.tail
