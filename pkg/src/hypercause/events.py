"""Events and counterexamples.

An event is one proposition literal at one position of one named trace of a
counterexample; causes are sets of input events, contingencies sets of
output events.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import ValidationError
from .lasso import Lasso


@dataclass(frozen=True, order=False)
class Event:
    trace: str
    position: int
    prop: str
    positive: bool

    def sort_key(self):
        # negative literals sort before positive ones at the same spot
        return (self.trace, self.position, self.prop, 1 if self.positive else 0)

    def __lt__(self, other: "Event"):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        sign = "" if self.positive else "!"
        return f"<{sign}{self.prop},{self.position},{self.trace}>"


def sort_events(events: Iterable[Event]) -> tuple[Event, ...]:
    return tuple(sorted(set(events), key=Event.sort_key))


class Counterexample:
    """Ordered assignment of named lasso traces to trace variables."""

    __slots__ = ("traces",)

    def __init__(self, traces: Mapping[str, Lasso]):
        if not traces:
            raise ValidationError("counterexample must assign at least one trace")
        object.__setattr__(self, "traces", dict(traces))

    def __setattr__(self, *a):
        raise AttributeError("Counterexample is immutable")

    def names(self) -> tuple[str, ...]:
        return tuple(self.traces)

    def lassos(self) -> tuple[Lasso, ...]:
        return tuple(self.traces.values())

    def __getitem__(self, name: str) -> Lasso:
        return self.traces[name]

    def __contains__(self, name: str) -> bool:
        return name in self.traces

    def __eq__(self, other):
        if not isinstance(other, Counterexample):
            return NotImplemented
        return self.traces == other.traces

    def __hash__(self):
        return hash(tuple(self.traces.items()))

    def __repr__(self):
        inner = ", ".join(f"{k}: {v}" for k, v in self.traces.items())
        return f"<Counterexample {inner}>"

    def with_trace(self, name: str, trace: Lasso) -> "Counterexample":
        new = dict(self.traces)
        new[name] = trace
        return Counterexample(new)


def check_event(cex: Counterexample, event: Event) -> None:
    if event.trace not in cex:
        raise ValidationError(f"event {event} references unknown trace {event.trace!r}")
    trace = cex[event.trace]
    if not 0 <= event.position < len(trace):
        raise ValidationError(
            f"event {event} position out of range for trace {event.trace!r} "
            f"(finite representation has {len(trace)} positions)"
        )


def satisfies_events(cex: Counterexample, events: Iterable[Event]) -> bool:
    """True iff every event names a trace of `cex` and its literal holds there."""
    for e in events:
        if e.trace not in cex:
            return False
        if (e.prop in cex[e.trace].at(e.position)) != e.positive:
            return False
    return True


def events_of_trace(name: str, trace: Lasso, props: Iterable[str]) -> Iterator[Event]:
    """Every satisfied literal over `props` in the finite representation."""
    props = sorted(props)
    for n in range(len(trace)):
        here = trace.at(n)
        for p in props:
            yield Event(name, n, p, p in here)


def satisfied_events(cex: Counterexample, props: Iterable[str]) -> tuple[Event, ...]:
    out: list[Event] = []
    for name, trace in cex.traces.items():
        out.extend(events_of_trace(name, trace, props))
    return sort_events(out)
