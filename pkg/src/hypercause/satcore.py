"""Candidate causes from a transition analysis of the counterexample.

For each trace and each step of its finite representation the analysis
collects the input literals that are locally relevant for the transition
taken there: all inputs the successor function of the current state depends
on, read with their polarity on the trace.  Every such per-step set is
jointly unsatisfiable with the negated transition constraint, i.e. it is an
unsatisfiable core (not necessarily an irredundant one; ``unsat_core``
minimizes any core by deletion when an irredundant subset is wanted).

Inputs can also steer the property directly without ever being necessary
for a transition, so the candidate set additionally contains every
satisfied input event whose proposition the formula reads on that trace.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import boolexpr
from . import formulas as F
from .boolexpr import BoolExpr
from .errors import ValidationError
from .events import Counterexample, Event, sort_events
from .machine import MooreMachine
from .semantics import formula_input_events

Literal = tuple[str, bool]  # (variable name, polarity)


def event_var(prop: str, position: int) -> str:
    return f"{prop}@{position}"


def transition_constraint(
    machine: MooreMachine, state_from: str, state_to: str, position: int = 0
) -> BoolExpr:
    """Formula over position-tagged input variables, true exactly for the
    input sets that move `state_from` to `state_to`."""
    hits = []
    total = 0
    for assignment in boolexpr.assignments(machine.inputs):
        total += 1
        if machine.successor(state_from, assignment) == state_to:
            hits.append(assignment)
    if not hits:
        raise ValidationError(f"state {state_to!r} is not a successor of {state_from!r}")
    if len(hits) == total:
        return boolexpr.TRUE
    terms = []
    for assignment in hits:
        lits = [
            boolexpr.Var(event_var(name, position))
            if name in assignment
            else boolexpr.Not(boolexpr.Var(event_var(name, position)))
            for name in machine.inputs
        ]
        terms.append(boolexpr.conj(lits))
    return boolexpr.disj(terms)


def _sat(hard: BoolExpr, literals: Sequence[Literal]) -> bool:
    return boolexpr.is_satisfiable(hard, literals)


def unsat_core(hard: BoolExpr, assumptions: Sequence[Literal]) -> list[Literal]:
    """Deletion-minimized subset of `assumptions` unsatisfiable with `hard`.

    Raises if `hard` conjoined with all assumptions is satisfiable: for the
    transition analysis that would mean the counterexample never took the
    transition in question.
    """
    assumptions = list(assumptions)
    if _sat(hard, assumptions):
        raise ValidationError("assumptions are satisfiable with the hard formula; no core")
    core = list(assumptions)
    i = 0
    while i < len(core):
        trial = core[:i] + core[i + 1 :]
        if not _sat(hard, trial):
            core = trial
        else:
            i += 1
    return core


@dataclass(frozen=True)
class CandidateSet:
    events: tuple[Event, ...]
    per_step: tuple[tuple[tuple[str, int], tuple[Event, ...]], ...]  # ((trace, step), events)
    formula_support: tuple[Event, ...]

    def step_events(self, trace: str, step: int) -> tuple[Event, ...]:
        for key, events in self.per_step:
            if key == (trace, step):
                return events
        return ()


def _step_constraint_and_assumptions(
    machine: MooreMachine, trace_name: str, trace, states, n: int
) -> tuple[BoolExpr, list[tuple[Literal, Event]]]:
    hard = boolexpr.Not(transition_constraint(machine, states[n], states[n + 1], n))
    here = trace.at(n)
    assumptions = []
    for prop in machine.inputs:
        positive = prop in here
        lit = (event_var(prop, n), positive)
        assumptions.append((lit, Event(trace_name, n, prop, positive)))
    return hard, assumptions


def candidate_cause(
    machine: MooreMachine, formula: F.HyperFormula, cex: Counterexample
) -> CandidateSet:
    """Over-approximate the inputs that can be part of an actual cause.

    Per-step analysis runs on each original trace separately; a step at a
    state whose successor ignores the inputs contributes nothing.
    """
    per_step: list[tuple[tuple[str, int], tuple[Event, ...]]] = []
    events: list[Event] = []
    for name, trace in cex.traces.items():
        states = machine.state_sequence(trace)
        if not machine.is_state_recurrent(trace):
            raise ValidationError(
                f"trace {name!r}: period does not close on machine states; "
                "use a representation aligned with the state recurrence"
            )
        for n in range(len(trace)):
            relevant = machine.input_support(states[n])
            here = trace.at(n)
            step_events = sort_events(
                Event(name, n, prop, prop in here) for prop in relevant
            )
            if step_events:
                per_step.append(((name, n), step_events))
                events.extend(step_events)
    support = formula_input_events(machine, formula, cex)
    events.extend(support)
    return CandidateSet(sort_events(events), tuple(per_step), support)
