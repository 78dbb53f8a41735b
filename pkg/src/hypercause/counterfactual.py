"""Counterfactual automata and the intervention function.

A counterfactual automaton for a lasso trace is a chain of copies of the
base machine, one per position of the finite representation, with the last
copy looping back to the loop start.  Auxiliary inputs ``o^C`` (one per
controllable output) force output ``o`` in the successor position back to
its value on the source trace, overriding the machine's dynamics.

Interventions flip cause events in the input word and raise the auxiliary
inputs for contingency events.  Because outputs at a position are fixed by
the state entered one step earlier, the auxiliary input for an event at
position ``p`` is consumed on the transition into ``p`` (step ``p - 1``);
events in the loop recur at every iteration of their offset.
"""

from __future__ import annotations

import itertools
import warnings
from typing import Iterable, Mapping

from .boolexpr import assignments as boolexpr_assignments
from .errors import ValidationError
from .events import Counterexample, Event, check_event
from .lasso import Lasso
from .machine import MooreMachine


class DegradedContingencyWarning(UserWarning):
    """Some outputs cannot be used as contingencies on this machine."""


def contingency_flag(output: str) -> str:
    return f"{output}^C"


def _override(label: frozenset[str], controlled: Iterable[str], values: frozenset[str]):
    controlled = frozenset(controlled)
    return (label - controlled) | (values & controlled)


def controllable_outputs(machine: MooreMachine) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """Largest output set usable for contingencies, plus the excluded rest.

    A set O_c qualifies when, closing the reachable states under both the
    transition function and O_c-overrides of successor labels, every
    non-identity override names exactly one state.  Identity overrides
    follow the ordinary transition function, so duplicated labels do not by
    themselves rule a set out.  Among maximal qualifying sets the
    lexicographically least (by sorted names) is chosen, deterministically.
    """
    outputs = sorted(machine.outputs)
    by_label: dict[frozenset[str], list[str]] = {}
    for s in machine.states():
        by_label.setdefault(machine.label(s), []).append(s)
    input_sets = tuple(boolexpr_assignments(machine.inputs))

    def valid(candidate: tuple[str, ...]) -> bool:
        overrides = [frozenset(c) for k in range(len(candidate) + 1)
                     for c in itertools.combinations(candidate, k)]
        seen = set(machine.reachable_states())
        frontier = list(seen)
        while frontier:
            s = frontier.pop()
            for a in input_sets:
                succ = machine.delta[(s, a)]
                label = machine.label(succ)
                targets = [succ]
                for chosen in overrides:
                    forced = _override(label, candidate, chosen)
                    if forced == label:
                        continue
                    named = by_label.get(forced, ())
                    if len(named) != 1:
                        return False
                    targets.append(named[0])
                for t in targets:
                    if t not in seen:
                        seen.add(t)
                        frontier.append(t)
        return True

    maximal: list[tuple[str, ...]] = []
    for size in range(len(outputs), -1, -1):
        for combo in itertools.combinations(outputs, size):
            if any(set(combo) <= set(m) for m in maximal):
                continue
            if valid(combo):
                maximal.append(combo)
    chosen = min(maximal) if maximal else ()
    excluded = tuple(o for o in outputs if o not in chosen)
    if excluded:
        warnings.warn(
            f"outputs {list(excluded)} excluded from contingency control "
            f"(state space does not realize their overrides uniquely)",
            DegradedContingencyWarning,
            stacklevel=2,
        )
    return chosen, excluded


class CounterfactualAutomaton:
    """Chain-of-copies machine for one source trace (states are (state, copy))."""

    def __init__(self, machine: MooreMachine, source: Lasso):
        diag = machine.validate_trace(source)
        if not diag:
            raise ValidationError(
                f"source is not a trace of the machine: {diag.message} @ {diag.position}"
            )
        self.machine = machine
        self.source = source
        self.last_copy = len(source) - 1
        self.loop_to = source.loop_start
        controllable, excluded = controllable_outputs(machine)
        self.controllable = controllable
        self.excluded_outputs = excluded
        self._flags = {contingency_flag(o): o for o in controllable}
        self._by_label = {}
        for s in machine.states():
            self._by_label.setdefault(machine.label(s), []).append(s)

    @property
    def initial(self) -> tuple[str, int]:
        return (self.machine.initial, 0)

    def input_alphabet(self) -> tuple[str, ...]:
        return tuple(self.machine.inputs) + tuple(sorted(self._flags))

    def step(self, state: tuple[str, int], input_set: Iterable[str]) -> tuple[str, int]:
        s, k = state
        input_set = frozenset(input_set)
        k_next = self.loop_to if k == self.last_copy else k + 1
        base_succ = self.machine.successor(s, input_set)
        flagged = frozenset(self._flags[f] for f in input_set if f in self._flags)
        if not flagged:
            return (base_succ, k_next)
        source_outputs = self.source.at(k_next) & frozenset(self.machine.outputs)
        forced = _override(self.machine.label(base_succ), flagged, source_outputs)
        if forced == self.machine.label(base_succ):
            return (base_succ, k_next)
        candidates = self._by_label.get(forced, ())
        if len(candidates) != 1:
            raise ValidationError(
                f"no unique state labelled {sorted(forced)} for contingency override"
            )
        return (candidates[0], k_next)

    def label(self, state: tuple[str, int]) -> frozenset[str]:
        return self.machine.label(state[0])

    def copy_index(self, state: tuple[str, int]) -> int:
        return state[1]

    def run(self, input_word: Lasso) -> Lasso:
        """Trace over the base alphabet, normalized at state+input recurrence."""
        allowed = set(self.machine.inputs) | set(self._flags)
        extra = input_word.alphabet() - allowed
        if extra:
            raise ValidationError(f"input word uses unknown propositions {sorted(extra)}")
        letters: list[frozenset[str]] = []
        state = self.initial
        seen: dict[tuple[tuple[str, int], int], int] = {}
        step = 0
        while True:
            phase = step - input_word.loop_start
            if phase >= 0:
                key = (state, phase % len(input_word.period))
                if key in seen:
                    start = seen[key]
                    return Lasso(letters[:start], letters[start:])
                seen[key] = step
            ins = input_word.at(step)
            letters.append((ins & frozenset(self.machine.inputs)) | self.label(state))
            state = self.step(state, ins)
            step += 1

    def reachable(self) -> tuple[tuple[str, int], ...]:
        seen = [self.initial]
        frontier = [self.initial]
        alphabet = self.input_alphabet()
        while frontier:
            st = frontier.pop()
            for k in range(len(alphabet) + 1):
                for combo in itertools.combinations(alphabet, k):
                    nxt = self.step(st, combo)
                    if nxt not in seen:
                        seen.append(nxt)
                        frontier.append(nxt)
        return tuple(seen)


def build_counterfactual_automaton(machine: MooreMachine, trace: Lasso) -> CounterfactualAutomaton:
    return CounterfactualAutomaton(machine, trace)


def intervention_word(
    automaton: CounterfactualAutomaton,
    cause: Iterable[Event],
    contingency: Iterable[Event],
) -> Lasso:
    """Input word for the counterfactual automaton realizing an intervention.

    Cause literals are flipped at their positions (recurring for loop
    positions); each contingency event raises the auxiliary input on every
    step that enters its position, so a loop event is re-applied on each
    iteration, including the loop-back step.
    """
    machine = automaton.machine
    source = automaton.source
    cause = tuple(cause)
    contingency = tuple(contingency)
    n_pos = len(source)
    loop_start = source.loop_start
    word = [set(source.at(k) & frozenset(machine.inputs)) for k in range(n_pos)]

    for e in cause + contingency:
        if not 0 <= e.position < n_pos:
            raise ValidationError(f"event {e} position out of range (trace has {n_pos} positions)")

    for e in cause:
        if e.prop not in machine.inputs:
            raise ValidationError(f"cause event {e} is not over an input")
        if (e.prop in source.at(e.position)) != e.positive:
            raise ValidationError(f"cause event {e} is not satisfied by the trace")
        if e.positive:
            word[e.position].discard(e.prop)
        else:
            word[e.position].add(e.prop)

    for e in contingency:
        if e.prop not in machine.outputs:
            raise ValidationError(f"contingency event {e} is not over an output")
        if (e.prop in source.at(e.position)) != e.positive:
            raise ValidationError(f"contingency event {e} is not satisfied by the trace")
        if e.prop not in automaton.controllable:
            raise ValidationError(
                f"output {e.prop!r} is not contingency-controllable on this machine"
            )
        flag = contingency_flag(e.prop)
        p = e.position
        if p == 0 and loop_start > 0:
            continue  # position 0 outputs are fixed by the initial state
        if p < loop_start:
            word[p - 1].add(flag)
        else:
            # the unique period step whose successor has p's loop offset
            offset = (p - 1 - loop_start) % len(source.period)
            word[loop_start + offset].add(flag)
            if p == loop_start and loop_start > 0:
                word[loop_start - 1].add(flag)

    return Lasso(word[:loop_start], word[loop_start:])


def intervene(
    machine: MooreMachine,
    cex: Counterexample,
    cause: Iterable[Event],
    contingency: Iterable[Event],
    automata: Mapping[str, CounterfactualAutomaton] | None = None,
) -> Counterexample:
    """Counterfactual counterexample after flipping `cause` under `contingency`."""
    cause = tuple(cause)
    contingency = tuple(contingency)
    for e in cause + contingency:
        check_event(cex, e)
    result: dict[str, Lasso] = {}
    for name, trace in cex.traces.items():
        mine_cause = [e for e in cause if e.trace == name]
        mine_cont = [e for e in contingency if e.trace == name]
        if not mine_cause and not mine_cont:
            result[name] = trace
            continue
        if automata is not None and name in automata:
            aut = automata[name]
        else:
            aut = CounterfactualAutomaton(machine, trace)
        result[name] = aut.run(intervention_word(aut, mine_cause, mine_cont))
    return Counterexample(result)
