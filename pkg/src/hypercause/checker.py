"""Bounded counterexample search, so violations can be produced in-house.

The search enumerates lasso-shaped input words per quantified trace within
the given prefix/period bounds, in a fixed deterministic order, and returns
the first assignment whose traces falsify the body.  The synchronous
product of the machine with itself is also available; explanation itself
never needs it, but it grounds the reduction and its projection property.
"""

from __future__ import annotations

import itertools
from typing import Iterator

from . import formulas as F
from .boolexpr import assignments
from .errors import SizeGuardError
from .events import Counterexample
from .lasso import Lasso
from .machine import MooreMachine
from .semantics import eval_hyper

MAX_PRODUCT_STATES = 100_000
MAX_ASSIGNMENTS = 2_000_000


def tagged(name: str, index: int) -> str:
    return f"{name}@{index}"


class ProductMachine(MooreMachine):
    """Synchronous k-fold self-composition with propositions tagged per copy."""

    def __init__(self, base: MooreMachine, k: int, max_states: int = MAX_PRODUCT_STATES):
        if k < 1:
            raise ValueError("self-composition needs k >= 1")
        if len(base.states()) ** k > max_states:
            raise SizeGuardError(
                f"self-composition would have {len(base.states()) ** k} states"
            )
        self.base = base
        self.k = k
        inputs = [tagged(n, i) for i in range(k) for n in base.inputs]
        outputs = [tagged(n, i) for i in range(k) for n in base.outputs]
        tuples = list(itertools.product(base.states(), repeat=k))
        labels = {
            self._name(t): frozenset(
                tagged(o, i) for i, s in enumerate(t) for o in base.label(s)
            )
            for t in tuples
        }
        delta = {}
        for t in tuples:
            for assignment in assignments(inputs):
                succ = tuple(
                    base.successor(
                        s, {n for n in base.inputs if tagged(n, i) in assignment}
                    )
                    for i, s in enumerate(t)
                )
                delta[(self._name(t), assignment)] = self._name(succ)
        initial = self._name(tuple(base.initial for _ in range(k)))
        super().__init__(inputs, outputs, labels, initial, delta)

    @staticmethod
    def _name(state_tuple: tuple[str, ...]) -> str:
        return "(" + ",".join(state_tuple) + ")"

    def project(self, trace: Lasso, index: int) -> Lasso:
        """Component trace of one copy, over the base alphabet."""
        prefix = [self._untag(s, index) for s in trace.prefix]
        period = [self._untag(s, index) for s in trace.period]
        return Lasso(prefix, period)

    def _untag(self, letter: frozenset[str], index: int) -> frozenset[str]:
        suffix = f"@{index}"
        return frozenset(p[: -len(suffix)] for p in letter if p.endswith(suffix))


def self_compose(
    machine: MooreMachine, k: int, max_states: int = MAX_PRODUCT_STATES
) -> ProductMachine:
    return ProductMachine(machine, k, max_states)


def _input_words(machine: MooreMachine, prefix_bound: int, period_bound: int) -> Iterator[Lasso]:
    """All input lassos within the bounds, smallest shapes first."""
    letters = sorted(assignments(machine.inputs), key=lambda s: (len(s), sorted(s)))
    for total in range(1, prefix_bound + period_bound + 1):
        for period_len in range(1, min(period_bound, total) + 1):
            prefix_len = total - period_len
            if prefix_len > prefix_bound:
                continue
            for combo in itertools.product(letters, repeat=total):
                yield Lasso(combo[:prefix_len], combo[prefix_len:])


def find_counterexample(
    machine: MooreMachine,
    formula: F.HyperFormula,
    prefix_bound: int = 4,
    period_bound: int = 3,
) -> Counterexample | None:
    """First trace assignment falsifying the body, or None within bounds."""
    k = len(formula.variables)
    words = list(_input_words(machine, prefix_bound, period_bound))
    if len(words) ** k > MAX_ASSIGNMENTS:
        raise SizeGuardError(
            f"{len(words) ** k} candidate assignments exceed the search guard"
        )
    traces = [machine.run(w) for w in words]
    seen: set = set()
    unique: list[Lasso] = []
    for t in traces:
        if t not in seen:
            seen.add(t)
            unique.append(t)
    for combo in itertools.product(unique, repeat=k):
        assignment = Counterexample(
            {f"t{i + 1}": trace for i, trace in enumerate(combo)}
        )
        if not eval_hyper(assignment, formula):
            return assignment
    return None
