"""Exact LTL evaluation on lasso words and the zipping reduction.

A counterexample assigns one lasso per trace variable.  Zipping merges the
assignment into a single lasso whose letters carry ``prop@var`` keys; the
quantifier-free body then reads like an ordinary LTL formula over those
keys.  Until/Release truth is computed by fixpoint iteration over the
finite unrolling with the last position wrapping to the loop start.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import formulas as F
from .errors import ValidationError
from .events import Counterexample, Event, sort_events
from .lasso import Lasso, lcm


@dataclass(frozen=True)
class ZippedTrace:
    lasso: Lasso
    variables: tuple[str, ...]
    binding: tuple[tuple[str, str], ...]  # (variable, trace name)
    shapes: tuple[tuple[int, int], ...]  # per variable: (|u|, |v|) of its trace

    def trace_of(self, var: str) -> str:
        return dict(self.binding)[var]

    def original_position(self, var: str, zipped_pos: int) -> int:
        """Map a zipped position into the variable's own finite representation."""
        shape = dict(zip(self.variables, self.shapes))[var]
        prefix_len, period_len = shape
        if zipped_pos < prefix_len:
            return zipped_pos
        return prefix_len + (zipped_pos - prefix_len) % period_len

    def event_for(self, var: str, zipped_pos: int, prop: str, positive: bool) -> Event:
        return Event(self.trace_of(var), self.original_position(var, zipped_pos), prop, positive)


def zip_hyper(formula: F.HyperFormula, cex: Counterexample) -> tuple[F.Formula, ZippedTrace]:
    """Eliminate the quantifier prefix against a concrete assignment.

    Variables bind positionally to the counterexample's traces.  The zipped
    lasso's prefix is the longest of the component prefixes and its period
    the least common multiple of the component periods.
    """
    names = cex.names()
    if len(names) != len(formula.variables):
        raise ValidationError(
            f"formula quantifies {len(formula.variables)} traces but the "
            f"counterexample assigns {len(names)}"
        )
    binding = tuple(zip(formula.variables, names))
    prefix_len = max(cex[n].loop_start for n in names)
    period_len = 1
    for n in names:
        period_len = lcm(period_len, len(cex[n].period))

    letters = []
    for pos in range(prefix_len + period_len):
        letter = set()
        for var, name in binding:
            for prop in cex[name].at(pos):
                letter.add(f"{prop}@{var}")
        letters.append(frozenset(letter))
    zipped = Lasso(letters[:prefix_len], letters[prefix_len:])
    shapes = tuple((cex[n].loop_start, len(cex[n].period)) for n in names)
    return formula.body, ZippedTrace(zipped, formula.variables, binding, shapes)


def eval_ltl(trace: Lasso, formula: F.Formula) -> bool:
    """Truth of `formula` at position 0 of the ultimately periodic word."""
    return truth_table(trace, formula)[formula][0]


def truth_table(trace: Lasso, formula: F.Formula) -> dict[F.Formula, list[bool]]:
    """Truth of every subformula at every position of the finite unrolling."""
    n = len(trace)
    loop = trace.loop_start
    succ = [i + 1 for i in range(n)]
    succ[n - 1] = loop
    letters = [trace.at(i) for i in range(n)]
    table: dict[F.Formula, list[bool]] = {}

    for sub in F.subformulas(formula):
        if isinstance(sub, F.Atom):
            key = sub.key()
            row = [key in letters[i] for i in range(n)]
        elif isinstance(sub, F.Const):
            row = [sub.value] * n
        elif isinstance(sub, F.Not):
            row = [not v for v in table[sub.arg]]
        elif isinstance(sub, F.And):
            row = [a and b for a, b in zip(table[sub.left], table[sub.right])]
        elif isinstance(sub, F.Or):
            row = [a or b for a, b in zip(table[sub.left], table[sub.right])]
        elif isinstance(sub, F.Implies):
            row = [(not a) or b for a, b in zip(table[sub.left], table[sub.right])]
        elif isinstance(sub, F.Iff):
            row = [a == b for a, b in zip(table[sub.left], table[sub.right])]
        elif isinstance(sub, F.Next):
            arg = table[sub.arg]
            row = [arg[succ[i]] for i in range(n)]
        elif isinstance(sub, F.Eventually):
            row = _lfp(lambda cur, i: table[sub.arg][i] or cur[succ[i]], n)
        elif isinstance(sub, F.Always):
            row = _gfp(lambda cur, i: table[sub.arg][i] and cur[succ[i]], n)
        elif isinstance(sub, F.Until):
            row = _lfp(
                lambda cur, i: table[sub.right][i] or (table[sub.left][i] and cur[succ[i]]), n
            )
        elif isinstance(sub, F.Release):
            row = _gfp(
                lambda cur, i: table[sub.right][i] and (table[sub.left][i] or cur[succ[i]]), n
            )
        else:
            raise TypeError(f"not a formula node: {sub!r}")
        table[sub] = row
    return table


def _lfp(step, n: int) -> list[bool]:
    cur = [False] * n
    while True:
        nxt = [step(cur, i) for i in range(n)]
        if nxt == cur:
            return cur
        cur = nxt


def _gfp(step, n: int) -> list[bool]:
    cur = [True] * n
    while True:
        nxt = [step(cur, i) for i in range(n)]
        if nxt == cur:
            return cur
        cur = nxt


def eval_hyper(cex: Counterexample, formula: F.HyperFormula) -> bool:
    """Truth of the quantifier-free body on the given trace assignment."""
    body, zipped = zip_hyper(formula, cex)
    return eval_ltl(zipped.lasso, body)


def falsifies(cex: Counterexample, formula: F.HyperFormula) -> bool:
    return not eval_hyper(cex, formula)


def satisfied_input_events(machine, cex: Counterexample) -> tuple[Event, ...]:
    from .events import satisfied_events

    return satisfied_events(cex, machine.inputs)


def satisfied_output_events(machine, cex: Counterexample) -> tuple[Event, ...]:
    from .events import satisfied_events

    return satisfied_events(cex, machine.outputs)


def formula_input_events(machine, formula: F.HyperFormula, cex: Counterexample) -> tuple[Event, ...]:
    """Satisfied input events whose proposition the body reads on their trace.

    These complement the transition analysis: an input can steer the truth
    of the property directly without ever being necessary for a transition.
    """
    binding = dict(zip(formula.variables, cex.names()))
    mentioned: set[tuple[str, str]] = set()
    for atom in F.atoms(formula.body):
        if atom.prop in machine.inputs:
            mentioned.add((binding[atom.var], atom.prop))
    out = []
    for name, trace in cex.traces.items():
        for pos in range(len(trace)):
            for prop in machine.inputs:
                if (name, prop) in mentioned:
                    out.append(Event(name, pos, prop, prop in trace.at(pos)))
    return sort_events(out)
