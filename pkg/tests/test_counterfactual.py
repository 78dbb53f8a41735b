import random

import pytest

from hypercause.counterfactual import (
    CounterfactualAutomaton,
    DegradedContingencyWarning,
    build_counterfactual_automaton,
    controllable_outputs,
    intervene,
    intervention_word,
)
from hypercause.errors import ValidationError
from hypercause.events import Counterexample, Event, satisfies_events
from hypercause.lasso import Lasso
from hypercause.machine import MooreMachine

from conftest import t1, t2
from test_machine import random_input_word, random_machine


def test_controllable_outputs_full_for_complete_labelling(machine):
    chosen, excluded = controllable_outputs(machine)
    assert chosen == ("ho", "lo")
    assert excluded == ()


def test_chain_structure(machine):
    aut = build_counterfactual_automaton(machine, t2())
    assert aut.initial == ("s0", 0)
    assert aut.last_copy == 2
    assert aut.loop_to == 2
    assert set(aut.input_alphabet()) == {"hi", "ho^C", "lo^C"}


def test_reachable_fragment_transitions(machine):
    # the three documented edges out of the initial copy
    aut = build_counterfactual_automaton(machine, t2())
    assert aut.step(("s0", 0), {"hi"}) == ("s1", 1)
    assert aut.step(("s0", 0), {"lo^C"}) == ("s0", 1)
    assert aut.step(("s0", 0), {"ho^C"}) == ("s3", 1)
    assert aut.step(("s0", 0), set()) == ("s2", 1)
    # prefix copies cannot be revisited: loop stays in the last copy
    assert aut.step(("s3", 2), set()) == ("s3", 2)
    reachable = aut.reachable()
    assert ("s0", 0) in reachable
    assert all(k > 0 for (s, k) in reachable if (s, k) != ("s0", 0))


def test_no_contingency_projection_matches_base_run(machine):
    aut = build_counterfactual_automaton(machine, t2())
    word = intervention_word(aut, [], [])
    assert aut.run(word) == t2()


def test_flip_first_high_input_reproduces_documented_counterfactual(machine, cex):
    flipped = intervene(machine, cex, [Event("t2", 0, "hi", True)], [])
    assert flipped["t1"] == t1()
    assert flipped["t2"] == Lasso(
        [frozenset(), frozenset({"hi", "lo"}), frozenset({"ho"})],
        [frozenset({"ho", "lo"})],
    )


def test_flip_with_low_output_contingency(machine, cex):
    flipped = intervene(
        machine,
        cex,
        [Event("t2", 0, "hi", True)],
        [Event("t2", 2, "lo", True)],
    )
    assert flipped["t1"] == t1()
    assert flipped["t2"] == Lasso(
        [frozenset(), frozenset({"hi", "lo"}), frozenset({"ho", "lo"})],
        [frozenset({"ho", "lo"})],
    )


def test_empty_intervention_is_identity(machine, cex):
    assert intervene(machine, cex, [], []) == cex


def test_intervene_rejects_unknown_trace(machine, cex):
    with pytest.raises(ValidationError, match="unknown trace"):
        intervene(machine, cex, [Event("t9", 0, "hi", True)], [])


def test_intervene_rejects_out_of_range_position(machine, cex):
    with pytest.raises(ValidationError, match="out of range"):
        intervene(machine, cex, [Event("t2", 9, "hi", True)], [])


def test_intervene_rejects_unsatisfied_cause(machine, cex):
    with pytest.raises(ValidationError, match="not satisfied"):
        intervene(machine, cex, [Event("t2", 0, "hi", False)], [])


def test_intervention_word_flip_is_involutive(machine):
    aut = build_counterfactual_automaton(machine, t2())
    cause = [Event("t2", 0, "hi", True), Event("t2", 2, "hi", False)]
    once = intervention_word(aut, cause, [])
    # flipping the same literals on the flipped word restores the original
    word_props = [set(once.at(k)) for k in range(len(once))]
    for e in cause:
        if e.prop in word_props[e.position]:
            word_props[e.position].discard(e.prop)
        else:
            word_props[e.position].add(e.prop)
    restored = Lasso(word_props[: once.loop_start], word_props[once.loop_start :])
    assert restored == t2().restrict(machine.inputs)


def test_loop_contingency_applies_every_iteration():
    # two-position loop; forcing the output back at one loop offset only
    m = MooreMachine.from_guards(
        inputs=["a"],
        outputs=["o"],
        labels={"p": [], "q": ["o"]},
        initial="p",
        transitions=[
            ("p", "a", "q"),
            ("p", "!a", "p"),
            ("q", "true", "p"),
        ],
    )
    source = m.run(Lasso([], [frozenset({"a"}), frozenset()]))
    assert source == Lasso([], [frozenset({"a"}), frozenset({"o"})])
    cex = Counterexample({"t": source})
    # flip the 'a' at loop offset 0, then force o back at loop offset 1
    flipped = intervene(m, cex, [Event("t", 0, "a", True)], [Event("t", 1, "o", True)])
    got = flipped["t"]
    for n in range(1, 9, 2):
        assert "o" in got.at(n)
    for n in range(0, 9, 2):
        assert "o" not in got.at(n) and "a" not in got.at(n)


def test_position_zero_contingency_is_noop(machine, cex):
    before = intervene(machine, cex, [Event("t2", 0, "hi", True)], [])
    after = intervene(
        machine, cex, [Event("t2", 0, "hi", True)], [Event("t2", 0, "ho", False)]
    )
    assert before == after


def test_degraded_contingencies_on_incomplete_labelling():
    m = MooreMachine.from_guards(
        inputs=["a"],
        outputs=["x", "y"],
        labels={"p": [], "q": ["x"]},
        initial="p",
        transitions=[("p", "a", "q"), ("p", "!a", "p"), ("q", "true", "p")],
    )
    with pytest.warns(DegradedContingencyWarning):
        chosen, excluded = controllable_outputs(m)
    assert chosen == ("x",)
    assert excluded == ("y",)
    aut = CounterfactualAutomaton(m, m.run(Lasso([], [frozenset({"a"})])))
    assert "y" not in aut.controllable


def test_contingency_on_uncontrollable_output_rejected():
    m = MooreMachine.from_guards(
        inputs=["a"],
        outputs=["x", "y"],
        labels={"p": [], "q": ["x"]},
        initial="p",
        transitions=[("p", "a", "q"), ("p", "!a", "p"), ("q", "true", "p")],
    )
    trace = m.run(Lasso([frozenset({"a"})], [frozenset()]))
    cex = Counterexample({"t": trace})
    with pytest.warns(DegradedContingencyWarning):
        with pytest.raises(ValidationError, match="not contingency-controllable"):
            intervene(m, cex, [], [Event("t", 1, "y", False)])


def test_duplicate_labels_still_allow_plain_runs():
    # two states share a label: no contingencies, but projection still works
    m = MooreMachine.from_guards(
        inputs=["a"],
        outputs=["o"],
        labels={"p": [], "p2": [], "q": ["o"]},
        initial="p",
        transitions=[
            ("p", "a", "q"), ("p", "!a", "p2"),
            ("p2", "a", "q"), ("p2", "!a", "p"),
            ("q", "true", "q"),
        ],
    )
    with pytest.warns(DegradedContingencyWarning):
        aut = CounterfactualAutomaton(m, m.run(Lasso([], [frozenset()])))
    assert aut.controllable == ()
    word = intervention_word(aut, [], [])
    assert aut.run(word) == m.run(Lasso([], [frozenset()]))


def test_random_no_contingency_conservativity():
    rng = random.Random(13)
    checked = 0
    while checked < 40:
        m = random_machine(rng, n_inputs=rng.randint(1, 2), n_states=rng.randint(2, 4))
        labels = list(m.labels.values())
        if len(set(labels)) != len(labels):
            continue  # injective labelling only
        w = random_input_word(rng, m.inputs)
        trace = m.run(w)
        cex = Counterexample({"t": trace})
        import warnings as _w

        with _w.catch_warnings():
            _w.simplefilter("ignore", DegradedContingencyWarning)
            aut = CounterfactualAutomaton(m, trace)
            projected = aut.run(intervention_word(aut, [], []))
        assert projected == trace
        checked += 1


def test_events_satisfied_by_construction(machine, cex):
    cause = [Event("t2", 0, "hi", True), Event("t1", 0, "hi", False)]
    assert satisfies_events(cex, cause)
    assert not satisfies_events(cex, [Event("t2", 0, "hi", False)])
    assert satisfies_events(cex, [])
