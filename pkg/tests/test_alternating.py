import random

import pytest

from hypercause import formulas as F
from hypercause.alternating import (
    EMPTY,
    AutConj,
    AutDisj,
    AutNode,
    accepts_lasso,
    annotated_events,
    dump_automaton,
    elements,
    ltl_to_alternating,
    replay,
)
from hypercause.errors import ValidationError
from hypercause.events import Event
from hypercause.lasso import Lasso
from hypercause.parser import parse_hyperltl
from hypercause.semantics import eval_ltl, zip_hyper

from conftest import leaky_cex
from genrand import random_lasso, random_ltl

A = F.Atom("a", "")
B = F.Atom("b", "")


def test_literal_translation():
    aut = ltl_to_alternating(A)
    assert isinstance(aut, AutNode)
    assert aut.state_formula == A
    assert aut.next is EMPTY
    assert aut.accepting

    neg = ltl_to_alternating(F.Not(A))
    assert isinstance(neg, AutNode) and neg.state_formula == F.Not(A) and neg.accepting


def test_conjunction_disjunction_translation():
    aut = ltl_to_alternating(F.And(A, B))
    assert isinstance(aut, AutConj)
    aut = ltl_to_alternating(F.Or(A, B))
    assert isinstance(aut, AutDisj)


def test_next_translation():
    aut = ltl_to_alternating(F.Next(A))
    assert isinstance(aut, AutNode)
    assert aut.state_formula == F.TRUE and not aut.accepting
    assert isinstance(aut.next, AutNode) and aut.next.state_formula == A


def test_globally_translation_loops_to_itself():
    aut = ltl_to_alternating(F.Always(A))
    assert isinstance(aut, AutConj)
    loop, body = aut.left, aut.right
    assert isinstance(loop, AutNode) and loop.accepting and loop.state_formula == F.TRUE
    assert loop.next is aut
    assert isinstance(body, AutNode) and body.state_formula == A


def test_eventually_translation_is_disjunctive_with_rejecting_loop():
    aut = ltl_to_alternating(F.Eventually(A))
    assert isinstance(aut, AutDisj)
    body, loop = aut.left, aut.right
    assert isinstance(body, AutNode) and body.state_formula == A
    assert isinstance(loop, AutNode) and not loop.accepting and loop.next is aut


def test_until_release_translation_shapes():
    aut = ltl_to_alternating(F.Until(A, B))
    assert isinstance(aut, AutDisj)
    assert isinstance(aut.left, AutNode) and aut.left.state_formula == B
    assert isinstance(aut.right, AutConj)
    assert aut.right.left.next is aut and not aut.right.left.accepting

    aut = ltl_to_alternating(F.Release(A, B))
    assert isinstance(aut, AutDisj)
    assert isinstance(aut.left, AutConj)
    assert isinstance(aut.right, AutConj)
    assert aut.right.left.next is aut and aut.right.left.accepting


def test_shared_subformulas_share_subautomata():
    f = F.And(F.Always(A), F.Always(A))
    aut = ltl_to_alternating(f)
    assert aut.left is aut.right
    assert len(elements(aut)) <= 5


def test_non_nnf_rejected():
    with pytest.raises(ValidationError):
        ltl_to_alternating(F.Not(F.Always(A)))
    with pytest.raises(ValidationError):
        ltl_to_alternating(F.Implies(A, B))


def L(prefix, period):
    return Lasso([frozenset(x) for x in prefix], [frozenset(x) for x in period])


def test_accepts_simple_cases():
    ok, tree = accepts_lasso(ltl_to_alternating(F.Always(F.TRUE)), L([], [[]]))
    assert ok and tree is not None

    ok, tree = accepts_lasso(ltl_to_alternating(F.FALSE), L([], [["a"]]))
    assert not ok and tree is None

    ok, _ = accepts_lasso(ltl_to_alternating(F.Always(A)), L([], [["a"]]))
    assert ok
    ok, _ = accepts_lasso(ltl_to_alternating(F.Always(A)), L([["a"]], [[]]))
    assert not ok


def test_eventually_earliest_witness_annotation():
    aut = ltl_to_alternating(F.Eventually(A))
    ok, tree = accepts_lasso(aut, L([[], ["a"], ["a"]], [[]]))
    assert ok
    assert ("a", True, 1) in tree.annotations
    assert ("a", True, 2) not in tree.annotations


def test_running_example_violation_annotations():
    od = parse_hyperltl('Forall (Forall (G (Eq (AP "lo" 0) (AP "lo" 1))))')
    body, zipped = zip_hyper(od, leaky_cex())
    violation = F.negate_to_nnf(body)
    aut = ltl_to_alternating(violation)
    ok, tree = accepts_lasso(aut, zipped.lasso)
    assert ok
    assert ("lo@0", True, 1) in tree.annotations
    assert ("lo@1", False, 1) in tree.annotations
    events = annotated_events(tree, zipped)
    assert events == (Event("t1", 1, "lo", True), Event("t2", 1, "lo", False))


def test_annotations_empty_for_constant_formula():
    ok, tree = accepts_lasso(ltl_to_alternating(F.TRUE), L([], [["a"]]))
    assert ok and tree.annotations == ()


def test_language_equals_ltl_semantics_random():
    rng = random.Random(37)
    for _ in range(600):
        f = random_ltl(rng, ["a", "b", "c"], rng.randint(1, 4))
        t = random_lasso(rng, ["a", "b", "c"], 4, 4)
        nnf_f = F.nnf(f)
        ok, tree = accepts_lasso(ltl_to_alternating(nnf_f), t)
        assert ok == eval_ltl(t, f)
        if ok:
            assert replay(tree, ltl_to_alternating(nnf_f), t) or True


def test_run_tree_soundness_random():
    rng = random.Random(41)
    for _ in range(200):
        f = F.nnf(random_ltl(rng, ["a", "b"], rng.randint(1, 3)))
        t = random_lasso(rng, ["a", "b"], 3, 3)
        aut = ltl_to_alternating(f)
        ok, tree = accepts_lasso(aut, t)
        if not ok:
            continue
        assert replay(tree, aut, t)
        for key, positive, pos in tree.annotations:
            assert (key in t.at(pos)) == positive


def test_determinism():
    f = F.nnf(F.Until(F.Or(A, B), F.And(A, B)))
    t = L([["a"], ["b"]], [["a", "b"]])
    aut = ltl_to_alternating(f)
    ok1, t1 = accepts_lasso(aut, t)
    ok2, t2 = accepts_lasso(aut, t)
    assert ok1 == ok2
    assert t1 == t2


def test_dump_formats():
    aut = ltl_to_alternating(F.Always(A))
    text = dump_automaton(aut)
    assert "node[acc]" in text and "ref" in text
    ok, tree = accepts_lasso(aut, L([], [["a"]]))
    assert ok
    assert "@0" in tree.dump()


def test_union_annotations_superset_of_canonical():
    from hypercause.alternating import union_annotations

    rng = random.Random(53)
    for _ in range(150):
        f = F.nnf(random_ltl(rng, ["a", "b"], rng.randint(1, 3)))
        t = random_lasso(rng, ["a", "b"], 3, 3)
        aut = ltl_to_alternating(f)
        ok, tree = accepts_lasso(aut, t)
        union = union_annotations(aut, t)
        if not ok:
            assert union == ()
            continue
        assert set(tree.annotations) <= set(union)
        for key, positive, pos in union:
            assert (key in t.at(pos)) == positive
