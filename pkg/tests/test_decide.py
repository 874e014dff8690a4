from __future__ import annotations

import random

import pytest
from corpus import GRAMMARS
from oracles import all_trees, brute_value, random_wta

from wtakit.algebra import NEG_INF, Arctic, Naturals, TruncatedPlus
from wtakit.automaton import Wta, evaluate, weight_of_run
from wtakit.crispdet import CrispDetWta, step_evaluate
from wtakit.decide import (NO, UNKNOWN, YES, CountCertificate, LoopCertificate, cfg_finite,
                           cost_finite, decide_finite_image, decide_image_at_most_k, decide_step_properties)
from wtakit.errors import PreconditionError
from wtakit.fixtures import (arctic_counter, arctic_two_state, multiples, nat_doubling, primed_constant,
                             tropical_two_state)
from wtakit.grammar import parse_grammar, words_up_to
from wtakit.trees import RankedAlphabet, monadic

UNARY = RankedAlphabet([("g", 1), ("h", 1), ("a", 0)])
MIXED = RankedAlphabet([("f", 2), ("g", 1), ("a", 0)])


def assert_pumping_replays(a, report):
    family = report.witness.family
    alg = a.algebra
    weights = [family.weight(a, n) for n in range(4)]
    for n in range(4):
        tree, run = family.member(n)
        assert run.state == family.state or run.state in a.roots
        assert weight_of_run(a, tree, run) != alg.zero
    assert all(alg.lt(x, y) for x, y in zip(weights, weights[1:])), weights
    return weights


def test_counter_is_not_finite():
    a = arctic_counter()
    r = decide_finite_image(a)
    assert (r.verdict, r.route) == (NO, "small-loop")
    assert isinstance(r.witness, LoopCertificate)
    assert assert_pumping_replays(a, r) == [0, 1, 2, 3]
    assert [evaluate(a, r.witness.family.member(n)[0]) for n in range(4)] == [0, 1, 2, 3]


def test_two_state_is_finite_with_crisp_witness():
    a = arctic_two_state()
    r = decide_finite_image(a)
    assert r.verdict == YES and isinstance(r.witness, CrispDetWta)
    assert r.witness.image() == {NEG_INF, 0, 1}
    assert r.to_json()["witness"]["image"] == ["0", "1", "-inf"]


def test_nat_doubling_has_unbounded_counts():
    r = decide_finite_image(nat_doubling())
    assert (r.verdict, r.route) == (NO, "unbounded-count")
    assert isinstance(r.witness, CountCertificate) and r.witness.weight == 1


def test_unknown_verdicts():
    assert decide_finite_image(tropical_two_state()).verdict == UNKNOWN
    assert decide_finite_image(tropical_two_state()).route == "non-monotonic"
    r = decide_finite_image(primed_constant())
    assert r.verdict == UNKNOWN and r.route == "ambiguous-not-past-finite"
    assert decide_image_at_most_k(primed_constant(), 1).route == "not-past-finite"


def test_no_useful_state_is_constant_zero():
    a = Wta(UNARY, Arctic(), ["p"], {((), "a", "p"): 0}, {})
    r = decide_finite_image(a)
    assert r.verdict == YES and r.witness.image() == {NEG_INF}
    assert decide_image_at_most_k(a, 1).verdict == YES


def test_periodic_weights_are_finite():
    r = decide_finite_image(multiples(TruncatedPlus(), 50))
    assert r.verdict == YES
    assert r.witness.image() == {0, 50, 100}


def test_image_at_most_k():
    a = arctic_two_state()
    yes = decide_image_at_most_k(a, 3)
    assert (yes.verdict, yes.route) == (YES, "crisp-determinization")
    # the classifiers finish before a third value is enumerated
    no = decide_image_at_most_k(a, 2)
    assert (no.verdict, no.route) == (NO, "crisp-determinization")
    assert len(no.witness.image()) == 3
    assert decide_image_at_most_k(arctic_counter(), 5).route == "small-loop"
    with pytest.raises(PreconditionError):
        decide_image_at_most_k(a, 0)


def test_image_at_most_k_runs_out_of_fuel():
    r = decide_image_at_most_k(arctic_two_state(), 3, fuel=3)
    assert (r.verdict, r.route) == (UNKNOWN, "fuel")


def test_cost_finite():
    r = cost_finite(nat_doubling())
    assert r.verdict == YES and r.to_json()["witness"] == {"cost": ["1"]}
    assert cost_finite(arctic_counter()).verdict == NO
    assert cost_finite(primed_constant()).verdict == NO
    assert cost_finite(tropical_two_state()).verdict == UNKNOWN


def constant_zero():
    return Wta(UNARY, Arctic(), ["q"], {((), "a", "q"): 0, (("q",), "g", "q"): 0, (("q",), "h", "q"): 0}, {"q": 0})


def test_step_properties():
    a = arctic_two_state()
    assert decide_step_properties(a, "constant").verdict == NO
    assert decide_step_properties(a, "one_step").verdict == NO
    assert decide_step_properties(a, "e_step", [NEG_INF, 0, 1]).verdict == YES
    assert decide_step_properties(a, "e_step", [NEG_INF, 0, 2]).verdict == NO
    c = constant_zero()
    assert decide_step_properties(c, "constant").verdict == YES
    assert decide_step_properties(c, "constant_eq", 0).verdict == YES
    assert decide_step_properties(c, "constant_eq", 1).verdict == NO
    assert decide_step_properties(c, "one_step").verdict == YES
    r = decide_step_properties(c, "one_step")
    assert r.question == "one-step"
    with pytest.raises(PreconditionError):
        decide_step_properties(c, "two_step")


def random_arctic(rng):
    alphabet = rng.choice([UNARY, MIXED])
    return random_wta(rng, "arctic", [0, 0, 1], rng.choice([1, 2, 3]), alphabet, density=0.6)


def test_random_arctic_reports_are_consistent():
    rng = random.Random(17)
    seen = {YES: 0, NO: 0}
    for _ in range(40):
        a = random_arctic(rng)
        r = decide_finite_image(a)
        assert r.verdict in (YES, NO)
        seen[r.verdict] += 1
        if r.verdict == YES:
            assert cost_finite(a).verdict == YES
            if r.witness is not None:
                for t in all_trees(a.alphabet, 2):
                    assert step_evaluate(r.witness, t) == brute_value(a, t)
                for t in all_trees(a.alphabet, 3):
                    assert step_evaluate(r.witness, t) == evaluate(a, t)
                k = len(r.witness.image())
                assert decide_image_at_most_k(a, k).verdict == YES
        else:
            assert_pumping_replays(a, r)
            assert decide_image_at_most_k(a, 3).verdict == NO
    assert seen[YES] >= 5 and seen[NO] >= 5


def test_unambiguous_loop_over_non_past_finite_algebra():
    sigma = RankedAlphabet([("gamma", 1), ("alpha", 0)])
    from wtakit.algebra import PrimedChain, Primed
    alg = PrimedChain()
    a = Wta(sigma, alg, ["p"], {((), "alpha", "p"): alg.one, (("p",), "gamma", "p"): Primed(1)}, {"p": alg.one})
    r = decide_finite_image(a)
    assert (r.verdict, r.route) == (NO, "unambiguous-small-loop")


def test_naturals_without_loops_are_finite():
    sigma = RankedAlphabet([("g", 1), ("e", 0)])
    a = Wta(sigma, Naturals(), ["p", "q"], {((), "e", "p"): 1, ((), "e", "q"): 1, (("p",), "g", "p"): 1,
                                            (("q",), "g", "q"): 1}, {"p": 1, "q": 1})
    r = decide_finite_image(a)
    assert r.verdict == YES
    assert {evaluate(a, monadic("g", n, "e")) for n in range(6)} == {2}


@pytest.mark.parametrize("name,text,finite", GRAMMARS, ids=[g[0] for g in GRAMMARS])
def test_cfg_corpus(name, text, finite):
    r = cfg_finite(text)
    assert r.verdict == (YES if finite else NO)
    g = parse_grammar(text)
    words = [len(w) for w in words_up_to(g, 8)]
    # an infinite language has words of every length beyond some point, finite ones stop short
    if finite:
        assert not words or max(words) < 8 or len(words_up_to(g, 12)) == len(words_up_to(g, 8))
    else:
        assert len(words_up_to(g, 12)) > len(words_up_to(g, 8))


def test_cfg_route_for_empty_language():
    r = cfg_finite("S -> S a")
    assert (r.verdict, r.route) == (YES, "empty-language")


def test_random_naturals_reports_replay():
    rng = random.Random(5)
    routes = set()
    for _ in range(40):
        a = random_wta(rng, "naturals", [1, 1, 2], rng.choice([2, 3]), UNARY, density=0.4)
        r = decide_finite_image(a)
        routes.add(r.route)
        if r.route == "small-loop":
            assert_pumping_replays(a, r)
        elif r.route == "unbounded-count":
            # the number of b-weighted runs grows, so values keep growing along the tree sizes seen
            values = {evaluate(a, t) for t in all_trees(a.alphabet, 6)}
            assert len(values) > len({evaluate(a, t) for t in all_trees(a.alphabet, 3)})
        else:
            assert r.verdict == YES
            for t in all_trees(a.alphabet, 4):
                assert step_evaluate(r.witness, t) == evaluate(a, t)
    assert {"small-loop", "unbounded-count", "finitely-ambiguous"} <= routes
