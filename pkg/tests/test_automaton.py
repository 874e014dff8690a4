from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import all_trees, brute_value, random_wta

from wtakit.algebra import NEG_INF, Arctic, FiniteLanguages, Matrices, Naturals, PrimedChain, Primed, quotient
from wtakit.automaton import (Run, Wsa, Wta, boolean_projection, combine_runs, evaluate, from_cfg, from_wsa,
                              map_weights, rule_symbol_names, run_power, runs, runs_on_context, split_weight,
                              weight_of_run)
from wtakit.errors import InvalidRun, WtaError
from wtakit.fixtures import ALL, arctic_counter, arctic_two_state, multiples, nat_doubling, primed_constant
from wtakit.grammar import parse_grammar
from wtakit.trees import RankedAlphabet, Tree, monadic, parse_term

MIXED = RankedAlphabet([("f", 2), ("g", 1), ("a", 0), ("b", 0)])
FL = FiniteLanguages("xyz")
RANDOM_CASES = [
    ("naturals", [0, 1, 2, 3]),
    ("arctic", [NEG_INF, 0, 1, 2]),
    ("mat_2", [((0, 0), (0, 0)), ((1, 0), (0, 1)), ((1, 1), (1, 1)), ((1, 2), (1, 1))]),
    ({"kind": "flang", "params": {"alphabet": ["x", "y"]}},
     [frozenset(), frozenset({""}), frozenset({"x"}), frozenset({"y", "xy"})]),
    ("lcm", [0, 1, 2, 3]),
]


def test_arctic_counter_values():
    a = arctic_counter()
    assert [evaluate(a, monadic("gamma", n, "alpha")) for n in range(11)] == list(range(11))


def test_nat_doubling_values():
    a = nat_doubling()
    assert [evaluate(a, monadic("gamma", 2 * n, "e")) for n in range(9)] == [2 ** n for n in range(9)]
    assert [evaluate(a, monadic("gamma", 2 * n + 1, "e")) for n in range(5)] == [0] * 5


def test_primed_constant_values():
    a = primed_constant()
    assert {evaluate(a, monadic("gamma", n, "e")) for n in range(11)} == {Primed(1)}


def test_arctic_two_state_values():
    a = arctic_two_state()
    assert evaluate(a, parse_term("nu(gamma(alpha))")) == 1
    assert evaluate(a, parse_term("gamma(nu(alpha))")) == NEG_INF
    assert evaluate(a, parse_term("gamma(gamma(alpha))")) == 0


def test_run_weight_is_ordered_left_to_right():
    sigma = RankedAlphabet([("s", 2), ("a", 0), ("b", 0)])
    a = Wta(sigma, FL, ["p", "q", "r"],
            {((), "a", "p"): frozenset({"x"}), ((), "b", "q"): frozenset({"y"}),
             (("p", "q"), "s", "r"): frozenset({"z"})}, {"r": FL.one})
    t = parse_term("s(a,b)")
    [run] = runs(a, t)
    assert weight_of_run(a, t, run) == frozenset({"xyz"})
    assert evaluate(a, t) == frozenset({"xyz"})


def test_hole_weight_and_invalid_runs():
    a = arctic_counter()
    assert weight_of_run(a, Tree("[]"), Run("q")) == 0
    with pytest.raises(InvalidRun):
        weight_of_run(a, parse_term("gamma(alpha)"), Run("q"))


@pytest.mark.parametrize("name", sorted(ALL))
def test_fixture_evaluation_matches_brute_force(name):
    a = ALL[name]()
    for t in all_trees(a.alphabet, 5):
        assert evaluate(a, t) == brute_value(a, t), str(t)


@pytest.mark.parametrize("algebra,weights", RANDOM_CASES, ids=lambda x: str(x)[:12])
def test_random_evaluation_matches_brute_force(algebra, weights):
    rng = random.Random(7)
    for _ in range(4):
        a = random_wta(rng, algebra, weights, 2, MIXED)
        for t in all_trees(MIXED, 2):
            assert evaluate(a, t) == brute_value(a, t), str(t)


def test_runs_and_context_runs():
    a = nat_doubling()
    t = monadic("gamma", 4, "e")
    assert len(runs(a, t)) == 4  # q or r at heights 1 and 3
    c = parse_term("gamma(gamma([]))")
    assert len(runs_on_context(a, "p", c, "p")) == 2


def test_split_weight_and_power_on_noncommutative_algebra():
    sigma = RankedAlphabet([("s", 2), ("a", 0)])
    a = Wta(sigma, FL, ["q"], {((), "a", "q"): frozenset({"x"}), (("q", "q"), "s", "q"): frozenset({"z"})},
            {"q": FL.one})
    c = parse_term("s(a,[])")
    [rho] = runs_on_context(a, "q", c, "q")
    sw = split_weight(a, c, rho)
    assert (sw.left, sw.right) == (frozenset({"x"}), frozenset({"z"}))
    ctx, run = run_power(c, rho, 3)
    full = combine_runs(ctx, run, Run("q"))
    t = parse_term("s(a,s(a,s(a,a)))")
    assert weight_of_run(a, t, combine_runs(ctx, run, runs(a, Tree("a"))[0])) == frozenset({"xxxxzzz"})
    assert full.state == "q"


def test_map_weights_is_checked():
    a = nat_doubling()
    q, h = quotient(Naturals(), "modulo", 3)
    b = map_weights(a, h)
    assert [evaluate(b, monadic("gamma", 2 * n, "e")) for n in range(6)] == [2 ** n % 3 for n in range(6)]
    _, ha = quotient(Arctic(), "past_cut", 1)
    with pytest.raises(WtaError):
        map_weights(a, ha)


def test_boolean_projection_keeps_support():
    b = boolean_projection(arctic_two_state())
    assert evaluate(b, parse_term("gamma(nu(alpha))")) == 0
    assert evaluate(b, parse_term("nu(alpha)")) == 1


def test_wta_validation():
    sigma = RankedAlphabet([("g", 1), ("a", 0)])
    with pytest.raises(WtaError):
        Wta(sigma, "naturals", ["p"], {(("p",), "a", "p"): 1})
    with pytest.raises(WtaError):
        Wta(sigma, "naturals", ["p"], {((), "z", "p"): 1})
    with pytest.raises(WtaError):
        Wta(sigma, "naturals", ["p"], {((), "a", "r"): 1})
    with pytest.raises(WtaError):
        Wta(sigma, "naturals", ["p", "p"])
    a = Wta(sigma, "naturals", ["p"], {((), "a", "p"): 0}, {"p": 0})
    assert a.transitions == {} and a.roots == {}


def test_multiples_fixture():
    a = multiples(Naturals(), 3)
    assert [evaluate(a, monadic("gamma", n, "alpha")) for n in range(5)] == [0, 3, 6, 9, 12]


@settings(max_examples=50, deadline=None)
@given(word=st.lists(st.sampled_from("xy"), max_size=6), seed=st.integers(0, 10 ** 6))
def test_string_encoding_preserves_values(word, seed):
    rng = random.Random(seed)
    fl = FiniteLanguages("uv")
    pool = [fl.zero, fl.one, frozenset({"u"}), frozenset({"v", "uv"})]
    states = ("s", "t")
    wsa = Wsa(fl, ("x", "y"), states,
              {q: rng.choice(pool) for q in states},
              {(p, x, q): rng.choice(pool) for p in states for x in "xy" for q in states},
              {q: rng.choice(pool) for q in states})
    wta, encode = from_wsa(wsa)
    assert evaluate(wta, encode(word)) == wsa.evaluate(word)


def test_string_encoding_order():
    wsa = Wsa(Naturals(), ("e",), ("s",), {"s": 1}, {("s", "e", "s"): 2}, {"s": 1})
    wta, encode = from_wsa(wsa)
    assert "e_" in wta.alphabet
    assert str(encode(["e", "e"])) == "e(e(e_))"


def test_from_cfg_measures_word_length():
    g = parse_grammar("S -> a S b | c")
    a = from_cfg(g)
    names = rule_symbol_names(g)
    assert names == {"r0": ("S", ("a", "S", "b")), "r1": ("S", ("c",))}
    assert evaluate(a, parse_term("r0(r0(r1))")) == 5
    with pytest.raises(WtaError):
        from_cfg(parse_grammar("S -> S"))


def test_primed_values_are_not_compared_by_magnitude():
    p = PrimedChain()
    assert p.add(100, Primed(1)) == Primed(1)
    assert Matrices(1).mul(((2,),), ((3,),)) == ((6,),)
