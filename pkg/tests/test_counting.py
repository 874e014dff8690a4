from __future__ import annotations

import random

import pytest
from oracles import all_trees, brute_count, brute_value, random_wta

from wtakit.algebra import Naturals, quotient
from wtakit.automaton import Wta, evaluate, map_weights
from wtakit.counting import build_counting_wta, exact, nat_finite_image, nat_preimage, residue, vector_determinize
from wtakit.errors import NotApplicable, PreconditionError, WtaError
from wtakit.fixtures import arctic_counter, arctic_two_state, multiples, nat_doubling
from wtakit.structure import compute_hc
from wtakit.trees import RankedAlphabet, monadic

SIGMA = RankedAlphabet([("f", 2), ("g", 1), ("a", 0)])


@pytest.mark.parametrize("make", [arctic_two_state, nat_doubling], ids=["arctic2", "nat"])
def test_counting_wta_counts_runs(make):
    a = make()
    hc = compute_hc(a)
    # zero-weight labellings are not runs here, so b = zero would differ and never matters
    for b in sorted(hc.complete - {a.algebra.zero}, key=a.algebra.sort_key):
        counting = build_counting_wta(a, hc.weights, b).wta
        for t in all_trees(a.alphabet, 4):
            assert evaluate(counting, t) == brute_count(a, t, b), (b, str(t))


def test_counting_wta_frozen_values():
    a = arctic_two_state()
    hc = compute_hc(a)
    trees = all_trees(a.alphabet, 2)
    zero = build_counting_wta(a, hc.weights, 0).wta
    one = build_counting_wta(a, hc.weights, 1).wta
    assert [evaluate(zero, t) for t in trees] == [1, 1, 0, 1, 0, 0, 0]
    assert [evaluate(one, t) for t in trees] == [0, 0, 1, 0, 0, 1, 0]


def test_counting_wta_rejects_incomplete_weights():
    with pytest.raises(PreconditionError):
        build_counting_wta(arctic_counter(), {0, 1}, 1)


def test_vector_determinization_matches_evaluation():
    rng = random.Random(4)
    for n in (3, 4):
        q, h = quotient(Naturals(), "modulo", n)
        for _ in range(3):
            a = map_weights(random_wta(rng, "naturals", [0, 1, 2, 3], 2, SIGMA), h)
            d = vector_determinize(a)
            for t in all_trees(SIGMA, 3):
                assert d.output(t) == evaluate(a, t) == brute_value(a, t)


def test_vector_determinization_needs_finite_semiring():
    with pytest.raises(NotApplicable):
        vector_determinize(nat_doubling())


@pytest.mark.parametrize("target", [exact(0), exact(1), exact(2), exact(4), residue(0, 2), residue(1, 3),
                                    residue(5, 3), residue(3, 1)])
def test_nat_preimage_membership(target):
    a = nat_doubling()
    d = nat_preimage(a, target)
    for t in all_trees(a.alphabet, 8):
        v = evaluate(a, t)
        if target[0] == "exact":
            expected = v == target[1]
        else:
            m, n = target[1], target[2]
            expected = v >= m and (v - m) % n == 0
        assert d.accepts(t) == expected, (target, str(t))


def test_nat_preimage_on_random_automata():
    rng = random.Random(9)
    for _ in range(3):
        a = random_wta(rng, "naturals", [1, 2], 2, SIGMA, density=0.4)
        for target in (exact(0), exact(2), residue(1, 2)):
            d = nat_preimage(a, target)
            for t in all_trees(SIGMA, 2):
                v = brute_value(a, t)
                want = v == target[1] if target[0] == "exact" else v >= target[1] and (v - target[1]) % 2 == 0
                assert d.accepts(t) == want


def test_nat_preimage_errors():
    with pytest.raises(WtaError):
        nat_preimage(arctic_counter(), exact(1))
    with pytest.raises(WtaError):
        nat_preimage(nat_doubling(), residue(0, 0))
    with pytest.raises(WtaError):
        nat_preimage(nat_doubling(), ("between", 1, 2))


def test_exact_four_is_a_single_tree():
    d = nat_preimage(nat_doubling(), exact(4))
    assert [n for n in range(16) if d.accepts(monadic("gamma", n, "e"))] == [4]


def test_nat_finite_image():
    assert nat_finite_image(nat_doubling()).finite is False
    assert nat_finite_image(multiples(Naturals(), 2)).finite is False
    sigma = RankedAlphabet([("g", 1), ("e", 0)])
    a = Wta(sigma, Naturals(), ["p", "q"], {((), "e", "p"): 1, ((), "e", "q"): 1, (("p",), "g", "p"): 1,
                                            (("q",), "g", "q"): 1}, {"p": 1, "q": 1})
    assert nat_finite_image(a).finite is True
    assert nat_finite_image(Wta(sigma, Naturals(), ["p"], {((), "e", "p"): 1}, {})).finite is True
    loud = Wta(sigma, Naturals(), ["p"], {((), "e", "p"): 1, (("p",), "g", "p"): 2}, {"p": 1})
    answer = nat_finite_image(loud)
    assert answer.finite is False and answer.witness.weight == 2
