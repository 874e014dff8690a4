"""Small automata used in the documentation, the tests and the CLI examples."""
from __future__ import annotations

from .algebra import ONE, Arctic, Naturals, Primed, PrimedChain, Tropical, WeightAlgebra
from .automaton import Wta
from .trees import RankedAlphabet


def arctic_counter() -> Wta:
    """One state; the value of gamma^n(alpha) is n."""
    sigma = RankedAlphabet([("gamma", 1), ("alpha", 0)])
    return Wta(sigma, Arctic(), ["q"],
               {((), "alpha", "q"): 0, (("q",), "gamma", "q"): 1}, {"q": 0})


def _two_state(algebra: WeightAlgebra) -> Wta:
    sigma = RankedAlphabet([("gamma", 1), ("nu", 1), ("alpha", 0)])
    return Wta(sigma, algebra, ["q1", "q2"],
               {((), "alpha", "q1"): 0, (("q1",), "gamma", "q1"): 0, (("q1",), "nu", "q2"): 1},
               {"q1": 0, "q2": 0})


def arctic_two_state() -> Wta:
    """Values 0 on nu-free trees, 1 under a single top nu, -inf otherwise."""
    return _two_state(Arctic())


def tropical_two_state() -> Wta:
    return _two_state(Tropical())


def nat_doubling() -> Wta:
    """Over the naturals: gamma^(2n)(e) has value 2^n, odd heights have value 0."""
    sigma = RankedAlphabet([("gamma", 1), ("e", 0)])
    t = {((), "e", "p"): 1}
    for a, b in [("p", "q"), ("q", "p"), ("p", "r"), ("r", "p")]:
        t[((a,), "gamma", b)] = 1
    return Wta(sigma, Naturals(), ["p", "q", "r"], t, {"p": 1, "q": 0, "r": 0})


def primed_constant() -> Wta:
    """Over the primed chain: every tree has value 1', yet run weights grow without bound."""
    sigma = RankedAlphabet([("gamma", 1), ("e", 0)])
    return Wta(sigma, PrimedChain(), ["p", "q"],
               {((), "e", "p"): ONE, ((), "e", "q"): Primed(1),
                (("p",), "gamma", "p"): 1, (("q",), "gamma", "q"): ONE},
               {"p": ONE, "q": ONE})


def multiples(algebra: WeightAlgebra, b) -> Wta:
    """gamma^n(alpha) has value n·b: one run per position where b is picked up."""
    sigma = RankedAlphabet([("gamma", 1), ("alpha", 0)])
    one = algebra.one
    return Wta(sigma, algebra, ["p", "q"],
               {((), "alpha", "p"): one, (("p",), "gamma", "p"): one,
                (("p",), "gamma", "q"): b, (("q",), "gamma", "q"): one},
               {"q": one})


ALL = {
    "arctic_counter": arctic_counter,
    "arctic_two_state": arctic_two_state,
    "tropical_two_state": tropical_two_state,
    "nat_doubling": nat_doubling,
    "primed_constant": primed_constant,
}
