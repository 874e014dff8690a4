"""Run counting over the naturals: counting automata, finite-semiring
determinization, preimages of natural-valued automata, and their finite-image test."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Iterable, NamedTuple

from .algebra import Naturals, quotient
from .automaton import Wta, boolean_projection, map_weights
from .errors import NotApplicable, PreconditionError, WtaError
from .fta import Dfta, combine, explore, finitely_ambiguous, universal
from .structure import has_useful_state, small_loop_analysis, trim


@dataclass(frozen=True)
class CountingWta:
    """A naturals-valued automaton counting the runs of ``source`` whose complete weight is ``target``."""

    wta: Wta
    source: Wta
    target: Any


def build_counting_wta(a: Wta, weights: Iterable, b) -> CountingWta:
    """States pair a state of ``a`` with the run weight reached so far.

    ``weights`` must contain every run weight of ``a`` (for instance H(A)
    from ``compute_hc``); the result assigns each tree the number of runs
    whose weight times the root weight equals ``b``.  Only runs through
    nonzero transitions are counted, which is exact for every nonzero ``b``.
    """
    alg = a.algebra
    universe = frozenset(weights)
    reached: dict = {q: set() for q in a.states}
    transitions: dict = {}
    changed = True
    while changed:
        changed = False
        for (children, symbol, q), d in a.transitions.items():
            pools = [sorted(reached[c], key=alg.sort_key) for c in children]
            for ys in itertools.product(*pools):
                y = alg.mul(alg.product(ys), d)
                if y not in universe:
                    raise PreconditionError(f"run weight {alg.format(y)} is missing from the tracked weight set")
                key = (tuple(zip(children, ys)), symbol, (q, y))
                if key not in transitions:
                    transitions[key] = 1
                    if y not in reached[q]:
                        reached[q].add(y)
                    changed = True
    states = [(q, y) for q in a.states for y in alg.sorted(reached[q])]
    roots = {(q, y): 1 for q, y in states if alg.mul(y, a.root(q)) == b}
    return CountingWta(Wta(a.alphabet, Naturals(), states, transitions, roots), a, b)


def vector_determinize(a: Wta) -> Dfta:
    """Determinize over a finite semiring by tracking the vector of per-state sums.

    The output of a vector v is ⊕_q v[q] ⊗ root(q); distributivity makes this
    equal to the run semantics.
    """
    alg = a.algebra
    if not alg.finite or not alg.flags.semiring:
        raise NotApplicable(f"vector determinization needs a finite semiring, got {alg!r}")
    pos = {q: i for i, q in enumerate(a.states)}
    zero = alg.zero

    def step(symbol, kids):
        vec = [zero] * len(a.states)
        for children, q, d in a.by_symbol.get(symbol, ()):
            w = alg.one
            for k, c in zip(kids, children):
                w = alg.mul(w, k[pos[c]])
                if w == zero:
                    break
            if w != zero:
                vec[pos[q]] = alg.add(vec[pos[q]], alg.mul(w, d))
        return tuple(vec)

    keys, delta = explore(a.alphabet, step)
    outputs = {i: alg.sum(alg.mul(v[pos[q]], a.root(q)) for q in a.states) for i, v in enumerate(keys)}
    return Dfta(a.alphabet, keys, delta, [i for i, o in outputs.items() if o != zero], outputs, alg)


def exact(n: int) -> tuple:
    return ("exact", n)


def residue(m: int, n: int) -> tuple:
    return ("residue", m, n)


def nat_preimage(a: Wta, target: tuple) -> Dfta:
    """Trees whose value is exactly n (``exact(n)``) or lies in m + nℕ (``residue(m, n)``)."""
    if not isinstance(a.algebra, Naturals):
        raise WtaError(f"nat_preimage needs a naturals-valued automaton, got {a.algebra!r}")
    if target[0] == "exact":
        n = target[1]
        _, h = quotient(a.algebra, "threshold", n)
        d = vector_determinize(map_weights(a, h))
        return d.with_finals([i for i, o in d.outputs.items() if o == n])
    if target[0] != "residue":
        raise WtaError(f"unknown preimage target {target!r}")
    m, n = target[1], target[2]
    if n < 1 or m < 0:
        raise WtaError(f"residue needs n >= 1 and m >= 0, got {target!r}")
    base_m, k = m % n, m // n
    if n == 1:
        base = universal(a.alphabet)
    else:
        _, h = quotient(a.algebra, "modulo", n)
        d = vector_determinize(map_weights(a, h))
        base = d.with_finals([i for i, o in d.outputs.items() if o == base_m])
    for j in range(k):
        base = combine(base, nat_preimage(a, exact(base_m + n * j)), "difference")
    return base


class FiniteImageAnswer(NamedTuple):
    finite: bool
    witness: Any = None


def nat_finite_image(a: Wta) -> FiniteImageAnswer:
    """Decide whether a naturals-valued automaton takes finitely many values.

    It does iff every small loop has weight 1 and the automaton is finitely
    ambiguous (after trimming).
    """
    if not isinstance(a.algebra, Naturals):
        raise WtaError(f"nat_finite_image needs a naturals-valued automaton, got {a.algebra!r}")
    if not has_useful_state(a):
        return FiniteImageAnswer(True)
    t = trim(a)
    loop = small_loop_analysis(t)
    if loop is not None:
        return FiniteImageAnswer(False, loop)
    verdict = finitely_ambiguous(boolean_projection(t))
    return FiniteImageAnswer(verdict.finitely_ambiguous, verdict.witness)
