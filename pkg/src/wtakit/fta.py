"""Finite tree automata: determinization, Boolean operations, decisions, ambiguity."""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterable

from .algebra import WeightAlgebra
from .automaton import Wta
from .errors import PreconditionError, WtaError
from .structure import has_useful_state, useful_states
from .trees import BOX, RankedAlphabet, Tree, check_tree


class Dfta:
    """A complete bottom-up deterministic tree automaton on states 0..n-1.

    With ``outputs`` (and ``algebra``) it is a crisp-deterministic weighted
    automaton: the value of a tree is the output of the state it reaches.
    """

    def __init__(self, alphabet: RankedAlphabet, labels: list, delta: dict, finals: Iterable[int],
                 outputs: dict | None = None, algebra: WeightAlgebra | None = None):
        self.alphabet = alphabet
        self.labels = list(labels)
        self.delta = delta  # (symbol, child states) -> state
        self.finals = frozenset(finals)
        self.outputs = outputs
        self.algebra = algebra

    @property
    def states(self) -> range:
        return range(len(self.labels))

    def run(self, tree: Tree) -> int:
        kids = tuple(self.run(c) for c in tree.children)
        try:
            return self.delta[(tree.symbol, kids)]
        except KeyError:
            raise WtaError(f"no transition for {tree.symbol!r} on {kids}") from None

    def accepts(self, tree: Tree) -> bool:
        check_tree(tree, self.alphabet)
        return self.run(tree) in self.finals

    def output(self, tree: Tree):
        if self.outputs is None:
            raise WtaError("this automaton has no output map")
        check_tree(tree, self.alphabet)
        return self.outputs[self.run(tree)]

    def image(self) -> set:
        return set(self.outputs.values()) if self.outputs is not None else set()

    def with_finals(self, finals: Iterable[int]) -> "Dfta":
        return Dfta(self.alphabet, self.labels, self.delta, finals)

    def __repr__(self):
        kind = "outputs" if self.outputs is not None else f"{len(self.finals)} final"
        return f"Dfta({len(self.labels)} states, {kind})"


def explore(alphabet: RankedAlphabet, step: Callable[[str, tuple], Hashable]) -> tuple[list, dict]:
    """Saturate a bottom-up deterministic construction.

    ``step(symbol, child_keys)`` gives the key of the target state.  Returns
    the reachable keys (in discovery order) and the transition table over
    their indices.
    """
    keys: list = []
    index: dict = {}
    delta: dict = {}

    def intern(key) -> int:
        if key not in index:
            index[key] = len(keys)
            keys.append(key)
        return index[key]

    for symbol in alphabet.of_rank(0):
        delta[(symbol, ())] = intern(step(symbol, ()))
    done = 0
    positive = [(s, r) for s, r in alphabet if r > 0]
    while done < len(keys):
        n = len(keys)
        for symbol, rank in positive:
            for kids in itertools.product(range(n), repeat=rank):
                if max(kids) < done:
                    continue
                delta[(symbol, kids)] = intern(step(symbol, tuple(keys[i] for i in kids)))
        done = n
    return keys, delta


def determinize(a: Wta) -> Dfta:
    """Subset construction on the support of a (weighted or Boolean) automaton."""
    def step(symbol, kids):
        return frozenset(q for children, q, _ in a.by_symbol.get(symbol, ())
                         if all(c in s for c, s in zip(children, kids)))

    keys, delta = explore(a.alphabet, step)
    finals = [i for i, s in enumerate(keys) if any(q in a.roots for q in s)]
    return Dfta(a.alphabet, [tuple(q for q in a.states if q in s) for s in keys], delta, finals)


def product(dftas: list[Dfta], accept: Callable[[tuple], bool] | None = None,
            output: Callable[[tuple], Any] | None = None, algebra: WeightAlgebra | None = None) -> Dfta:
    """Synchronous product over reachable state tuples.

    ``accept`` and ``output`` receive the tuple of component states.
    """
    alphabet = dftas[0].alphabet
    for d in dftas[1:]:
        if d.alphabet != alphabet:
            raise WtaError(f"alphabet mismatch: {alphabet} vs {d.alphabet}")

    def step(symbol, kids):
        return tuple(d.delta[(symbol, tuple(k[j] for k in kids))] for j, d in enumerate(dftas))

    keys, delta = explore(alphabet, step)
    finals = [i for i, k in enumerate(keys) if accept and accept(k)]
    outputs = {i: output(k) for i, k in enumerate(keys)} if output else None
    return Dfta(alphabet, keys, delta, finals, outputs, algebra)


def combine(a: Dfta, b: Dfta, mode: str) -> Dfta:
    preds = {
        "intersect": lambda x, y: x and y,
        "union": lambda x, y: x or y,
        "difference": lambda x, y: x and not y,
    }
    if mode not in preds:
        raise WtaError(f"unknown combine mode {mode!r}")
    pred = preds[mode]
    return product([a, b], accept=lambda k: pred(k[0] in a.finals, k[1] in b.finals))


def complement(a: Dfta) -> Dfta:
    return Dfta(a.alphabet, a.labels, a.delta, [i for i in a.states if i not in a.finals])


def universal(alphabet: RankedAlphabet) -> Dfta:
    delta = {(s, (0,) * r): 0 for s, r in alphabet}
    return Dfta(alphabet, ["all"], delta, [0])


def empty_language(alphabet: RankedAlphabet) -> Dfta:
    return complement(universal(alphabet))


def is_empty(a: Dfta | Wta) -> bool:
    if isinstance(a, Wta):
        return not has_useful_state(a)
    return not a.finals  # every Dfta state is reachable by construction


def is_universal(a: Dfta) -> bool:
    return is_empty(complement(a))


def equivalent(a: Dfta, b: Dfta) -> bool:
    return is_empty(combine(a, b, "difference")) and is_empty(combine(b, a, "difference"))


def decide(a: Dfta | Wta, mode: str, arg=None) -> bool:
    """mode is "empty", "universal", "member" (arg: tree) or "equivalent" (arg: automaton)."""
    if mode == "empty":
        return is_empty(a)
    d = determinize(a) if isinstance(a, Wta) else a
    if mode == "universal":
        return is_universal(d)
    if mode == "member":
        return d.accepts(arg)
    if mode == "equivalent":
        return equivalent(d, determinize(arg) if isinstance(arg, Wta) else arg)
    raise WtaError(f"unknown decision mode {mode!r}")


def count_accepting_runs(a: Wta, tree: Tree) -> int:
    """Number of runs on ``tree`` ending in a state with nonzero root weight."""
    check_tree(tree, a.alphabet)

    def counts(t: Tree) -> dict:
        kids = [counts(c) for c in t.children]
        out: dict = defaultdict(int)
        for children, q, _ in a.by_symbol.get(t.symbol, ()):
            n = 1
            for k, c in zip(kids, children):
                n *= k.get(c, 0)
                if not n:
                    break
            if n:
                out[q] += n
        return out

    return sum(n for q, n in counts(tree).items() if q in a.roots)


# ambiguity

@dataclass(frozen=True)
class AmbiguityWitness:
    """Either two distinct loops at ``p`` on ``context`` ("two-loops"), or runs
    p->p, p->q and q->q on ``context`` ("three-runs"); root state first, hole state second."""

    kind: str
    p: str
    q: str | None
    context: Tree


@dataclass(frozen=True)
class AmbiguityVerdict:
    finitely_ambiguous: bool
    witness: AmbiguityWitness | None = None


def _tuple_trees(a: Wta, m: int) -> dict:
    """Trees carrying m simultaneous runs: key (states, differ) -> witness tree."""
    found: dict = {}
    by_symbol = a.by_symbol
    changed = True
    while changed:
        changed = False
        by_states = defaultdict(list)
        for (states, differ), t in found.items():
            by_states[states].append((differ, t))
        for symbol, rank in a.alphabet:
            trans = by_symbol.get(symbol, ())
            for combo in itertools.product(trans, repeat=m):
                roots = tuple(q for _, q, _ in combo)
                top_differ = len(set(roots)) > 1
                options = []
                for i in range(rank):
                    col = tuple(children[i] for children, _, _ in combo)
                    if col not in by_states:
                        break
                    options.append(by_states[col])
                else:
                    for picks in itertools.product(*options) if rank else [()]:
                        differ = top_differ or any(d for d, _ in picks)
                        key = (roots, differ)
                        if key not in found:
                            found[key] = Tree(symbol, tuple(t for _, t in picks))
                            changed = True
    return found


def _tuple_contexts(a: Wta, m: int, holes: Iterable[tuple], trees: dict) -> dict:
    """Contexts carrying m simultaneous runs with the given hole-state tuples:
    key (root states, hole states, differ) -> witness context."""
    found: dict = {(h, h, len(set(h)) > 1): BOX for h in holes}
    tree_by_states = defaultdict(list)
    for (states, differ), t in trees.items():
        tree_by_states[states].append((differ, t))
    changed = True
    while changed:
        changed = False
        by_root = defaultdict(list)
        for (root, hole, differ), c in found.items():
            by_root[root].append((hole, differ, c))
        for symbol, rank in a.alphabet:
            if rank == 0:
                continue
            trans = a.by_symbol.get(symbol, ())
            for combo in itertools.product(trans, repeat=m):
                roots = tuple(q for _, q, _ in combo)
                top_differ = len(set(roots)) > 1
                cols = [tuple(children[i] for children, _, _ in combo) for i in range(rank)]
                for i in range(rank):
                    if cols[i] not in by_root:
                        continue
                    sides = [tree_by_states.get(cols[j]) for j in range(rank) if j != i]
                    if not all(sides):
                        continue
                    for hole, cdiff, c in by_root[cols[i]]:
                        # one witness with the fewest differing parts, one with the most
                        for prefer in (False, True):
                            picks = [next((x for x in s if x[0] == prefer), s[0]) for s in sides]
                            differ = top_differ or cdiff or any(d for d, _ in picks)
                            key = (roots, hole, differ)
                            if key in found:
                                continue
                            it = iter(picks)
                            kids = tuple(c if j == i else next(it)[1] for j in range(rank))
                            found[key] = Tree(symbol, kids)
                            changed = True
    return found


def finitely_ambiguous(a: Wta) -> AmbiguityVerdict:
    """Decide whether the number of accepting runs per tree is bounded.

    Infinite ambiguity is witnessed by a context c and either a state p with
    two distinct loops p->p on c, or states p != q with runs p->p, p->q and
    q->q on c (root state first).  Requires a trim automaton.
    """
    if len(useful_states(a)) != len(a.states):
        raise PreconditionError("ambiguity analysis requires a trim automaton")
    pair_trees = _tuple_trees(a, 2)
    pairs = _tuple_contexts(a, 2, [(p, p) for p in a.states], pair_trees)
    for p in a.states:
        c = pairs.get(((p, p), (p, p), True))
        if c is not None:
            return AmbiguityVerdict(False, AmbiguityWitness("two-loops", p, None, c))
    triple_trees = _tuple_trees(a, 3)
    holes = [(p, q, q) for p in a.states for q in a.states if p != q]
    triples = _tuple_contexts(a, 3, holes, triple_trees)
    for p in a.states:
        for q in a.states:
            if p == q:
                continue
            for differ in (False, True):
                c = triples.get(((p, p, q), (p, q, q), differ))
                if c is not None:
                    return AmbiguityVerdict(False, AmbiguityWitness("three-runs", p, q, c))
    return AmbiguityVerdict(True)


def ambiguous_tree(a: Wta) -> Tree | None:
    """A tree with two distinct runs ending in nonzero-root states, if one exists."""
    if not a.roots:
        return None
    for (states, differ), t in _tuple_trees(a, 2).items():
        if differ and states[0] in a.roots and states[1] in a.roots:
            return t
    return None


def is_unambiguous(a: Wta) -> bool:
    if a.is_deterministic():
        return True
    return ambiguous_tree(a) is None
