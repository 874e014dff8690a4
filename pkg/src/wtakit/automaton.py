"""Weighted tree automata, runs and the run semantics."""
from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Mapping

from .algebra import Arctic, Boolean, Homomorphism, WeightAlgebra, make_algebra
from .errors import InvalidRun, WtaError
from .grammar import Grammar, reduce_grammar
from .trees import HOLE, RankedAlphabet, Tree, check_tree, substitute


class Wta:
    """A weighted tree automaton over a ranked alphabet and a weight algebra.

    ``transitions`` maps ``(children_states, symbol, state)`` to a weight and
    ``roots`` maps states to root weights; absent entries are zero.
    """

    def __init__(self, alphabet: RankedAlphabet | Iterable, algebra: WeightAlgebra | str,
                 states: Iterable[str], transitions: Mapping | Iterable = (), roots: Mapping | Iterable = ()):
        self.alphabet = alphabet if isinstance(alphabet, RankedAlphabet) else RankedAlphabet(alphabet)
        self.algebra = make_algebra(algebra)
        self.states = tuple(states)
        if len(set(self.states)) != len(self.states):
            raise WtaError("duplicate state names")
        known = set(self.states)
        zero = self.algebra.zero
        items = transitions.items() if isinstance(transitions, Mapping) else transitions
        self.transitions: dict[tuple, Any] = {}
        for (children, symbol, state), weight in items:
            children = tuple(children)
            if symbol not in self.alphabet:
                raise WtaError(f"transition uses unknown symbol {symbol!r}")
            if self.alphabet.rank[symbol] != len(children):
                raise WtaError(f"transition {children}->{symbol}->{state}: rank of {symbol!r} is "
                               f"{self.alphabet.rank[symbol]}")
            for q in children + (state,):
                if q not in known:
                    raise WtaError(f"transition uses unknown state {q!r}")
            if weight != zero:
                self.transitions[(children, symbol, state)] = weight
        root_items = roots.items() if isinstance(roots, Mapping) else roots
        self.roots: dict[str, Any] = {}
        for q, weight in root_items:
            if q not in known:
                raise WtaError(f"root weight for unknown state {q!r}")
            if weight != zero:
                self.roots[q] = weight
        self.by_symbol: dict[str, list] = defaultdict(list)
        self.by_lhs: dict[tuple, list] = defaultdict(list)
        for (children, symbol, state), weight in self.transitions.items():
            self.by_symbol[symbol].append((children, state, weight))
            self.by_lhs[(symbol, children)].append((state, weight))

    def delta(self, children: tuple, symbol: str, state: str):
        return self.transitions.get((tuple(children), symbol, state), self.algebra.zero)

    def root(self, state: str):
        return self.roots.get(state, self.algebra.zero)

    def __call__(self, tree: Tree):
        return evaluate(self, tree)

    def restrict(self, keep: Iterable[str]) -> "Wta":
        keep = [q for q in self.states if q in set(keep)]
        ks = set(keep)
        return Wta(self.alphabet, self.algebra, keep,
                   {k: w for k, w in self.transitions.items() if k[2] in ks and set(k[0]) <= ks},
                   {q: w for q, w in self.roots.items() if q in ks})

    def is_deterministic(self) -> bool:
        return all(len(v) <= 1 for v in self.by_lhs.values())

    def __repr__(self):
        return (f"Wta({self.algebra!r}, states={list(self.states)}, "
                f"{len(self.transitions)} transitions, roots={ {q: self.algebra.format(w) for q, w in self.roots.items()} })")


@dataclass(frozen=True)
class Run:
    """A run shaped like the tree it labels; the hole of a context gets a childless node."""

    state: str
    children: tuple = ()

    def at(self, pos) -> "Run":
        node = self
        for i in pos:
            node = node.children[i - 1]
        return node

    def replace(self, pos, new: "Run") -> "Run":
        if not pos:
            return new
        kids = list(self.children)
        kids[pos[0] - 1] = kids[pos[0] - 1].replace(pos[1:], new)
        return Run(self.state, tuple(kids))

    def labels(self) -> dict:
        out = {(): self.state}
        for i, c in enumerate(self.children, 1):
            for p, q in c.labels().items():
                out[(i,) + p] = q
        return out

    def __str__(self):
        if not self.children:
            return self.state
        return f"{self.state}({','.join(str(c) for c in self.children)})"


@dataclass(frozen=True)
class SplitWeight:
    left: Any
    right: Any


def _runs(a: Wta, t: Tree, hole_state=None) -> list[Run]:
    if t.symbol == HOLE:
        return [Run(hole_state)]
    kid_runs = [_runs(a, c, hole_state) for c in t.children]
    out = []
    for combo in itertools.product(*kid_runs):
        for state, _ in a.by_lhs.get((t.symbol, tuple(r.state for r in combo)), ()):
            out.append(Run(state, combo))
    return out


def runs(a: Wta, tree: Tree) -> list[Run]:
    """Every run on ``tree`` (exponentially many in general)."""
    check_tree(tree, a.alphabet)
    return _runs(a, tree)


def runs_on_context(a: Wta, q: str, c: Tree, p: str) -> list[Run]:
    """Runs on context ``c`` with root state ``q`` and hole state ``p``."""
    check_tree(c, a.alphabet, allow_hole=True)
    return [r for r in _runs(a, c, p) if r.state == q]


def weight_of_run(a: Wta, t: Tree, run: Run):
    alg = a.algebra
    if t.symbol == HOLE:
        if run.children:
            raise InvalidRun("run has children below the hole")
        return alg.one
    if len(run.children) != len(t.children):
        raise InvalidRun(f"run shape does not match {t}")
    w = alg.product(weight_of_run(a, c, r) for c, r in zip(t.children, run.children))
    d = a.delta(tuple(r.state for r in run.children), t.symbol, run.state)
    if d == alg.zero:
        raise InvalidRun(f"zero transition at symbol {t.symbol!r} into {run.state!r}")
    return alg.mul(w, d)


def _profile(a: Wta, t: Tree) -> Counter:
    """Multiset of (state, run weight) over all runs on t."""
    alg = a.algebra
    if not t.children:
        return Counter({(q, d): 1 for (_, q, d) in a.by_symbol.get(t.symbol, ())})
    by_state = []
    for c in t.children:
        grouped = defaultdict(list)
        for (q, w), n in _profile(a, c).items():
            grouped[q].append((w, n))
        by_state.append(grouped)
    out: Counter = Counter()
    for children, q, d in a.by_symbol.get(t.symbol, ()):
        pools = [by_state[i].get(s) for i, s in enumerate(children)]
        if not all(pools):
            continue
        for combo in itertools.product(*pools):
            w = alg.one
            n = 1
            for wi, ni in combo:
                w = alg.mul(w, wi)
                n *= ni
            out[(q, alg.mul(w, d))] += n
    return out


def evaluate(a: Wta, tree: Tree):
    """The run semantics: ⊕ over runs of (run weight ⊗ root weight).

    Runs are grouped by (state, weight) with multiplicities, which is exact in
    any strong bimonoid because ⊕ is commutative and associative.
    """
    check_tree(tree, a.alphabet)
    alg = a.algebra
    total = alg.zero
    for (q, w), n in _profile(a, tree).items():
        f = a.root(q)
        if f != alg.zero:
            total = alg.add(total, alg.times(n, alg.mul(w, f)))
    return total


def split_weight(a: Wta, c: Tree, run: Run) -> SplitWeight:
    """Left and right weights of a run on a context along the path to the hole."""
    alg = a.algebra
    if c.symbol == HOLE:
        return SplitWeight(alg.one, alg.one)
    i = next(j for j, k in enumerate(c.children) if k.holes)
    inner = split_weight(a, c.children[i], run.children[i])
    before = alg.product(weight_of_run(a, c.children[j], run.children[j]) for j in range(i))
    after = alg.product(weight_of_run(a, c.children[j], run.children[j]) for j in range(i + 1, len(c.children)))
    d = a.delta(tuple(r.state for r in run.children), c.symbol, run.state)
    if d == alg.zero:
        raise InvalidRun(f"zero transition at symbol {c.symbol!r}")
    return SplitWeight(alg.mul(before, inner.left), alg.mul(alg.mul(inner.right, after), d))


def combine_runs(c: Tree, rho: Run, theta: Run) -> Run:
    """rho[theta]: plug a run on the filler into the hole of a context run."""
    pos = c.hole_position()
    exit_state = rho.at(pos).state
    if exit_state != theta.state:
        raise InvalidRun(f"hole state {exit_state!r} differs from filler root state {theta.state!r}")
    return rho.replace(pos, theta)


def run_power(c: Tree, rho: Run, n: int) -> tuple[Tree, Run]:
    """(c^n, rho^n) for a loop rho on c."""
    from .trees import BOX

    ctx, run = BOX, Run(rho.state)
    for _ in range(n):
        run = combine_runs(c, rho, run)
        ctx = substitute(c, ctx)
    return ctx, run


def map_weights(a: Wta, h: Homomorphism) -> Wta:
    if h.source != a.algebra:
        raise WtaError(f"homomorphism source {h.source!r} does not match {a.algebra!r}")
    return Wta(a.alphabet, h.target, a.states,
               {k: h(w) for k, w in a.transitions.items()}, {q: h(w) for q, w in a.roots.items()})


def boolean_projection(a: Wta) -> Wta:
    """fta(A): keep the support of transitions and root weights."""
    return Wta(a.alphabet, Boolean(), a.states,
               {k: 1 for k in a.transitions}, {q: 1 for q in a.roots})


def map_all(a: Wta, fn: Callable, algebra: WeightAlgebra) -> Wta:
    return Wta(a.alphabet, algebra, a.states,
               {k: fn(w) for k, w in a.transitions.items()}, {q: fn(w) for q, w in a.roots.items()})


# strings as monadic trees

@dataclass
class Wsa:
    """A weighted string automaton with initial, transition and final weights."""

    algebra: WeightAlgebra
    letters: tuple
    states: tuple
    initial: dict
    transitions: dict  # (p, letter, q) -> weight
    final: dict

    def evaluate(self, word) -> Any:
        """Direct sum over all state sequences (exponential; used as a reference)."""
        alg = self.algebra
        zero = alg.zero
        total = zero
        for seq in itertools.product(self.states, repeat=len(word) + 1):
            w = self.initial.get(seq[0], zero)
            for i, letter in enumerate(word):
                w = alg.mul(w, self.transitions.get((seq[i], letter, seq[i + 1]), zero))
            total = alg.add(total, alg.mul(w, self.final.get(seq[-1], zero)))
        return total


def from_wsa(wsa: Wsa) -> tuple[Wta, Callable]:
    """Encode a string automaton as a tree automaton over monadic trees.

    The word a1…an becomes an(…a1(e)…): the last letter is outermost, so
    run weights multiply in reading order.
    """
    if not wsa.letters:
        raise WtaError("a string automaton needs a nonempty alphabet")
    leaf = "e"
    while leaf in wsa.letters:
        leaf += "_"
    alphabet = RankedAlphabet([(x, 1) for x in wsa.letters] + [(leaf, 0)])
    transitions = {((), leaf, q): w for q, w in wsa.initial.items()}
    for (p, letter, q), w in wsa.transitions.items():
        transitions[((p,), letter, q)] = w
    wta = Wta(alphabet, wsa.algebra, wsa.states, transitions, wsa.final)

    def encode(word) -> Tree:
        t = Tree(leaf)
        for letter in word:
            t = Tree(letter, (t,))
        return t

    return wta, encode


def from_cfg(g: Grammar) -> Wta:
    """The arctic wta whose trees are derivation trees of g and whose values are yield lengths."""
    g = reduce_grammar(g)
    if g.is_empty:
        raise WtaError("the grammar generates the empty language")
    symbols, transitions = [], {}
    nts = set(g.nonterminals)
    for i, (lhs, rhs) in enumerate(g.rules):
        name = f"r{i}"
        kids = tuple(t for t in rhs if t in nts)
        symbols.append((name, len(kids)))
        transitions[(kids, name, lhs)] = len(rhs) - len(kids)
    return Wta(RankedAlphabet(symbols), Arctic(), g.nonterminals, transitions, {g.start: 0})


def rule_symbol_names(g: Grammar) -> dict:
    """Which rule each symbol of ``from_cfg(g)`` stands for."""
    g = reduce_grammar(g)
    return {f"r{i}": rule for i, rule in enumerate(g.rules)}
