"""Trimming, small loops, the pumping decomposition, and run-weight reachability sets."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any

from .automaton import Run, SplitWeight, Wta, combine_runs, run_power, split_weight, weight_of_run
from .errors import EmptySemantics, NotApplicable, PreconditionError
from .grammar import Grammar, reduce_grammar
from .trees import BOX, Tree, substitute


def _fresh(base: str, taken) -> str:
    name = base
    while name in taken:
        name += "'"
    return name


def to_grammar(a: Wta) -> Grammar:
    """G(A): S -> q for nonzero root weights, q -> σ ( q1 , ... , qk ) for nonzero transitions."""
    start = _fresh("S", set(a.states))
    rules = [(start, (q,)) for q in a.states if q in a.roots]
    for (children, symbol, state) in a.transitions:
        if children:
            body = (symbol, "(") + tuple(itertools.chain.from_iterable(
                ((q, ",") if i < len(children) - 1 else (q,)) for i, q in enumerate(children))) + (")",)
        else:
            body = (symbol,)
        rules.append((state, body))
    terminals = tuple(s for s, _ in a.alphabet) + ("(", ")", ",")
    return Grammar((start,) + a.states, terminals, tuple(rules), start)


def useful_states(a: Wta) -> list[str]:
    g = reduce_grammar(to_grammar(a))
    if g.is_empty:
        return []
    kept = set(g.nonterminals)
    return [q for q in a.states if q in kept]


def has_useful_state(a: Wta) -> bool:
    return bool(useful_states(a))


def trim(a: Wta) -> Wta:
    """Restrict A to its useful states; raises EmptySemantics when there are none."""
    keep = useful_states(a)
    if not keep:
        raise EmptySemantics("no useful state: the semantics is constantly zero")
    return a.restrict(keep)


def productive_witnesses(a: Wta) -> dict[str, tuple[Tree, Run]]:
    """A lowest tree (with its run) reaching each productive state."""
    found: dict[str, tuple[Tree, Run]] = {}
    changed = True
    while changed:
        changed = False
        level = {}
        for (children, symbol, state) in a.transitions:
            if state in found or state in level or not all(q in found for q in children):
                continue
            kids = [found[q] for q in children]
            level[state] = (Tree(symbol, tuple(t for t, _ in kids)), Run(state, tuple(r for _, r in kids)))
        if level:
            found.update(level)
            changed = True
    return found


def access_contexts(a: Wta) -> dict[str, tuple[Tree, Run]]:
    """For each state q, a context with a run from a nonzero-root state down to q at the hole."""
    trees = productive_witnesses(a)
    found = {q: (BOX, Run(q)) for q in a.states if q in a.roots}
    frontier = list(found)
    while frontier:
        nxt = []
        for top in frontier:
            ctx, run = found[top]
            hole = ctx.hole_position()
            for (children, symbol, state) in a.transitions:
                if state != top:
                    continue
                for i, q in enumerate(children):
                    if q in found or not all(p in trees for j, p in enumerate(children) if j != i):
                        continue
                    kids = [BOX if j == i else trees[p][0] for j, p in enumerate(children)]
                    kid_runs = [Run(q) if j == i else trees[p][1] for j, p in enumerate(children)]
                    found[q] = (ctx.replace(hole, Tree(symbol, tuple(kids))),
                                run.replace(hole, Run(state, tuple(kid_runs))))
                    nxt.append(q)
        frontier = nxt
    return found


@dataclass(frozen=True)
class LoopWitness:
    state: str
    context: Tree
    run: Run
    weight: Any


def small_loop_analysis(a: Wta) -> LoopWitness | None:
    """Look for a loop of height at most |Q| whose weight is not one.

    Returns None when every such loop uses only weight-one transitions
    (equivalently, under monotonicity, has weight one), otherwise a witness.
    The search is a dynamic program over (root state, hole state) pairs
    ordered by context height, with two colours: only-one transitions, or
    some other transition somewhere in the context including side subtrees.
    """
    alg = a.algebra
    if alg.flags.monotonic is not True:
        raise NotApplicable(f"small-loop analysis needs a monotonic algebra, got {alg!r}")
    one = alg.one
    bound = len(a.states)
    # trees[colour][q] = (tree, run); colour "any", "one", "other"
    trees: dict[str, dict] = {"any": {}, "one": {}, "other": {}}
    for (children, symbol, state), d in a.transitions.items():
        if not children:
            leaf = (Tree(symbol), Run(state))
            trees["any"].setdefault(state, leaf)
            trees["one" if d == one else "other"].setdefault(state, leaf)
    ctx: dict[tuple, tuple] = {(p, p, "one"): (BOX, Run(p)) for p in a.states}
    for height in range(1, bound + 1):
        prev_trees = {c: dict(v) for c, v in trees.items()}
        prev_ctx = dict(ctx)
        for (children, symbol, state), d in a.transitions.items():
            unit = d == one
            # contexts with the hole below child i
            for i, qi in enumerate(children):
                sides = [j for j in range(len(children)) if j != i]
                if not all(children[j] in prev_trees["any"] for j in sides):
                    continue
                for (root, hole, colour), (c_i, r_i) in prev_ctx.items():
                    if root != qi:
                        continue
                    options = []
                    if unit and colour == "one" and all(children[j] in prev_trees["one"] for j in sides):
                        options.append(("one", {j: prev_trees["one"][children[j]] for j in sides}))
                    if not unit or colour == "other":
                        options.append(("other", {j: prev_trees["any"][children[j]] for j in sides}))
                    else:
                        for k in sides:
                            if children[k] in prev_trees["other"]:
                                pick = {j: prev_trees["any"][children[j]] for j in sides}
                                pick[k] = prev_trees["other"][children[k]]
                                options.append(("other", pick))
                                break
                    for new_colour, pick in options:
                        key = (state, hole, new_colour)
                        if key in ctx:
                            continue
                        kids = [c_i if j == i else pick[j][0] for j in range(len(children))]
                        kid_runs = [r_i if j == i else pick[j][1] for j in range(len(children))]
                        ctx[key] = (Tree(symbol, tuple(kids)), Run(state, tuple(kid_runs)))
            # trees of this height (used as side branches one level up)
            if not all(q in prev_trees["any"] for q in children):
                continue
            choices = {"any": [prev_trees["any"][q] for q in children]}
            if unit and all(q in prev_trees["one"] for q in children):
                choices["one"] = [prev_trees["one"][q] for q in children]
            if not unit:
                choices["other"] = choices["any"]
            else:
                for k, q in enumerate(children):
                    if q in prev_trees["other"]:
                        pick = list(choices["any"])
                        pick[k] = prev_trees["other"][q]
                        choices["other"] = pick
                        break
            for colour, kids in choices.items():
                if state not in trees[colour]:
                    trees[colour][state] = (Tree(symbol, tuple(t for t, _ in kids)),
                                            Run(state, tuple(r for _, r in kids)))
    for q in a.states:
        hit = ctx.get((q, q, "other"))
        if hit is not None:
            c, r = hit
            return LoopWitness(q, c, r, weight_of_run(a, c, r))
    return None


@dataclass(frozen=True)
class PumpDecomposition:
    """xi = outer[loop[inner]] with the run split accordingly; the loop run enters and exits in ``state``."""

    outer: Tree
    loop: Tree
    inner: Tree
    root_state: str
    state: str
    outer_run: Run
    loop_run: Run
    inner_run: Run
    outer_split: SplitWeight
    loop_split: SplitWeight


def _longest_path(t: Tree) -> list[tuple]:
    path, node, pos = [()], t, ()
    while node.children:
        i = max(range(len(node.children)), key=lambda j: (node.children[j].height, -j))
        pos = pos + (i + 1,)
        node = node.children[i]
        path.append(pos)
    return path


def pump_decompose(a: Wta, tree: Tree, run: Run) -> PumpDecomposition:
    """Split a run on a tree of height >= |Q| at a repeated state along a longest path.

    The lower occurrence is chosen so that the subtree at the upper one has
    height at most |Q|, and the loop between them is as short as possible.
    """
    n = len(a.states)
    if tree.height < n:
        raise PreconditionError(f"tree height {tree.height} is below the number of states {n}")
    path = _longest_path(tree)
    window = path[len(path) - 1 - n:]
    labels = [run.at(p).state for p in window]
    upper = lower = None
    for i in range(len(window) - 2, -1, -1):
        for j in range(i + 1, len(window)):
            if labels[j] == labels[i]:
                upper, lower = window[i], window[j]
                break
        if upper is not None:
            break
    assert upper is not None, "pigeonhole guarantees a repeated state"
    q = run.at(upper).state
    rel = lower[len(upper):]
    outer = tree.replace(upper, BOX)
    outer_run = run.replace(upper, Run(q))
    loop = tree.at(upper).replace(rel, BOX)
    loop_run = run.at(upper).replace(rel, Run(q))
    inner, inner_run = tree.at(lower), run.at(lower)
    return PumpDecomposition(outer, loop, inner, run.state, q, outer_run, loop_run, inner_run,
                             split_weight(a, outer, outer_run), split_weight(a, loop, loop_run))


def pump(d: PumpDecomposition, n: int) -> tuple[Tree, Run]:
    """(outer[loop^n[inner]], outer_run[loop_run^n[inner_run]])."""
    ctx, ctx_run = run_power(d.loop, d.loop_run, n)
    middle, middle_run = substitute(ctx, d.inner), combine_runs(ctx, ctx_run, d.inner_run)
    return substitute(d.outer, middle), combine_runs(d.outer, d.outer_run, middle_run)


def pumped_weight(a: Wta, d: PumpDecomposition, n: int):
    """The weight of pump(d, n) predicted from the split weights."""
    alg = a.algebra
    core = weight_of_run(a, d.inner, d.inner_run)
    return alg.product([d.outer_split.left, alg.power(d.loop_split.left, n), core,
                        alg.power(d.loop_split.right, n), d.outer_split.right])


def reduce_run(a: Wta, tree: Tree, run: Run) -> tuple[Tree, Run]:
    """Excise loops until the tree is lower than |Q|, keeping the run weight.

    Every excised loop must have weight one on both sides of the hole (or,
    for a commutative algebra, left ⊗ right = one); otherwise the excision
    could change the weight and PreconditionError is raised.
    """
    alg = a.algebra
    commutative = alg.flags.commutative is True
    while tree.height >= len(a.states):
        d = pump_decompose(a, tree, run)
        left, right = d.loop_split.left, d.loop_split.right
        if not ((left == alg.one and right == alg.one) or (commutative and alg.mul(left, right) == alg.one)):
            raise PreconditionError(f"loop at state {d.state!r} on {d.loop} has weight {alg.format(alg.mul(left, right))}")
        tree, run = pump(d, 0)
    return tree, run


@dataclass(frozen=True)
class ReachabilitySets:
    weights: frozenset  # H(A)
    complete: frozenset  # C(A)
    cost: frozenset  # run weights at states with nonzero root weight
    history: tuple  # per layer: {state: frozenset}
    stable_at: int


@dataclass(frozen=True)
class Diverged:
    layers: int
    growing: tuple  # elements new in the last layer


def _next_layer(a: Wta, layer: dict) -> dict:
    alg = a.algebra
    out = {q: set(ws) for q, ws in layer.items()}
    for (children, symbol, state), d in a.transitions.items():
        pools = [layer[q] for q in children]
        if not all(pools):
            continue
        for ys in itertools.product(*pools):
            out[state].add(alg.mul(alg.product(ys), d))
    return {q: frozenset(ws) for q, ws in out.items()}


def compute_hc(a: Wta, fuel: int = 64) -> ReachabilitySets | Diverged:
    """Layer i holds, per state, the run weights of trees of height at most i.

    Stops at the first layer equal to its successor; fuel caps the number of layers.
    """
    alg = a.algebra
    layer = {q: frozenset() for q in a.states}
    layer = _next_layer(a, layer)
    history = [layer]
    for i in range(fuel):
        nxt = _next_layer(a, layer)
        if nxt == layer:
            weights = frozenset().union(*layer.values())
            complete = frozenset(alg.mul(y, a.root(q)) for q, ys in layer.items() for y in ys)
            cost = frozenset().union(*(ys for q, ys in layer.items() if q in a.roots))
            return ReachabilitySets(weights, complete, cost, tuple(history), i)
        growing = frozenset().union(*nxt.values()) - frozenset().union(*layer.values())
        layer = nxt
        history.append(layer)
    return Diverged(fuel, tuple(alg.sorted(growing)))
