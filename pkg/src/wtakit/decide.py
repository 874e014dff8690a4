"""Decision procedures with verdicts and replayable witnesses.

Every procedure returns a DecisionReport whose verdict is "yes", "no" or
"unknown".  "unknown" means a hypothesis the theory needs (monotonicity,
past-finiteness) is missing, or the fuel ran out.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .algebra import WeightAlgebra, additive_order
from .automaton import Run, Wta, boolean_projection, combine_runs, evaluate, from_cfg, run_power, weight_of_run
from .counting import nat_finite_image
from .crispdet import CrispDetWta, RunCountClassifier, assemble, constant, crisp_determinize
from .errors import PreconditionError
from .fta import AmbiguityWitness, finitely_ambiguous, is_unambiguous
from .grammar import Grammar, parse_grammar, reduce_grammar
from .structure import (Diverged, LoopWitness, access_contexts, compute_hc, has_useful_state,
                        productive_witnesses, small_loop_analysis, trim)
from .trees import Tree, enumerate_trees, substitute

YES, NO, UNKNOWN = "yes", "no", "unknown"


@dataclass
class DecisionReport:
    question: str
    verdict: str
    route: str
    witness: Any = None
    fuel_used: int = 0
    algebra: WeightAlgebra | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {
            "question": self.question,
            "verdict": self.verdict,
            "route": self.route,
            "witness": witness_json(self.witness, self.algebra),
            "fuel_used": self.fuel_used,
        }


@dataclass(frozen=True)
class PumpFamily:
    """outer[loop^n[inner]] with matching runs: the trees a non-one small loop generates."""

    state: str
    outer: Tree
    outer_run: Run
    loop: Tree
    loop_run: Run
    inner: Tree
    inner_run: Run

    def member(self, n: int) -> tuple[Tree, Run]:
        ctx, ctx_run = run_power(self.loop, self.loop_run, n)
        middle, middle_run = substitute(ctx, self.inner), combine_runs(ctx, ctx_run, self.inner_run)
        return substitute(self.outer, middle), combine_runs(self.outer, self.outer_run, middle_run)

    def weight(self, a: Wta, n: int):
        """Run weight of the n-th member times the root weight of its top state."""
        tree, run = self.member(n)
        return a.algebra.mul(weight_of_run(a, tree, run), a.root(run.state))


@dataclass(frozen=True)
class LoopCertificate:
    loop: LoopWitness
    family: PumpFamily


@dataclass(frozen=True)
class CountCertificate:
    """The number of runs with complete weight ``weight`` is unbounded (per ``ambiguity``)
    and ``weight`` has infinite additive order."""

    weight: Any
    ambiguity: Any


@dataclass(frozen=True)
class ValueWitness:
    values: tuple
    trees: tuple


def pump_family(a: Wta, loop: LoopWitness) -> PumpFamily:
    """Embed a loop between an access context and a lowest tree for its state (a must be trim)."""
    outer, outer_run = access_contexts(a)[loop.state]
    inner, inner_run = productive_witnesses(a)[loop.state]
    return PumpFamily(loop.state, outer, outer_run, loop.context, loop.run, inner, inner_run)


def witness_json(w, alg: WeightAlgebra | None):
    fmt = alg.format if alg is not None else str
    if w is None:
        return None
    if isinstance(w, LoopCertificate):
        return {
            "kind": "small-loop",
            "state": w.loop.state,
            "context": str(w.loop.context),
            "loop_weight": fmt(w.loop.weight),
            "outer": str(w.family.outer),
            "inner": str(w.family.inner),
        }
    if isinstance(w, LoopWitness):
        return {"kind": "small-loop", "state": w.state, "context": str(w.context), "loop_weight": fmt(w.weight)}
    if isinstance(w, CountCertificate):
        return {"kind": "unbounded-count", "weight": fmt(w.weight), "ambiguity": witness_json(w.ambiguity, alg)}
    if isinstance(w, AmbiguityWitness):
        return {"kind": w.kind, "p": w.p, "q": w.q, "context": str(w.context)}
    if isinstance(w, CrispDetWta):
        return {"kind": "crisp", "states": len(w.dfta.labels),
                "image": [fmt(x) for x in w.algebra.sorted(w.image())]}
    if isinstance(w, ValueWitness):
        return {"kind": "values", "values": [fmt(x) for x in w.values], "trees": [str(t) for t in w.trees]}
    if isinstance(w, dict):
        return {k: witness_json(v, alg) if not isinstance(v, (str, int, float, bool, list)) else v
                for k, v in w.items()}
    return str(w)


def _loop_no(question: str, t: Wta, loop: LoopWitness, route: str, used: int) -> DecisionReport:
    return DecisionReport(question, NO, route, LoopCertificate(loop, pump_family(t, loop)), used, t.algebra)


def _try_crisp(t: Wta, fuel: int):
    cd = crisp_determinize(t, fuel)
    return None if isinstance(cd, Diverged) else cd


def decide_finite_image(a: Wta, fuel: int = 256) -> DecisionReport:
    """Does ⟦a⟧ take finitely many values?"""
    q = "finite-image"
    alg = a.algebra
    if not has_useful_state(a):
        return DecisionReport(q, YES, "no-useful-state", constant(alg, a.alphabet, alg.zero), 0, alg)
    t = trim(a)
    if alg.flags.monotonic is not True:
        return DecisionReport(q, UNKNOWN, "non-monotonic", None, 0, alg)
    loop = small_loop_analysis(t)
    if loop is not None:
        if alg.flags.past_finite is True:
            return _loop_no(q, t, loop, "small-loop", 0)
        if is_unambiguous(boolean_projection(t)):
            return _loop_no(q, t, loop, "unambiguous-small-loop", 0)
        return DecisionReport(q, UNKNOWN, "ambiguous-not-past-finite", LoopCertificate(loop, pump_family(t, loop)),
                              0, alg)
    if alg.flags.additively_locally_finite is True:
        return DecisionReport(q, YES, "additively-locally-finite", _try_crisp(t, fuel), 0, alg)
    verdict = finitely_ambiguous(boolean_projection(t))
    if verdict.finitely_ambiguous:
        return DecisionReport(q, YES, "finitely-ambiguous", _try_crisp(t, fuel), 0, alg)
    hc = compute_hc(t, fuel)
    if isinstance(hc, Diverged):
        return DecisionReport(q, UNKNOWN, "fuel", None, fuel, alg)
    used = hc.stable_at + 1
    for b in alg.sorted(hc.complete):
        if b == alg.zero:
            continue
        order = additive_order(alg, b, fuel)
        used += 1
        if order.is_finite:
            continue
        if order.status == "infinite":
            counting = RunCountClassifier(t, hc.weights, b).counting
            answer = nat_finite_image(counting)
            if answer.finite:
                continue
            if alg.flags.past_finite is True:
                return DecisionReport(q, NO, "unbounded-count", CountCertificate(b, answer.witness), used, alg)
            return DecisionReport(q, UNKNOWN, "unbounded-count-not-past-finite",
                                  CountCertificate(b, answer.witness), used, alg)
        c = RunCountClassifier(t, hc.weights, b)
        for _ in range(fuel):
            used += 1
            if c.advance():
                break
        else:
            return DecisionReport(q, UNKNOWN, "fuel", None, used, alg)
    return DecisionReport(q, YES, "per-weight-conditions", _try_crisp(t, fuel), used, alg)


def _image_preconditions(alg: WeightAlgebra) -> str | None:
    if alg.flags.monotonic is not True:
        return "non-monotonic"
    if alg.flags.past_finite is not True:
        return "not-past-finite"
    return None


def decide_image_at_most_k(a: Wta, k: int, fuel: int = 256) -> DecisionReport:
    """Is |im ⟦a⟧| ≤ k?

    Enumerating trees (looking for k+1 distinct values) is interleaved
    round-robin with the per-weight run-count classification that ends in a
    crisp-deterministic automaton.  Each tree and each classification index
    costs one unit of fuel.
    """
    q = f"image-at-most-{k}"
    if not isinstance(k, int) or k < 1:
        raise PreconditionError(f"k must be a positive integer, got {k!r}")
    alg = a.algebra
    blocked = _image_preconditions(alg)
    if blocked:
        return DecisionReport(q, UNKNOWN, blocked, None, 0, alg)
    if not has_useful_state(a):
        return DecisionReport(q, YES, "no-useful-state", constant(alg, a.alphabet, alg.zero), 0, alg)
    t = trim(a)
    loop = small_loop_analysis(t)
    if loop is not None:
        return _loop_no(q, t, loop, "small-loop", 0)
    hc = compute_hc(t, fuel)
    if isinstance(hc, Diverged):
        return DecisionReport(q, UNKNOWN, "fuel", None, fuel, alg)
    used = hc.stable_at + 1

    trees = enumerate_trees(t.alphabet)
    values: dict = {}  # value -> first tree
    pending = [RunCountClassifier(t, hc.weights, b) for b in alg.sorted(hc.complete) if b != alg.zero]
    finished: list = []
    turn = 0
    while used < fuel:
        used += 1
        if turn % 2 == 0 or not pending:
            tree = next(trees)
            v = evaluate(t, tree)
            if v not in values:
                values[v] = tree
                if len(values) > k:
                    return DecisionReport(q, NO, "enumeration",
                                          ValueWitness(tuple(values), tuple(values.values())), used, alg)
        else:
            c = pending[0]
            if c.advance():
                finished.append(pending.pop(0))
            else:
                pending.append(pending.pop(0))
        if not pending:
            cd = assemble(alg, t.alphabet, sorted(finished, key=lambda c: alg.sort_key(c.b)))
            cd.fuel_used = used
            verdict = YES if len(cd.image()) <= k else NO
            return DecisionReport(q, verdict, "crisp-determinization", cd, used, alg)
        turn += 1
    return DecisionReport(q, UNKNOWN, "fuel", None, used, alg)


STEP_MODES = ("constant_eq", "constant", "one_step", "e_step")


def decide_step_properties(a: Wta, mode: str, arg=None, fuel: int = 256) -> DecisionReport:
    """``constant_eq`` (arg: weight): is ⟦a⟧ constantly arg?  ``constant``: is it
    constant?  ``one_step``: does it take at most one value besides zero?
    ``e_step`` (arg: weights E): are all its values in E?"""
    if mode not in STEP_MODES:
        raise PreconditionError(f"unknown step mode {mode!r}; expected one of {STEP_MODES}")
    alg = a.algebra
    if mode == "e_step":
        wanted = set(arg)
        k = max(len(wanted), 1)
    else:
        k = 2 if mode == "one_step" else 1
    base = decide_image_at_most_k(a, k, fuel)
    question = mode.replace("_", "-")
    if base.verdict != YES:
        return DecisionReport(question, base.verdict, base.route, base.witness, base.fuel_used, alg)
    image = base.witness.image()
    if mode == "constant":
        ok = len(image) == 1
    elif mode == "constant_eq":
        ok = image == {arg}
    elif mode == "one_step":
        ok = len(image - {alg.zero}) <= 1
    else:
        ok = image <= wanted
    return DecisionReport(question, YES if ok else NO, base.route, base.witness, base.fuel_used, alg)


def cost_finite(a: Wta, fuel: int = 256) -> DecisionReport:
    """Is the set of run weights reaching nonzero-root states finite?"""
    q = "cost-finite"
    alg = a.algebra
    if alg.flags.monotonic is not True:
        return DecisionReport(q, UNKNOWN, "non-monotonic", None, 0, alg)
    if not has_useful_state(a):
        return DecisionReport(q, YES, "no-useful-state", {"cost": []}, 0, alg)
    t = trim(a)
    loop = small_loop_analysis(t)
    if loop is not None:
        return _loop_no(q, t, loop, "small-loop", 0)
    hc = compute_hc(t, fuel)
    if isinstance(hc, Diverged):
        return DecisionReport(q, YES, "small-loops-one", None, fuel, alg)
    cost = [alg.format(x) for x in alg.sorted(hc.cost)]
    return DecisionReport(q, YES, "small-loops-one", {"cost": cost}, hc.stable_at + 1, alg)


def cfg_finite(g: Grammar | str, fuel: int = 256) -> DecisionReport:
    """Is the language of a context-free grammar finite?"""
    if isinstance(g, str):
        g = parse_grammar(g)
    reduced = reduce_grammar(g)
    if reduced.is_empty:
        return DecisionReport("cfg-finite", YES, "empty-language", None, 0)
    report = decide_finite_image(from_cfg(reduced), fuel)
    report.question = "cfg-finite"
    return report
