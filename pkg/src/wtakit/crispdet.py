"""Recognizable step mappings, crisp-determinization, preimages and support."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .algebra import WeightAlgebra, quotient
from .automaton import Wta, map_weights
from .counting import build_counting_wta, exact, nat_preimage, residue
from .errors import WtaError
from .fta import Dfta, combine, complement, is_universal, product, universal
from .structure import Diverged, compute_hc, has_useful_state, trim
from .trees import Tree


@dataclass
class StepMapping:
    """⊕ of b_i ⊗ 1_{L_i}: each tree gets the sum of the weights of the languages containing it."""

    algebra: WeightAlgebra
    steps: list  # of (weight, Dfta)

    def __call__(self, tree: Tree):
        return step_evaluate(self, tree)


@dataclass
class CrispDetWta:
    dfta: Dfta  # carries the output map
    steps: StepMapping
    routes: dict = field(default_factory=dict)  # weight -> how its run count was classified
    fuel_used: int = 0

    @property
    def algebra(self) -> WeightAlgebra:
        return self.steps.algebra

    def image(self) -> set:
        return self.dfta.image()


def step_evaluate(m, tree: Tree):
    if isinstance(m, CrispDetWta):
        return m.dfta.output(tree)
    if isinstance(m, Dfta):
        return m.output(tree)
    alg = m.algebra
    return alg.sum(b for b, lang in m.steps if lang.accepts(tree))


def constant(alg: WeightAlgebra, alphabet, b) -> CrispDetWta:
    u = universal(alphabet)
    d = Dfta(alphabet, u.labels, u.delta, [0] if b != alg.zero else [], {0: b}, alg)
    return CrispDetWta(d, StepMapping(alg, [(b, u)] if b != alg.zero else []))


class RunCountClassifier:
    """Partitions the trees by how many runs have complete weight b, one index per step.

    Each step i adds the trees with exactly i such runs and checks whether
    these cover everything (the count is bounded by i); failing that it
    checks whether i·b repeats an earlier multiple (b has finite additive
    order).  Boundedness wins when both succeed at the same index.
    """

    def __init__(self, a: Wta, weights, b):
        self.algebra = a.algebra
        self.b = b
        self.counting = build_counting_wta(a, weights, b).wta
        self.index = 0
        self.exact_langs: list[Dfta] = []
        self.covered: Dfta | None = None
        self.multiple = a.algebra.zero
        self.seen: dict = {}
        self.route: dict | None = None

    def advance(self) -> bool:
        i = self.index
        lang = nat_preimage(self.counting, exact(i))
        self.exact_langs.append(lang)
        self.covered = lang if self.covered is None else combine(self.covered, lang, "union")
        if is_universal(self.covered):
            self.route = {"route": "bounded", "bound": i}
            return True
        if self.multiple in self.seen:
            start = self.seen[self.multiple]
            self.route = {"route": "periodic", "index": start, "period": i - start}
            return True
        self.seen[self.multiple] = i
        self.multiple = self.algebra.add(self.multiple, self.b)
        self.index += 1
        return False

    def steps(self) -> list:
        """(j·b, L_j) pairs partitioning the trees."""
        alg, b = self.algebra, self.b
        if self.route is None:
            raise WtaError("classification has not finished")
        if self.route["route"] == "bounded":
            return [(alg.times(j, b), lang) for j, lang in enumerate(self.exact_langs)]
        start, period = self.route["index"], self.route["period"]
        out = [(alg.times(j, b), self.exact_langs[j]) for j in range(start)]
        for j in range(start, start + period):
            out.append((alg.times(j, b), nat_preimage(self.counting, residue(j, period))))
        return out


def assemble(alg: WeightAlgebra, alphabet, classifiers: list[RunCountClassifier]) -> CrispDetWta:
    """Synchronous product of all step languages; a state outputs the sum of
    the weights of the languages it accepts."""
    entries = [(c.b, w, lang) for c in classifiers for w, lang in c.steps()]
    if not entries:
        return constant(alg, alphabet, alg.zero)
    weights = [w for _, w, _ in entries]
    langs = [lang for _, _, lang in entries]

    def output(key):
        return alg.sum(w for w, lang, s in zip(weights, langs, key) if s in lang.finals)

    d = product(langs, output=output, algebra=alg)
    d.finals = frozenset(i for i, o in d.outputs.items() if o != alg.zero)
    steps = StepMapping(alg, [(w, lang) for w, lang in zip(weights, langs) if w != alg.zero])
    routes = {alg.format(c.b) if not isinstance(alg.format(c.b), list) else str(alg.format(c.b)): c.route
              for c in classifiers}
    return CrispDetWta(d, steps, routes)


def crisp_determinize(a: Wta, fuel: int = 64) -> CrispDetWta | Diverged:
    """An equivalent crisp-deterministic automaton, when the search finishes within ``fuel``.

    Fuel caps the layers of the run-weight fixpoint and, separately, the
    number of indices tried for each complete weight.
    """
    alg = a.algebra
    if not has_useful_state(a):
        return constant(alg, a.alphabet, alg.zero)
    t = trim(a)
    hc = compute_hc(t, fuel)
    if isinstance(hc, Diverged):
        return hc
    used = hc.stable_at + 1
    classifiers = []
    for b in alg.sorted(hc.complete):
        if b == alg.zero:
            continue  # those runs add zero
        c = RunCountClassifier(t, hc.weights, b)
        for _ in range(fuel):
            used += 1
            if c.advance():
                break
        else:
            return Diverged(used, (b,))
        classifiers.append(c)
    result = assemble(alg, a.alphabet, classifiers)
    result.fuel_used = used
    return result


def _finite_image_of(a: Wta, b) -> tuple[Wta, Any]:
    alg = a.algebra
    if alg.finite:
        return a, b
    if alg.past is None or alg.flags.past_finite is not True:
        raise WtaError(f"preimage needs a finite or past-finite algebra with past(b), got {alg!r}")
    q, h = quotient(alg, "past_cut", b)
    return map_weights(a, h), h(b)


def preimage(a: Wta, b, fuel: int = 256) -> Dfta:
    """The trees whose value is exactly ``b``, as a deterministic automaton."""
    image, target = _finite_image_of(a, b)
    size = len(list(image.algebra.elements()))
    budget = max(fuel, size * (len(image.states) + 2) + 2)
    cd = crisp_determinize(image, budget)
    if isinstance(cd, Diverged):
        raise WtaError("crisp-determinization of a finite-valued image did not finish")
    return cd.dfta.with_finals([i for i, o in cd.dfta.outputs.items() if o == target])


def support(a: Wta, fuel: int = 256) -> Dfta:
    return complement(preimage(a, a.algebra.zero, fuel))


def as_wta(d: Dfta) -> Wta:
    """A crisp automaton as a deterministic wta: unit transitions, outputs as root weights."""
    alg = d.algebra
    if alg is None or d.outputs is None:
        raise WtaError("only a Dfta with outputs and an algebra converts to a wta")
    names = [f"s{i}" for i in d.states]
    transitions = {(tuple(names[k] for k in kids), symbol, names[t]): alg.one for (symbol, kids), t in d.delta.items()}
    return Wta(d.alphabet, alg, names, transitions, {names[i]: o for i, o in d.outputs.items()})
