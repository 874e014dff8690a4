"""Command-line interface.  Every command prints one JSON report on stdout.

Exit codes: 0 yes, 1 no, 2 unknown, 3 usage, IO or parse error.  Fuel
(default 256) counts enumerated trees, classification indices and fixpoint
layers.
"""
from __future__ import annotations

import argparse
import itertools
import json
import sys
from pathlib import Path

from .algebra import check_axioms, make_algebra
from .automaton import Wta, evaluate, from_wsa
from .crispdet import as_wta, crisp_determinize, preimage, support
from .decide import (NO, UNKNOWN, YES, cfg_finite, cost_finite, decide_finite_image, decide_image_at_most_k,
                     decide_step_properties)
from .errors import EmptySemantics, WtaError
from .fta import Dfta
from .grammar import parse_grammar
from .serialize import dfta_to_json, load_json, read_automaton, write_json, wsa_from_json, wta_to_json
from .structure import Diverged, trim
from .trees import parse_term

EXIT = {YES: 0, NO: 1, UNKNOWN: 2, "error": 3}
DEFAULT_FUEL = 256


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _literal(text: str):
    """Weight literals on the command line: JSON when it parses, else the raw text."""
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _report(question, verdict, route, witness=None, fuel_used=0, **extra) -> dict:
    out = {"question": question, "verdict": verdict, "route": route, "witness": witness, "fuel_used": fuel_used}
    out.update(extra)
    return out


def _load_wta(path) -> Wta:
    a = read_automaton(path)
    return as_wta(a) if isinstance(a, Dfta) else a


def _tree(args, alphabet):
    if args.tree is None:
        raise UsageError("--tree is required")
    return parse_term(args.tree, alphabet)


def _emit_automaton(args, data: dict, report: dict) -> None:
    if args.out:
        write_json(args.out, data)
        report["out"] = args.out
    else:
        report["automaton"] = data


def _language_report(args, question, d: Dfta) -> dict:
    report = _report(question, YES if d.finals else NO, "crisp-determinization")
    if args.tree is not None:
        member = d.accepts(parse_term(args.tree, d.alphabet))
        report.update(verdict=YES if member else NO, member=member)
    _emit_automaton(args, dfta_to_json(d), report)
    return report


def cmd_eval(args) -> dict:
    a = read_automaton(args.automaton)
    tree = _tree(args, a.alphabet)
    value = a.output(tree) if isinstance(a, Dfta) else evaluate(a, tree)
    return _report("eval", YES, "evaluate", value=a.algebra.format(value))


def cmd_trim(args) -> dict:
    a = _load_wta(args.automaton)
    try:
        t = trim(a)
    except EmptySemantics:
        return _report("trim", NO, "no-useful-state")
    report = _report("trim", YES, "useful-states", states=list(t.states))
    _emit_automaton(args, wta_to_json(t), report)
    return report


def cmd_support(args) -> dict:
    return _language_report(args, "support", support(_load_wta(args.automaton), args.fuel))


def cmd_preimage(args) -> dict:
    if args.weight is None:
        raise UsageError("--weight is required")
    a = _load_wta(args.automaton)
    return _language_report(args, "preimage", preimage(a, a.algebra.parse(_literal(args.weight)), args.fuel))


def cmd_crisp(args) -> dict:
    a = _load_wta(args.automaton)
    cd = crisp_determinize(a, args.fuel)
    if isinstance(cd, Diverged):
        return _report("crisp", UNKNOWN, "fuel", {"layers": cd.layers,
                                                  "growing": [a.algebra.format(x) for x in cd.growing]}, args.fuel)
    report = _report("crisp", YES, "crisp-determinization", None, cd.fuel_used,
                     image=[a.algebra.format(x) for x in a.algebra.sorted(cd.image())], routes=cd.routes)
    _emit_automaton(args, dfta_to_json(cd.dfta), report)
    return report


def cmd_decide(args) -> dict:
    a = _load_wta(args.automaton)
    alg, fuel = a.algebra, args.fuel
    if args.question == "finite-image":
        r = decide_finite_image(a, fuel)
    elif args.question == "image-at-most":
        if args.k is None:
            raise UsageError("--k is required")
        r = decide_image_at_most_k(a, args.k, fuel)
    elif args.question == "cost-finite":
        r = cost_finite(a, fuel)
    elif args.question == "constant":
        if args.weight is None:
            r = decide_step_properties(a, "constant", fuel=fuel)
        else:
            r = decide_step_properties(a, "constant_eq", alg.parse(_literal(args.weight)), fuel)
    elif args.question == "one-step":
        r = decide_step_properties(a, "one_step", fuel=fuel)
    else:
        if args.set is None:
            raise UsageError("--set is required")
        wanted = _literal(args.set)
        if not isinstance(wanted, list):
            raise UsageError("--set takes a JSON array of weight literals")
        r = decide_step_properties(a, "e_step", [alg.parse(x) for x in wanted], fuel)
    return r.to_json()


def cmd_cfg_finite(args) -> dict:
    return cfg_finite(parse_grammar(Path(args.grammar).read_text()), args.fuel).to_json()


def cmd_wsa_eval(args) -> dict:
    if args.word is None:
        raise UsageError("--word is required")
    w = wsa_from_json(load_json(args.wsa))
    word = args.word.split() if " " in args.word.strip() else list(args.word)
    unknown = [x for x in word if x not in w.letters]
    if unknown:
        raise WtaError(f"letters {unknown} not in the alphabet {list(w.letters)}")
    wta, encode = from_wsa(w)
    via_trees = evaluate(wta, encode(word))
    direct = w.evaluate(word)
    fmt = w.algebra.format
    return _report("wsa-eval", YES if via_trees == direct else NO, "tree-encoding",
                   {"direct": fmt(direct)}, value=fmt(via_trees))


def cmd_check_algebra(args) -> dict:
    alg = make_algebra(_literal(args.algebra))
    if args.set is not None:
        raw = _literal(args.set)
        if not isinstance(raw, list):
            raise UsageError("--set takes a JSON array of weight literals")
        samples = [alg.parse(x) for x in raw]
    else:
        samples = list(itertools.islice(alg.elements(), 8))
    bad = check_axioms(alg, samples)
    witness = [{"law": v.law, "witness": [alg.format(x) for x in v.witness]} for v in bad]
    return _report("check-algebra", NO if bad else YES, "sampled-laws", witness or None,
                   flags=alg.flags.as_dict(), samples=[alg.format(x) for x in samples])


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="wtakit", description="Weighted tree automata over strong bimonoids.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def command(name, fn, target="automaton", **kw):
        sp = sub.add_parser(name, **kw)
        sp.add_argument(target)
        sp.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
        sp.set_defaults(run=fn)
        return sp

    command("eval", cmd_eval, help="value of a tree").add_argument("--tree")
    command("trim", cmd_trim, help="restrict to useful states").add_argument("--out")
    for name, fn in (("support", cmd_support), ("preimage", cmd_preimage)):
        sp = command(name, fn, help=f"{name} as a deterministic automaton")
        sp.add_argument("--out")
        sp.add_argument("--tree")
        if name == "preimage":
            sp.add_argument("--weight")
    command("crisp", cmd_crisp, help="crisp-determinize").add_argument("--out")
    d = command("decide", cmd_decide, target="question", help="decision procedures")
    d.add_argument("automaton")
    d.add_argument("--k", type=int)
    d.add_argument("--weight")
    d.add_argument("--set")
    command("cfg-finite", cmd_cfg_finite, target="grammar", help="finiteness of a context-free language")
    command("wsa-eval", cmd_wsa_eval, target="wsa", help="evaluate a string automaton").add_argument("--word")
    command("check-algebra", cmd_check_algebra, target="algebra",
            help="check the laws of an algebra descriptor").add_argument("--set")
    return p


QUESTIONS = ("finite-image", "image-at-most", "cost-finite", "constant", "one-step", "e-step")


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("missing command")
        if args.command == "decide" and args.question not in QUESTIONS:
            raise UsageError(f"unknown question {args.question!r}; expected one of {list(QUESTIONS)}")
        report = args.run(args)
    except (UsageError, WtaError, OSError, ValueError) as exc:
        report = _report(" ".join(argv[:1]) or "usage", "error", type(exc).__name__, error=str(exc))
    print(json.dumps(report, indent=2))
    return EXIT[report["verdict"]]


if __name__ == "__main__":
    sys.exit(main())
