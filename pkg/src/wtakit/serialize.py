"""JSON files for weighted tree automata, crisp-deterministic automata and string automata."""
from __future__ import annotations

import json
from pathlib import Path

from .algebra import Boolean, make_algebra
from .automaton import Wsa, Wta
from .errors import ParseError
from .fta import Dfta
from .trees import RankedAlphabet


def _alphabet_json(alphabet: RankedAlphabet) -> list:
    return [{"symbol": s, "rank": r} for s, r in alphabet]


def _alphabet_from(data) -> RankedAlphabet:
    try:
        return RankedAlphabet([(e["symbol"], int(e["rank"])) for e in data])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad alphabet entry: {exc}") from None


def _weight(alg, literal, where: str):
    try:
        return alg.parse(literal)
    except ParseError as exc:
        raise ParseError(f"{where}: {exc}") from None


def wta_to_json(a: Wta) -> dict:
    alg = a.algebra
    return {
        "algebra": alg.descriptor,
        "alphabet": _alphabet_json(a.alphabet),
        "states": list(a.states),
        "transitions": [{"children": list(children), "symbol": symbol, "state": state, "weight": alg.format(w)}
                        for (children, symbol, state), w in a.transitions.items()],
        "roots": [{"state": q, "weight": alg.format(w)} for q, w in a.roots.items()],
    }


def dfta_to_json(d: Dfta) -> dict:
    """A Dfta as a crisp file: states s0..sn, unit transitions, an output per state.

    Without an output map the outputs are the Boolean acceptance values.
    """
    alg = d.algebra or Boolean()
    names = [f"s{i}" for i in d.states]
    if d.outputs is not None:
        outputs = d.outputs
    else:
        outputs = {i: 1 if i in d.finals else 0 for i in d.states}
    return {
        "algebra": alg.descriptor,
        "alphabet": _alphabet_json(d.alphabet),
        "states": names,
        "transitions": [{"children": [names[k] for k in kids], "symbol": symbol, "state": names[target],
                         "weight": alg.format(alg.one)} for (symbol, kids), target in d.delta.items()],
        "roots": [{"state": names[i], "weight": alg.format(alg.one)} for i in sorted(d.finals)],
        "crisp": True,
        "outputs": {names[i]: alg.format(outputs[i]) for i in d.states},
    }


def automaton_from_json(data: dict) -> Wta | Dfta:
    """Read a WtaFile object; crisp files come back as a Dfta with outputs."""
    try:
        alg = make_algebra(data["algebra"])
        alphabet = _alphabet_from(data["alphabet"])
        states = list(data["states"])
        transitions = data.get("transitions", [])
        roots = data.get("roots", [])
    except KeyError as exc:
        raise ParseError(f"missing field {exc}") from None
    if data.get("crisp"):
        index = {q: i for i, q in enumerate(states)}
        delta = {}
        for n, t in enumerate(transitions):
            try:
                delta[(t["symbol"], tuple(index[q] for q in t["children"]))] = index[t["state"]]
            except KeyError as exc:
                raise ParseError(f"transition {n}: unknown state or missing field {exc}") from None
        raw = data.get("outputs", {})
        outputs = {index[q]: _weight(alg, raw[q], f"output of {q}") if q in raw else alg.zero for q in states}
        finals = [index[r["state"]] for r in roots]
        d = Dfta(alphabet, states, delta, finals, outputs, alg)
        for symbol, rank in alphabet:
            for n in range(len(states) ** rank):
                kids = tuple((n // len(states) ** j) % len(states) for j in range(rank))
                if (symbol, kids) not in delta:
                    raise ParseError(f"crisp automaton is incomplete: no transition for {symbol} on {kids}")
        return d
    items = []
    for n, t in enumerate(transitions):
        try:
            items.append(((tuple(t["children"]), t["symbol"], t["state"]),
                          _weight(alg, t["weight"], f"transition {n} ({t['symbol']} -> {t['state']})")))
        except KeyError as exc:
            raise ParseError(f"transition {n}: missing field {exc}") from None
    root_items = [(r["state"], _weight(alg, r["weight"], f"root of {r['state']}")) for r in roots]
    return Wta(alphabet, alg, states, items, root_items)


def wsa_to_json(w: Wsa) -> dict:
    alg = w.algebra
    return {
        "algebra": alg.descriptor,
        "letters": list(w.letters),
        "states": list(w.states),
        "initial": [{"state": q, "weight": alg.format(x)} for q, x in w.initial.items()],
        "transitions": [{"from": p, "letter": a, "to": q, "weight": alg.format(x)}
                        for (p, a, q), x in w.transitions.items()],
        "final": [{"state": q, "weight": alg.format(x)} for q, x in w.final.items()],
    }


def wsa_from_json(data: dict) -> Wsa:
    try:
        alg = make_algebra(data["algebra"])
        return Wsa(
            alg,
            tuple(data["letters"]),
            tuple(data["states"]),
            {e["state"]: _weight(alg, e["weight"], "initial weight") for e in data.get("initial", [])},
            {(e["from"], e["letter"], e["to"]): _weight(alg, e["weight"], "transition weight")
             for e in data.get("transitions", [])},
            {e["state"]: _weight(alg, e["weight"], "final weight") for e in data.get("final", [])},
        )
    except KeyError as exc:
        raise ParseError(f"missing field {exc}") from None


def load_json(path: str | Path) -> dict:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc.msg}", exc.pos) from None


def read_automaton(path: str | Path) -> Wta | Dfta:
    return automaton_from_json(load_json(path))


def write_json(path: str | Path, data: dict) -> None:
    Path(path).write_text(json.dumps(data, indent=2) + "\n")
