from __future__ import annotations

import itertools
import json
import random
import shutil
from pathlib import Path

import pytest
from oracles import all_trees, random_wta

from wtakit.algebra import make_algebra
from wtakit.automaton import Wsa, evaluate
from wtakit.cli import EXIT, main
from wtakit.crispdet import crisp_determinize
from wtakit.errors import ParseError
from wtakit.fixtures import ALL, arctic_two_state
from wtakit.serialize import (automaton_from_json, dfta_to_json, load_json, read_automaton, wsa_from_json,
                              wsa_to_json, wta_to_json)
from wtakit.trees import RankedAlphabet, monadic

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main([str(x) for x in argv])
    report = json.loads(capsys.readouterr().out)
    assert code == EXIT[report["verdict"]]
    return code, report


@pytest.mark.parametrize("name", sorted(ALL))
def test_fixture_files_match_the_builders(name):
    data = load_json(DATA / f"{name}.json")
    assert wta_to_json(ALL[name]()) == data
    assert wta_to_json(automaton_from_json(data)) == data


ALGEBRAS = ["boolean", "naturals", "arctic", "tropical", "lcm", "fset", "mat_2", "plusplus", "truncated_plus",
            "primed", {"kind": "flang", "params": {"alphabet": ["a", "b"]}},
            {"kind": "quotient", "params": {"base": "naturals", "by": "modulo", "n": 3}},
            {"kind": "quotient", "params": {"base": "naturals", "by": "threshold", "n": 4}},
            {"kind": "quotient", "params": {"base": "arctic", "by": "past_cut", "weight": "2"}}]


@pytest.mark.parametrize("spec", ALGEBRAS, ids=lambda s: s if isinstance(s, str) else json.dumps(s))
def test_round_trip_over_every_algebra(spec):
    alg = make_algebra(spec)
    weights = list(itertools.islice(alg.elements(), 6))
    rng = random.Random(1)
    sigma = RankedAlphabet([("f", 2), ("g", 1), ("a", 0)])
    a = random_wta(rng, alg, weights, 2, sigma)
    text = json.dumps(wta_to_json(a))
    back = automaton_from_json(json.loads(text))
    assert json.dumps(wta_to_json(back)) == text
    assert back.transitions == a.transitions and back.roots == a.roots


def test_crisp_files_round_trip():
    cd = crisp_determinize(arctic_two_state())
    data = dfta_to_json(cd.dfta)
    assert data["crisp"] is True
    back = automaton_from_json(json.loads(json.dumps(data)))
    assert dfta_to_json(back) == data
    for t in all_trees(back.alphabet, 4):
        assert back.output(t) == cd.dfta.output(t)


def test_wsa_round_trip():
    alg = make_algebra({"kind": "flang", "params": {"alphabet": ["x", "y"]}})
    w = Wsa(alg, ("a", "b"), ("p",), {"p": alg.one}, {("p", "a", "p"): alg.parse(["x"]),
                                                       ("p", "b", "p"): alg.parse(["y"])}, {"p": alg.one})
    assert wsa_to_json(wsa_from_json(wsa_to_json(w))) == wsa_to_json(w)


def test_eval_on_the_counter(capsys):
    code, r = run(capsys, "eval", DATA / "arctic_counter.json", "--tree", "gamma(gamma(alpha))")
    assert (code, r["value"]) == (0, "2")


def test_image_at_most_two(capsys):
    code, r = run(capsys, "decide", "image-at-most", DATA / "arctic_two_state.json", "--k", "2")
    assert code == 1 and r["question"] == "image-at-most-2"
    assert set(r) >= {"question", "verdict", "route", "witness", "fuel_used"}


def test_cfg_finite(capsys, tmp_path):
    code, r = run(capsys, "cfg-finite", DATA / "infinite.cfg")
    assert code == 1
    finite = tmp_path / "finite.cfg"
    finite.write_text("S -> A B\nA -> a\nB -> b\n")
    assert run(capsys, "cfg-finite", finite)[0] == 0


def test_preimage_written_then_queried(capsys, tmp_path):
    out = tmp_path / "p.json"
    code, r = run(capsys, "preimage", DATA / "nat_doubling.json", "--weight", "4", "--out", out)
    assert code == 0 and r["out"] == str(out)
    p = read_automaton(out)
    assert [n for n in range(12) if p.accepts(monadic("gamma", n, "e"))] == [4]
    code, r = run(capsys, "eval", out, "--tree", "gamma(gamma(gamma(gamma(e))))")
    assert r["value"] == "1"
    code, r = run(capsys, "preimage", DATA / "nat_doubling.json", "--weight", "4", "--tree", "gamma(e)")
    assert (code, r["member"]) == (1, False)


def test_decide_questions(capsys):
    counter, two, nat, primed = (DATA / f"{n}.json" for n in
                                 ("arctic_counter", "arctic_two_state", "nat_doubling", "primed_constant"))
    assert run(capsys, "decide", "finite-image", counter)[0] == 1
    assert run(capsys, "decide", "finite-image", two)[0] == 0
    assert run(capsys, "decide", "finite-image", primed)[0] == 2
    _, r = run(capsys, "decide", "cost-finite", nat)
    assert r["witness"] == {"cost": ["1"]}
    assert run(capsys, "decide", "constant", two)[0] == 1
    assert run(capsys, "decide", "one-step", two)[0] == 1
    assert run(capsys, "decide", "e-step", two, "--set", '["-inf", "0", "1"]')[0] == 0
    assert run(capsys, "decide", "image-at-most", two, "--k", "3", "--fuel", "2")[0] == 2


def test_other_commands(capsys, tmp_path):
    code, r = run(capsys, "trim", DATA / "arctic_two_state.json")
    assert r["states"] == ["q1", "q2"]
    code, r = run(capsys, "crisp", DATA / "arctic_two_state.json", "--out", tmp_path / "c.json")
    assert code == 0 and r["image"] == ["0", "1", "-inf"]
    assert run(capsys, "crisp", DATA / "arctic_counter.json", "--fuel", "5")[0] == 2
    code, r = run(capsys, "support", DATA / "nat_doubling.json", "--tree", "gamma(gamma(e))")
    assert r["member"] is True
    code, r = run(capsys, "check-algebra", '"tropical"')
    assert code == 0 and r["flags"]["monotonic"] is False
    code, r = run(capsys, "check-algebra", '"mat_2"', "--set", "[[1, 1, 1, 1], [2, 1, 1, 1], [0, 0, 0, 0]]")
    assert code == 0 and r["samples"][2] == alg_format("mat_2", [0, 0, 0, 0])


def alg_format(spec, literal):
    alg = make_algebra(spec)
    return alg.format(alg.parse(literal))


def test_wsa_eval(capsys, tmp_path):
    alg = make_algebra("mat_2")
    m = alg.parse([1, 1, 1, 1])
    w = Wsa(alg, ("a",), ("p",), {"p": alg.one}, {("p", "a", "p"): m}, {"p": alg.one})
    path = tmp_path / "w.json"
    path.write_text(json.dumps(wsa_to_json(w)))
    code, r = run(capsys, "wsa-eval", path, "--word", "aaa")
    assert code == 0 and r["value"] == r["witness"]["direct"] == alg.format(alg.parse([4, 4, 4, 4]))


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["decide", "sideways", "x.json"],
                                  ["eval", "missing.json", "--tree", "a"],
                                  ["decide", "image-at-most", str(DATA / "arctic_two_state.json")]])
def test_usage_errors(capsys, argv):
    code, r = run(capsys, *argv)
    assert code == 3 and r["verdict"] == "error"


def test_parse_errors_report_position(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"algebra": "arctic",,}')
    with pytest.raises(ParseError) as exc:
        load_json(bad)
    assert exc.value.position == 21
    code, r = run(capsys, "eval", bad, "--tree", "a")
    assert code == 3
    wrong = json.loads((DATA / "arctic_counter.json").read_text())
    wrong["transitions"][1]["weight"] = "one"
    (tmp_path / "w.json").write_text(json.dumps(wrong))
    code, r = run(capsys, "eval", tmp_path / "w.json", "--tree", "alpha")
    assert code == 3 and "gamma" in r["error"]
    code, r = run(capsys, "eval", DATA / "arctic_counter.json", "--tree", "beta(alpha)")
    assert code == 3


def test_module_entry_point(tmp_path):
    import subprocess
    import sys
    shutil.copy(DATA / "arctic_counter.json", tmp_path / "c.json")
    out = subprocess.run([sys.executable, "-m", "wtakit", "eval", "c.json", "--tree", "alpha"], cwd=tmp_path,
                         capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["value"] == "0"


def test_values_survive_the_file_format():
    for name, make in ALL.items():
        a = make()
        back = automaton_from_json(json.loads(json.dumps(wta_to_json(a))))
        for t in all_trees(a.alphabet, 3):
            assert evaluate(back, t) == evaluate(a, t)
