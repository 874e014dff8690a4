"""Context-free grammars: the text format, reduction, and bounded word enumeration."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import ParseError

EPSILON_TOKENS = {"ε", "eps", "epsilon"}


@dataclass(frozen=True)
class Grammar:
    nonterminals: tuple
    terminals: tuple
    rules: tuple  # of (lhs, rhs tuple)
    start: str

    @property
    def is_empty(self) -> bool:
        return self.start not in productive_nonterminals(self)

    def __str__(self):
        lines = []
        for lhs in self.nonterminals:
            alts = [" ".join(rhs) or "ε" for l, rhs in self.rules if l == lhs]
            if alts:
                lines.append(f"{lhs} -> {' | '.join(alts)}")
        return "\n".join(lines)


def is_nonterminal_token(token: str) -> bool:
    return token[:1].isupper()


def parse_grammar(text: str) -> Grammar:
    """Parse rules like ``S -> a S b | ε``, one left-hand side per line.

    Tokens are whitespace-separated; tokens starting with an uppercase letter
    are nonterminals.  The first rule's left-hand side is the start symbol.
    """
    rules = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" not in line:
            raise ParseError(f"line {lineno}: expected '->'")
        lhs, rhs = line.split("->", 1)
        lhs = lhs.strip()
        if not is_nonterminal_token(lhs) or len(lhs.split()) != 1:
            raise ParseError(f"line {lineno}: left-hand side {lhs!r} must be one nonterminal")
        for alt in rhs.split("|"):
            tokens = tuple(t for t in alt.split() if t not in EPSILON_TOKENS)
            rules.append((lhs, tokens))
    if not rules:
        raise ParseError("grammar has no rules")
    return _assemble(rules, rules[0][0])


def _assemble(rules, start) -> Grammar:
    nts, ts = [], []
    for lhs, rhs in rules:
        for tok in (lhs,) + rhs:
            bucket = nts if is_nonterminal_token(tok) else ts
            if tok not in bucket:
                bucket.append(tok)
    if start not in nts:
        nts.insert(0, start)
    return Grammar(tuple(nts), tuple(ts), tuple(rules), start)


def productive_nonterminals(g: Grammar) -> set:
    nts = set(g.nonterminals)
    done: set = set()
    changed = True
    while changed:
        changed = False
        for lhs, rhs in g.rules:
            if lhs not in done and all(t in done or t not in nts for t in rhs):
                done.add(lhs)
                changed = True
    return done


def reduce_grammar(g: Grammar) -> Grammar:
    """Drop unproductive, then unreachable, nonterminals and their rules."""
    nts = set(g.nonterminals)
    good = productive_nonterminals(g)
    rules = [(l, r) for l, r in g.rules if l in good and all(t in good or t not in nts for t in r)]
    if g.start not in good:
        return Grammar((g.start,), (), (), g.start)
    reach, todo = {g.start}, [g.start]
    while todo:
        a = todo.pop()
        for l, r in rules:
            if l == a:
                for t in r:
                    if t in nts and t not in reach:
                        reach.add(t)
                        todo.append(t)
    kept = tuple((l, r) for l, r in rules if l in reach)
    used = {t for _, r in kept for t in r}
    return Grammar(
        tuple(a for a in g.nonterminals if a in reach),
        tuple(t for t in g.terminals if t in used),
        kept,
        g.start,
    )


def words_up_to(g: Grammar, max_length: int) -> set:
    """All words of L(g) with at most ``max_length`` terminals (as tuples)."""
    nts = set(g.nonterminals)
    table = {a: set() for a in nts}
    changed = True
    while changed:
        changed = False
        for lhs, rhs in g.rules:
            pools = [table[t] if t in nts else {(t,)} for t in rhs]
            for parts in product(*pools):
                word = tuple(x for p in parts for x in p)
                if len(word) <= max_length and word not in table[lhs]:
                    table[lhs].add(word)
                    changed = True
    return table.get(g.start, set())
