"""Ranked alphabets, trees, contexts, and the term syntax used on the command line."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import ParseError, WtaError

HOLE = "[]"

Position = tuple  # a tuple of 1-based child indices


class RankedAlphabet:
    def __init__(self, symbols: Iterable[tuple[str, int]]):
        self.symbols: tuple[tuple[str, int], ...] = tuple((str(s), int(r)) for s, r in symbols)
        self.rank: dict[str, int] = {}
        for name, rank in self.symbols:
            if name in self.rank:
                raise WtaError(f"duplicate symbol {name!r} in alphabet")
            if rank < 0:
                raise WtaError(f"symbol {name!r} has negative rank")
            if name == HOLE:
                raise WtaError(f"{HOLE!r} is reserved for the context hole")
            self.rank[name] = rank
        if not any(r == 0 for _, r in self.symbols):
            raise WtaError("a ranked alphabet needs at least one nullary symbol")

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, name):
        return name in self.rank

    def of_rank(self, k: int) -> list[str]:
        return [s for s, r in self.symbols if r == k]

    @property
    def max_rank(self) -> int:
        return max(r for _, r in self.symbols)

    def __eq__(self, other):
        return isinstance(other, RankedAlphabet) and self.symbols == other.symbols

    def __hash__(self):
        return hash(self.symbols)

    def __repr__(self):
        return "{" + ", ".join(f"{s}/{r}" for s, r in self.symbols) + "}"


@dataclass(frozen=True, eq=False)
class Tree:
    """A ranked tree; a context is a tree with exactly one ``HOLE`` leaf."""

    symbol: str
    children: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        object.__setattr__(self, "_hash", hash((self.symbol, self.children)))
        height = 1 + max(c.height for c in self.children) if self.children else 0
        object.__setattr__(self, "height", height)
        object.__setattr__(self, "holes", (self.symbol == HOLE) + sum(c.holes for c in self.children))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Tree) or self._hash != other._hash:
            return False
        return self.symbol == other.symbol and self.children == other.children

    @property
    def is_context(self) -> bool:
        return self.holes == 1

    @property
    def size(self) -> int:
        return 1 + sum(c.size for c in self.children)

    def positions(self) -> Iterator[Position]:
        yield ()
        for i, c in enumerate(self.children, 1):
            for p in c.positions():
                yield (i,) + p

    def at(self, pos: Position) -> "Tree":
        node = self
        for i in pos:
            node = node.children[i - 1]
        return node

    def replace(self, pos: Position, new: "Tree") -> "Tree":
        if not pos:
            return new
        i = pos[0]
        kids = list(self.children)
        kids[i - 1] = kids[i - 1].replace(pos[1:], new)
        return Tree(self.symbol, tuple(kids))

    def hole_position(self) -> Position:
        if self.symbol == HOLE:
            return ()
        for i, c in enumerate(self.children, 1):
            if c.holes:
                return (i,) + c.hole_position()
        raise WtaError(f"{self} is not a context")

    def __str__(self):
        if not self.children:
            return self.symbol
        return f"{self.symbol}({','.join(str(c) for c in self.children)})"

    __repr__ = __str__


BOX = Tree(HOLE)


def substitute(c: Tree, z: Tree) -> Tree:
    """c[z]: plug z into the hole of context c."""
    if c.holes != 1:
        raise WtaError(f"{c} is not a context")
    if c.symbol == HOLE:
        return z
    return Tree(c.symbol, tuple(substitute(k, z) if k.holes else k for k in c.children))


def power(c: Tree, n: int) -> Tree:
    result = BOX
    for _ in range(n):
        result = substitute(c, result)
    return result


def chain(symbols: Iterable[str], leaf: str) -> Tree:
    """chain(["g", "n"], "a") is g(n(a)); handy for monadic trees."""
    t = Tree(leaf)
    for s in reversed(list(symbols)):
        t = Tree(s, (t,))
    return t


def monadic(symbol: str, n: int, leaf: str) -> Tree:
    t = Tree(leaf)
    for _ in range(n):
        t = Tree(symbol, (t,))
    return t


def check_tree(t: Tree, alphabet: RankedAlphabet, allow_hole: bool = False) -> None:
    if t.symbol == HOLE:
        if not allow_hole or t.children:
            raise WtaError("unexpected hole")
        return
    if t.symbol not in alphabet:
        raise WtaError(f"symbol {t.symbol!r} not in alphabet {alphabet}")
    if alphabet.rank[t.symbol] != len(t.children):
        raise WtaError(f"symbol {t.symbol!r} has rank {alphabet.rank[t.symbol]}, got {len(t.children)} children")
    for c in t.children:
        check_tree(c, alphabet, allow_hole)


def _trees_by_height(alphabet: RankedAlphabet) -> Iterator[list[Tree]]:
    """Yield lists of trees of height exactly 0, 1, 2, ..."""
    levels: list[list[Tree]] = []
    upto: list[Tree] = []
    while True:
        h = len(levels)
        if h == 0:
            level = [Tree(s) for s in alphabet.of_rank(0)]
        else:
            level = []
            previous = set(levels[-1])
            for name, rank in alphabet:
                if rank == 0:
                    continue
                for kids in itertools.product(upto, repeat=rank):
                    if any(k in previous for k in kids):
                        level.append(Tree(name, kids))
        levels.append(level)
        upto = upto + level
        yield level


def _contexts_by_height(alphabet: RankedAlphabet) -> Iterator[list[Tree]]:
    trees = _trees_by_height(alphabet)
    tree_levels: list[list[Tree]] = []
    levels: list[list[Tree]] = []
    while True:
        h = len(levels)
        if h == 0:
            level = [BOX]
        else:
            tree_levels.append(next(trees))
            trees_upto = [t for lv in tree_levels for t in lv]
            ctx_upto = [c for lv in levels for c in lv]
            top_trees, top_ctx = set(tree_levels[-1]), set(levels[-1])
            level = []
            for name, rank in alphabet:
                for hole in range(rank):
                    pools = [ctx_upto if i == hole else trees_upto for i in range(rank)]
                    for kids in itertools.product(*pools):
                        if any(k in (top_ctx if i == hole else top_trees) for i, k in enumerate(kids)):
                            level.append(Tree(name, kids))
        levels.append(level)
        yield level


def enumerate_trees(alphabet: RankedAlphabet, max_height: int | None = None) -> Iterator[Tree]:
    """All trees by increasing height; never ends when ``max_height`` is None."""
    levels = _trees_by_height(alphabet)
    h = 0
    while max_height is None or h <= max_height:
        level = next(levels)
        yield from level
        if not level and h > 0:
            return
        h += 1


def enumerate_contexts(alphabet: RankedAlphabet, max_height: int) -> Iterator[Tree]:
    levels = _contexts_by_height(alphabet)
    for _ in range(max_height + 1):
        yield from next(levels)


# term syntax: name(child, ..., child); the hole is written []

_DELIMS = set("(),")


def parse_term(text: str, alphabet: RankedAlphabet | None = None) -> Tree:
    pos = 0

    def skip():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def node() -> Tree:
        nonlocal pos
        skip()
        if text.startswith(HOLE, pos):
            pos += len(HOLE)
            return BOX
        start = pos
        while pos < len(text) and text[pos] not in _DELIMS and not text[pos].isspace():
            pos += 1
        name = text[start:pos]
        if not name:
            raise ParseError("expected a symbol", start)
        skip()
        kids = []
        if pos < len(text) and text[pos] == "(":
            pos += 1
            while True:
                kids.append(node())
                skip()
                if pos < len(text) and text[pos] == ",":
                    pos += 1
                    continue
                if pos < len(text) and text[pos] == ")":
                    pos += 1
                    break
                raise ParseError("expected ',' or ')'", pos)
        if alphabet is not None:
            if name not in alphabet:
                raise ParseError(f"unknown symbol {name!r}", start)
            if alphabet.rank[name] != len(kids):
                raise ParseError(f"symbol {name!r} has rank {alphabet.rank[name]} but {len(kids)} children", start)
        return Tree(name, tuple(kids))

    tree = node()
    skip()
    if pos != len(text):
        raise ParseError("trailing input", pos)
    if tree.holes > 1:
        raise ParseError("a context may contain only one hole", 0)
    return tree
