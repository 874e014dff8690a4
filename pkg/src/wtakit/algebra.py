"""Weight algebras (strong bimonoids), homomorphisms and finite quotients.

Every algebra is an immutable object with ``add``, ``mul``, ``zero`` and
``one``.  Ordered algebras expose ``leq``; past-finite ones also expose
``past(b)``, a finite list of everything below ``b``.  Elements are plain
hashable Python values so they can key dictionaries and sets.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, fields
from functools import cached_property
from typing import Any, Callable, Iterable, Iterator

from .errors import AlgebraError, ParseError


@dataclass(frozen=True)
class Flags:
    """Capability flags.  ``None`` means unknown."""

    commutative: bool | None = None
    left_distributive: bool | None = None
    right_distributive: bool | None = None
    idempotent: bool | None = None
    monotonic: bool | None = None
    past_finite: bool | None = None
    additively_locally_finite: bool | None = None

    @property
    def semiring(self) -> bool:
        return self.left_distributive is True and self.right_distributive is True

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class AdditiveOrder:
    status: str  # "finite", "infinite" or "unknown"
    index: int | None = None
    period: int | None = None

    @property
    def is_finite(self) -> bool:
        return self.status == "finite"


def finite_order(index: int, period: int) -> AdditiveOrder:
    return AdditiveOrder("finite", index, period)


INFINITE = AdditiveOrder("infinite")
UNKNOWN = AdditiveOrder("unknown")


@dataclass(frozen=True)
class Special:
    """A freshly adjoined zero or unit element."""

    name: str

    def __repr__(self) -> str:
        return self.name


ZERO = Special("zero")
ONE = Special("one")


@dataclass(frozen=True)
class Primed:
    """An element n' of the primed copy of the positive integers."""

    value: int

    def __repr__(self) -> str:
        return f"{self.value}'"


class WeightAlgebra:
    kind = "abstract"
    zero: Any
    one: Any
    flags = Flags()
    finite = False
    leq: Callable[[Any, Any], bool] | None = None
    past: Callable[[Any], list] | None = None

    def add(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def additive_order_hint(self, b) -> AdditiveOrder | None:
        return None

    def parse(self, literal):
        raise NotImplementedError

    def format(self, element):
        return str(element)

    def elements(self) -> Iterator:
        """Enumerate the carrier (possibly forever)."""
        raise NotImplementedError

    def params(self) -> dict:
        return {}

    @property
    def descriptor(self) -> dict:
        return {"kind": self.kind, "params": self.params()}

    # derived operations

    def sum(self, items: Iterable):
        total = self.zero
        for x in items:
            total = self.add(total, x)
        return total

    def product(self, items: Iterable):
        total = self.one
        for x in items:
            total = self.mul(total, x)
        return total

    def times(self, n: int, b):
        """n·b, the n-fold sum of b (by doubling; ⊕ is associative)."""
        result, base = self.zero, b
        while n:
            if n & 1:
                result = self.add(result, base)
            n >>= 1
            if n:
                base = self.add(base, base)
        return result

    def power(self, b, n: int):
        result, base = self.one, b
        while n:
            if n & 1:
                result = self.mul(result, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        return result

    def lt(self, a, b) -> bool:
        return a != b and self.leq(a, b)

    def sort_key(self, element):
        text = json.dumps(self.format(element))
        return (len(text), text)

    def sorted(self, items: Iterable) -> list:
        return sorted(items, key=self.sort_key)

    def __eq__(self, other):
        return isinstance(other, WeightAlgebra) and self.descriptor == other.descriptor

    def __hash__(self):
        return hash(json.dumps(self.descriptor, sort_keys=True))

    def __repr__(self):
        params = self.params()
        return f"{self.kind}({params})" if params else self.kind


def _parse_int(literal, minimum: int = 0) -> int:
    if isinstance(literal, bool):
        raise ParseError(f"not an integer literal: {literal!r}")
    if isinstance(literal, int):
        value = literal
    elif isinstance(literal, str) and literal.strip().lstrip("-").isdigit():
        value = int(literal.strip())
    else:
        raise ParseError(f"not an integer literal: {literal!r}")
    if value < minimum:
        raise ParseError(f"literal {literal!r} below {minimum}")
    return value


def _injectively_dominated(small, large, below: Callable[[Any, Any], bool]) -> bool:
    """Is there an injective map f: small -> large with below(x, f(x)) for all x?"""
    small, large = list(small), list(large)
    if len(small) > len(large):
        return False
    match: dict[int, int] = {}

    def augment(i: int, seen: set) -> bool:
        for j, y in enumerate(large):
            if j in seen or not below(small[i], y):
                continue
            seen.add(j)
            if j not in match or augment(match[j], seen):
                match[j] = i
                return True
        return False

    return all(augment(i, set()) for i in range(len(small)))


class Boolean(WeightAlgebra):
    kind = "boolean"
    zero, one = 0, 1
    finite = True
    flags = Flags(True, True, True, True, True, True, True)

    def add(self, a, b):
        return a | b

    def mul(self, a, b):
        return a & b

    def leq(self, a, b):
        return a <= b

    def past(self, b):
        return list(range(b + 1))

    def additive_order_hint(self, b):
        return finite_order(1, 1)

    def parse(self, literal):
        value = _parse_int(literal)
        if value > 1:
            raise ParseError(f"boolean literal must be 0 or 1: {literal!r}")
        return value

    def elements(self):
        return iter((0, 1))


class Naturals(WeightAlgebra):
    kind = "naturals"
    zero, one = 0, 1
    flags = Flags(True, True, True, False, True, True, False)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def times(self, n, b):
        return n * b

    def leq(self, a, b):
        return a <= b

    def past(self, b):
        return list(range(b + 1))

    def additive_order_hint(self, b):
        return finite_order(1, 1) if b == 0 else INFINITE

    def parse(self, literal):
        return _parse_int(literal)

    def elements(self):
        return itertools.count()


NEG_INF = float("-inf")
POS_INF = float("inf")


class Arctic(WeightAlgebra):
    """(ℕ ∪ {-inf}, max, +, -inf, 0)."""

    kind = "arctic"
    zero, one = NEG_INF, 0
    flags = Flags(True, True, True, True, True, True, True)

    def add(self, a, b):
        return max(a, b)

    def mul(self, a, b):
        return NEG_INF if a == NEG_INF or b == NEG_INF else a + b

    def leq(self, a, b):
        return a <= b

    def past(self, b):
        return [NEG_INF] + ([] if b == NEG_INF else list(range(b + 1)))

    def additive_order_hint(self, b):
        return finite_order(1, 1)

    def parse(self, literal):
        if literal == "-inf":
            return NEG_INF
        return _parse_int(literal)

    def format(self, element):
        return "-inf" if element == NEG_INF else str(element)

    def elements(self):
        return itertools.chain([NEG_INF], itertools.count())


class Tropical(WeightAlgebra):
    """(ℕ ∪ {inf}, min, +, inf, 0).  Admits no past-finite monotonic order."""

    kind = "tropical"
    zero, one = POS_INF, 0
    flags = Flags(True, True, True, True, False, False, True)

    def add(self, a, b):
        return min(a, b)

    def mul(self, a, b):
        return POS_INF if a == POS_INF or b == POS_INF else a + b

    def additive_order_hint(self, b):
        return finite_order(1, 1)

    def parse(self, literal):
        if literal == "inf":
            return POS_INF
        return _parse_int(literal)

    def format(self, element):
        return "inf" if element == POS_INF else str(element)

    def elements(self):
        return itertools.chain([POS_INF], itertools.count())


class Lcm(WeightAlgebra):
    """(ℕ, lcm, ·, 0, 1) with lcm(0, n) = n."""

    kind = "lcm"
    zero, one = 0, 1
    flags = Flags(True, True, True, True, True, True, True)

    def add(self, a, b):
        if a == 0 or b == 0:
            return a or b
        from math import lcm

        return lcm(a, b)

    def mul(self, a, b):
        return a * b

    def leq(self, a, b):
        return a <= b

    def past(self, b):
        return list(range(b + 1))

    def additive_order_hint(self, b):
        return finite_order(1, 1)

    def parse(self, literal):
        return _parse_int(literal)

    def elements(self):
        return itertools.count()


class FiniteSets(WeightAlgebra):
    """Finite subsets of ℕ with union and elementwise addition."""

    kind = "fset"
    zero, one = frozenset(), frozenset({0})
    flags = Flags(True, True, True, True, True, True, True)

    def add(self, a, b):
        return a | b

    def mul(self, a, b):
        return frozenset(x + y for x in a for y in b)

    def leq(self, a, b):
        return _injectively_dominated(a, b, lambda x, y: x <= y)

    def past(self, b):
        if not b:
            return [self.zero]
        pool = range(max(b) + 1)
        found = []
        for size in range(len(b) + 1):
            for combo in itertools.combinations(pool, size):
                candidate = frozenset(combo)
                if self.leq(candidate, b):
                    found.append(candidate)
        return found

    def additive_order_hint(self, b):
        return finite_order(1, 1)

    def parse(self, literal):
        if not isinstance(literal, list):
            raise ParseError(f"fset literal must be an array: {literal!r}")
        return frozenset(_parse_int(x) for x in literal)

    def format(self, element):
        return sorted(element)

    def elements(self):
        yield self.zero
        for top in itertools.count():
            for size in range(top + 1):
                for rest in itertools.combinations(range(top), size):
                    yield frozenset(rest + (top,))


class Matrices(WeightAlgebra):
    """Positive n×n integer matrices plus the zero and identity matrices."""

    kind = "mat"

    def __init__(self, n: int):
        if not isinstance(n, int) or n < 1:
            raise AlgebraError(f"matrix dimension must be >= 1, got {n!r}")
        self.n = n
        self.zero = tuple(tuple(0 for _ in range(n)) for _ in range(n))
        self.one = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        self.flags = Flags(n == 1, True, True, False, True, True, False)

    def params(self):
        return {"n": self.n}

    def add(self, a, b):
        return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))

    def mul(self, a, b):
        cols = list(zip(*b))
        return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)

    def leq(self, a, b):
        return all(x <= y for ra, rb in zip(a, b) for x, y in zip(ra, rb))

    def past(self, b):
        found = [self.zero]
        if self.leq(self.one, b) and self.one != self.zero:
            found.append(self.one)
        flat = [x for row in b for x in row]
        if min(flat) >= 1:
            for entries in itertools.product(*[range(1, x + 1) for x in flat]):
                m = self._shape(entries)
                if m != self.one:
                    found.append(m)
        return found

    def additive_order_hint(self, b):
        return finite_order(1, 1) if b == self.zero else INFINITE

    def _shape(self, flat):
        n = self.n
        return tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n))

    def parse(self, literal):
        if not isinstance(literal, list):
            raise ParseError(f"matrix literal must be an array: {literal!r}")
        flat = [x for row in literal for x in row] if literal and isinstance(literal[0], list) else literal
        if len(flat) != self.n * self.n:
            raise ParseError(f"matrix literal needs {self.n * self.n} entries, got {len(flat)}")
        m = self._shape([_parse_int(x) for x in flat])
        if m not in (self.zero, self.one) and min(flat) < 1:
            raise ParseError(f"matrix {literal!r} is neither zero, identity nor positive")
        return m

    def format(self, element):
        return [x for row in element for x in row]

    def elements(self):
        yield self.zero
        yield self.one
        for top in itertools.count(1):
            for flat in itertools.product(range(1, top + 1), repeat=self.n * self.n):
                if top in flat:
                    m = self._shape(flat)
                    if m != self.one:
                        yield m


def _is_subsequence(short: str, long: str) -> bool:
    it = iter(long)
    return all(ch in it for ch in short)


def _subsequences(word: str) -> set:
    found = {""}
    for ch in word:
        found |= {w + ch for w in found}
    return found


class FiniteLanguages(WeightAlgebra):
    """Finite languages over an alphabet with union and concatenation."""

    kind = "flang"
    zero, one = frozenset(), frozenset({""})

    def __init__(self, alphabet: Iterable[str]):
        letters = tuple(sorted(set(alphabet)))
        if not letters or any(len(a) != 1 for a in letters):
            raise AlgebraError(f"flang needs a nonempty alphabet of single characters, got {alphabet!r}")
        self.alphabet = letters
        self.flags = Flags(len(letters) == 1, True, True, True, True, True, True)

    def params(self):
        return {"alphabet": list(self.alphabet)}

    def add(self, a, b):
        return a | b

    def mul(self, a, b):
        return frozenset(u + v for u in a for v in b)

    def leq(self, a, b):
        return _injectively_dominated(a, b, _is_subsequence)

    def past(self, b):
        pool = sorted(set().union(*(_subsequences(w) for w in b)) if b else set())
        found = []
        for size in range(len(b) + 1):
            for combo in itertools.combinations(pool, size):
                candidate = frozenset(combo)
                if self.leq(candidate, b):
                    found.append(candidate)
        return found

    def additive_order_hint(self, b):
        return finite_order(1, 1)

    def parse(self, literal):
        if not isinstance(literal, list) or not all(isinstance(w, str) for w in literal):
            raise ParseError(f"flang literal must be an array of strings: {literal!r}")
        for w in literal:
            for ch in w:
                if ch not in self.alphabet:
                    raise ParseError(f"letter {ch!r} of {w!r} not in alphabet {list(self.alphabet)}")
        return frozenset(literal)

    def format(self, element):
        return sorted(element, key=lambda w: (len(w), w))

    def elements(self):
        seen = set()
        for budget in itertools.count():
            pool = ["".join(p) for n in range(budget + 1) for p in itertools.product(self.alphabet, repeat=n)]
            for size in range(budget + 1):
                for combo in itertools.combinations(pool, size):
                    lang = frozenset(combo)
                    if lang not in seen:
                        seen.add(lang)
                        yield lang


class PlusPlus(WeightAlgebra):
    """ℕ with a new zero: ⊕ and ⊗ are both ordinary addition, 0 is the unit."""

    kind = "plusplus"
    zero, one = ZERO, 0
    flags = Flags(True, False, False, False, True, True, False)

    def add(self, a, b):
        if a == ZERO:
            return b
        if b == ZERO:
            return a
        return a + b

    def mul(self, a, b):
        if a == ZERO or b == ZERO:
            return ZERO
        return a + b

    def leq(self, a, b):
        if a == ZERO:
            return True
        return b != ZERO and a <= b

    def past(self, b):
        return [ZERO] + ([] if b == ZERO else list(range(b + 1)))

    def additive_order_hint(self, b):
        return finite_order(1, 1) if b in (ZERO, 0) else INFINITE

    def parse(self, literal):
        return ZERO if literal == "zero" else _parse_int(literal)

    def format(self, element):
        return "zero" if element == ZERO else str(element)

    def elements(self):
        return itertools.chain([ZERO], itertools.count())


class TruncatedPlus(WeightAlgebra):
    """(ℕ, +', ·, 0, 1) where +' saturates at 100 below the cap and takes max above it."""

    kind = "truncated_plus"
    zero, one = 0, 1
    cap = 100
    flags = Flags(True, False, False, False, True, True, True)

    def add(self, a, b):
        if a <= self.cap and b <= self.cap:
            return min(a + b, self.cap)
        return max(a, b)

    def mul(self, a, b):
        return a * b

    def leq(self, a, b):
        return a <= b

    def past(self, b):
        return list(range(b + 1))

    def parse(self, literal):
        return _parse_int(literal)

    def elements(self):
        return itertools.count()


_INDUCED_PLUS = {"add": lambda a, b: a + b, "max": max}
_INDUCED_TIMES = {"add": lambda a, b: a + b, "affine": lambda a, b: a + b + 2 * a * b}


class Induced(WeightAlgebra):
    """Positive integers with a fresh zero and unit adjoined below them.

    ``plus`` picks the addition on ℕ₊ ("add" or "max"); ``times`` the
    multiplication ("add" or "affine", i.e. a + b + 2ab).
    """

    kind = "induced"
    zero, one = ZERO, ONE

    def __init__(self, plus: str = "add", times: str = "affine"):
        if plus not in _INDUCED_PLUS or times not in _INDUCED_TIMES:
            raise AlgebraError(f"induced algebra: unknown operations plus={plus!r} times={times!r}")
        self.plus_name, self.times_name = plus, times
        self._plus, self._times = _INDUCED_PLUS[plus], _INDUCED_TIMES[times]
        dist = plus == "max"
        self.flags = Flags(True, dist, dist, dist, True, True, dist)

    def params(self):
        return {"plus": self.plus_name, "times": self.times_name}

    def add(self, a, b):
        if a == ZERO:
            return b
        if b == ZERO:
            return a
        if a == ONE:
            return b
        if b == ONE:
            return a
        return self._plus(a, b)

    def mul(self, a, b):
        if a == ZERO or b == ZERO:
            return ZERO
        if a == ONE:
            return b
        if b == ONE:
            return a
        return self._times(a, b)

    def _rank(self, a):
        return -2 if a == ZERO else -1 if a == ONE else a

    def leq(self, a, b):
        return self._rank(a) <= self._rank(b)

    def past(self, b):
        return [ZERO] + ([] if b == ZERO else [ONE]) + (list(range(1, b + 1)) if isinstance(b, int) else [])

    def additive_order_hint(self, b):
        if b in (ZERO, ONE) or self.plus_name == "max":
            return finite_order(1, 1)
        return INFINITE

    def parse(self, literal):
        if literal == "zero":
            return ZERO
        if literal == "one":
            return ONE
        return _parse_int(literal, minimum=1)

    def format(self, element):
        return element.name if isinstance(element, Special) else str(element)

    def elements(self):
        return itertools.chain([ZERO, ONE], itertools.count(1))


class PrimedChain(WeightAlgebra):
    """ℕ₊ ∪ ℕ'₊ ∪ {zero, one}: idempotent, monotonic, not past-finite.

    The order is the chain zero < one < 1 < 2 < ... < 1' < 2' < ...;
    ⊕ is the join, ⊗ adds values and a primed operand makes the result primed.
    """

    kind = "primed"
    zero, one = ZERO, ONE
    # 1' ⊗ (2 ⊕ 1') = 2' but 1'⊗2 ⊕ 1'⊗1' = 3'
    flags = Flags(True, False, False, True, True, False, True)

    def _rank(self, a):
        if a == ZERO:
            return (0, 0)
        if a == ONE:
            return (1, 0)
        if isinstance(a, Primed):
            return (3, a.value)
        return (2, a)

    def leq(self, a, b):
        return self._rank(a) <= self._rank(b)

    def add(self, a, b):
        return b if self.leq(a, b) else a

    def mul(self, a, b):
        if a == ZERO or b == ZERO:
            return ZERO
        if a == ONE:
            return b
        if b == ONE:
            return a
        total = (a.value if isinstance(a, Primed) else a) + (b.value if isinstance(b, Primed) else b)
        return Primed(total) if isinstance(a, Primed) or isinstance(b, Primed) else total

    def additive_order_hint(self, b):
        return finite_order(1, 1)

    def parse(self, literal):
        if literal in ("zero", "one"):
            return ZERO if literal == "zero" else ONE
        if isinstance(literal, str) and literal.endswith("'"):
            return Primed(_parse_int(literal[:-1], minimum=1))
        return _parse_int(literal, minimum=1)

    def format(self, element):
        if isinstance(element, Special):
            return element.name
        return repr(element) if isinstance(element, Primed) else str(element)

    def elements(self):
        yield ZERO
        yield ONE
        for n in itertools.count(1):
            yield n
            yield Primed(n)


class QuotientAlgebra(WeightAlgebra):
    """A finite quotient of ``base``; elements are class representatives."""

    kind = "quotient"
    finite = True

    def __init__(self, base: WeightAlgebra, carrier: list, classify: Callable, how: dict):
        self.base = base
        self.carrier = tuple(carrier)
        self.classify = classify
        self.how = how
        self.zero = classify(base.zero)
        self.one = classify(base.one)
        if self.zero == self.one:
            raise AlgebraError(f"degenerate quotient {how}: zero and one fall in the same class")

    def params(self):
        return {"base": self.base.descriptor, **self.how}

    def add(self, a, b):
        return self.classify(self.base.add(a, b))

    def mul(self, a, b):
        return self.classify(self.base.mul(a, b))

    def parse(self, literal):
        return self.classify(self.base.parse(literal))

    def format(self, element):
        return self.base.format(element)

    def elements(self):
        return iter(self.carrier)

    def sort_key(self, element):
        return self.base.sort_key(element)

    @cached_property
    def flags(self) -> Flags:
        return exhaustive_flags(self, self.carrier)


def exhaustive_flags(alg: WeightAlgebra, carrier) -> Flags:
    """Decide the algebraic flags of a finite algebra by checking every tuple."""
    xs = list(carrier)
    pairs = list(itertools.product(xs, repeat=2))
    triples = list(itertools.product(xs, repeat=3))
    return Flags(
        commutative=all(alg.mul(a, b) == alg.mul(b, a) for a, b in pairs),
        left_distributive=all(alg.mul(a, alg.add(b, c)) == alg.add(alg.mul(a, b), alg.mul(a, c)) for a, b, c in triples),
        right_distributive=all(alg.mul(alg.add(a, b), c) == alg.add(alg.mul(a, c), alg.mul(b, c)) for a, b, c in triples),
        idempotent=all(alg.add(a, a) == a for a in xs),
        # a monotonic strong bimonoid with three or more elements is infinite
        monotonic=False if len(xs) > 2 else None,
        past_finite=None,
        additively_locally_finite=True,
    )


@dataclass(frozen=True)
class Homomorphism:
    source: WeightAlgebra
    target: WeightAlgebra
    map: Callable[[Any], Any]

    def __call__(self, element):
        return self.map(element)

    def violations(self, samples: Iterable) -> list:
        """Sample pairs on which a homomorphism law fails."""
        s, t, h = self.source, self.target, self.map
        bad = []
        if h(s.zero) != t.zero:
            bad.append(("zero", (s.zero,)))
        if h(s.one) != t.one:
            bad.append(("one", (s.one,)))
        for a, b in itertools.product(list(samples), repeat=2):
            if h(s.add(a, b)) != t.add(h(a), h(b)):
                bad.append(("add", (a, b)))
            if h(s.mul(a, b)) != t.mul(h(a), h(b)):
                bad.append(("mul", (a, b)))
        return bad


def identity_homomorphism(alg: WeightAlgebra) -> Homomorphism:
    return Homomorphism(alg, alg, lambda x: x)


def quotient(alg: WeightAlgebra, kind: str, param) -> tuple[QuotientAlgebra, Homomorphism]:
    """Finite quotient of ``alg``.

    ``kind`` is "threshold" (classes {0},…,{n} and everything above n),
    "modulo" (residues mod n), both over the naturals, or "past_cut"
    (singletons below ``param`` plus one absorbing class for the rest).
    """
    if kind in ("threshold", "modulo"):
        if not isinstance(alg, Naturals):
            raise AlgebraError(f"{kind} quotient requires the naturals, got {alg!r}")
        n = param
        if kind == "threshold":
            if not isinstance(n, int) or n < 0:
                raise AlgebraError(f"threshold needs n >= 0, got {n!r}")
            q = QuotientAlgebra(alg, range(n + 2), lambda x, n=n: min(x, n + 1), {"by": "threshold", "n": n})
        else:
            if not isinstance(n, int) or n < 1:
                raise AlgebraError(f"modulo needs n >= 1, got {n!r}")
            q = QuotientAlgebra(alg, range(n), lambda x, n=n: x % n, {"by": "modulo", "n": n})
        return q, Homomorphism(alg, q, q.classify)
    if kind == "past_cut":
        return _past_cut(alg, param)
    raise AlgebraError(f"unknown quotient kind {kind!r}")


def _past_cut(alg: WeightAlgebra, b) -> tuple[QuotientAlgebra, Homomorphism]:
    if alg.past is None or alg.flags.past_finite is not True:
        raise AlgebraError(f"past_cut needs a past-finite algebra with past enumeration, got {alg!r}")
    below = alg.past(b)
    below_set = set(below)
    # look for an element outside past(b): first by closing past(b), then by enumeration
    outside = {alg.add(x, y) for x in below for y in below} | {alg.mul(x, y) for x in below for y in below}
    outside -= below_set
    rep = None
    if outside:
        minimal = [x for x in outside if not any(y != x and alg.leq(y, x) for y in outside)]
        rep = alg.sorted(minimal)[0]
    elif not alg.finite:
        for x in itertools.islice(alg.elements(), 100000):
            if x not in below_set:
                rep = x
                break
    elif set(alg.elements()) - below_set:
        rep = alg.sorted(set(alg.elements()) - below_set)[0]

    def classify(x, below_set=below_set, rep=rep):
        return x if x in below_set else rep

    carrier = alg.sorted(below) + ([rep] if rep is not None else [])
    q = QuotientAlgebra(alg, carrier, classify, {"by": "past_cut", "weight": alg.format(b)})
    return q, Homomorphism(alg, q, classify)


_SIMPLE = {
    "boolean": Boolean,
    "naturals": Naturals,
    "arctic": Arctic,
    "tropical": Tropical,
    "lcm": Lcm,
    "fset": FiniteSets,
    "plusplus": PlusPlus,
    "truncated_plus": TruncatedPlus,
    "primed": PrimedChain,
}


def make_algebra(spec) -> WeightAlgebra:
    """Build an algebra from a descriptor such as ``"arctic"``, ``"mat_2"`` or
    ``{"kind": "flang", "params": {"alphabet": ["a", "b"]}}``."""
    if isinstance(spec, WeightAlgebra):
        return spec
    if isinstance(spec, str):
        kind, params = spec, {}
        if kind.startswith("mat_"):
            try:
                params = {"n": int(kind[4:])}
            except ValueError:
                raise AlgebraError(f"bad matrix kind {spec!r}") from None
            kind = "mat"
    elif isinstance(spec, dict) and "kind" in spec:
        kind, params = spec["kind"], dict(spec.get("params") or {})
    else:
        raise AlgebraError(f"bad algebra descriptor {spec!r}")
    if kind in _SIMPLE:
        if params:
            raise AlgebraError(f"{kind} takes no parameters, got {params}")
        return _SIMPLE[kind]()
    if kind == "mat":
        return Matrices(params.get("n"))
    if kind == "flang":
        return FiniteLanguages(params.get("alphabet") or ())
    if kind == "induced":
        return Induced(params.get("plus", "add"), params.get("times", "affine"))
    if kind == "quotient":
        base = make_algebra(params.get("base"))
        by = params.get("by")
        if by == "past_cut":
            return quotient(base, by, base.parse(params.get("weight")))[0]
        return quotient(base, by, params.get("n"))[0]
    raise AlgebraError(f"unknown algebra kind {kind!r}")


@dataclass(frozen=True)
class Violation:
    law: str
    witness: tuple


def check_axioms(alg: WeightAlgebra, samples: Iterable, order: Callable | None = None) -> list[Violation]:
    """Test the strong-bimonoid laws and the declared flags on ``samples``.

    A flag declared true must hold on every sample tuple.  A commutativity,
    distributivity or idempotence flag declared false must be refuted by some
    sample tuple, otherwise it is reported as a mismatch.  Passing ``order``
    checks the monotonicity laws against that order instead of ``alg.leq``.
    """
    xs = list(dict.fromkeys(samples))
    out: list[Violation] = []
    add, mul, zero, one = alg.add, alg.mul, alg.zero, alg.one
    pairs = list(itertools.product(xs, repeat=2))
    triples = list(itertools.product(xs, repeat=3))

    def first(cases, law):
        for case in cases:
            if not law(*case):
                return case
        return None

    def require(name, cases, law):
        bad = first(cases, law)
        if bad is not None:
            out.append(Violation(name, bad))

    if zero == one:
        out.append(Violation("zero != one", (zero, one)))
    require("(a+b)+c = a+(b+c)", triples, lambda a, b, c: add(add(a, b), c) == add(a, add(b, c)))
    require("a+b = b+a", pairs, lambda a, b: add(a, b) == add(b, a))
    require("0+a = a", [(a,) for a in xs], lambda a: add(zero, a) == a)
    require("(a*b)*c = a*(b*c)", triples, lambda a, b, c: mul(mul(a, b), c) == mul(a, mul(b, c)))
    require("1*a = a = a*1", [(a,) for a in xs], lambda a: mul(one, a) == a == mul(a, one))
    require("0*a = 0 = a*0", [(a,) for a in xs], lambda a: mul(zero, a) == zero == mul(a, zero))

    laws = {
        "commutative": ("a*b = b*a", pairs, lambda a, b: mul(a, b) == mul(b, a)),
        "left_distributive": ("a*(b+c) = a*b + a*c", triples,
                              lambda a, b, c: mul(a, add(b, c)) == add(mul(a, b), mul(a, c))),
        "right_distributive": ("(a+b)*c = a*c + b*c", triples,
                               lambda a, b, c: mul(add(a, b), c) == add(mul(a, c), mul(b, c))),
        "idempotent": ("a+a = a", [(a,) for a in xs], lambda a: add(a, a) == a),
    }
    for flag, (name, cases, law) in laws.items():
        declared = getattr(alg.flags, flag)
        if declared is True:
            require(name, cases, law)
        elif declared is False and first(cases, law) is None:
            out.append(Violation(f"flag-mismatch: {flag} declared false but {name} holds on all samples", ()))

    leq = order or (alg.leq if alg.flags.monotonic is True else None)
    if leq is not None:
        require("a <= a+b", pairs, lambda a, b: leq(a, add(a, b)))
        nonzero = [x for x in xs if x != zero]
        cases = [(a, b, c) for a in nonzero for b in nonzero for c in nonzero if b != one]
        require("a*c < a*b*c", cases,
                lambda a, b, c: mul(a, c) != mul(mul(a, b), c) and leq(mul(a, c), mul(mul(a, b), c)))

    if alg.flags.past_finite is True and alg.past is not None and alg.leq is not None:
        for a, b in pairs:
            if (a in set(alg.past(b))) != bool(alg.leq(a, b)):
                out.append(Violation("a in past(b) iff a <= b", (a, b)))
                break

    for b in xs:
        hint = alg.additive_order_hint(b)
        if hint is not None and hint.is_finite and not _order_consistent(alg, b, hint.index, hint.period):
            out.append(Violation("additive order hint", (b, hint.index, hint.period)))
    return out


def _order_consistent(alg, b, index, period) -> bool:
    multiples = [alg.times(m, b) for m in range(1, index + period + 1)]
    if multiples[index - 1] != multiples[index + period - 1]:
        return False
    return len(set(multiples[:index + period - 1])) == index + period - 1


def additive_order(alg: WeightAlgebra, b, fuel: int = 64) -> AdditiveOrder:
    """Index and period of b in the additive monoid, when they can be found."""
    if fuel < 1:
        raise ValueError("fuel must be positive")
    hint = alg.additive_order_hint(b)
    if hint is not None and hint.status != "unknown":
        return hint
    f = alg.flags
    if f.monotonic is True and (f.left_distributive is True or f.right_distributive is True):
        if alg.add(alg.one, alg.one) == alg.one:
            return finite_order(1, 1)
        if b != alg.zero:
            return INFINITE
    seen = {}
    current = b
    for m in range(1, fuel + 1):
        if current in seen:
            return finite_order(seen[current], m - seen[current])
        seen[current] = m
        current = alg.add(current, b)
    return UNKNOWN
