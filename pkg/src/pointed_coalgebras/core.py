"""
Exact dyadic arithmetic, the two fixed alphabets, and finite pointed metric spaces.

Everything else in the package is built on three facts:
- every distance is a dyadic rational p/2^q, so arithmetic stays exact;
- only two alphabets exist: (l, r) over bases (B, T) and (a, b, c) over (T, L, R);
- a pointed metric space is one-bounded with its distinguished points pairwise at distance 1.
"""

from __future__ import annotations

import logging
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from typing import Hashable, Iterable, Protocol, Sequence, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")


class NotDyadicError(ValueError):
    """Raised when a value cannot be written as p/2^q."""


class StructureError(ValueError):
    """Raised for malformed inputs (table dimensions, unknown labels), as opposed to axiom violations."""


class AlphabetMismatchError(ValueError):
    """Raised when operands live over different alphabets or a symbol is outside its alphabet."""


class ContractError(ValueError):
    """Raised when a map, algebra or coalgebra breaks its structural contract."""


class OutOfCarrierError(ValueError):
    """Raised when a point lies outside the carrier it is given for."""


@total_ordering
class Dyadic:
    """Exact rational num / 2**exp kept in canonical form (num odd or exp == 0)."""

    __slots__ = ("num", "exp")

    def __init__(self, num: int, exp: int = 0):
        if exp < 0:
            raise ValueError(f"exponent must be non-negative, got {exp}")
        num = int(num)
        if num == 0:
            exp = 0
        elif exp:
            shift = min(exp, (num & -num).bit_length() - 1)
            num >>= shift
            exp -= shift
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "exp", exp)

    def __setattr__(self, name, value):
        raise AttributeError("Dyadic is immutable")

    @classmethod
    def from_fraction(cls, value: Fraction | int) -> "Dyadic":
        value = Fraction(value)
        den = value.denominator
        if den & (den - 1):
            raise NotDyadicError(f"{value} is not dyadic (denominator {den})")
        return cls(value.numerator, den.bit_length() - 1)

    def to_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.exp)

    # arithmetic -----------------------------------------------------------
    def _aligned(self, other: "Dyadic") -> tuple[int, int, int]:
        exp = max(self.exp, other.exp)
        return self.num << (exp - self.exp), other.num << (exp - other.exp), exp

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a, b, exp = self._aligned(other)
        return Dyadic(a + b, exp)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a, b, exp = self._aligned(other)
        return Dyadic(a - b, exp)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return Dyadic(self.num * other.num, self.exp + other.exp)

    __rmul__ = __mul__

    def __neg__(self):
        return Dyadic(-self.num, self.exp)

    def __abs__(self):
        return self if self.num >= 0 else -self

    def half(self) -> "Dyadic":
        return Dyadic(self.num, self.exp + 1)

    def double(self) -> "Dyadic":
        return Dyadic(self.num * 2, self.exp)

    def ratio(self, other: "Dyadic") -> Fraction:
        """Exact quotient self / other as a Fraction (not necessarily dyadic)."""
        other = _coerce(other)
        if other is None or other.num == 0:
            raise ZeroDivisionError("ratio by zero")
        return self.to_fraction() / other.to_fraction()

    @property
    def is_integer(self) -> bool:
        return self.exp == 0

    # comparison -----------------------------------------------------------
    def __eq__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.exp == other.exp

    def __lt__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a, b, _ = self._aligned(other)
        return a < b

    def __hash__(self):
        if self.exp == 0:
            return hash(self.num)
        return hash((self.num, self.exp))

    def __bool__(self):
        return self.num != 0

    def __repr__(self):
        return f"Dyadic({self.num}, {self.exp})"

    def __str__(self):
        if self.exp == 0:
            return str(self.num)
        return f"{self.num}/2^{self.exp}"

    def __reduce__(self):
        return (Dyadic, (self.num, self.exp))


def _coerce(value) -> Dyadic | None:
    if isinstance(value, Dyadic):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Dyadic(value, 0)
    return None


ZERO = Dyadic(0)
ONE = Dyadic(1)


def dyadic_make(num: int, exp: int) -> Dyadic:
    """Build the canonical dyadic num / 2**exp."""
    return Dyadic(num, exp)


def as_dyadic(value: Dyadic | int | Fraction | str) -> Dyadic:
    """Accept a Dyadic, an int, a Fraction or a literal; reject anything non-dyadic."""
    if isinstance(value, Dyadic):
        return value
    if isinstance(value, str):
        return parse_dyadic(value)
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return Dyadic.from_fraction(value)
    raise NotDyadicError(f"cannot interpret {value!r} as a dyadic rational")


_DYADIC_RE = re.compile(r"^(-?\d+)(?:/(?:2\^(\d+)|(\d+)))?$")


def parse_dyadic(text: str) -> Dyadic:
    """
    Parse "num/2^exp", an integer, or "p/q" with q a power of two.
    """
    token = text.strip()
    m = _DYADIC_RE.match(token)
    if not m:
        raise NotDyadicError(f"invalid dyadic literal {token!r}")
    num = int(m.group(1))
    if m.group(2) is not None:
        return Dyadic(num, int(m.group(2)))
    if m.group(3) is not None:
        den = int(m.group(3))
        if den == 0:
            raise NotDyadicError(f"zero denominator in {token!r}")
        return Dyadic.from_fraction(Fraction(num, den))
    return Dyadic(num)


# alphabets ------------------------------------------------------------------


@dataclass(frozen=True)
class GluingTable:
    """
    Generating identifications of M⊗X: each entry ((m, u), (n, v)) means m⊗u = n⊗v.
    """

    entries: tuple[tuple[tuple[str, str], tuple[str, str]], ...]

    def glue(self, m: str, n: str) -> tuple[str, str]:
        """Return (u, v) with m⊗u = n⊗v for letters m != n."""
        for (m1, u1), (n1, v1) in self.entries:
            if (m1, n1) == (m, n):
                return u1, v1
            if (n1, m1) == (m, n):
                return v1, u1
        raise AlphabetMismatchError(f"no gluing between letters {m!r} and {n!r}")


@dataclass(frozen=True)
class Alphabet:
    """
    One of the two fixed alphabets.

    `bases` lists the distinguished-point symbols in canonical order;
    `extension[i]` is the letter whose tensor point realizes `bases[i]`
    (l⊗B is the B of M⊗X, r⊗T its T; a⊗T, b⊗L, c⊗R likewise).
    """

    name: str
    arity: int
    letters: tuple[str, ...]
    bases: tuple[str, ...]
    extension_letters: tuple[str, ...]
    gluing: GluingTable
    base_names: tuple[str, ...] = field(default=(), compare=False)

    def extension(self, base: str) -> str:
        return self.extension_letters[self.base_index(base)]

    def closing(self, letter: str) -> str:
        """Base symbol whose distinguished point is fixed by `letter` (the inverse of extension)."""
        return self.bases[self.letter_index(letter)]

    def letter_index(self, letter: str) -> int:
        try:
            return self.extension_letters.index(letter)
        except ValueError:
            raise AlphabetMismatchError(f"letter {letter!r} not in alphabet {self.name}") from None

    def base_index(self, base: str) -> int:
        try:
            return self.bases.index(base)
        except ValueError:
            raise AlphabetMismatchError(f"base {base!r} not in alphabet {self.name}") from None

    def glue(self, m: str, n: str) -> tuple[str, str]:
        return self.gluing.glue(m, n)

    def third(self, m: str, n: str) -> str:
        rest = [k for k in self.letters if k not in (m, n)]
        if len(rest) != 1:
            raise AlphabetMismatchError(f"alphabet {self.name} has no third letter for {m!r}, {n!r}")
        return rest[0]

    def glue_pairs(self) -> tuple[tuple[tuple[str, str], tuple[str, str]], ...]:
        return self.gluing.entries

    def __str__(self):
        return self.name


BIPOINTED = Alphabet(
    name="bi-pointed",
    arity=2,
    letters=("l", "r"),
    bases=("B", "T"),
    extension_letters=("l", "r"),
    gluing=GluingTable(((("l", "T"), ("r", "B")),)),
    base_names=("bottom", "top"),
)

TRIPOINTED = Alphabet(
    name="tri-pointed",
    arity=3,
    letters=("a", "b", "c"),
    bases=("T", "L", "R"),
    extension_letters=("a", "b", "c"),
    gluing=GluingTable(
        (
            (("a", "L"), ("b", "T")),
            (("a", "R"), ("c", "T")),
            (("c", "L"), ("b", "R")),
        )
    ),
    base_names=("top", "left", "right"),
)

ALPHABETS = {2: BIPOINTED, 3: TRIPOINTED}


def alphabet_for_arity(arity: int) -> Alphabet:
    try:
        return ALPHABETS[arity]
    except KeyError:
        raise AlphabetMismatchError(f"no alphabet of arity {arity}; only 2 and 3 exist") from None


# pointed carriers -----------------------------------------------------------


class PointedCarrier(Protocol):
    """Anything with a one-bounded metric and named distinguished points."""

    alphabet: Alphabet

    def distance(self, x, y) -> Dyadic: ...

    def point(self, symbol: str): ...


@dataclass(frozen=True)
class InitialObject:
    """The initial i-pointed space: only the distinguished symbols, pairwise at distance 1."""

    alphabet: Alphabet

    def distance(self, x: str, y: str) -> Dyadic:
        return ZERO if x == y else ONE

    def point(self, symbol: str) -> str:
        self.alphabet.base_index(symbol)
        return symbol


@dataclass(frozen=True)
class UnitInterval:
    """[0, 1] restricted to dyadics, with |x - y|, B = 0 and T = 1."""

    alphabet: Alphabet = BIPOINTED

    def distance(self, x: Dyadic, y: Dyadic) -> Dyadic:
        return abs(x - y)

    def point(self, symbol: str) -> Dyadic:
        return ZERO if self.alphabet.base_index(symbol) == 0 else ONE

    def contains(self, x) -> bool:
        return isinstance(x, Dyadic) and ZERO <= x <= ONE


UNIT_INTERVAL = UnitInterval()


@dataclass(frozen=True)
class FinitePointedSpace:
    """
    Finite point set with a distinguished tuple (ordered like the alphabet's bases)
    and an exact symmetric distance table.
    """

    points: tuple[Hashable, ...]
    distinguished: tuple[Hashable, ...]
    dist: tuple[tuple[Dyadic, ...], ...]
    _index: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(self.points)})

    @classmethod
    def from_rows(cls, points: Sequence[Hashable], distinguished: Sequence[Hashable], rows) -> "FinitePointedSpace":
        table = tuple(tuple(as_dyadic(v) for v in row) for row in rows)
        return cls(tuple(points), tuple(distinguished), table)

    @property
    def alphabet(self) -> Alphabet:
        return alphabet_for_arity(len(self.distinguished))

    def index(self, label: Hashable) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise StructureError(f"unknown point {label!r}") from None

    def distance(self, x: Hashable, y: Hashable) -> Dyadic:
        return self.dist[self.index(x)][self.index(y)]

    def point(self, symbol: str) -> Hashable:
        return self.distinguished[self.alphabet.base_index(symbol)]

    def __len__(self):
        return len(self.points)


def discrete_space(alphabet: Alphabet) -> FinitePointedSpace:
    """The bases of `alphabet` as a finite space (X₀ = {B, T} or Y₀ = {T, L, R})."""
    n = alphabet.arity
    rows = [[ZERO if i == j else ONE for j in range(n)] for i in range(n)]
    return FinitePointedSpace.from_rows(alphabet.bases, alphabet.bases, rows)


def subspace(space: FinitePointedSpace, labels: Iterable[Hashable]) -> FinitePointedSpace:
    """Restrict to `labels` (distinguished points are always kept)."""
    keep = list(space.distinguished)
    for label in labels:
        if label not in keep:
            space.index(label)
            keep.append(label)
    order = sorted(keep, key=space.index)
    rows = [[space.distance(x, y) for y in order] for x in order]
    return FinitePointedSpace(tuple(order), space.distinguished, tuple(tuple(r) for r in rows))


# validation -----------------------------------------------------------------


def _require_structure(space: FinitePointedSpace) -> None:
    n = len(space.points)
    if len(space._index) != n:
        raise StructureError("duplicate point labels")
    if len(space.dist) != n or any(len(row) != n for row in space.dist):
        raise StructureError(f"distance table is not {n}x{n}")
    if len(space.distinguished) not in ALPHABETS:
        raise StructureError(f"expected 2 or 3 distinguished points, got {len(space.distinguished)}")
    if len(set(space.distinguished)) != len(space.distinguished):
        raise StructureError("distinguished points must be distinct")
    for label in space.distinguished:
        space.index(label)


def axiom_violations(labels: Sequence[Hashable], distinguished: Sequence[int], matrix, one) -> list:
    """
    Brute-force every metric axiom instance over a square `matrix` of numbers
    (Dyadic or scaled ints; `one` is the value of distance 1 in that scale).
    """
    from .models import Violation

    n = len(labels)
    zero = one - one
    out: list[Violation] = []
    for i in range(n):
        row = matrix[i]
        if row[i] != zero:
            out.append(Violation("identity", (labels[i],), f"d(x,x) = {row[i]}"))
        for j in range(n):
            if i == j:
                continue
            dij = row[j]
            if dij < zero:
                out.append(Violation("nonnegativity", (labels[i], labels[j]), f"d = {dij}"))
            if dij > one:
                out.append(Violation("one-bound", (labels[i], labels[j]), f"d = {dij} > 1"))
            if i < j:
                if dij != matrix[j][i]:
                    out.append(Violation("symmetry", (labels[i], labels[j]), f"{dij} != {matrix[j][i]}"))
                if dij == zero:
                    out.append(Violation("separation", (labels[i], labels[j]), "distinct points at distance 0"))
    for i in range(n):
        row = matrix[i]
        for k in range(n):
            dik = row[k]
            mk = matrix[k]
            for j in range(n):
                if dik + mk[j] < row[j]:
                    out.append(
                        Violation(
                            "triangle",
                            (labels[i], labels[k], labels[j]),
                            f"{row[j]} > {dik} + {mk[j]}",
                        )
                    )
    for a_pos, a in enumerate(distinguished):
        for b in distinguished[a_pos + 1 :]:
            if matrix[a][b] != one:
                out.append(
                    Violation("distinguished-distance", (labels[a], labels[b]), f"d = {matrix[a][b]}, expected 1")
                )
    return out


def validate_pointed_space(space: FinitePointedSpace):
    """
    Report every violated axiom of an i-pointed metric space with its witness.
    Raises StructureError for malformed input.
    """
    from .models import ValidationReport

    _require_structure(space)
    dist_idx = [space.index(d) for d in space.distinguished]
    violations = axiom_violations(space.points, dist_idx, space.dist, ONE)
    logger.debug("validated %d-point space: %d violations", len(space.points), len(violations))
    return ValidationReport(violations)


# shortest paths -------------------------------------------------------------


def floyd_warshall(weights: list[list[T | None]]) -> list[list[T | None]]:
    """
    All-pairs shortest paths; `None` is "no edge". Works for any values with + and <.
    Returns a new matrix.
    """
    n = len(weights)
    dist = [list(row) for row in weights]
    for k in range(n):
        dk = dist[k]
        for i in range(n):
            dik = dist[i][k]
            if dik is None:
                continue
            di = dist[i]
            for j in range(n):
                dkj = dk[j]
                if dkj is None:
                    continue
                cand = dik + dkj
                if di[j] is None or cand < di[j]:
                    di[j] = cand
    return dist


def random_pointed_space(rng: random.Random, size: int, arity: int, *, grid: int = 4) -> FinitePointedSpace:
    """
    Draw a valid finite i-pointed space with `size` points on the 1/2^grid lattice.

    Distinguished pairs get 1, distinguished-to-other edges lie in [1/2, 1] and
    all other edges in (0, 1]; the metric is the shortest-path closure, so any
    path between distinguished points still has length at least 1.
    """
    alphabet = alphabet_for_arity(arity)
    if size < arity:
        raise StructureError(f"need at least {arity} points, got {size}")
    labels = list(alphabet.bases) + [f"x{i}" for i in range(1, size - arity + 1)]
    scale = 1 << grid
    weights: list[list[Dyadic | None]] = [[None] * size for _ in range(size)]
    for i in range(size):
        weights[i][i] = ZERO
        for j in range(i + 1, size):
            if i < arity and j < arity:
                w = ONE
            elif i < arity or j < arity:
                w = Dyadic(rng.randint(scale // 2, scale), grid)
            else:
                w = Dyadic(rng.randint(1, scale), grid)
            weights[i][j] = weights[j][i] = w
    closed = floyd_warshall(weights)
    return FinitePointedSpace(tuple(labels), tuple(alphabet.bases), tuple(tuple(r) for r in closed))
