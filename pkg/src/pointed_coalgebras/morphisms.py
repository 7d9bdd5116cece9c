"""
Coalgebras X -> M⊗X and algebras M⊗X -> X, and the unique morphisms they induce.

A coalgebra is given by its *branches*: every (letter, point) pair that represents
x in M⊗X, sorted by letter. At an overlap point several branches exist and name the
same glued point; the branch policy picks one. Iterating the coalgebra yields the
mediating map into the final coalgebra; folding a word through an algebra yields
the mediating map out of the initial algebra.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping

from .address import AddressWord, all_words, tower_distance, word_distance, words_equivalent
from .completion import CoalgebraStream, psi, truncate
from .core import (
    Alphabet,
    AlphabetMismatchError,
    BIPOINTED,
    ContractError,
    Dyadic,
    ONE,
    OutOfCarrierError,
    TRIPOINTED,
    UNIT_INTERVAL,
    ZERO,
)
from .models import ValidationReport, Violation

logger = logging.getLogger(__name__)

POLICIES = ("first", "last")


@dataclass(frozen=True)
class CoalgebraSpec:
    name: str
    alphabet: Alphabet
    branches: Callable[[Hashable], list[tuple[str, Hashable]]] = field(repr=False)
    distinguished: Mapping[str, Hashable] = field(repr=False, hash=False)
    contains: Callable[[Hashable], bool] = field(repr=False)
    description: str = ""

    def require(self, x: Hashable) -> None:
        if not self.contains(x):
            raise OutOfCarrierError(f"{x} is not a point of the {self.name} carrier")

    def step(self, x: Hashable, policy: str = "first") -> tuple[str, Hashable]:
        if policy not in POLICIES:
            raise ValueError(f"unknown branch policy {policy!r}")
        self.require(x)
        options = self.branches(x)
        if not options:
            raise ContractError(f"{self.name} has no branch at {x}")
        m, y = options[0] if policy == "first" else options[-1]
        if m not in self.alphabet.letters:
            raise ContractError(f"{self.name} emitted letter {m!r} outside {self.alphabet.name}")
        return m, y

    def base_of(self, x: Hashable) -> str | None:
        for symbol, point in self.distinguished.items():
            if point == x:
                return symbol
        return None


@dataclass(frozen=True)
class AlgebraSpec:
    name: str
    alphabet: Alphabet
    op: Callable[[str, Hashable], Hashable] = field(repr=False)
    distinguished: Mapping[str, Hashable] = field(repr=False, hash=False)
    carrier: tuple | None = None
    description: str = ""


def tensor_iterate(c: CoalgebraSpec, x: Hashable, p: int, policy: str = "first") -> tuple[tuple[str, ...], Hashable]:
    """Apply the coalgebra p times; return the letters read and the residual point."""
    letters = []
    for _ in range(p):
        m, x = c.step(x, policy)
        letters.append(m)
    return tuple(letters), x


def coalgebra_iterate(c: CoalgebraSpec, x: Hashable, p: int, policy: str = "first") -> AddressWord:
    """Depth-p word of x: the letters of p steps, closed by the residual point's base."""
    if p < 1:
        raise ValueError(f"depth must be >= 1, got {p}")
    letters, residual = tensor_iterate(c, x, p, policy)
    base = c.base_of(residual) or c.alphabet.closing(letters[-1])
    return AddressWord(c.alphabet, letters, base)


def mediating_final(c: CoalgebraSpec, x: Hashable, policy: str = "first") -> CoalgebraStream:
    c.require(x)
    return CoalgebraStream(c, x, policy)


def square_bound(p: int) -> Dyadic:
    return Dyadic(2, p - 1)


def check_coalgebra_square(c: CoalgebraSpec, x: Hashable, p: int) -> Dyadic:
    """
    Compare (M⊗h)∘c with ψ∘h at x. The left side is the first step followed by the
    depth-(p-1) word of the residual, a depth-p word. The right side splits the
    stream of x and cuts the tail at depth p, so it is one level finer (depth p+1).
    The defect is their word distance at the common depth p+1.
    """
    if p < 2:
        raise ValueError(f"square depth must be >= 2, got {p}")
    m1, x1 = c.step(x)
    left = truncate(mediating_final(c, x1), p - 1).prepend(m1)
    head, tail = psi(mediating_final(c, x))
    right = truncate(tail, p).prepend(head)
    return word_distance(left, right)


def continuity_bound(p: int) -> Dyadic:
    return Dyadic(2, p)


def continuity_defect(c: CoalgebraSpec, x: Hashable, y: Hashable, p: int, policy: str = "first") -> Dyadic:
    """
    |d(θ_p(x), θ_p(y)) - d(g_p(x), g_p(y))| where θ_p closes the depth-p letters with a
    base and g_p keeps the residual carrier point, measured in M^p⊗[0, 1].
    Only defined for coalgebras on the unit interval.
    """
    if c.alphabet != BIPOINTED:
        raise AlphabetMismatchError(f"{c.name} is not a coalgebra on [0, 1]")
    closed = word_distance(coalgebra_iterate(c, x, p, policy), coalgebra_iterate(c, y, p, policy))
    letters_x, rx = tensor_iterate(c, x, p, policy)
    letters_y, ry = tensor_iterate(c, y, p, policy)
    unclosed = tower_distance(UNIT_INTERVAL, letters_x, rx, letters_y, ry)
    return abs(closed - unclosed)


def _branch_word(c: CoalgebraSpec, m: str, y: Hashable) -> AddressWord | None:
    base = c.base_of(y)
    return AddressWord(c.alphabet, (m,), base) if base is not None else None


def validate_coalgebra(c: CoalgebraSpec, points: Iterable[Hashable]) -> ValidationReport:
    """
    Distinguished points must map to their self-similar images, and every overlap
    point's branches must name the same glued point.
    """
    violations: list[Violation] = []
    for symbol, point in c.distinguished.items():
        expected = AddressWord(c.alphabet, (c.alphabet.extension(symbol),), symbol)
        for m, y in c.branches(point):
            got = _branch_word(c, m, y)
            if got is None or not words_equivalent(got, expected):
                violations.append(Violation("distinguished", (symbol,), f"branch {m}⊗{y}, expected {expected}"))
    for x in points:
        options = c.branches(x)
        if not options:
            violations.append(Violation("total", (x,), "no branch"))
            continue
        for m, _ in options:
            if m not in c.alphabet.letters:
                violations.append(Violation("alphabet", (x,), f"letter {m!r}"))
        if len(options) > 1:
            words = [_branch_word(c, m, y) for m, y in options]
            if any(w is None for w in words) or any(not words_equivalent(words[0], w) for w in words[1:]):
                violations.append(Violation("overlap", (x,), f"branches {options} name different points"))
    return ValidationReport(violations)


# algebras ---------------------------------------------------------------------


def validate_algebra(a: AlgebraSpec) -> ValidationReport:
    """Glued pairs must agree; distinguished points must be fixed by their extension letters."""
    violations: list[Violation] = []
    for (m, u), (n, v) in a.alphabet.glue_pairs():
        left = a.op(m, a.distinguished[u])
        right = a.op(n, a.distinguished[v])
        if left != right:
            violations.append(Violation("gluing", (f"{m}⊗{u}", f"{n}⊗{v}"), f"{left} != {right}"))
    for symbol in a.alphabet.bases:
        got = a.op(a.alphabet.extension(symbol), a.distinguished[symbol])
        if got != a.distinguished[symbol]:
            violations.append(Violation("distinguished", (symbol,), f"maps to {got}"))
    return ValidationReport(violations)


def _require_algebra(a: AlgebraSpec) -> None:
    report = validate_algebra(a)
    if not report.ok:
        raise ContractError(f"algebra {a.name} violates {report.violations[0]}")


def algebra_fold(a: AlgebraSpec, w: AddressWord):
    """Fold a word through the algebra, innermost letter first."""
    if w.alphabet != a.alphabet:
        raise AlphabetMismatchError(f"algebra {a.name} is {a.alphabet.name}, word {w} is {w.alphabet.name}")
    _require_algebra(a)
    x = a.distinguished[w.base]
    for m in reversed(w.letters):
        x = a.op(m, x)
    return x


def check_algebra_square(a: AlgebraSpec, m: str, w: AddressWord) -> bool:
    """h(m.w) == a(m, h(w))."""
    return algebra_fold(a, w.prepend(m)) == a.op(m, algebra_fold(a, w))


def algebra_square_failures(a: AlgebraSpec, depth: int) -> Iterable[tuple[str, AddressWord]]:
    for w in all_words(a.alphabet, depth):
        for m in a.alphabet.letters:
            if not check_algebra_square(a, m, w):
                yield m, w


# built-in structures ------------------------------------------------------------


def _bip_op(m: str, x: Dyadic) -> Dyadic:
    return ONE if (m, x) == ("r", ONE) else ZERO


def _trip_op(m: str, x: str) -> str:
    if (m, x) == ("a", "T"):
        return "T"
    if (m, x) == ("c", "R"):
        return "R"
    return "L"


def _phi_op(m: str, x: Dyadic) -> Dyadic:
    return x.half() if m == "l" else (x + ONE).half()


BIP_ALG = AlgebraSpec(
    name="bip-alg",
    alphabet=BIPOINTED,
    op=_bip_op,
    distinguished={"B": ZERO, "T": ONE},
    carrier=(ZERO, ONE),
    description="{0, 1}: everything collapses to 0 except r⊗1",
)

TRIP_ALG = AlgebraSpec(
    name="trip-alg",
    alphabet=TRIPOINTED,
    op=_trip_op,
    distinguished={"T": "T", "L": "L", "R": "R"},
    carrier=("T", "L", "R"),
    description="{T, L, R}: a⊗T and c⊗R are fixed, everything else goes to L",
)

DYADIC_PHI = AlgebraSpec(
    name="dyadic-phi",
    alphabet=BIPOINTED,
    op=_phi_op,
    distinguished={"B": ZERO, "T": ONE},
    description="[0, 1] with l⊗x = x/2 and r⊗x = (x+1)/2",
)


def _in_unit(x) -> bool:
    return isinstance(x, Dyadic) and ZERO <= x <= ONE


def _freyd_branches(x: Dyadic) -> list[tuple[str, Dyadic]]:
    out = []
    half = Dyadic(1, 1)
    if x <= half:
        out.append(("l", x.double()))
    if x >= half:
        out.append(("r", x.double() - ONE))
    return out


FREYD_I = CoalgebraSpec(
    name="freyd-i",
    alphabet=BIPOINTED,
    branches=_freyd_branches,
    distinguished={"B": ZERO, "T": ONE},
    contains=_in_unit,
    description="[0, 1] doubling: l⊗2x below 1/2, r⊗(2x-1) above",
)
