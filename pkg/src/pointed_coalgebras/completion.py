"""
Points of the completion of the initial chain, represented as lazy letter streams.

A stream is read through three questions: which letter sits at position i,
whether the residual point after p letters is known to be distinguished, and
from which position on the stream is constant (if that can be seen). Truncation
closes a prefix with the base of the residual point when it is distinguished
and with the base fixed by the last letter otherwise.
"""

from __future__ import annotations

import logging
import threading
from typing import Hashable

from .address import AddressWord, fold_dyadic, word_distance
from .core import Alphabet, AlphabetMismatchError, Dyadic, ONE, ZERO
from .models import DistanceInterval

logger = logging.getLogger(__name__)

DEFAULT_MAX_DEPTH = 256


class CompletionPoint:
    """Base class for streams; subclasses supply letters and residual information."""

    alphabet: Alphabet
    provenance: str = "stream"

    def letter_at(self, i: int) -> str:
        raise NotImplementedError

    def residual_base(self, p: int) -> str | None:
        """Base symbol of the point left after p letters, if that point is distinguished."""
        return None

    def shift(self) -> "CompletionPoint":
        raise NotImplementedError

    def eventual_tail(self, max_depth: int = DEFAULT_MAX_DEPTH) -> tuple[int, str] | None:
        """(j, m) when every letter after position j is m, looking no further than max_depth."""
        return None

    def prefix(self, p: int) -> tuple[str, ...]:
        return tuple(self.letter_at(i) for i in range(1, p + 1))


class ExplicitStream(CompletionPoint):
    """A finite prefix followed by a repeating cycle."""

    def __init__(self, alphabet: Alphabet, prefix: tuple[str, ...] | str, cycle: tuple[str, ...] | str):
        prefix, cycle = tuple(prefix), tuple(cycle)
        if not cycle:
            raise ValueError("a stream needs a non-empty repeating tail")
        for m in prefix + cycle:
            alphabet.letter_index(m)
        self.alphabet = alphabet
        self.head = prefix
        self.cycle = cycle
        self.provenance = "eventually-constant" if len(set(cycle)) == 1 else "explicit-list-with-tail"

    def letter_at(self, i: int) -> str:
        if i < 1:
            raise ValueError("positions start at 1")
        if i <= len(self.head):
            return self.head[i - 1]
        return self.cycle[(i - len(self.head) - 1) % len(self.cycle)]

    def residual_base(self, p: int) -> str | None:
        if len(set(self.cycle)) != 1:
            return None
        m = self.cycle[0]
        if all(x == m for x in self.head[p:]):
            return self.alphabet.closing(m)
        return None

    def shift(self) -> "ExplicitStream":
        if self.head:
            return ExplicitStream(self.alphabet, self.head[1:], self.cycle)
        return ExplicitStream(self.alphabet, (), self.cycle[1:] + self.cycle[:1])

    def eventual_tail(self, max_depth: int = DEFAULT_MAX_DEPTH) -> tuple[int, str] | None:
        if len(set(self.cycle)) != 1:
            return None
        m = self.cycle[0]
        j = len(self.head)
        while j > 0 and self.head[j - 1] == m:
            j -= 1
        return (j, m) if j <= max_depth else None

    def literal(self) -> str:
        return "".join(self.head) + "(" + "".join(self.cycle) + ")*"

    def __repr__(self):
        return f"ExplicitStream({self.alphabet.name}, {self.literal()})"


class _Orbit:
    """Shared cache of a coalgebra orbit x_0, x_1, ... and the letters emitted on the way."""

    def __init__(self, coalgebra, x: Hashable, policy: str):
        self.coalgebra = coalgebra
        self.policy = policy
        self.states: list[Hashable] = [x]
        self.letters: list[str] = []
        self._lock = threading.Lock()

    def extend(self, n: int) -> None:
        if len(self.letters) >= n:
            return
        with self._lock:
            while len(self.letters) < n:
                m, y = self.coalgebra.step(self.states[-1], self.policy)
                self.letters.append(m)
                self.states.append(y)


class CoalgebraStream(CompletionPoint):
    """The address stream of a carrier point, produced by iterating a coalgebra on demand."""

    provenance = "coalgebra-generated"

    def __init__(self, coalgebra, x: Hashable, policy: str = "first", *, _orbit: _Orbit | None = None, _offset: int = 0):
        self.alphabet = coalgebra.alphabet
        self.coalgebra = coalgebra
        self._orbit = _orbit or _Orbit(coalgebra, x, policy)
        self._offset = _offset

    @property
    def start(self) -> Hashable:
        return self.state(0)

    def state(self, p: int) -> Hashable:
        self._orbit.extend(self._offset + p)
        return self._orbit.states[self._offset + p]

    def letter_at(self, i: int) -> str:
        if i < 1:
            raise ValueError("positions start at 1")
        self._orbit.extend(self._offset + i)
        return self._orbit.letters[self._offset + i - 1]

    def residual_base(self, p: int) -> str | None:
        return self.coalgebra.base_of(self.state(p))

    def shift(self) -> "CoalgebraStream":
        return CoalgebraStream(self.coalgebra, None, _orbit=self._orbit, _offset=self._offset + 1)

    def eventual_tail(self, max_depth: int = DEFAULT_MAX_DEPTH) -> tuple[int, str] | None:
        for j in range(max_depth + 1):
            x = self.state(j)
            m, y = self.coalgebra.step(x, self._orbit.policy)
            if y == x:
                return j, m
        return None

    def __repr__(self):
        return f"CoalgebraStream({self.coalgebra.name}, {self.start}, offset={self._offset})"


def psi(s: CompletionPoint) -> tuple[str, CompletionPoint]:
    """Final-coalgebra structure: split off the head letter."""
    return s.letter_at(1), s.shift()


def truncate(s: CompletionPoint, p: int) -> AddressWord:
    """Depth-p word approximating s to within 1/2^p."""
    if p < 1:
        raise ValueError(f"truncation depth must be >= 1, got {p}")
    letters = s.prefix(p)
    base = s.residual_base(p) or s.alphabet.closing(letters[-1])
    return AddressWord(s.alphabet, letters, base)


def completion_distance(s: CompletionPoint, t: CompletionPoint, p: int):
    """Interval of width <= 4/2^p around the depth-p distance that contains d(s, t)."""
    if s.alphabet != t.alphabet:
        raise AlphabetMismatchError("streams over different alphabets")
    center = word_distance(truncate(s, p), truncate(t, p))
    radius = Dyadic(2, p)
    lo = max(ZERO, center - radius)
    hi = min(ONE, center + radius)
    return DistanceInterval(lo, hi, center, p)


def limit_word(s: CompletionPoint, max_depth: int = DEFAULT_MAX_DEPTH) -> AddressWord:
    """The finite word equal to s, found by locating its constant tail."""
    tail = s.eventual_tail(max_depth)
    if tail is None:
        raise ValueError(f"no constant tail found within {max_depth} letters")
    return truncate(s, max(tail[0], 1))


def fold_limit(s: CompletionPoint, max_depth: int = DEFAULT_MAX_DEPTH) -> Dyadic:
    """Exact [0, 1] value of an eventually constant bi-pointed stream."""
    return fold_dyadic(limit_word(s, max_depth))


def stream_literal(s: CompletionPoint, max_depth: int = DEFAULT_MAX_DEPTH) -> str | None:
    """Render s as "prefix(tail)*" when it is explicit or its constant tail is visible."""
    if isinstance(s, ExplicitStream):
        return s.literal()
    tail = s.eventual_tail(max_depth)
    if tail is None:
        return None
    j, m = tail
    return "".join(s.prefix(j)) + f"({m})*"
