from __future__ import annotations

import re

from .address import AddressWord
from .completion import ExplicitStream
from .core import ALPHABETS, Alphabet, BIPOINTED, Dyadic, NotDyadicError, TRIPOINTED, parse_dyadic
from .experiments import APEX, TrianglePoint
from .morphisms import CoalgebraSpec


class ParseError(ValueError):
    """Raised when a word, stream or point literal cannot be read; names the offending token."""


_WORD_RE = re.compile(r"^([a-z]*)\.([A-Z])$")
_STREAM_RE = re.compile(r"^([a-z]*)\(([a-z]+)\)\*$")


def _alphabet_of_letters(letters: str, token: str) -> Alphabet | None:
    found = set()
    for m in letters:
        owners = [a for a in ALPHABETS.values() if m in a.letters]
        if not owners:
            raise ParseError(f"unknown letter {m!r} in {token!r}")
        found.add(owners[0])
    if len(found) > 1:
        raise ParseError(f"{token!r} mixes letters of both alphabets")
    return found.pop() if found else None


def _alphabet_of_base(base: str) -> Alphabet | None:
    owners = [a for a in ALPHABETS.values() if base in a.bases]
    return owners[0] if len(owners) == 1 else None


def parse_word(text: str, alphabet: Alphabet | None = None) -> AddressWord:
    """
    Read "letters.base", e.g. "llr.T" or "ab.L". Letters decide the alphabet;
    a bare base that exists in both alphabets (".T") needs `alphabet` or defaults to bi-pointed.
    """
    token = text.strip()
    m = _WORD_RE.match(token)
    if not m:
        raise ParseError(f"invalid word {token!r}; expected letters followed by '.' and a base")
    letters, base = m.group(1), m.group(2)
    found = _alphabet_of_letters(letters, token) or _alphabet_of_base(base) or alphabet or BIPOINTED
    if alphabet is not None and found != alphabet:
        raise ParseError(f"{token!r} is not a {alphabet.name} word")
    if base not in found.bases:
        raise ParseError(f"base {base!r} in {token!r} is not a {found.name} base")
    return AddressWord(found, tuple(letters), base)


def parse_word_pair(first: str, second: str) -> tuple[AddressWord, AddressWord]:
    """Parse two words; an ambiguous one (".T") takes the alphabet of the other."""
    if _is_ambiguous(first) and not _is_ambiguous(second):
        v = parse_word(second)
        return parse_word(first, v.alphabet), v
    w = parse_word(first)
    return w, parse_word(second, w.alphabet if _is_ambiguous(second) else None)


def _is_ambiguous(text: str) -> bool:
    m = _WORD_RE.match(text.strip())
    return bool(m) and not m.group(1) and _alphabet_of_base(m.group(2)) is None


def parse_stream(text: str, alphabet: Alphabet | None = None) -> ExplicitStream:
    """Read "prefix(tail)*", e.g. "ll(r)*" or "(lr)*"."""
    token = text.strip()
    m = _STREAM_RE.match(token)
    if not m:
        raise ParseError(f"invalid stream {token!r}; expected letters then '(tail)*'")
    head, cycle = m.group(1), m.group(2)
    found = _alphabet_of_letters(head + cycle, token)
    if alphabet is not None and found != alphabet:
        raise ParseError(f"{token!r} is not a {alphabet.name} stream")
    return ExplicitStream(found, head, cycle)


def parse_point(text: str) -> Dyadic:
    try:
        return parse_dyadic(text)
    except NotDyadicError as exc:
        raise ParseError(str(exc)) from None


def parse_triangle_point(text: str) -> TrianglePoint:
    """"apex" or "x,0" with x dyadic."""
    token = text.strip()
    if token == "apex":
        return APEX
    parts = [p.strip() for p in token.split(",")]
    if len(parts) != 2 or parts[1] != "0":
        raise ParseError(f"invalid triangle point {token!r}; expected 'apex' or 'x,0'")
    return TrianglePoint(parse_point(parts[0]))


def parse_carrier_point(coalgebra: CoalgebraSpec, text: str):
    if coalgebra.alphabet == TRIPOINTED:
        return parse_triangle_point(text)
    return parse_point(text)
