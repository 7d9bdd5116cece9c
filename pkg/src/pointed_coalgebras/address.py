"""
Address words: finite letter sequences closed by a base symbol, naming the
points of M^k⊗I (I the initial pointed space).

`word_distance` runs the one-step tensor formula recursively: a word of
length k is a letter applied to a point of M^(k-1)⊗I whose distinguished
points are the constant words ext(b)^(k-1).b. The recursion is memoized on
(alphabet, word pair) with orientation collapsed.

`oracle_distance_table` recomputes the same metric independently, level by
level, as a shortest-path quotient over glued copies.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Hashable, Iterator

from .core import (
    Alphabet,
    AlphabetMismatchError,
    BIPOINTED,
    Dyadic,
    ONE,
    PointedCarrier,
    TRIPOINTED,
    ZERO,
    alphabet_for_arity,
    floyd_warshall,
)
from .models import GasketPoint
from .tensor import level_distance

logger = logging.getLogger(__name__)

ORACLE_DEPTH_CAP = {2: 12, 3: 7}


@dataclass(frozen=True)
class AddressWord:
    alphabet: Alphabet
    letters: tuple[str, ...]
    base: str

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        for m in self.letters:
            if m not in self.alphabet.letters:
                raise AlphabetMismatchError(f"letter {m!r} not in alphabet {self.alphabet.name}")
        self.alphabet.base_index(self.base)

    @property
    def depth(self) -> int:
        return len(self.letters)

    def prepend(self, letter: str) -> "AddressWord":
        return AddressWord(self.alphabet, (letter,) + self.letters, self.base)

    @property
    def key(self) -> tuple[tuple[str, ...], str]:
        return self.letters, self.base

    def __str__(self):
        return "".join(self.letters) + "." + self.base


def word(alphabet: Alphabet, letters: str | tuple[str, ...], base: str) -> AddressWord:
    return AddressWord(alphabet, tuple(letters), base)


def _same_alphabet(w: AddressWord, v: AddressWord) -> Alphabet:
    if w.alphabet != v.alphabet:
        raise AlphabetMismatchError(f"cannot compare {w.alphabet.name} word {w} with {v.alphabet.name} word {v}")
    return w.alphabet


def embed(w: AddressWord, depth: int) -> AddressWord:
    """Image of w under the chain embedding into M^depth⊗I: pad with ext(base)."""
    if depth < w.depth:
        raise ValueError(f"cannot embed depth-{w.depth} word {w} at depth {depth}")
    pad = (w.alphabet.extension(w.base),) * (depth - w.depth)
    return AddressWord(w.alphabet, w.letters + pad, w.base)


def distinguished_word(alphabet: Alphabet, base: str, depth: int) -> AddressWord:
    return AddressWord(alphabet, (alphabet.extension(base),) * depth, base)


Key = tuple[tuple[str, ...], str]


def _distance_key(arity: int, a: Key, b: Key) -> Dyadic:
    if a == b:
        return ZERO
    if a > b:
        a, b = b, a
    return _cached_distance(arity, a, b)


@lru_cache(maxsize=None)
def _cached_distance(arity: int, a: Key, b: Key) -> Dyadic:
    alphabet = alphabet_for_arity(arity)
    letters_a, base_a = a
    letters_b, base_b = b
    if not letters_a:
        return ZERO if base_a == base_b else ONE
    depth = len(letters_a) - 1

    def d(x: Key, y: Key) -> Dyadic:
        return _distance_key(arity, x, y)

    def point_of(symbol: str) -> Key:
        return (alphabet.extension(symbol),) * depth, symbol

    return level_distance(
        alphabet, d, point_of, letters_a[0], (letters_a[1:], base_a), letters_b[0], (letters_b[1:], base_b)
    )


def word_distance(w: AddressWord, v: AddressWord) -> Dyadic:
    """Exact distance in the colimit of the initial chain (both words embedded at a common depth)."""
    alphabet = _same_alphabet(w, v)
    depth = max(w.depth, v.depth)
    return _distance_key(alphabet.arity, embed(w, depth).key, embed(v, depth).key)


def words_equivalent(w: AddressWord, v: AddressWord) -> bool:
    return word_distance(w, v) == ZERO


def distance_cache_info():
    return _cached_distance.cache_info()


def clear_distance_cache() -> None:
    _cached_distance.cache_clear()


def tower_distance(
    carrier: PointedCarrier,
    letters1: tuple[str, ...],
    x: Hashable,
    letters2: tuple[str, ...],
    y: Hashable,
) -> Dyadic:
    """
    Distance between letters1⊗x and letters2⊗y in M^k⊗X for any pointed carrier X.
    Both letter sequences must have the same length k.
    """
    if len(letters1) != len(letters2):
        raise ValueError("letter sequences must have equal length")
    alphabet = carrier.alphabet
    memo: dict = {}

    def d(a, b) -> Dyadic:
        if a == b:
            return ZERO
        key = (a, b)
        if key in memo:
            return memo[key]
        (la, pa), (lb, pb) = a, b
        if not la:
            result = carrier.distance(pa, pb)
        else:
            k = len(la) - 1

            def point_of(symbol: str):
                return (alphabet.extension(symbol),) * k, carrier.point(symbol)

            result = level_distance(alphabet, d, point_of, la[0], (la[1:], pa), lb[0], (lb[1:], pb))
        memo[key] = memo[(b, a)] = result
        return result

    return d((tuple(letters1), x), (tuple(letters2), y))


def carrier_word_distance(carrier: PointedCarrier, w: AddressWord, v: AddressWord) -> Dyadic:
    """
    Distance of w and v read in M^k⊗X, with each base replaced by the carrier's
    distinguished point of that name. Equals word_distance for every valid carrier.
    """
    alphabet = _same_alphabet(w, v)
    if carrier.alphabet != alphabet:
        raise AlphabetMismatchError(f"carrier is {carrier.alphabet.name}, words are {alphabet.name}")
    depth = max(w.depth, v.depth)
    w, v = embed(w, depth), embed(v, depth)
    return tower_distance(carrier, w.letters, carrier.point(w.base), v.letters, carrier.point(v.base))


def fold_dyadic(w: AddressWord) -> Dyadic:
    """Canonical isometry of bi-pointed words into [0, 1]: B=0, T=1, l halves, r halves toward 1."""
    if w.alphabet.arity != 2:
        raise AlphabetMismatchError(f"fold_dyadic needs a bi-pointed word, got {w}")
    value = ZERO if w.base == "B" else ONE
    for m in reversed(w.letters):
        value = value.half() if m == "l" else (value + ONE).half()
    return value


_GASKET_VERTEX = {
    "T": GasketPoint(Dyadic(1, 1), ONE),
    "L": GasketPoint(ZERO, ZERO),
    "R": GasketPoint(ONE, ZERO),
}


def gasket_coords(w: AddressWord) -> GasketPoint:
    """Planar point of a tri-pointed word; y is reported in units of sqrt(3)/2."""
    if w.alphabet.arity != 3:
        raise AlphabetMismatchError(f"gasket_coords needs a tri-pointed word, got {w}")
    p = _GASKET_VERTEX[w.base]
    for m in reversed(w.letters):
        v = _GASKET_VERTEX[w.alphabet.closing(m)]
        p = GasketPoint((p.x + v.x).half(), (p.y + v.y).half())
    return p


def all_words(alphabet: Alphabet, depth: int) -> Iterator[AddressWord]:
    for letters in itertools.product(alphabet.letters, repeat=depth):
        for base in alphabet.bases:
            yield AddressWord(alphabet, letters, base)


_EDGE_LETTERS = {"b": "l", "c": "r"}
_EDGE_BASES = {"L": "B", "R": "T"}


def rename_edge_word(w: AddressWord) -> AddressWord:
    """Tri-pointed word on the bottom edge (letters b, c; base L or R) as a bi-pointed word."""
    if w.alphabet != TRIPOINTED:
        raise AlphabetMismatchError(f"expected a tri-pointed word, got {w}")
    try:
        letters = tuple(_EDGE_LETTERS[m] for m in w.letters)
        base = _EDGE_BASES[w.base]
    except KeyError:
        raise AlphabetMismatchError(f"{w} does not lie on the bottom edge") from None
    return AddressWord(BIPOINTED, letters, base)


@dataclass
class OracleTable:
    """Class-level distance matrix of M^depth⊗I, scaled by 2^depth."""

    alphabet: Alphabet
    depth: int
    class_of: dict[Key, int]
    matrix: list[list[int]] = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.matrix)

    def distance(self, w: AddressWord, v: AddressWord) -> Dyadic:
        if w.depth != self.depth or v.depth != self.depth:
            raise ValueError(f"oracle is built at depth {self.depth}")
        return Dyadic(self.matrix[self.class_of[w.key]][self.class_of[v.key]], self.depth)


def oracle_distance_table(alphabet: Alphabet, depth: int) -> OracleTable:
    """
    Build M^depth⊗I as iterated quotients: each level is `arity` half-scale copies of the
    previous one glued at distinguished points, with distances from shortest paths through
    the glued corners.
    """
    cap = ORACLE_DEPTH_CAP[alphabet.arity]
    if depth < 0 or depth > cap:
        raise ValueError(f"oracle depth must be in 0..{cap} for {alphabet.name}, got {depth}")
    unit = 1 << depth
    class_of: dict[Key, int] = {((), b): i for i, b in enumerate(alphabet.bases)}
    matrix = [[0 if i == j else unit for j in range(alphabet.arity)] for i in range(alphabet.arity)]
    letters = alphabet.letters

    for k in range(depth):
        nk = len(matrix)
        corner = {b: class_of[((alphabet.extension(b),) * k, b)] for b in alphabet.bases}
        portals = [(mi, corner[b]) for mi in range(len(letters)) for b in alphabet.bases]
        pidx = {p: i for i, p in enumerate(portals)}
        weights: list[list[int | None]] = [[None] * len(portals) for _ in portals]
        for (mi, ci), i in pidx.items():
            for (mj, cj), j in pidx.items():
                if mi == mj:
                    weights[i][j] = matrix[ci][cj] // 2
        for (m, u), (n, v) in alphabet.glue_pairs():
            i = pidx[(letters.index(m), corner[u])]
            j = pidx[(letters.index(n), corner[v])]
            weights[i][j] = weights[j][i] = 0
        through = floyd_warshall(weights)

        nodes = [(mi, c) for mi in range(len(letters)) for c in range(nk)]
        copy_portals = [[(pidx[(mi, corner[b])], corner[b]) for b in alphabet.bases] for mi in range(len(letters))]
        full = [[0] * len(nodes) for _ in nodes]
        for a, (ma, ca) in enumerate(nodes):
            row_a = matrix[ca]
            for b in range(a + 1, len(nodes)):
                mb, cb = nodes[b]
                row_b = matrix[cb]
                best = row_a[cb] // 2 if ma == mb else None
                for s, cs in copy_portals[ma]:
                    head = row_a[cs] // 2
                    ts = through[s]
                    for t, ct in copy_portals[mb]:
                        cand = head + ts[t] + row_b[ct] // 2
                        if best is None or cand < best:
                            best = cand
                full[a][b] = full[b][a] = best

        # merge zero-distance nodes into the next level's classes
        node_class: list[int] = []
        reps: list[int] = []
        for a in range(len(nodes)):
            for ci, r in enumerate(reps):
                if full[a][r] == 0:
                    node_class.append(ci)
                    break
            else:
                node_class.append(len(reps))
                reps.append(a)
        matrix = [[full[r][s] for s in reps] for r in reps]
        class_of = {
            ((m,) + key[0], key[1]): node_class[mi * nk + c]
            for key, c in class_of.items()
            for mi, m in enumerate(letters)
        }
        logger.debug("oracle %s level %d: %d classes", alphabet.name, k + 1, len(reps))

    return OracleTable(alphabet, depth, class_of, matrix)
