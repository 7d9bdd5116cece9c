"""
The tensor functors M⊗- on finite pointed spaces.

A raw point of M⊗X is a letter paired with a point of X. Raw points are glued
along the alphabet's identifications, and distance is the quotient metric,
which collapses to a closed formula: half the distance inside one copy, and
for different copies half the cheapest route through a glued corner (the
tri-pointed case may also go through the third copy, paying the distance
between two of its distinguished points).
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Mapping

from .core import (
    Alphabet,
    AlphabetMismatchError,
    ContractError,
    Dyadic,
    FinitePointedSpace,
    GluingTable,
    StructureError,
    ZERO,
)
from .models import MapPropertyReport

logger = logging.getLogger(__name__)

PROPERTIES = ("short", "lipschitz", "isometric-embedding")


@dataclass(frozen=True, order=True)
class TensorPoint:
    letter: str
    point: Hashable

    def __str__(self):
        return f"{self.letter}⊗{self.point}"


def level_distance(
    alphabet: Alphabet,
    d: Callable[[Hashable, Hashable], Dyadic],
    point_of: Callable[[str], Hashable],
    m: str,
    x: Hashable,
    n: str,
    y: Hashable,
) -> Dyadic:
    """
    Distance between m⊗x and n⊗y given the metric `d` of X and its distinguished points.
    """
    if m == n:
        return d(x, y).half()
    u, v = alphabet.glue(m, n)
    direct = d(x, point_of(u)) + d(point_of(v), y)
    if alphabet.arity == 2:
        return direct.half()
    k = alphabet.third(m, n)
    u2, k_m = alphabet.glue(m, k)
    v2, k_n = alphabet.glue(n, k)
    detour = d(x, point_of(u2)) + d(point_of(k_m), point_of(k_n)) + d(point_of(v2), y)
    return min(direct, detour).half()


def _check_point(space: FinitePointedSpace, p: TensorPoint) -> None:
    if p.letter not in space.alphabet.letters:
        raise AlphabetMismatchError(f"letter {p.letter!r} not in alphabet {space.alphabet.name}")
    space.index(p.point)


def tensor_dist_2(space: FinitePointedSpace, p: TensorPoint, q: TensorPoint) -> Dyadic:
    if space.alphabet.arity != 2:
        raise AlphabetMismatchError("tensor_dist_2 needs a bi-pointed space")
    _check_point(space, p)
    _check_point(space, q)
    return level_distance(space.alphabet, space.distance, space.point, p.letter, p.point, q.letter, q.point)


def tensor_dist_3(
    space: FinitePointedSpace, p: TensorPoint, q: TensorPoint, gluing: GluingTable | None = None
) -> Dyadic:
    if space.alphabet.arity != 3:
        raise AlphabetMismatchError("tensor_dist_3 needs a tri-pointed space")
    _check_point(space, p)
    _check_point(space, q)
    alphabet = space.alphabet
    if gluing is not None and gluing != alphabet.gluing:
        alphabet = Alphabet(
            name=alphabet.name,
            arity=3,
            letters=alphabet.letters,
            bases=alphabet.bases,
            extension_letters=alphabet.extension_letters,
            gluing=gluing,
        )
    return level_distance(alphabet, space.distance, space.point, p.letter, p.point, q.letter, q.point)


def tensor_dist(space: FinitePointedSpace, p: TensorPoint, q: TensorPoint) -> Dyadic:
    if space.alphabet.arity == 2:
        return tensor_dist_2(space, p, q)
    return tensor_dist_3(space, p, q)


def raw_points(space: FinitePointedSpace) -> list[TensorPoint]:
    return [TensorPoint(m, x) for m in space.alphabet.letters for x in space.points]


def tensor_classes(space: FinitePointedSpace) -> dict[TensorPoint, TensorPoint]:
    """Map every raw point to the first raw point of its glued class."""
    alphabet = space.alphabet
    rep: dict[TensorPoint, TensorPoint] = {p: p for p in raw_points(space)}
    for (m, u), (n, v) in alphabet.glue_pairs():
        a = TensorPoint(m, space.point(u))
        b = TensorPoint(n, space.point(v))
        first, second = sorted((rep[a], rep[b]), key=list(rep).index)
        for key, value in rep.items():
            if value == second:
                rep[key] = first
    return rep


def tensor_space(space: FinitePointedSpace) -> FinitePointedSpace:
    """Materialize M⊗X as a finite pointed space over class representatives."""
    alphabet = space.alphabet
    rep = tensor_classes(space)
    labels: list[TensorPoint] = []
    for p in rep.values():
        if p not in labels:
            labels.append(p)
    rows = tuple(tuple(tensor_dist(space, p, q) for q in labels) for p in labels)
    distinguished = tuple(rep[TensorPoint(alphabet.extension(b), space.point(b))] for b in alphabet.bases)
    return FinitePointedSpace(tuple(labels), distinguished, rows)


@dataclass(frozen=True)
class PointedMap:
    """A total map between finite pointed spaces of the same arity."""

    source: FinitePointedSpace
    target: FinitePointedSpace
    mapping: Mapping[Hashable, Hashable] = field(hash=False)

    def __post_init__(self):
        if self.source.alphabet != self.target.alphabet:
            raise AlphabetMismatchError("source and target have different alphabets")
        for x in self.source.points:
            if x not in self.mapping:
                raise StructureError(f"map is undefined at {x!r}")
            self.target.index(self.mapping[x])

    def __call__(self, x: Hashable) -> Hashable:
        return self.mapping[x]

    def check_pointed(self) -> None:
        for b in self.source.alphabet.bases:
            if self(self.source.point(b)) != self.target.point(b):
                raise ContractError(f"map does not preserve distinguished point {b}")


def functor_apply(f: PointedMap, p: TensorPoint) -> TensorPoint:
    """(M⊗f)(m⊗x) = m⊗f(x); the map must preserve distinguished points."""
    f.check_pointed()
    _check_point(f.source, p)
    return TensorPoint(p.letter, f(p.point))


def _pairs_report(pairs, prop: str, k: Fraction | None):
    """Scan (dx, dfx, witness) triples; return (holds, best constant or None, witnesses)."""
    best: Fraction | None = Fraction(0)
    bad = []
    for dx, dfx, witness in pairs:
        if dx == ZERO:
            if dfx != ZERO:
                best = None
        elif best is not None:
            best = max(best, dfx.ratio(dx))
        if prop == "short":
            fails = dfx > dx
        elif prop == "isometric-embedding":
            fails = dfx != dx
        else:
            fails = dfx.to_fraction() > k * dx.to_fraction()
        if fails:
            bad.append(witness)
    return not bad, best, tuple(bad[:5])


def best_lipschitz_constant(f: PointedMap) -> Fraction | None:
    """Smallest k with d(fx, fy) <= k d(x, y); None if no finite constant exists."""
    _, best, _ = _pairs_report(_map_pairs(f), "short", None)
    return best


def _map_pairs(f: PointedMap):
    src, dst = f.source, f.target
    for x, y in itertools.combinations(src.points, 2):
        yield src.distance(x, y), dst.distance(f(x), f(y)), (x, y)


def _tensor_pairs(f: PointedMap):
    src, dst = f.source, f.target
    for p, q in itertools.combinations(raw_points(src), 2):
        fp = TensorPoint(p.letter, f(p.point))
        fq = TensorPoint(q.letter, f(q.point))
        yield tensor_dist(src, p, q), tensor_dist(dst, fp, fq), (p, q)


def check_map_property(f: PointedMap, prop: str, k: Fraction | int | None = None) -> MapPropertyReport:
    """
    Test f and M⊗f for `prop`. For "lipschitz" with no `k`, f's own best constant is used.
    """
    if prop not in PROPERTIES:
        raise ValueError(f"unknown property {prop!r}; expected one of {', '.join(PROPERTIES)}")
    f.check_pointed()
    if prop == "lipschitz":
        if k is None:
            k = best_lipschitz_constant(f)
            if k is None:
                raise ContractError("map has no finite Lipschitz constant")
        k = Fraction(k)
    else:
        k = None
    map_holds, map_best, map_bad = _pairs_report(_map_pairs(f), prop, k)
    tensor_holds, tensor_best, tensor_bad = _pairs_report(_tensor_pairs(f), prop, k)
    logger.debug("%s: map=%s tensor=%s", prop, map_holds, tensor_holds)
    return MapPropertyReport(
        prop=prop,
        k=k,
        map_holds=map_holds,
        tensor_holds=tensor_holds,
        map_constant=map_best,
        tensor_constant=tensor_best,
        map_witnesses=map_bad,
        tensor_witnesses=tensor_bad,
    )


def random_pointed_map(rng: random.Random, source: FinitePointedSpace, target: FinitePointedSpace) -> PointedMap:
    """Distinguished points go to their namesakes; everything else lands anywhere."""
    mapping = {}
    for x in source.points:
        if x in source.distinguished:
            mapping[x] = target.point(source.alphabet.bases[source.distinguished.index(x)])
        else:
            mapping[x] = rng.choice(target.points)
    return PointedMap(source, target, mapping)


def inclusion_map(source: FinitePointedSpace, target: FinitePointedSpace) -> PointedMap:
    return PointedMap(source, target, {x: x for x in source.points})
