"""
Coalgebras whose mediating maps are not the obvious ones.

`interval-e` squeezes [0, 1] so that its first and last quarters collapse onto the
endpoints; the induced map f into [0, 1] is continuous but has no Lipschitz
constant. `triangle-e` does the same along the bottom edge of a triangle and sends
the apex to itself. Folding through the two-point and three-point algebras shows
that the initial algebra's mediating maps can be discontinuous.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Hashable, Iterable

from .address import AddressWord, fold_dyadic, rename_edge_word, word_distance
from .completion import limit_word
from .core import (
    BIPOINTED,
    ContractError,
    Dyadic,
    InitialObject,
    ONE,
    OutOfCarrierError,
    TRIPOINTED,
    UNIT_INTERVAL,
    ZERO,
    as_dyadic,
)
from .models import ClaimSample, ClaimsReport, DiscontinuityWitness, IntervalFamily, LipschitzRow
from .morphisms import BIP_ALG, CoalgebraSpec, TRIP_ALG, algebra_fold, mediating_final

logger = logging.getLogger(__name__)

NMAX_CAP = 12

QUARTER = Dyadic(1, 2)
HALF = Dyadic(1, 1)
THREE_QUARTERS = Dyadic(3, 2)


def _require_unit(x: Dyadic) -> Dyadic:
    x = as_dyadic(x)
    if not (ZERO <= x <= ONE):
        raise OutOfCarrierError(f"{x} is outside [0, 1]")
    return x


def interval_e_branches(x: Dyadic, letters: tuple[str, str] = ("l", "r")) -> list[tuple[str, Dyadic]]:
    """All quarter-interval branches containing x, deduplicated and ordered by letter."""
    x = _require_unit(x)
    low, high = letters
    out: list[tuple[str, Dyadic]] = []
    if x <= QUARTER:
        out.append((low, ZERO))
    if QUARTER <= x <= HALF:
        out.append((low, 4 * x - ONE))
    if HALF <= x <= THREE_QUARTERS:
        out.append((high, 4 * x - 2))
    if x >= THREE_QUARTERS:
        out.append((high, ONE))
    deduped = []
    for b in out:
        if b not in deduped:
            deduped.append(b)
    return sorted(deduped, key=lambda b: b[0])


def interval_e(x: Dyadic) -> tuple[str, Dyadic]:
    return interval_e_branches(x)[0]


@dataclass(frozen=True)
class TrianglePoint:
    """A point of the triangle carrier: the apex or a dyadic x on the bottom edge."""

    x: Dyadic = ZERO
    apex: bool = False

    def __post_init__(self):
        if self.apex and self.x != ZERO:
            object.__setattr__(self, "x", ZERO)

    def __str__(self):
        return "apex" if self.apex else f"{self.x},0"


APEX = TrianglePoint(ZERO, apex=True)
EDGE_LEFT = TrianglePoint(ZERO)
EDGE_RIGHT = TrianglePoint(ONE)


def _in_triangle(p) -> bool:
    return isinstance(p, TrianglePoint) and (p.apex or ZERO <= p.x <= ONE)


def triangle_e_branches(p: TrianglePoint) -> list[tuple[str, TrianglePoint]]:
    if not _in_triangle(p):
        raise OutOfCarrierError(f"{p} is not a point of the triangle")
    if p.apex:
        return [("a", APEX)]
    return [(m, TrianglePoint(y)) for m, y in interval_e_branches(p.x, ("b", "c"))]


def triangle_e(p: TrianglePoint) -> tuple[str, TrianglePoint]:
    return triangle_e_branches(p)[0]


INTERVAL_E = CoalgebraSpec(
    name="interval-e",
    alphabet=BIPOINTED,
    branches=interval_e_branches,
    distinguished={"B": ZERO, "T": ONE},
    contains=UNIT_INTERVAL.contains,
    description="[0, 1] with the outer quarters collapsed onto the endpoints",
)

TRIANGLE_E = CoalgebraSpec(
    name="triangle-e",
    alphabet=TRIPOINTED,
    branches=triangle_e_branches,
    distinguished={"T": APEX, "L": EDGE_LEFT, "R": EDGE_RIGHT},
    contains=_in_triangle,
    description="apex fixed by a; the bottom edge runs interval-e with letters b, c",
)


def f_reference(x: Dyadic) -> Dyadic:
    """
    Piecewise recursive definition of the map induced by interval-e:
    0 on [0, 1/4], f(4x-1)/2 on [1/4, 1/2], (1+f(4x-2))/2 on [1/2, 3/4], 1 on [3/4, 1].
    Where pieces meet, both must give the same value.
    """
    x = _require_unit(x)
    values = set()
    if x <= QUARTER:
        values.add(ZERO)
    if QUARTER <= x <= HALF:
        values.add(f_reference(4 * x - ONE).half())
    if HALF <= x <= THREE_QUARTERS:
        values.add((ONE + f_reference(4 * x - 2)).half())
    if x >= THREE_QUARTERS:
        values.add(ONE)
    if len(values) != 1:
        raise ContractError(f"pieces disagree at {x}: {sorted(values)}")
    return values.pop()


def edge_reference(p: TrianglePoint) -> Dyadic:
    """The same recursion read on the bottom edge, valued in [0, 1]."""
    if p.apex:
        raise OutOfCarrierError("the apex is not on the bottom edge")
    return f_reference(p.x)


def iterated_value(coalgebra: CoalgebraSpec, x: Hashable) -> Dyadic:
    """Mediating map of `coalgebra` at x, read as a dyadic in [0, 1]."""
    w = limit_word(mediating_final(coalgebra, x))
    if w.alphabet == TRIPOINTED:
        w = rename_edge_word(w)
    return fold_dyadic(w)


def partial_sum(n: int) -> Dyadic:
    """1/4 + 1/16 + ... + 1/4^n."""
    total = ZERO
    for j in range(1, n + 1):
        total = total + Dyadic(1, 2 * j)
    return total


def interval_families(n: int) -> IntervalFamily:
    """I_n = [1/4, s_n] and J_n = [s_n + 3/4^(n+1), s_n + 4/4^(n+1)], with s_n = 1/4 + ... + 1/4^n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    s = partial_sum(n)
    step = Dyadic(1, 2 * (n + 1))
    return IntervalFamily(n=n, i_lo=QUARTER, i_hi=s, j_lo=s + 3 * step, j_hi=s + 4 * step)


def expected_on_i(n: int) -> Dyadic:
    return ZERO


def expected_on_j(n: int) -> Dyadic:
    return Dyadic(1, n)


def sample_points(lo: Dyadic, hi: Dyadic, samples: int) -> list[Dyadic]:
    """Both endpoints plus `samples` evenly spread interior points on a dyadic grid."""
    if lo == hi:
        return [lo]
    if samples < 1:
        return [lo, hi]
    exp = (samples + 1).bit_length()
    cells = 1 << exp
    width = hi - lo
    # cells >= samples + 2, so the indices are distinct and strictly inside (0, cells)
    interior = [lo + width * Dyadic((k * cells) // (samples + 1), exp) for k in range(1, samples + 1)]
    return [lo] + interior + [hi]


def _claims(
    name: str,
    n_max: int,
    samples: int,
    value: Callable[[Dyadic], Dyadic],
    reference: Callable[[Dyadic], Dyadic],
) -> ClaimsReport:
    if n_max < 1 or n_max > NMAX_CAP:
        raise ValueError(f"n_max must be in 1..{NMAX_CAP}, got {n_max}")
    report = ClaimsReport(coalgebra=name)
    for n in range(1, n_max + 1):
        fam = interval_families(n)
        for family, lo, hi, expected in (
            ("I", fam.i_lo, fam.i_hi, expected_on_i(n)),
            ("J", fam.j_lo, fam.j_hi, expected_on_j(n)),
        ):
            for x in sample_points(lo, hi, samples):
                report.samples.append(ClaimSample(family, n, x, expected, reference(x), value(x)))
    bad = report.failures
    logger.info("%s claims: %d samples, %d failures", name, len(report.samples), len(bad))
    return report


def verify_claims_ab(
    n_max: int,
    samples_per_interval: int,
    coalgebra: CoalgebraSpec = INTERVAL_E,
    reference: Callable[[Dyadic], Dyadic] = f_reference,
) -> ClaimsReport:
    """Check that f is constant on every I_n and J_n, by recursion and by iterating the coalgebra."""
    return _claims(coalgebra.name, n_max, samples_per_interval, lambda x: iterated_value(coalgebra, x), reference)


def lipschitz_table(n_max: int, value: Callable[[Dyadic], Dyadic] = f_reference) -> list[LipschitzRow]:
    """
    For each n, x = s_(n+1) sits on a zero plateau and y opens J_n at height 1/2^n,
    only 2/4^(n+1) away, so the ratio is 2^(n+1).
    """
    if n_max < 1 or n_max > NMAX_CAP:
        raise ValueError(f"n_max must be in 1..{NMAX_CAP}, got {n_max}")
    rows = []
    for n in range(1, n_max + 1):
        s = partial_sum(n)
        step = Dyadic(1, 2 * (n + 1))
        x, y = s + step, s + 3 * step
        fx, fy = value(x), value(y)
        rows.append(LipschitzRow(n, x, y, fx, fy, abs(fy - fx).ratio(y - x)))
    return rows


def triangle_g_claims(n_max: int, samples: int) -> ClaimsReport:
    """The bottom-edge map of triangle-e obeys the same plateaus and the same ratio table."""

    def value(x: Dyadic) -> Dyadic:
        return iterated_value(TRIANGLE_E, TrianglePoint(x))

    def reference(x: Dyadic) -> Dyadic:
        return edge_reference(TrianglePoint(x))

    report = _claims(TRIANGLE_E.name, n_max, samples, value, reference)
    report.lipschitz = lipschitz_table(n_max, value)
    return report


def discontinuity_witness_bip(n: int) -> DiscontinuityWitness:
    """T and r^n.B are 1/2^n apart, yet fold to 1 and 0 in the two-point algebra."""
    if n < 1:
        raise ValueError("n must be >= 1")
    top = AddressWord(BIPOINTED, (), "T")
    near = AddressWord(BIPOINTED, ("r",) * n, "B")
    images = (algebra_fold(BIP_ALG, top), algebra_fold(BIP_ALG, near))
    return DiscontinuityWitness(
        n=n,
        inputs=(str(top), str(near)),
        input_distance=word_distance(top, near),
        images=(str(images[0]), str(images[1])),
        image_distance=abs(images[0] - images[1]),
    )


def discontinuity_witness_trip(n: int) -> DiscontinuityWitness:
    """a^(n+1).T and a^(n+1).L are 1/2^(n+1) apart, yet fold to T and L in the three-point algebra."""
    if n < 1:
        raise ValueError("n must be >= 1")
    apex = AddressWord(TRIPOINTED, ("a",) * (n + 1), "T")
    near = AddressWord(TRIPOINTED, ("a",) * (n + 1), "L")
    images = (algebra_fold(TRIP_ALG, apex), algebra_fold(TRIP_ALG, near))
    return DiscontinuityWitness(
        n=n,
        inputs=(str(apex), str(near)),
        input_distance=word_distance(apex, near),
        images=images,
        image_distance=InitialObject(TRIPOINTED).distance(*images),
    )


def write_claims_csv(path: Path, report: ClaimsReport) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "x_num", "x_exp", "f_num", "f_exp", "family", "agrees"])
        for s in report.samples:
            writer.writerow([s.n, s.x.num, s.x.exp, s.reference.num, s.reference.exp, s.family, int(s.ok)])
    logger.debug("wrote %d claim rows to %s", len(report.samples), path)


def write_lipschitz_csv(path: Path, rows: Iterable[LipschitzRow]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "ratio_num", "ratio_exp"])
        for r in rows:
            ratio = Dyadic.from_fraction(r.ratio)
            writer.writerow([r.n, ratio.num, ratio.exp])
