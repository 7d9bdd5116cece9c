from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, List, Optional

from .core import Dyadic


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple[Hashable, ...]
    detail: str = ""

    def __str__(self):
        pts = ", ".join(str(w) for w in self.witness)
        return f"{self.axiom}({pts}): {self.detail}" if self.detail else f"{self.axiom}({pts})"


@dataclass
class ValidationReport:
    """Every violated axiom instance found by a brute-force check."""

    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def axioms(self) -> set[str]:
        return {v.axiom for v in self.violations}

    def by_axiom(self, axiom: str) -> list[Violation]:
        return [v for v in self.violations if v.axiom == axiom]


@dataclass(frozen=True)
class DistanceInterval:
    """Exact enclosure [lo, hi] of a completion distance, computed at depth p."""

    lo: Dyadic
    hi: Dyadic
    center: Dyadic
    depth: int

    def __contains__(self, value: Dyadic) -> bool:
        return self.lo <= value <= self.hi

    @property
    def width(self) -> Dyadic:
        return self.hi - self.lo

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"


@dataclass(frozen=True)
class MapPropertyReport:
    """Outcome of testing a map and its tensor image for the same metric property."""

    prop: str
    k: Optional[Fraction]
    map_holds: bool
    tensor_holds: bool
    map_constant: Optional[Fraction]
    tensor_constant: Optional[Fraction]
    map_witnesses: tuple = ()
    tensor_witnesses: tuple = ()

    @property
    def preserved(self) -> bool:
        """True when the property of the map carries over to its tensor image."""
        return self.tensor_holds or not self.map_holds


@dataclass(frozen=True)
class GasketPoint:
    """Planar point (x, y * sqrt(3)/2); both coordinates exact dyadics."""

    x: Dyadic
    y: Dyadic

    def __str__(self):
        return f"({self.x}, {self.y}*sqrt(3)/2)"


@dataclass(frozen=True)
class IntervalFamily:
    n: int
    i_lo: Dyadic
    i_hi: Dyadic
    j_lo: Dyadic
    j_hi: Dyadic


@dataclass(frozen=True)
class ClaimSample:
    family: str  # "I" or "J"
    n: int
    x: Dyadic
    expected: Dyadic
    reference: Dyadic
    iterated: Dyadic

    @property
    def ok(self) -> bool:
        return self.reference == self.expected and self.iterated == self.expected


@dataclass(frozen=True)
class LipschitzRow:
    n: int
    x: Dyadic
    y: Dyadic
    fx: Dyadic
    fy: Dyadic
    ratio: Fraction

    @property
    def expected_ratio(self) -> int:
        return 2 ** (self.n + 1)

    @property
    def ok(self) -> bool:
        return self.ratio == self.expected_ratio


@dataclass
class ClaimsReport:
    coalgebra: str
    samples: List[ClaimSample] = field(default_factory=list)
    lipschitz: List[LipschitzRow] = field(default_factory=list)

    @property
    def failures(self) -> list[ClaimSample]:
        return [s for s in self.samples if not s.ok]

    @property
    def first_failure(self) -> Optional[ClaimSample]:
        bad = self.failures
        return bad[0] if bad else None

    @property
    def ok(self) -> bool:
        return not self.failures and all(r.ok for r in self.lipschitz)


@dataclass(frozen=True)
class DiscontinuityWitness:
    n: int
    inputs: tuple[str, str]
    input_distance: Dyadic
    images: tuple[str, str]
    image_distance: Dyadic


@dataclass(frozen=True)
class CheckResult:
    name: str
    checked: int
    failures: int = 0
    first_failure: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.failures == 0


@dataclass
class SuiteResult:
    name: str
    checks: List[CheckResult] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)
