"""
Verification suites run by `pcoalg verify`.

Each suite returns a SuiteResult of named CheckResults (count checked, count
failed, first failing instance). Suites never raise on a failed property.
"""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, replace
from typing import Callable, Dict, Hashable, Iterable, Iterator

from .address import (
    AddressWord,
    all_words,
    carrier_word_distance,
    clear_distance_cache,
    distance_cache_info,
    distinguished_word,
    embed,
    fold_dyadic,
    oracle_distance_table,
    word_distance,
)
from .completion import truncate
from .core import (
    Alphabet,
    BIPOINTED,
    Dyadic,
    TRIPOINTED,
    UNIT_INTERVAL,
    axiom_violations,
    random_pointed_space,
    subspace,
    validate_pointed_space,
)
from .experiments import (
    APEX,
    INTERVAL_E,
    TRIANGLE_E,
    TrianglePoint,
    discontinuity_witness_bip,
    discontinuity_witness_trip,
    edge_reference,
    f_reference,
    iterated_value,
    lipschitz_table,
    triangle_g_claims,
    verify_claims_ab,
)
from .models import CheckResult, SuiteResult
from .morphisms import (
    BIP_ALG,
    DYADIC_PHI,
    FREYD_I,
    TRIP_ALG,
    CoalgebraSpec,
    algebra_square_failures,
    check_coalgebra_square,
    continuity_bound,
    continuity_defect,
    mediating_final,
    square_bound,
)
from .tensor import check_map_property, inclusion_map, random_pointed_map, tensor_space

logger = logging.getLogger(__name__)

DISTANCE_CACHE_LIMIT = 200_000


@dataclass(frozen=True)
class VerifyCaps:
    bi_depth: int = 8
    tri_depth: int = 4
    nmax: int = 10
    samples: int = 8
    trials: int = 1000
    seeds: int = 100
    seed: int = 0
    cauchy_depth: int = 20
    square_depth: int = 12
    overlap_depth: int = 15
    route_exp: int = 10
    isometry_depth: int = 10
    continuity_depth: int = 12
    mu_depth: int = 5

    @classmethod
    def from_config(cls, cfg: dict) -> "VerifyCaps":
        section = cfg.get("verify", {})
        known = {k: int(v) for k, v in section.items() if k in cls.__dataclass_fields__}
        return cls(**known)

    def with_cap(self, suite: str, cap: int | None) -> "VerifyCaps":
        """Apply the positional CAP of `verify SUITE CAP` to the field that suite is bounded by."""
        if cap is None or suite not in CAP_FIELDS:
            return self
        field_name = CAP_FIELDS[suite]
        if field_name == "bi_depth":
            return replace(self, bi_depth=cap, tri_depth=min(cap, self.tri_depth))
        return replace(self, **{field_name: cap})


CAP_FIELDS = {
    "cauchy": "cauchy_depth",
    "claims-ab": "nmax",
    "continuity": "continuity_depth",
    "discontinuity": "nmax",
    "embedding": "bi_depth",
    "independence": "overlap_depth",
    "isometry-ck": "isometry_depth",
    "lipschitz": "nmax",
    "metric-axioms": "bi_depth",
    "mu-embedding": "mu_depth",
    "oracle": "bi_depth",
    "route": "route_exp",
    "squares": "square_depth",
    "tensor-maps": "trials",
}


def _tally(name: str, outcomes: Iterable[tuple[bool, str]]) -> CheckResult:
    """Fold (ok, description) pairs into a CheckResult keeping the first failure."""
    checked = failures = 0
    first = None
    for ok, desc in outcomes:
        checked += 1
        if not ok:
            failures += 1
            if first is None:
                first = desc
    return CheckResult(name, checked, failures, first)


def _depths(caps: VerifyCaps) -> list[tuple[Alphabet, int]]:
    return [(BIPOINTED, caps.bi_depth), (TRIPOINTED, caps.tri_depth)]


def _word_pairs(alphabet: Alphabet, depth: int):
    words = list(all_words(alphabet, depth))
    for i, w in enumerate(words):
        for v in words[i:]:
            yield w, v


# suites -----------------------------------------------------------------------


def suite_gluing(caps: VerifyCaps) -> list[CheckResult]:
    def w(alphabet, text):
        letters, base = text.split(".")
        return AddressWord(alphabet, tuple(letters), base)

    cases = [
        (w(BIPOINTED, "l.T"), w(BIPOINTED, "r.B"), Dyadic(0)),
        (w(BIPOINTED, "l.B"), w(BIPOINTED, "r.T"), Dyadic(1)),
        (w(TRIPOINTED, "a.L"), w(TRIPOINTED, "b.T"), Dyadic(0)),
        (w(TRIPOINTED, "a.R"), w(TRIPOINTED, "c.T"), Dyadic(0)),
        (w(TRIPOINTED, "c.L"), w(TRIPOINTED, "b.R"), Dyadic(0)),
    ]
    return [
        _tally(
            "gluing/identifications",
            ((word_distance(a, b) == want, f"d({a}, {b}) = {word_distance(a, b)}, expected {want}") for a, b, want in cases),
        )
    ]


def _class_matrix(alphabet: Alphabet, depth: int):
    """Distinct points of M^depth⊗I with their distances scaled by 2^depth."""
    reps = []
    for w in all_words(alphabet, depth):
        if all(word_distance(w, r) != 0 for r in reps):
            reps.append(w)
    matrix = []
    for w in reps:
        row = []
        for v in reps:
            d = word_distance(w, v)
            row.append(d.num << (depth - d.exp))
        matrix.append(row)
    return reps, matrix


def _class_index(reps, w) -> int:
    return next(i for i, r in enumerate(reps) if word_distance(r, w) == 0)


def suite_metric_axioms(caps: VerifyCaps) -> list[CheckResult]:
    results = []
    for alphabet, cap in _depths(caps):
        checked = failures = 0
        first = None
        for depth in range(cap + 1):
            reps, matrix = _class_matrix(alphabet, depth)
            labels = [str(r) for r in reps]
            corners = [_class_index(reps, distinguished_word(alphabet, b, depth)) for b in alphabet.bases]
            found = axiom_violations(labels, corners, matrix, 1 << depth)
            checked += len(reps) ** 3
            failures += len(found)
            if found and first is None:
                first = f"depth {depth}: {found[0]}"
            logger.debug("metric axioms %s depth %d: %d points", alphabet.name, depth, len(reps))
        results.append(CheckResult(f"metric-axioms/{alphabet.name}", checked, failures, first))
    return results


def suite_oracle(caps: VerifyCaps) -> list[CheckResult]:
    results = []
    for alphabet, cap in _depths(caps):

        def outcomes() -> Iterator[tuple[bool, str]]:
            for depth in range(cap + 1):
                table = oracle_distance_table(alphabet, depth)
                for w, v in _word_pairs(alphabet, depth):
                    got, want = word_distance(w, v), table.distance(w, v)
                    yield got == want, f"d({w}, {v}) = {got}, oracle {want}"

        results.append(_tally(f"oracle/{alphabet.name}", outcomes()))
    return results


def suite_isometry_ck(caps: VerifyCaps) -> list[CheckResult]:
    def outcomes():
        for depth in range(caps.isometry_depth + 1):
            words = list(all_words(BIPOINTED, depth))
            folds = [fold_dyadic(w) for w in words]
            for i, w in enumerate(words):
                # depth 10 has ~2M pairs; keep the memo from holding all of them
                if distance_cache_info().currsize > DISTANCE_CACHE_LIMIT:
                    clear_distance_cache()
                for j in range(i, len(words)):
                    d = word_distance(w, words[j])
                    gap = abs(folds[i] - folds[j])
                    yield d == gap, f"d({w}, {words[j]}) = {d} but folds differ by {gap}"

    return [_tally("isometry-ck/bi-pointed", outcomes())]


def suite_embedding(caps: VerifyCaps) -> list[CheckResult]:
    results = []
    for alphabet, cap in ((BIPOINTED, min(caps.bi_depth, 6)), (TRIPOINTED, min(caps.tri_depth, 3))):

        def outcomes():
            for depth in range(cap + 1):
                for w, v in _word_pairs(alphabet, depth):
                    d = word_distance(w, v)
                    for extra in (1, 2):
                        e = word_distance(embed(w, depth + extra), embed(v, depth + extra))
                        yield d == e, f"d({w}, {v}) = {d} changes to {e} after embedding"

        results.append(_tally(f"embedding/{alphabet.name}", outcomes()))
    return results


def suite_mu_embedding(caps: VerifyCaps) -> list[CheckResult]:
    rng = random.Random(caps.seed)
    carriers = [
        (BIPOINTED, "unit-interval", UNIT_INTERVAL, caps.mu_depth),
        (BIPOINTED, "random", random_pointed_space(rng, rng.randint(2, 6), 2), caps.mu_depth),
        (TRIPOINTED, "random", random_pointed_space(rng, rng.randint(3, 6), 3), min(caps.mu_depth, caps.tri_depth)),
    ]
    results = []
    for alphabet, label, carrier, cap in carriers:

        def outcomes():
            for depth in range(cap + 1):
                for w, v in _word_pairs(alphabet, depth):
                    d, got = word_distance(w, v), carrier_word_distance(carrier, w, v)
                    yield d == got, f"d({w}, {v}) = {d}, over {label} carrier {got}"

        results.append(_tally(f"mu-embedding/{alphabet.name}/{label}", outcomes()))
    return results


CONTINUITY_GRID_EXP = 5


def suite_continuity(caps: VerifyCaps) -> list[CheckResult]:
    grid = [Dyadic(i, CONTINUITY_GRID_EXP) for i in range((1 << CONTINUITY_GRID_EXP) + 1)]
    results = []
    for c in (FREYD_I, INTERVAL_E):

        def outcomes():
            for p in range(1, caps.continuity_depth + 1):
                for i, x in enumerate(grid):
                    for y in grid[i + 1:]:
                        gap = continuity_defect(c, x, y, p)
                        yield gap <= continuity_bound(p), f"x={x} y={y} p={p}: gap {gap}"

        results.append(_tally(f"continuity/{c.name}", outcomes()))
    return results


def _seed_points(coalgebra: CoalgebraSpec, caps: VerifyCaps) -> list[Hashable]:
    rng = random.Random(caps.seed)
    xs = [Dyadic(rng.randint(0, 1 << 10), 10) for _ in range(caps.seeds)]
    if coalgebra.alphabet == TRIPOINTED:
        return [APEX] + [TrianglePoint(x) for x in xs[1:]]
    return xs


BUILTIN_COALGEBRAS = (FREYD_I, INTERVAL_E, TRIANGLE_E)


def suite_cauchy(caps: VerifyCaps) -> list[CheckResult]:
    results = []
    q_max = caps.cauchy_depth
    for c in BUILTIN_COALGEBRAS:

        def outcomes():
            for x in _seed_points(c, caps):
                stream = mediating_final(c, x)
                words = [truncate(stream, p) for p in range(1, q_max + 1)]
                for p in range(1, q_max + 1):
                    for q in range(p + 1, q_max + 1):
                        d = word_distance(words[p - 1], words[q - 1])
                        yield d <= Dyadic(1, p), f"x={x}: d(theta_{p}, theta_{q}) = {d}"

        results.append(_tally(f"cauchy/{c.name}", outcomes()))
    return results


def suite_independence(caps: VerifyCaps) -> list[CheckResult]:
    results = []
    for c in (FREYD_I, INTERVAL_E):
        split = 0

        def outcomes():
            nonlocal split
            for i in range((1 << 8) + 1):
                x = Dyadic(i, 8)
                first = mediating_final(c, x, "first")
                last = mediating_final(c, x, "last")
                if first.prefix(caps.overlap_depth) != last.prefix(caps.overlap_depth):
                    split += 1
                for p in range(1, caps.overlap_depth + 1):
                    a, b = truncate(first, p), truncate(last, p)
                    yield word_distance(a, b) == 0, f"x={x} depth {p}: {a} vs {b}"

        results.append(_tally(f"independence/{c.name}", outcomes()))
        logger.info("independence %s: %d points take different branches", c.name, split)
    return results


def suite_squares(caps: VerifyCaps) -> list[CheckResult]:
    results = []
    for c in BUILTIN_COALGEBRAS:

        def outcomes():
            for x in _seed_points(c, caps):
                for p in range(2, caps.square_depth + 1):
                    defect = check_coalgebra_square(c, x, p)
                    yield defect <= square_bound(p), f"x={x} p={p}: defect {defect}"

        results.append(_tally(f"squares/coalgebra/{c.name}", outcomes()))
    for a in (BIP_ALG, DYADIC_PHI, TRIP_ALG):
        depth = 6
        total = sum(1 for _ in all_words(a.alphabet, depth)) * a.alphabet.arity
        bad = list(algebra_square_failures(a, depth))
        first = f"{bad[0][0]} applied to {bad[0][1]}" if bad else None
        results.append(CheckResult(f"squares/algebra/{a.name}", total, len(bad), first))
    return results


def suite_claims_ab(caps: VerifyCaps) -> list[CheckResult]:
    report = verify_claims_ab(caps.nmax, caps.samples)
    tri = triangle_g_claims(caps.nmax, caps.samples)
    bi_rows = lipschitz_table(caps.nmax)

    def describe(s):
        return f"{s.family}_{s.n} x={s.x}: reference {s.reference}, iterated {s.iterated}, expected {s.expected}"

    return [
        _tally("claims-ab/interval-e", ((s.ok, describe(s)) for s in report.samples)),
        _tally("claims-ab/triangle-e", ((s.ok, describe(s)) for s in tri.samples)),
        _tally(
            "claims-ab/triangle-e-ratios",
            ((g.ratio == f.ratio, f"n={f.n}: {g.ratio} != {f.ratio}") for f, g in zip(bi_rows, tri.lipschitz)),
        ),
    ]


def suite_lipschitz(caps: VerifyCaps) -> list[CheckResult]:
    rows = lipschitz_table(caps.nmax)
    increasing = all(a.ratio < b.ratio for a, b in zip(rows, rows[1:]))
    return [
        _tally("lipschitz/ratios", ((r.ok, f"n={r.n}: ratio {r.ratio}, expected {r.expected_ratio}") for r in rows)),
        CheckResult("lipschitz/unbounded", 1, 0 if increasing else 1, None if increasing else "ratios not increasing"),
    ]


def lipschitz_lines(caps: VerifyCaps) -> list[str]:
    return [f"n={r.n} x={r.x} y={r.y} f(x)={r.fx} f(y)={r.fy} ratio={r.ratio}" for r in lipschitz_table(caps.nmax)]


def suite_discontinuity(caps: VerifyCaps) -> list[CheckResult]:
    def bi():
        for n in range(1, caps.nmax + 1):
            w = discontinuity_witness_bip(n)
            ok = w.input_distance == Dyadic(1, n) and w.image_distance == 1
            yield ok, f"n={n}: inputs {w.input_distance} apart, images {w.image_distance} apart"

    def tri():
        for n in range(1, caps.nmax + 1):
            w = discontinuity_witness_trip(n)
            ok = w.input_distance == Dyadic(1, n + 1) and w.image_distance == 1
            yield ok, f"n={n}: inputs {w.input_distance} apart, images {w.image_distance} apart"

    return [_tally("discontinuity/bip-alg", bi()), _tally("discontinuity/trip-alg", tri())]


def suite_tensor_maps(caps: VerifyCaps) -> list[CheckResult]:
    rng = random.Random(caps.seed)
    outcomes: dict[str, list[tuple[bool, str]]] = {"axioms": [], "short": [], "lipschitz": [], "isometric": []}
    for trial in range(caps.trials):
        arity = rng.choice((2, 3))
        target = random_pointed_space(rng, rng.randint(arity, 6), arity)
        source = random_pointed_space(rng, rng.randint(arity, 6), arity)

        report = validate_pointed_space(tensor_space(target))
        outcomes["axioms"].append((report.ok, f"trial {trial}: {report.violations[:1]}"))

        f = random_pointed_map(rng, source, target)
        short = check_map_property(f, "short")
        outcomes["short"].append((short.preserved, f"trial {trial}: {short.tensor_witnesses}"))
        if short.map_constant is not None:
            lip = check_map_property(f, "lipschitz", short.map_constant)
            outcomes["lipschitz"].append(
                (lip.tensor_holds, f"trial {trial}: map {lip.map_constant}, tensor {lip.tensor_constant}")
            )

        others = [p for p in target.points if p not in target.distinguished]
        keep = rng.sample(others, rng.randint(0, len(others)))
        emb = check_map_property(inclusion_map(subspace(target, keep), target), "isometric-embedding")
        outcomes["isometric"].append((emb.map_holds and emb.tensor_holds, f"trial {trial}: {emb.tensor_witnesses}"))
    return [_tally(f"tensor-maps/{name}", items) for name, items in sorted(outcomes.items())]


def suite_route(caps: VerifyCaps) -> list[CheckResult]:
    exp = caps.route_exp
    grid = [Dyadic(i, exp) for i in range((1 << exp) + 1)]

    def interval():
        for x in grid:
            a, b = f_reference(x), iterated_value(INTERVAL_E, x)
            yield a == b, f"x={x}: reference {a}, iterated {b}"

    def edge():
        for x in grid:
            p = TrianglePoint(x)
            a, b = edge_reference(p), iterated_value(TRIANGLE_E, p)
            yield a == b, f"x={x}: reference {a}, iterated {b}"

    def identity():
        for x in grid:
            b = iterated_value(FREYD_I, x)
            yield b == x, f"x={x}: freyd-i gives {b}"

    return [
        _tally("route/freyd-i", identity()),
        _tally("route/interval-e", interval()),
        _tally("route/triangle-e", edge()),
    ]


SUITES: Dict[str, Callable[[VerifyCaps], list[CheckResult]]] = {
    "cauchy": suite_cauchy,
    "claims-ab": suite_claims_ab,
    "continuity": suite_continuity,
    "discontinuity": suite_discontinuity,
    "embedding": suite_embedding,
    "gluing": suite_gluing,
    "independence": suite_independence,
    "isometry-ck": suite_isometry_ck,
    "lipschitz": suite_lipschitz,
    "metric-axioms": suite_metric_axioms,
    "mu-embedding": suite_mu_embedding,
    "oracle": suite_oracle,
    "route": suite_route,
    "squares": suite_squares,
    "tensor-maps": suite_tensor_maps,
}


def suite_names() -> list[str]:
    return sorted(SUITES) + ["all"]


def run_suite(name: str, caps: VerifyCaps, cap: int | None = None) -> list[SuiteResult]:
    """Run one suite (or every suite for "all"); results are sorted by suite and check name."""
    if name == "all":
        names = sorted(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(suite_names())}")
    out = []
    for suite in names:
        suite_caps = caps.with_cap(suite, cap)
        logger.info("suite %s starting", suite)
        start = time.perf_counter()
        checks = sorted(SUITES[suite](suite_caps), key=lambda c: c.name)
        elapsed = time.perf_counter() - start
        logger.info("suite %s finished in %.2fs", suite, elapsed)
        out.append(SuiteResult(suite, checks, elapsed))
    return out
