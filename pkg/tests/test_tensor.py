import random
from fractions import Fraction

import pytest

from pointed_coalgebras.core import (
    AlphabetMismatchError,
    ContractError,
    Dyadic,
    FinitePointedSpace,
    TRIPOINTED,
    discrete_space,
    random_pointed_space,
    subspace,
    validate_pointed_space,
)
from pointed_coalgebras.tensor import (
    PointedMap,
    TensorPoint,
    best_lipschitz_constant,
    check_map_property,
    functor_apply,
    inclusion_map,
    random_pointed_map,
    tensor_classes,
    tensor_dist,
    tensor_dist_2,
    tensor_dist_3,
    tensor_space,
)


@pytest.fixture
def midpoint():
    return FinitePointedSpace.from_rows(
        ["B", "T", "x"],
        ["B", "T"],
        [["0", "1", "1/2"], ["1", "0", "1/2"], ["1/2", "1/2", "0"]],
    )


def tp(letter, point):
    return TensorPoint(letter, point)


def test_bipointed_gluing_and_extremes(midpoint):
    assert tensor_dist_2(midpoint, tp("l", "T"), tp("r", "B")) == 0
    assert tensor_dist_2(midpoint, tp("l", "B"), tp("r", "T")) == 1
    assert tensor_dist_2(midpoint, tp("l", "x"), tp("r", "x")) == Dyadic(1, 1)
    assert tensor_dist_2(midpoint, tp("l", "x"), tp("l", "B")) == Dyadic(1, 2)


def test_bipointed_symmetry(midpoint):
    for p in [tp(m, x) for m in "lr" for x in midpoint.points]:
        for q in [tp(m, x) for m in "lr" for x in midpoint.points]:
            assert tensor_dist_2(midpoint, p, q) == tensor_dist_2(midpoint, q, p)


def test_tripointed_formulas():
    y0 = discrete_space(TRIPOINTED)
    assert tensor_dist_3(y0, tp("a", "L"), tp("b", "T")) == 0
    assert tensor_dist_3(y0, tp("a", "R"), tp("c", "T")) == 0
    assert tensor_dist_3(y0, tp("c", "L"), tp("b", "R")) == 0
    assert tensor_dist_3(y0, tp("a", "T"), tp("b", "L")) == 1
    assert tensor_dist_3(y0, tp("a", "T"), tp("a", "L")) == Dyadic(1, 1)
    assert tensor_dist_3(y0, tp("b", "T"), tp("c", "T")) == Dyadic(1, 1)


def test_alphabet_mismatch(midpoint):
    y0 = discrete_space(TRIPOINTED)
    with pytest.raises(AlphabetMismatchError):
        tensor_dist_2(y0, tp("a", "T"), tp("b", "T"))
    with pytest.raises(AlphabetMismatchError):
        tensor_dist_3(midpoint, tp("l", "B"), tp("r", "B"))
    with pytest.raises(AlphabetMismatchError):
        tensor_dist(midpoint, tp("a", "B"), tp("r", "B"))


def test_tensor_space_merges_glued_points(midpoint):
    space = tensor_space(midpoint)
    assert len(space) == 5
    assert validate_pointed_space(space).ok
    assert space.distinguished == (tp("l", "B"), tp("r", "T"))
    tri = tensor_space(discrete_space(TRIPOINTED))
    assert len(tri) == 6
    assert validate_pointed_space(tri).ok
    rep = tensor_classes(discrete_space(TRIPOINTED))
    assert rep[tp("b", "T")] == rep[tp("a", "L")]


def test_tensor_space_is_valid_on_random_spaces():
    rng = random.Random(5)
    for _ in range(100):
        arity = rng.choice((2, 3))
        space = random_pointed_space(rng, rng.randint(arity, 5), arity)
        assert validate_pointed_space(tensor_space(space)).ok


def test_functor_apply(midpoint):
    collapse = PointedMap(midpoint, midpoint, {"B": "B", "T": "T", "x": "B"})
    assert functor_apply(collapse, tp("r", "x")) == tp("r", "B")
    swap = PointedMap(midpoint, midpoint, {"B": "T", "T": "B", "x": "x"})
    with pytest.raises(ContractError):
        functor_apply(swap, tp("l", "x"))


def test_check_map_property_short_and_lipschitz(midpoint):
    collapse = PointedMap(midpoint, midpoint, {"B": "B", "T": "T", "x": "B"})
    short = check_map_property(collapse, "short")
    assert not short.map_holds
    assert short.preserved
    assert best_lipschitz_constant(collapse) == Fraction(2)
    lip = check_map_property(collapse, "lipschitz")
    assert lip.k == 2
    assert lip.map_holds and lip.tensor_holds
    assert lip.tensor_constant <= lip.map_constant


def test_unknown_property(midpoint):
    ident = inclusion_map(midpoint, midpoint)
    with pytest.raises(ValueError):
        check_map_property(ident, "continuous")


def test_maps_preserve_properties_under_tensor():
    rng = random.Random(2024)
    for _ in range(150):
        arity = rng.choice((2, 3))
        target = random_pointed_space(rng, rng.randint(arity, 5), arity)
        source = random_pointed_space(rng, rng.randint(arity, 5), arity)
        f = random_pointed_map(rng, source, target)
        short = check_map_property(f, "short")
        if short.map_holds:
            assert short.tensor_holds
        k = best_lipschitz_constant(f)
        if k is not None:
            assert check_map_property(f, "lipschitz", k).tensor_holds
        others = [p for p in target.points if p not in target.distinguished]
        sub = subspace(target, rng.sample(others, rng.randint(0, len(others))))
        emb = check_map_property(inclusion_map(sub, target), "isometric-embedding")
        assert emb.map_holds and emb.tensor_holds
