import pytest

from pointed_coalgebras.catalog import CatalogError, default_algebras, default_coalgebras, get_algebra, get_coalgebra
from pointed_coalgebras.core import BIPOINTED, TRIPOINTED


def test_registries_are_sorted_by_name():
    assert list(default_coalgebras()) == ["freyd-i", "interval-e", "triangle-e"]
    assert list(default_algebras()) == ["bip-alg", "dyadic-phi", "trip-alg"]


def test_lookup():
    assert get_coalgebra("triangle-e").alphabet == TRIPOINTED
    assert get_algebra("dyadic-phi").alphabet == BIPOINTED


def test_unknown_names():
    with pytest.raises(CatalogError, match="interval-e"):
        get_coalgebra("interval")
    with pytest.raises(ValueError):
        get_algebra("nope")
