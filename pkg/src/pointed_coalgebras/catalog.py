from __future__ import annotations

from typing import Dict

from .experiments import INTERVAL_E, TRIANGLE_E
from .morphisms import AlgebraSpec, BIP_ALG, CoalgebraSpec, DYADIC_PHI, FREYD_I, TRIP_ALG


class CatalogError(ValueError):
    """Raised for an unknown coalgebra or algebra name."""


def default_coalgebras() -> Dict[str, CoalgebraSpec]:
    """Built-in coalgebras by name, sorted."""
    specs = [FREYD_I, INTERVAL_E, TRIANGLE_E]
    return {s.name: s for s in sorted(specs, key=lambda s: s.name)}


def default_algebras() -> Dict[str, AlgebraSpec]:
    specs = [BIP_ALG, DYADIC_PHI, TRIP_ALG]
    return {s.name: s for s in sorted(specs, key=lambda s: s.name)}


def get_coalgebra(name: str) -> CoalgebraSpec:
    registry = default_coalgebras()
    if name not in registry:
        raise CatalogError(f"unknown coalgebra {name!r}; choose from {', '.join(registry)}")
    return registry[name]


def get_algebra(name: str) -> AlgebraSpec:
    registry = default_algebras()
    if name not in registry:
        raise CatalogError(f"unknown algebra {name!r}; choose from {', '.join(registry)}")
    return registry[name]
