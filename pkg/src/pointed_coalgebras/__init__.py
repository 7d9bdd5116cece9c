"""Exact metric computations for the bi-pointed and tri-pointed tensor functors."""

from .core import BIPOINTED, TRIPOINTED, Dyadic

__all__ = ["BIPOINTED", "TRIPOINTED", "Dyadic"]
