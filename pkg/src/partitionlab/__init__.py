"""Verification toolkit for partition-free and cross-partition-free set families."""

__version__ = "0.1.0"

from .core import Family, binomial, layer_profile, load_families
from .checkers import check, is_cross_partition_free, is_partition_free
from .constructions import build as build_construction
from .gadgets import build as build_gadget, validate

__all__ = [
    "Family", "binomial", "layer_profile", "load_families",
    "check", "is_partition_free", "is_cross_partition_free",
    "build_construction", "build_gadget", "validate", "__version__",
]
