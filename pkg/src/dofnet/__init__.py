"""Degrees-of-freedom regions and linear precoding for 2x2 MIMO networks
with general message sets."""

from .model import MESSAGE_ORDER, AntennaConfig, DofTuple, MessageIndex
from .region import (
    DofPolytope,
    LinearInequality,
    build_general_region,
    contains,
    enumerate_vertices,
    eq_contains,
    eq_witness,
    max_weighted_sum,
    regions_equal,
)
from .catalog import CatalogName, preset_message_set, specialize_named
from .precoder import (
    demonstrate_alignment_collapse,
    monte_carlo_verify,
    plan_scheme,
    sample_channels,
)

__version__ = "0.1.0"

__all__ = [
    "MESSAGE_ORDER",
    "AntennaConfig",
    "DofTuple",
    "MessageIndex",
    "DofPolytope",
    "LinearInequality",
    "build_general_region",
    "contains",
    "enumerate_vertices",
    "eq_contains",
    "eq_witness",
    "max_weighted_sum",
    "regions_equal",
    "CatalogName",
    "preset_message_set",
    "specialize_named",
    "demonstrate_alignment_collapse",
    "monte_carlo_verify",
    "plan_scheme",
    "sample_channels",
]
