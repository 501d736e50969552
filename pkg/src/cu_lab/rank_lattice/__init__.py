"""Exact model of Cu(C[0,1]) as lower semicontinuous rank functions."""
from ..openset import Interval, OpenSet1D
from .rankfn import (
    RankFunction,
    StepFunction,
    add,
    is_compact,
    level_set,
    leq,
    pointwise_max,
    pointwise_min,
    refinement,
    sup_chain,
    usc_envelope,
)
from .representative import Representative, build_representative, rank_of_cutdown
from .containment import (
    GapWitness,
    cc_cutdown,
    cc_cutdown_exhaustive,
    cc_global,
    cc_local,
    strict_gap_interval,
    witness_insertion,
)

__all__ = [
    "Interval", "OpenSet1D", "RankFunction", "StepFunction", "Representative", "GapWitness",
    "add", "leq", "level_set", "usc_envelope", "is_compact", "sup_chain", "pointwise_max",
    "pointwise_min", "refinement", "build_representative", "rank_of_cutdown",
    "cc_global", "cc_local", "cc_cutdown", "cc_cutdown_exhaustive",
    "witness_insertion", "strict_gap_interval",
]
