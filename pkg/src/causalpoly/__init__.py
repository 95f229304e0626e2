"""Causal correlation polytopes: exact enumeration, geometry and witnesses."""
__version__ = "0.1.0"

from ._kernels import BACKEND
from .causal import (FixedOrder, FullyCausal, MCausal, PCausal, SizeSCausal, TwoCausal, count_vertices,
                     enumerate_vertices, is_det_in_class, is_det_P_causal, parse_class, vertex_masks)
from .geometry import Inequality, Separation, Weights, affine_rank, double_description, lp_membership
from .partition import Partition, iter_partitions
from .scenario import Correlation, DetCorrelation, Scenario, make_lazy_scenario

__all__ = [
    "__version__", "BACKEND", "Scenario", "Correlation", "DetCorrelation", "make_lazy_scenario",
    "Partition", "iter_partitions", "FullyCausal", "TwoCausal", "MCausal", "SizeSCausal", "PCausal",
    "FixedOrder", "parse_class", "count_vertices", "vertex_masks", "enumerate_vertices",
    "is_det_in_class", "is_det_P_causal", "Inequality", "Weights", "Separation", "lp_membership",
    "affine_rank", "double_description",
]
