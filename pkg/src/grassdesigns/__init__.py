"""Polynomial spaces, potential lower bounds and designs on unions of Grassmannians."""

from .partitions import Partition, partitions_of, enumerate_partitions
from .repdim import dim_irrep, dim_pol_union, mu_K, multiplicity, min_points_lower_bound
from .zonal import SignedMeasure, TMatrix, t_matrix, lower_bound, zonal_at_identity
from .geometry import Projector, projector_from_frame, validate
from .potential import Configuration, CertificationReport, ffp, certify
from .optimizer import OptimizerSettings, OptimizationResult, minimize_ffp, minimize_with_restarts
from .families import FAMILIES, double_design, table1_fixtures

__version__ = "0.1.0"

__all__ = [
    "Partition", "partitions_of", "enumerate_partitions",
    "dim_irrep", "dim_pol_union", "mu_K", "multiplicity", "min_points_lower_bound",
    "SignedMeasure", "TMatrix", "t_matrix", "lower_bound", "zonal_at_identity",
    "Projector", "projector_from_frame", "validate",
    "Configuration", "CertificationReport", "ffp", "certify",
    "OptimizerSettings", "OptimizationResult", "minimize_ffp", "minimize_with_restarts",
    "FAMILIES", "double_design", "table1_fixtures",
]
