"""dtlab: exact moment computations and matrix experiments for upper-triangular
deformations of normal operators with radially symmetric spectral measure.

The symbolic layer (bpoly, cumulants, pairings) is exact over the rationals.
The matrix layer (matrix_lab, brown_hs, experiments) is numpy/scipy based and
deterministic given a seed.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .bpoly import BElem, alpha12, alpha21, trace, eval_grid
from .brown_hs import (
    HSProjection,
    Region,
    angle_cos,
    brown_empirical,
    check_lattice,
    check_similarity,
    hs_membership_certificate,
    hs_projection,
    sot_qn_decay,
    subspace_distance,
    subspace_join,
    subspace_meet,
)
from .cumulants import CoeffWord, is_balanced, moment, scalar_moment
from .experiments import (
    AngleExperimentConfig,
    ConcentrationFamilyConfig,
    run_angle_experiment,
    run_concentration_ladder,
    two_cluster_cos_bound,
)
from .matrix_lab import (
    MatrixModel,
    RadialMeasure,
    build_block_dt,
    build_dt,
    sample_gue,
    sample_ut,
    semicircular_mix,
)
from .pairings import pairing_oracle

__all__ = [
    "__version__",
    "BElem",
    "alpha12",
    "alpha21",
    "trace",
    "eval_grid",
    "CoeffWord",
    "is_balanced",
    "moment",
    "scalar_moment",
    "pairing_oracle",
    "RadialMeasure",
    "MatrixModel",
    "build_dt",
    "build_block_dt",
    "sample_gue",
    "sample_ut",
    "semicircular_mix",
    "Region",
    "HSProjection",
    "hs_projection",
    "brown_empirical",
    "angle_cos",
    "subspace_join",
    "subspace_meet",
    "subspace_distance",
    "check_lattice",
    "check_similarity",
    "sot_qn_decay",
    "hs_membership_certificate",
    "AngleExperimentConfig",
    "ConcentrationFamilyConfig",
    "run_angle_experiment",
    "run_concentration_ladder",
    "two_cluster_cos_bound",
]
