"""Numerical verification of Schwarz-Pick type inequalities for holomorphic
maps from the polydisk into the unit ball."""

__version__ = "0.1.0"

from .core import (
    DimensionError,
    DomainError,
    EvaluationError,
    ParameterError,
    PolydiskPoint,
    StepError,
    hermitian_inner,
    in_polydisk,
    norm,
)
from .holomap import (
    HoloMap,
    MoebiusComposed,
    PolyMap,
    RationalMap,
    ScalarProjection,
    catalog,
    compose_moebius,
    evaluate,
    jacobian,
    moebius_point,
    project_scalar,
)
from .gradmod import GradResult, OracleConfig, grad_j_modulus, grad_modulus, grad_modulus_oracle
from .inequalities import (
    CheckReport,
    check_classical,
    check_disk_to_ball,
    check_eq28_everywhere,
    check_scalar_polydisk,
    check_theorem1,
    verify_reduction,
)
from .coefficients import check_lemma1, coeff_sq_sum, integral_mean_sq
from .mapgen import GenConfig, random_polymap, remark2_map, remark3_pair, scan_sharpness
