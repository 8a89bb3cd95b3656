"""Spectral Galerkin toolkit for the incompressible flow system on a periodic
box: divergence-free projection, heat semigroup and fractional calculus, mild
(integral-form) solvers, and a verification harness for the operator claims.
"""

__version__ = "0.1.0"

from .grid import (
    ForcingSpec,
    PhysicalVectorField,
    SpectralVectorField,
    TorusGrid,
    dealias,
    embed,
    field_from_function,
    forward_transform,
    inverse_transform,
    lattice_part,
    make_grid,
    random_divfree_field,
    random_gradient_field,
    truncate,
    zero_field,
)
from .operators import (
    FracNormParams,
    advect,
    frac_norm,
    frac_power,
    gradient_norm,
    heat_semigroup,
    l2_inner,
    laplacian,
    leray_project,
    lp_norm,
    nonlinear_F,
    phi1,
    resolvent,
    spectral_l2_norm,
)
from .solver import (
    FieldBlowup,
    MaxIters,
    NotContracting,
    SolverConfig,
    Trajectory,
    adaptive_window,
    exp_euler_step,
    march,
    picard_solve,
)
from .verification import (
    CheckReport,
    EnsembleSpec,
    EstimateReport,
    HoelderFit,
    VerifySettings,
    check_assumption_F,
    check_diagonal_dependence,
    check_gradient_orthogonality,
    check_resolvent_divfree,
    check_semigroup,
    compare_oracle,
    estimate_bilinear_constant,
    estimate_hoelder,
    estimate_norm_equivalence,
    existence_time_trend,
    run_verification_suite,
    taylor_green,
)

__all__ = [name for name in dir() if not name.startswith("_")]
