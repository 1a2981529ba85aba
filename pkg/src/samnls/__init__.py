"""Stroboscopic averaging and time-splitting spectral solvers for
highly-oscillatory cubic Schrodinger equations."""

from .core import (
    MODELS,
    ProblemSpec,
    StateVector,
    Trajectory,
    aniso_gp_2d,
    aniso_torus_2d,
    filtered_rhs,
    free_flow,
    gross_pitaevskii_1d,
    make_model,
    nonlinear_term,
    torus_nls_1d,
)
from .fam import FamConfig, fam_field, fam_integrate
from .harness import (
    ConfigError,
    ExperimentConfig,
    RunReport,
    load_config,
    reference_solution,
    run_accuracy_sweep,
    run_efficiency,
    run_experiment,
    run_invariants_longtime,
    run_mode_evolution,
    run_splitting_table,
)
from .observables import (
    DriftStats,
    drift_statistics,
    energy_torus,
    mass,
    mode_magnitudes,
    trace_observable,
)
from .sam import (
    MACRO_SCHEMES,
    ButcherTableau,
    SamConfig,
    StencilSpec,
    averaged_field,
    implicit_midpoint,
    post_process,
    rk2,
    rk4,
    sam_integrate,
    stencil,
)
from .spectral import (
    FourierBasis1D,
    FourierBasis2D,
    HermiteBasis1D,
    HermiteBasis2D,
    l2_norm,
    l2_norm_and_error,
    to_coeffs,
    to_grid,
)
from .splitting import (
    MicroPropagator,
    SplittingScheme,
    check_micro_step,
    kinetic_flow,
    potential_flow,
    propagate_periods,
    propagate_time,
    strang_step,
    yoshida4_step,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
