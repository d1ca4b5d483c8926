"""Spectral toolkit for the mixed radial potential a*r + b*r**2 + c/r + l(l+1)/r**2.

Closed-form spectra via conditional shape invariance (``susy``), an
independent shooting eigensolver (``shooting``), table and curve
reproduction (``bench``) and a command-line front end (``cli``).
"""

from .bench import (
    BUILTIN_SETS,
    SET_I,
    SET_II,
    ComparisonRow,
    CurveSeries,
    ParameterSet,
    TableReport,
    UnknownFormat,
    emit_curves,
    parse_report,
    render_report,
    run_comparison,
)
from .shooting import (
    BracketFailed,
    EigenResult,
    InvalidGrid,
    NonFinite,
    RadialGrid,
    ShootResult,
    SolverError,
    ZeroNorm,
    auto_grid,
    build_grid,
    find_eigenvalue,
    integrate_shoot,
    normalize,
    residual_check,
    solve_spectrum,
)
from .susy import (
    ConstraintRoots,
    ConstraintViolated,
    HierarchyMember,
    IndexMismatch,
    NegativeL,
    NonPositiveB,
    NonPositiveRadius,
    PotentialParams,
    ShapeInvarianceReport,
    SuperpotentialParams,
    ValidationError,
    ZeroC,
    build_hierarchy,
    closed_form_energy,
    constraint_residual,
    eval_potential,
    eval_superpotential,
    ground_energy_bare,
    ground_wavefunction,
    match_superpotential,
    member_record,
    remainder,
    shape_invariance_report,
    solve_constraint,
    validate_params,
)

__version__ = "0.1.0"
