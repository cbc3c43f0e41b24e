"""Moving-frame geometry of versor fields along curves.

A versor field pairs an arclength-parametrized curve with a unit vector at
each point. This package extracts the associated orthonormal frames and
invariants, synthesizes curves back from prescribed invariants (unique up
to rigid motion), classifies slant and Darboux helices with their axes, and
verifies the third-order differential equations each frame vector satisfies.
"""

from .core import (
    ConstancyStats,
    DegenerateInputError,
    Grid,
    GridMismatchError,
    MyllerError,
    ScalarField,
    TooFewSamplesError,
    VectorField,
    constancy,
    cumint,
    diff,
    orthonormalize,
)
from .frenet import (
    CurvatureVanishesError,
    FrenetField,
    UnitSpeedError,
    VersorCurve,
    extract_frenet,
    verify_moving_equations,
)
from .synthesis import (
    FramePose,
    InvalidSpecError,
    InvariantSpec,
    RoundTripReport,
    extract_after_synthesize,
    rigid_motion_distance,
    synthesize,
    synthesize_field,
)
from .altframe import (
    AltField,
    CurvaturePhase,
    DegenerateDarbouxError,
    angle_rates,
    coefficient_relations,
    curvature_relations,
    extract_alternative,
    verify_alt_moving_equations,
)
from .classify import (
    ClassificationReport,
    classify,
    darboux_axis,
    sigma,
    slant_axis,
)
from .odes import (
    AllSamplesDegenerateError,
    CharacterizationReport,
    OdeCoefficients,
    OdeKind,
    build_coefficients,
    characterization_check,
    evaluate_residual,
    residual,
)

__version__ = "0.1.0"

__all__ = [
    "Grid", "ScalarField", "VectorField", "ConstancyStats",
    "MyllerError", "TooFewSamplesError", "DegenerateInputError", "GridMismatchError",
    "constancy", "cumint", "diff", "orthonormalize",
    "VersorCurve", "FrenetField", "CurvatureVanishesError", "UnitSpeedError",
    "extract_frenet", "verify_moving_equations",
    "InvariantSpec", "FramePose", "InvalidSpecError", "RoundTripReport",
    "synthesize", "synthesize_field", "rigid_motion_distance", "extract_after_synthesize",
    "AltField", "CurvaturePhase", "DegenerateDarbouxError",
    "extract_alternative", "verify_alt_moving_equations",
    "curvature_relations", "coefficient_relations", "angle_rates",
    "ClassificationReport", "sigma", "classify", "slant_axis", "darboux_axis",
    "OdeKind", "OdeCoefficients", "AllSamplesDegenerateError",
    "build_coefficients", "residual", "evaluate_residual",
    "characterization_check", "CharacterizationReport",
    "__version__",
]
