"""Mixture p.g.f. toolkit: measures, resistance tails, monotonicity, shock models."""

from .errors import NumericError, QuadratureError, ValidationError
from .measures import (
    MASS_TOL,
    Atom,
    IntegrandSpec,
    MixingDistribution,
    Num,
    Segment,
    custom,
    exp_decay,
    identity,
    integrate,
    is_exact,
    jsonable,
    mass_on,
    mix,
    parse_number,
    pgf_kernel,
    point_mass,
    power_of_a,
    quadrature,
    reciprocal,
    render,
    sample_locations,
    uniform_density,
)
from .pgf_core import (
    CounterexampleParams,
    MonotonicityCheck,
    PmfSequence,
    TailSequence,
    counterexample_Q,
    counterexample_params,
    counterexample_tail,
    counterexample_tail_sequence,
    geometric_pmf,
    kernel,
    lemma22_coefficients,
    monotonicity_condition,
    pgf_eval,
    pmf_from_tail,
    resistance_gf,
    tail_sequence,
    tail_violation,
)
from .sdfr_analysis import (
    VERDICT_CANDIDATE,
    VERDICT_NOT_PGF,
    VERDICT_UNIT_SUPPORT,
    DifferenceTable,
    LaplaceOrderBounds,
    PgfBounds,
    SupportClassification,
    classify_support,
    difference_table,
    expected_shocks,
    is_completely_monotone,
    laplace_order_bounds,
    pgf_bounds,
    tail_validity,
)
from .shock_model import (
    ShockModelParams,
    SimulatedPgf,
    SimulatedSurvival,
    exp_mixture_survival,
    laplace,
    poisson_truncation_order,
    rate_mixture,
    sdfr_skeleton_check,
    simulate_de_finetti,
    simulate_failure_times,
    survival,
)

__version__ = "0.1.0"

__all__ = [
    "Atom",
    "CounterexampleParams",
    "DifferenceTable",
    "IntegrandSpec",
    "LaplaceOrderBounds",
    "MASS_TOL",
    "MixingDistribution",
    "MonotonicityCheck",
    "Num",
    "NumericError",
    "PgfBounds",
    "PmfSequence",
    "QuadratureError",
    "Segment",
    "ShockModelParams",
    "SimulatedPgf",
    "SimulatedSurvival",
    "SupportClassification",
    "TailSequence",
    "ValidationError",
    "VERDICT_CANDIDATE",
    "VERDICT_NOT_PGF",
    "VERDICT_UNIT_SUPPORT",
    "classify_support",
    "counterexample_Q",
    "counterexample_params",
    "counterexample_tail",
    "counterexample_tail_sequence",
    "custom",
    "difference_table",
    "exp_decay",
    "exp_mixture_survival",
    "expected_shocks",
    "geometric_pmf",
    "identity",
    "integrate",
    "is_completely_monotone",
    "is_exact",
    "jsonable",
    "kernel",
    "laplace",
    "laplace_order_bounds",
    "lemma22_coefficients",
    "mass_on",
    "mix",
    "monotonicity_condition",
    "parse_number",
    "pgf_bounds",
    "pgf_eval",
    "pgf_kernel",
    "pmf_from_tail",
    "point_mass",
    "poisson_truncation_order",
    "power_of_a",
    "quadrature",
    "rate_mixture",
    "reciprocal",
    "render",
    "resistance_gf",
    "sample_locations",
    "sdfr_skeleton_check",
    "simulate_de_finetti",
    "simulate_failure_times",
    "survival",
    "tail_sequence",
    "tail_validity",
    "tail_violation",
    "uniform_density",
]
