"""norml: exact norm/trace power sums over finite fields, their local
L-series, and tame bound constants."""

from .bounds import (
    AdmissibleSet,
    C_bound_mult,
    MonodromyProfile,
    SheafNumerics,
    additive_example_bound,
    admissible_set,
    critical_values,
    formula_A,
    formula_B,
    formula_M,
    kummer_example_bound,
    kummer_profile,
    normexa1_bound,
    normexa2_bound,
    pushforward_kernel_profile,
    swan_example_bound,
    trex1_bound,
    weyl_dim,
)
from .characters import (
    AdditiveCharacter,
    MultiplicativeCharacter,
    eval_additive,
    eval_multiplicative,
    format_additive,
    format_multiplicative,
    parse_additive,
    parse_multiplicative,
)
from .cli import cli_main
from .cyclotomic import CycNumber
from .errors import (
    BudgetExceeded,
    DegreeTooLarge,
    DomainViolation,
    FieldMismatch,
    InsufficientTerms,
    NonIntegerMultiplicity,
    NormlError,
    NotADivisor,
    NotInSubfield,
    NotPrime,
    SplittingFieldTooLarge,
    ZeroArgument,
    ZeroNorm,
)
from .experiments import (
    RATIONALITY_SUITE,
    ExperimentReport,
    exp_additive_bound,
    exp_artin_schreier_scaling,
    exp_fibers,
    exp_multiplicative_bound,
    exp_negligible_kummer,
    exp_rationality,
    exp_weight_ceiling,
    exp_weil_descent_comparison,
    run_verify,
)
from .gf import DEFAULT_MAX_ORDER, FieldCtx, FieldRegistry, build_field
from .lfun import (
    Eigenvalue,
    RationalModel,
    Recurrence,
    WeightReport,
    WeightRow,
    classify_weights,
    fit_rational_model,
    minimal_recurrence,
    rth_power_check,
    series_expand,
)
from .rootcount import count_roots
from .sums import (
    CoefficientSequence,
    SumSpec,
    brute_force_oracle,
    norm_power_sum,
    sum_sequence,
)
from .tracefn import (
    ArtinSchreier,
    Constant,
    GroupKind,
    InducedKummer,
    Kummer,
    Product,
    Punctual,
    PushforwardCount,
    PushforwardKernel,
    Shift,
    Sum,
    TwistDeg,
    evaluate,
    format_expr,
    parse_expr,
)

__version__ = "0.1.0"

__all__ = [
    "AdditiveCharacter",
    "AdmissibleSet",
    "ArtinSchreier",
    "BudgetExceeded",
    "C_bound_mult",
    "CoefficientSequence",
    "Constant",
    "CycNumber",
    "DEFAULT_MAX_ORDER",
    "DegreeTooLarge",
    "DomainViolation",
    "Eigenvalue",
    "ExperimentReport",
    "FieldCtx",
    "FieldMismatch",
    "FieldRegistry",
    "GroupKind",
    "InducedKummer",
    "InsufficientTerms",
    "Kummer",
    "MonodromyProfile",
    "MultiplicativeCharacter",
    "NonIntegerMultiplicity",
    "NormlError",
    "NotADivisor",
    "NotInSubfield",
    "NotPrime",
    "Product",
    "Punctual",
    "PushforwardCount",
    "PushforwardKernel",
    "RATIONALITY_SUITE",
    "RationalModel",
    "Recurrence",
    "SheafNumerics",
    "Shift",
    "SplittingFieldTooLarge",
    "Sum",
    "SumSpec",
    "TwistDeg",
    "WeightReport",
    "WeightRow",
    "ZeroArgument",
    "ZeroNorm",
    "__version__",
    "additive_example_bound",
    "admissible_set",
    "brute_force_oracle",
    "build_field",
    "classify_weights",
    "cli_main",
    "count_roots",
    "critical_values",
    "eval_additive",
    "eval_multiplicative",
    "evaluate",
    "exp_additive_bound",
    "exp_artin_schreier_scaling",
    "exp_fibers",
    "exp_multiplicative_bound",
    "exp_negligible_kummer",
    "exp_rationality",
    "exp_weight_ceiling",
    "exp_weil_descent_comparison",
    "fit_rational_model",
    "format_additive",
    "format_expr",
    "format_multiplicative",
    "formula_A",
    "formula_B",
    "formula_M",
    "kummer_example_bound",
    "kummer_profile",
    "minimal_recurrence",
    "norm_power_sum",
    "normexa1_bound",
    "normexa2_bound",
    "parse_additive",
    "parse_expr",
    "parse_multiplicative",
    "pushforward_kernel_profile",
    "run_verify",
    "rth_power_check",
    "series_expand",
    "sum_sequence",
    "swan_example_bound",
    "trex1_bound",
    "weyl_dim",
]
