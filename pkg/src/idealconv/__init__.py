"""Convergence exponents of integer sets, growth ideals, and the exceptional
sets of classical arithmetic sequences."""

from .arith import (
    FactorTable,
    Factorization,
    GammaTau,
    PowerRep,
    a_p,
    big_omega,
    build_factor_table,
    divisor_count,
    factorize,
    gamma_tau,
    h_max,
    h_min,
    iroot,
    is_prime,
    log_f,
    log_f_star,
    omega,
    pascal_count,
)
from .bulk import BlockStats, iter_blocks, small_primes
from .convergence import (
    CountRow,
    ExceptionalReport,
    LimsupReport,
    RatioRow,
    SequenceSpec,
    count_report,
    default_envelope,
    envelope_check,
    envelope_value,
    exceptional_members,
    exceptional_set,
    remark_limsup,
    sequence_spec,
    sequence_value,
    sequence_values,
    smooth_bound_for,
)
from .errors import (
    AllocationError,
    DataFormatError,
    InsufficientDataError,
    InvalidArgumentError,
    OutOfRangeError,
)
from .exponent import (
    ChainReport,
    DecayPolicy,
    EvidenceRow,
    ExponentEstimate,
    Ideal,
    IdealVerdict,
    Trend,
    Verdict,
    chain_report,
    classify_leq,
    classify_less,
    estimate_lambda,
    partial_sum_probe,
)
from .sets import (
    Checkpoints,
    IntegerSet,
    from_file,
    from_iterable,
    logpower_set,
    naturals,
    power_set,
    primes_set,
    scale,
    smooth_set,
    union,
)
from .suite import CheckResult, StatementResult, SuiteReport, statement_suite

__version__ = "0.1.0"

__all__ = [
    "FactorTable",
    "Factorization",
    "GammaTau",
    "PowerRep",
    "a_p",
    "big_omega",
    "build_factor_table",
    "divisor_count",
    "factorize",
    "gamma_tau",
    "h_max",
    "h_min",
    "iroot",
    "is_prime",
    "log_f",
    "log_f_star",
    "omega",
    "pascal_count",
    "BlockStats",
    "iter_blocks",
    "small_primes",
    "CountRow",
    "ExceptionalReport",
    "LimsupReport",
    "RatioRow",
    "SequenceSpec",
    "count_report",
    "default_envelope",
    "envelope_check",
    "envelope_value",
    "exceptional_members",
    "exceptional_set",
    "remark_limsup",
    "sequence_spec",
    "sequence_value",
    "sequence_values",
    "smooth_bound_for",
    "AllocationError",
    "DataFormatError",
    "InsufficientDataError",
    "InvalidArgumentError",
    "OutOfRangeError",
    "ChainReport",
    "DecayPolicy",
    "EvidenceRow",
    "ExponentEstimate",
    "Ideal",
    "IdealVerdict",
    "Trend",
    "Verdict",
    "chain_report",
    "classify_leq",
    "classify_less",
    "estimate_lambda",
    "partial_sum_probe",
    "Checkpoints",
    "IntegerSet",
    "from_file",
    "from_iterable",
    "logpower_set",
    "naturals",
    "power_set",
    "primes_set",
    "scale",
    "smooth_set",
    "union",
    "CheckResult",
    "StatementResult",
    "SuiteReport",
    "statement_suite",
    "__version__",
]
