"""Longest-common-substring statistics for random Bernoulli subshifts.

The package simulates random sequences in random environments, computes
exact longest-common-substring statistics M_n, evaluates the Renyi
entropy H2 and the cylinder-decay rate h0, and reproduces the growth
law M_n / log n -> 2 / H2 by Monte Carlo experiment.
"""

from .base_env import (
    BaseProcess,
    Environment,
    sample_environment,
    shift_environment,
    stationary_vector,
)
from .entropy import (
    ConditionFlags,
    EntropyReport,
    MixingEstimate,
    alpha_mixing_probe,
    build_entropy_report,
    check_conditions,
    cylinder_marginals,
    h0_closed_iid,
    h0_plugin,
    renyi_closed_iid,
    renyi_closed_markov,
    renyi_coincidence,
    renyi_plugin,
)
from .errors import (
    ConfigError,
    DegenerateLadder,
    EmptyInput,
    LcsrandError,
    LengthMismatch,
    NonConvergent,
    NonStochastic,
    OutOfRange,
    Reducible,
    SequenceParseError,
    TooDeep,
    TooLarge,
    WrongBaseVariant,
    ZeroCoincidences,
)
from .harness import (
    ExperimentConfig,
    ExperimentResult,
    convergence_table,
    fit_slope,
    run_annealed,
    run_experiment,
    run_quenched,
)
from .matching import (
    MatchCurve,
    MatchResult,
    lcs_bruteforce,
    lcs_exact,
    match_curve,
)
from .measures import (
    RandomBernoulliSystem,
    emission_distribution,
    marginal_cylinder,
    max_cylinder_mass,
    sample_fiber_sequence,
    sample_measure_cylinder,
)

__version__ = "0.1.0"

__all__ = [
    "BaseProcess",
    "ConditionFlags",
    "ConfigError",
    "DegenerateLadder",
    "EmptyInput",
    "Environment",
    "EntropyReport",
    "ExperimentConfig",
    "ExperimentResult",
    "LcsrandError",
    "LengthMismatch",
    "MatchCurve",
    "MatchResult",
    "MixingEstimate",
    "NonConvergent",
    "NonStochastic",
    "OutOfRange",
    "RandomBernoulliSystem",
    "Reducible",
    "SequenceParseError",
    "TooDeep",
    "TooLarge",
    "WrongBaseVariant",
    "ZeroCoincidences",
    "alpha_mixing_probe",
    "build_entropy_report",
    "check_conditions",
    "convergence_table",
    "cylinder_marginals",
    "emission_distribution",
    "fit_slope",
    "h0_closed_iid",
    "h0_plugin",
    "lcs_bruteforce",
    "lcs_exact",
    "marginal_cylinder",
    "match_curve",
    "max_cylinder_mass",
    "renyi_closed_iid",
    "renyi_closed_markov",
    "renyi_coincidence",
    "renyi_plugin",
    "run_annealed",
    "run_experiment",
    "run_quenched",
    "sample_environment",
    "sample_fiber_sequence",
    "sample_measure_cylinder",
    "shift_environment",
    "stationary_vector",
]
