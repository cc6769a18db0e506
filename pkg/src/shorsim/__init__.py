"""Factoring-demonstration toolkit.

Honest state-vector simulation of period finding with a recycled
readout qubit for small moduli, the compiled two-qubit shortcut for
arbitrarily large ones, the coin-toss reduction of that shortcut, and
reporting that always states the size of the period actually found
next to the size of the modulus.
"""

from ._kernels import BACKEND_ENV, HAS_NUMBA, active_backend
from .coinlab import (
    CoinRun,
    chi_square_binomial,
    chi_square_critical,
    chi_square_heads_tails,
    coin_factor_demo,
    toss_series,
)
from .compiler import (
    Circuit,
    CompiledBase,
    ControlledModMul,
    Hadamard,
    MeasureQubit,
    PhaseThenHadamard,
    PreparePlus,
    QubitBudget,
    build_compiled_circuit,
    build_semiclassical_stages,
    default_s,
    find_period2_base,
    find_period2_bases,
    work_orbit,
    zalka_qubit_count,
)
from .errors import (
    CircuitFormatError,
    CompilationRequiresFactorsError,
    DomainError,
    NotCompilableError,
    NotInvertibleError,
    RefusedTooLargeError,
    ShorsimError,
    SimulationError,
    VerificationError,
)
from .fixtures import (
    FIXTURE_ENV,
    SupplementaryFixture,
    available_fixtures,
    fixture_root,
    load_fixture,
    verification_passed,
    verify_fixture,
)
from .numtheory import (
    Convergent,
    Semiprime,
    continued_fraction_convergents,
    ext_gcd,
    gcd,
    is_probable_prime,
    mod_inverse,
    mod_pow,
    multiplicative_order,
    parse_decimal,
    random_probable_prime,
    sqrt1_roots,
    sqrt1_roots_with_signs,
    to_decimal,
)
from .postprocess import (
    AttemptRecord,
    FactorReport,
    PeriodCandidate,
    compose_honesty_note,
    derive_factors,
    extract_period,
    odd_period_rescue,
    run_full_algorithm,
)
from .simulator import (
    OutcomeDistribution,
    QuantumState,
    RunTrace,
    StageRecord,
    bloch_vector,
    control_reduced_density,
    dft_oracle_distribution,
    output_distribution,
    run_circuit,
    total_variation,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND_ENV",
    "HAS_NUMBA",
    "active_backend",
    "CoinRun",
    "chi_square_binomial",
    "chi_square_critical",
    "chi_square_heads_tails",
    "coin_factor_demo",
    "toss_series",
    "Circuit",
    "CompiledBase",
    "ControlledModMul",
    "Hadamard",
    "MeasureQubit",
    "PhaseThenHadamard",
    "PreparePlus",
    "QubitBudget",
    "build_compiled_circuit",
    "build_semiclassical_stages",
    "default_s",
    "find_period2_base",
    "find_period2_bases",
    "work_orbit",
    "zalka_qubit_count",
    "CircuitFormatError",
    "CompilationRequiresFactorsError",
    "DomainError",
    "NotCompilableError",
    "NotInvertibleError",
    "RefusedTooLargeError",
    "ShorsimError",
    "SimulationError",
    "VerificationError",
    "FIXTURE_ENV",
    "SupplementaryFixture",
    "available_fixtures",
    "fixture_root",
    "load_fixture",
    "verification_passed",
    "verify_fixture",
    "Convergent",
    "Semiprime",
    "continued_fraction_convergents",
    "ext_gcd",
    "gcd",
    "is_probable_prime",
    "mod_inverse",
    "mod_pow",
    "multiplicative_order",
    "parse_decimal",
    "random_probable_prime",
    "sqrt1_roots",
    "sqrt1_roots_with_signs",
    "to_decimal",
    "AttemptRecord",
    "FactorReport",
    "PeriodCandidate",
    "compose_honesty_note",
    "derive_factors",
    "extract_period",
    "odd_period_rescue",
    "run_full_algorithm",
    "OutcomeDistribution",
    "QuantumState",
    "RunTrace",
    "StageRecord",
    "bloch_vector",
    "control_reduced_density",
    "dft_oracle_distribution",
    "output_distribution",
    "run_circuit",
    "total_variation",
    "__version__",
]
