"""moduli_census: exact zeta data, moduli-space point counts, and family
statistics for hyperelliptic curves over small odd finite fields."""

from .errors import (
    BudgetError,
    DomainError,
    FieldMismatchError,
    InternalConsistencyError,
    InvalidCharacteristicError,
    PolyParseError,
    UnsupportedRankError,
)
from .ffield import FieldElement, FieldHandle, extend_field, make_field, quadratic_character
from .polyring import (
    FamilySpec,
    MonicPoly,
    family,
    family_size,
    format_poly,
    irreducible_polys,
    is_irreducible,
    is_squarefree,
    jacobi_symbol,
    jacobi_symbol_via_factorization,
    parse_poly,
    poly_from_code,
    prime_count,
    sample_member,
    von_mangoldt,
)
from .curvezeta import (
    CurveZeta,
    HyperellipticCurve,
    epsilon_bounds,
    epsilon_terms,
    jacobian_count,
    l_poly_via_characters,
    lambda_character_identity,
    point_count,
    xz_bound_check,
    zeta_data,
    zeta_value,
)
from .moduli import (
    BetaTable,
    ModuliReport,
    beta,
    count_higgs,
    count_ms20,
    count_ntilde,
    count_stable_fixed_det,
    family_constant,
    genus2_oracle,
    grassmannian_count,
    log_count_estimate,
    siegel_mass,
    unstable_mass,
)
from .stats import (
    FamilyRecord,
    SweepReport,
    character_sum,
    characteristic_function,
    decomposition_residual,
    default_cutoff,
    empirical_stats,
    gaussian_diagnostics,
    limit_covariance,
    r_variable,
    residual_envelope,
    theoretical_moment,
)
from .sweep import SweepConfig, build_report, compute_record, records_to_csv, run_sweep

__version__ = "0.1.0"
