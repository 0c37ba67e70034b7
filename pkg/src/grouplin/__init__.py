"""Promise 3-LIN over finite group templates, verifiable at desk scale."""

from .errors import (
    CapExceeded,
    DecompositionFailed,
    DimensionMismatch,
    GroupLinError,
    IncompleteTable,
    InvalidParams,
    MissingVariable,
    NoExtension,
    NoIdentity,
    NoInverse,
    NoOmega,
    NonIntegerMultiplicity,
    NotAssociative,
)
from .groups import (
    CosetDecomposition,
    FiniteGroup,
    GroupPower,
    GroupTuple,
    Homomorphism,
    Subgroup,
    Template,
    coset_data,
    fold,
    full_subgroup,
    identity_hom,
    is_cubic,
    is_unsatisfiable_equation,
    make_group,
    make_homomorphism,
    subgroup,
    subgroup_closure,
    trivial_subgroup,
    validate_template,
)
from .reps import (
    IrrepSet,
    UnitaryRep,
    character,
    eta,
    irreps,
    multiplicity,
    regular_representation,
    restrict,
    right_regular,
    trivial_multiplicity,
)
from .fourier import (
    FourierTable,
    MatrixFn,
    ProductIrrep,
    ScalarFn,
    coeff,
    convolve,
    inverse,
    noise_apply,
    plancherel_gap,
    product_irreps,
    pullback,
    similar,
    transform,
)
from .reduction import (
    AssignmentFamily,
    LabelCoverInstance,
    LinEquation,
    LinSystem,
    ReductionParams,
    build_system,
    evaluate,
    evaluate_family,
    family_assignment,
    lc_value,
    make_label_cover,
    payoff_distribution,
    projection_family,
)
from .solvers import brute_force_opt, derandomize, non_cubic_solve, random_expectation
from .decoder import (
    DecoderContext,
    OmegaChoice,
    Strategy,
    alpha,
    build_fns,
    decode,
    derandomize_strategy,
    high_degree_mass,
    influence_probs,
    kappa,
    make_context,
    penalized_margin,
    select_omega,
    simulate_strategy,
    trivial_term_bound,
)

__version__ = "0.1.0"
