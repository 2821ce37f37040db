"""sepsym: a numerical laboratory for separating hierarchies of
non-linear Schrodinger-type evolutions and their symmetries."""

__version__ = "0.1.0"

from .errors import (
    BadRange,
    BadTuple,
    DomainError,
    IndexMismatch,
    NotDerivation,
    ScenarioError,
    SepsymError,
    SpaceMismatch,
    StepMismatch,
    ZeroAmplitude,
    ZeroBase,
)
from .mixedpow import (
    B,
    E,
    I,
    IndexPair,
    J,
    ZERO_PAIR,
    matrix_rep,
    mixed_power,
    mixed_power_derivative,
    pair_action,
    pair_bracket,
    pair_product,
)
from .space import ConfigSpace, WaveFunction, permute, random_state, tensor
from .opcalc import (
    NonlinearOperator,
    check_permutation_property,
    estimate_log_indices,
    euler_log_residual,
    euler_power_residual,
    frechet,
    lie_bracket,
)
from .hierarchy import (
    Generator,
    Hierarchy,
    canonical_decompose,
    canonical_lift,
    canonical_lift_1p,
    canonical_lift_gen,
    lift_J,
    natural_part,
    tensor_derivation_residual,
)
from .obstruction import (
    ObstructionReport,
    corollary1_obstruction,
    corollary2_obstruction,
    obstruction_lhs,
    obstruction_rhs,
)
from .evolution import (
    EvolutionConfig,
    IndexTrajectory,
    evolve,
    extract_indices,
    index_ode_solve,
    scaling_test,
    separation_test,
)
from .symmetry import (
    AffineMap,
    FiniteSymmetry,
    InfinitesimalSymmetry,
    PointSymmetrySpec,
    inf_symmetry_bracket,
    inf_symmetry_residual,
    internal_dof_demo,
    point_symmetry_generator,
    symmetry_residual,
)
