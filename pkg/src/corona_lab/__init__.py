"""Finite-horizon laboratory for torus pseudometrics, coherent trees,
block-operator stratification, approximate units, and derived limits of
towers of finitely generated abelian groups."""

from .errors import (
    ConstructionError,
    CoronaLabError,
    HorizonTooSmall,
    IndexOutOfRange,
    InsufficientBlock,
    InvalidSes,
    NoStratification,
    PreconditionViolation,
    TruncationExceeded,
    WitnessNotFound,
)
from .limits import (
    AbGroupPresentation,
    SesTower,
    Tower,
    build_paper_model,
    constant_tower,
    cyclic_group,
    flasque_check,
    free_group,
    lim1_tower,
    lim_tower,
    six_term_check,
    smith_normal_form,
)
from .operators import (
    BlockStructure,
    DDWitness,
    DiagonalUnitary,
    ad_sandwich,
    apply_thread,
    dd_check,
    kernel_test,
    load_matrix,
    op_norm,
    save_matrix,
    stratify,
    stratify_against,
)
from .partitions import (
    FxProfile,
    IntervalPartition,
    SparseSet,
    almost_subset,
    coarsen_map,
    fx_profile,
    interval,
    n_of,
)
from .torus import (
    IndexSet,
    TorusElement,
    constant_one,
    delta_one,
    delta_pair,
    delta_set,
    fuzz_lij,
    lij_bound_check,
)
from .tree import (
    Certificate,
    Chain,
    CoherenceTree,
    build_tree,
    generate_chain,
    merge_limit,
    min_sufficient_horizon,
    sparsify_limit,
    successor_witness,
)
from .weak_units import (
    PositiveUnit,
    TentModel,
    build_tent_unit,
    degenerate_sum_unit,
    epsilon_witness,
    hyp_check,
    power_gap,
    projection_unit,
    quasi_unitary_residual,
    slice_identity_check,
    tensor_unit,
    weak_sandwich,
)

__version__ = "0.1.0"
