"""Detection of commutative argument subsets in factor-graph factors."""

from .bottomup import PairLayer, UnionFind, a_decor, cc_decor, pairwise_layer
from .buckets import (
    ArgClass,
    BucketEntry,
    BucketIndex,
    PotentialGroup,
    bucket_count,
    bucket_of,
    class_of,
    classes_of,
    duplicate_bound,
    enumerate_buckets,
    histograms,
    identical_groups,
)
from .core import (
    Factor,
    FactorGraph,
    RandomVariable,
    RangeSpec,
    assignment_from_labels,
    assignment_index,
    canonical_token,
    index_to_assignment,
    joint_unnormalised,
    lookup,
    normalisation_constant,
    quantise,
)
from .crv import CountedFactor, compress, expand, histogram_multiplicity
from .decorplus import (
    BucketStep,
    CandidateSet,
    DetectOptions,
    Heuristic,
    bucket_loop,
    candidate_for_group,
    decor_plus,
    order_buckets,
    tighter_bound,
    verify_candidates,
)
from .detect import ALGORITHMS, CORRECT_ALGORITHMS, detect
from .errors import (
    BudgetExceeded,
    ComfactorError,
    DeadlineExceeded,
    IncompleteAssignment,
    InvalidAssignment,
    InvalidFactor,
    InvalidGraph,
    MixedRanges,
    NonNumericPotential,
    NotCommutative,
    SchemaError,
    StateSpaceTooLarge,
    SubsetTooSmall,
    WellDefinednessViolation,
)
from .reference import (
    brute_force,
    find_witness,
    is_commutative,
    is_commutative_pair,
    original_decor,
)
from .result import CommutativeResult, PhaseTiming

__version__ = "0.1.0"
