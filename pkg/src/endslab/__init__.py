"""Finitely generated groups and their actions as computable objects.

Build finite balls of Cayley, Schreier and orbital graphs, estimate the
number of ends, and mechanically verify the wreath-product cut and path
constructions at desk scale.
"""

__version__ = "0.1.0"

from .groups import (
    Cyclic,
    CyclicInt,
    FamilyMismatchError,
    FreeAbelian,
    FreeGroup,
    FreeWord,
    Group,
    GroupError,
    IntVector,
    InvalidParameterError,
    ModVector,
    Perm,
    SymmetricGenSet,
    SymmetricGroup,
    Torus,
    identity,
    inverse,
    make_gen_set,
    multiply,
    nonidentity_gens,
    standard_gens,
)
from .actions import (
    ActionError,
    CosetPoint,
    GeneratedSubgroup,
    OrbitResult,
    PairPoint,
    PointedAction,
    Sublattice,
    TrivialSubgroup,
    UnknownRuleActionError,
    UnsupportedSubgroupError,
    coset_action,
    orbit,
    point_label,
    rule_action,
    translation_action,
    trivial_action,
)
from .wreath import (
    WreathElement,
    WreathError,
    WreathGroup,
    head_projection_action,
    imprimitive_action,
    imprimitive_coset_action,
    lamplighter,
    standard_wreath_gens,
    wreath_inverse,
    wreath_multiply,
)
from .balls import (
    ArityMismatchError,
    BallError,
    BallOverflowError,
    CutResult,
    GraphBall,
    build_ball,
    delete_and_split,
    leaf_decomposition,
    pointed_labeled_isomorphic,
    simplify,
    to_dot,
    to_json_dict,
)
from .ends import (
    AugmentResult,
    CyclicDivisorQuotient,
    DiagonalLatticeQuotient,
    EndsError,
    EndsProfile,
    IntModQuotient,
    PathFailure,
    SemidirectSplit,
    SignQuotient,
    ThreeSegmentPath,
    Verdict,
    augment_cut,
    coordinate_split,
    ends_profile,
    orbit_subgraph,
    profile_from_ball,
    quotient_schreier_pair,
    three_segment_path,
    wreath_split,
)
from .dsl import ParseError, SpecAst, elaborate, parse_spec, print_spec
