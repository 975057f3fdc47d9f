"""Schur complements, complementability and EP classification of block operators."""

from .blockdecomp import BlockOp, decompose, reassemble
from .complement import (
    BallBoundReport,
    ComplementabilityReport,
    ProbeResult,
    Route,
    SchurResult,
    StructureReport,
    Verdict,
    ball_bound,
    check_complementable,
    complementable_pair,
    complementing_subspace,
    douglas_solve,
    schur,
    schur_candidates,
    singleton_probe,
    verify_structure,
)
from .corpus import LabeledCase, limit_verdict, make_example, random_complementable
from .epclass import EPReport, block_pinv, ep_equivalence_report, is_ep, is_hypo_ep
from .errors import (
    HypothesisFailed,
    IllPosedSchur,
    InvalidInput,
    NotComplementable,
    RangeInclusionFailed,
    ShortedError,
)
from .numerics import DEFAULT_TOL, TolPolicy, gamma, numerical_rank, operator_norm, pinv, svd
from .subspaces import (
    Subspace,
    complement,
    coordinate,
    equals,
    from_spanning,
    full,
    includes,
    intersect,
    null_of,
    preimage,
    projector,
    range_of,
    subspace_sum,
    zero,
)

__version__ = "0.1.0"
