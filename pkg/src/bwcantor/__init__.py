"""Generalized Bing-Whitehead compacta as labeled binary trees.

The symbolic layer (trees, the ``C(s)`` schedule, the divergence criterion,
Whitehead sequences and certificates, the geometric-index calculus) lives in
the top-level modules.  Explicit nested tori are in :mod:`bwcantor.geometry`,
which is imported on demand because it compiles numerical kernels.
"""

from .construction import (
    Affine,
    AntichainRay,
    CSFamilySpec,
    ExplicitPrefix,
    Schedule,
    ScheduleEntry,
    antichain_common_count,
    antichain_terms,
    cs_spec,
    schedule,
)
from .criterion import DivergenceVerdict, Dyadic, SeriesState, divergence_report, series_state
from .errors import (
    BWError,
    DepthTooLarge,
    GeometryError,
    IndexUnrepresentable,
    InvalidSeed,
    ResolutionTooCoarse,
    SeedUnevaluable,
    StageOutOfRange,
    ValidationError,
    WindowTooSmall,
)
from .index import LinkKind, compose_index, link_index, parity_admissible, stage_index
from .sequences import (
    SupportedSequence,
    TailVerdict,
    Witness,
    common_terms,
    inequivalence_certificate,
    refute_tail_equality,
    replay_witness,
    rigidity_report,
    tails_equal_cs,
    whitehead_prefix,
)
from .tree import (
    ExplicitSpec,
    NodeAddress,
    RaySpec,
    StandardBWSpec,
    children,
    label_at,
    parse_ray,
    stage_labels,
)

__version__ = "0.1.0"
