"""K-theory invariants of boundary algebras of triangle presentations.

Typical use::

    from a2ktheory import singer_presentation, analyse
    report = analyse(singer_presentation(4))
    report.rank, report.harmonic_dim   # (14, 14)
"""
from .errors import (
    A2Error,
    DimensionMismatch,
    EqualLines,
    EqualPoints,
    InternalRankMismatch,
    Interrupted,
    NoTorsionFreeGroup,
    NotAProjectivePlane,
    NotPrimePower,
    NotTorsionFree,
    ParseError,
    TransitionInvariantError,
    UnsupportedOrder,
    ValidationError,
)
from .ktheory import (
    KTheoryReport,
    analyse,
    betti_chi,
    c_gamma_invariants,
    harmonic_dimension,
    k_groups,
    lemma_suite,
    main_theorem_check,
    relations,
)
from .plane import (
    ProjectivePlane,
    difference_set_plane,
    join,
    make_plane,
    meet,
    plane_from_incidence,
)
from .presentation import (
    PointLineCorrespondence,
    TrianglePresentation,
    format_presentation,
    is_torsion_free,
    parse_presentation,
    search,
    singer_presentation,
    verify,
)

__version__ = "0.1.0"
