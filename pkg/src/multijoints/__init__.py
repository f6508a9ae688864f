"""Unsaturated d-colourings of multijoints of generic line families over exact fields."""

from .colouring import (
    Advanceable,
    Certificate,
    Colouring,
    ColouringRun,
    DensityFunctions,
    FullyConstructed,
    TreeState,
    build_tree,
    colour_auto,
    colour_multijoints,
    colouring_to_density,
    extend_at_root,
    insert_point,
    is_unsaturated,
    line_condition,
    more_advanced,
    own_colour_count,
    recolour_advance,
    trivial_extra_colour,
    verify_density,
)
from .field import QQ, Matrix, PrimeField, RationalField, Scalar, parse_field, rank
from .generators import monkey_bar, random_generic_instance, tricolour_necessity
from .geometry import (
    Instance,
    Line,
    contains,
    directions_span,
    intersect,
    is_generic,
    is_multijoint,
    make_point,
    multijoints,
)
from .oracle import brute_force_min_saturation, verify_certificate
from .planar import two_colour_bijoints

__version__ = "0.1.0"
