"""Exact models, invariants and automorphism synthesis for real conic
bundle surfaces, with a JSON command-line front end.

Everything is computed over the rationals with exact arithmetic: points and
Moebius maps on the projective line, interval-configuration invariants and
their PGL_2-equivalence decisions, the canonical bundle models
y^2 + z^2 = Q(x) with twisting-map automorphisms, the degree-2 del Pezzo
double-conic model with its Geiser involution, Picard-lattice class
combinatorics, and a rectilinear path planner for rectangle unions.
"""

from .conic_model import (
    ConicModel,
    MarkedModel,
    ScalingIso,
    SurfPoint,
    VeryTransitiveVerdict,
    component_index,
    decide_birational,
    decide_marked_iso,
    decide_very_transitive,
    marked_homeo_types,
    model_from_config,
    on_surface,
    scaling_iso,
    very_transitive_verdict,
)
from .delpezzo import (
    BiconicModel,
    BinQuadForm,
    BiPoint,
    biconic_from_config,
    biconic_interval_image,
    distinct_foliations_witness,
    fiber_points,
    geiser,
    on_biconic,
    second_fibration,
)
from .errors import ConicBundleError
from .lattice import (
    ClassPerm,
    PicVector,
    canonical_class,
    conic_fiber_partner,
    deg4_alpha,
    deg4_sigma,
    exceptional_classes,
    geiser_reflection,
    intersect,
    perm_preserves_form,
    perms_commute,
    singular_fibre_count,
)
from .planner import Rect, Region, SegPath, Segment, find_rect_path, validate_path
from .polynomial import RatPoly
from .projline import (
    Interval,
    IntervalConfig,
    Moebius,
    ProjPoint,
    Rat,
    config_equiv,
    cross_ratio,
    format_rat,
    moebius_apply,
    moebius_from_triples,
    parse_rat,
    realizable_permutations,
    stabilizer,
)
from .twist import (
    Rotation,
    TwistMap,
    TwistReport,
    apply_twist,
    chart_param,
    choose_base_rotation,
    find_fiber_point,
    interpolate,
    inverse_twist,
    rotation_between,
    rotation_from_param,
    synthesize_twist,
    tangent_coefficient,
    twist_from_rotations,
    verify_twist,
)

__version__ = "0.1.0"
