"""Exact verification lab for point-polynomial incidence bounds over finite fields
and average-radius list decoding of Reed-Solomon codes."""

from __future__ import annotations

from .chargroup import (
    Character,
    GAElem,
    additive_dft,
    additive_dft_array,
    char_eval,
    character_inner,
    ga_inner,
    moment_curve_vector,
    mult_operator_apply,
    projection_mass_points,
    projection_mass_points_naive,
    projection_mass_polys,
    projection_mass_polys_naive,
)
from .cyclotomic import CycInt, cyc_arith, cyc_norm_sq, root_power
from .errors import *  # noqa: F401,F403
from .gf import (
    FieldElement,
    FieldSpec,
    FPoly,
    enumerate_space,
    field_arith,
    field_create,
    poly_eval,
    trace,
)
from .incidence import (
    IncidenceMatrix,
    IncidenceReport,
    SpectrumReport,
    SweepConfig,
    adjacency_spectrum_check,
    build_T,
    count_incidences,
    evaluate_incidences,
    gram_points_entry,
    gram_polys_entry,
    incidence_bounds,
    sweep,
    verify_left_spectrum,
    verify_right_spectrum,
    verify_svd_reconstruction,
)
from .rs import (
    CertReport,
    RSInstance,
    average_radius,
    certify,
    full_length_list_size,
    list_size_bound,
    plurality_center,
    relative_distance,
    rs_encode,
    within_threshold,
)
from .sets import PointSet, PolySet

__version__ = "0.1.0"
