"""Exact-arithmetic toolkit for symmetric extended formulations.

Everything is computed over the rationals: polytope constructions, group
actions, linear programming, extension verification, and the lower-bound
certificate verifiers.  See the README for the scenario catalogue.
"""

from .rational import (
    Rat,
    Vec,
    Mat,
    format_rat,
    parse_rat,
    solve_linear,
    psd_check,
)
from .perms import (
    Permutation,
    PermGroup,
    AffineAction,
    close_group,
    symmetric,
    alternating,
    block_subgroup,
    orbit,
    stabilizer,
    index,
    zeta,
    coordinate_action,
    average_bilinear_form,
)
from .polytope import (
    HRep,
    VRep,
    Polytope,
    Face,
    lp_optimize,
    member_of_hull,
    enumerate_vertices,
    facet_filter,
    face_of,
    is_invariant,
    fixed_subspace,
    certify,
)
from .zoo import build as build_zoo_entry
from .extension import (
    ExtensionSpec,
    verify_symmetric_extension,
    average_section,
    an_extension,
    certify_projection_equality,
    fixed_point_restriction,
    generic_log_lb,
)
from .certificates import (
    Theorem1Certificate,
    MatchingCertificate,
    SdpCertificate,
    verify_theorem1,
    verify_theorem1_sdp,
    matching_counts,
    matching_counts_restricted,
    solve_interpolation,
    build_matching_certificate,
    expand_matching_cert,
    average_frobenius,
)
from .superlinear import (
    SuperlinearCertificate,
    MatroidInput,
    check_superlinear,
    facet_orbit_analysis,
    cube_family_search,
    matroid_superlinear,
)
from .scenarios import run_scenario, report_emit, SCENARIOS

__version__ = "0.1.0"
