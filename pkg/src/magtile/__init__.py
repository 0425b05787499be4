"""magtile: lattice tilings of limited-magnitude error balls.

Splitting search and verification over finite Abelian groups, the
lattice/splitting bridge with an independent geometric tiling check, and the
rigorous non-existence screening pipeline for the B(n, 2, m, m-1) family.
"""

from .backend import available_backends, kernel_backend
from .balls import ErrorBall, MagnitudeSet, ball_enumerate, ball_size, tau, tau_identities
from .groups import AbelianGroup, enumerate_groups, parse_group_literal
from .intervals import Interval, Rounding
from .lattice import (
    IntegerLattice,
    hermite_normal_form,
    lattice_from_splitting,
    quotient_splitting,
    smith_normal_form,
    verify_tiling_box,
)
from .screen import (
    ScreenReport,
    ScreenVerdict,
    case_m2,
    case_m3,
    euclid_screen,
    exact_case_contradiction,
    nagell_solutions,
    prop1_bound,
    prop2_conditions,
    screen_range,
)
from .search import SearchOptions, SearchResult, search, search_all_groups
from .splitting import (
    SplitterSet,
    collision_stats,
    emit_certificate,
    induced_splitting,
    parse_certificate,
    verify_complete,
    verify_full,
    verify_partial,
)

__version__ = "0.1.0"

__all__ = [
    "AbelianGroup",
    "ErrorBall",
    "IntegerLattice",
    "Interval",
    "MagnitudeSet",
    "Rounding",
    "ScreenReport",
    "ScreenVerdict",
    "SearchOptions",
    "SearchResult",
    "SplitterSet",
    "available_backends",
    "ball_enumerate",
    "ball_size",
    "case_m2",
    "case_m3",
    "collision_stats",
    "emit_certificate",
    "enumerate_groups",
    "euclid_screen",
    "exact_case_contradiction",
    "hermite_normal_form",
    "induced_splitting",
    "kernel_backend",
    "lattice_from_splitting",
    "nagell_solutions",
    "parse_certificate",
    "parse_group_literal",
    "prop1_bound",
    "prop2_conditions",
    "quotient_splitting",
    "screen_range",
    "search",
    "search_all_groups",
    "smith_normal_form",
    "tau",
    "tau_identities",
    "verify_complete",
    "verify_full",
    "verify_partial",
    "verify_tiling_box",
]
