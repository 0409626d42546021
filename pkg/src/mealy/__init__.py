"""Invertible Mealy automata, their Schreier graphs, and transitivity tools."""

from __future__ import annotations

from .automaton import (
    Automaton,
    act,
    act_inf,
    builtin,
    dual,
    dual_act,
    group_section,
    inverse,
    minimize,
    minimize_map,
    product,
    properties,
    relabel,
    union,
)
from .classify import CensusReport, classify_cotransitive, enumerate_classes, merge_reports
from .schreier import (
    SchreierGraph,
    ball_size,
    build,
    diameter,
    find_level_witness,
    steer_to,
    verify_lift,
)
from .spectral import SpectrumReport, gap_series, spectrum, two_sided_gap
from .transitivity import (
    Verdict,
    char_coeffs,
    char_rational,
    cotransitivity,
    first_intransitive_level,
    is_transitive_exact,
    orbit_cycle,
    orbits_on_level,
    stabilizes_infinite,
)
from .words import EventuallyPeriodicWord, GroupWord

__version__ = "0.1.0"

__all__ = [
    "Automaton",
    "CensusReport",
    "EventuallyPeriodicWord",
    "GroupWord",
    "SchreierGraph",
    "SpectrumReport",
    "Verdict",
    "act",
    "act_inf",
    "ball_size",
    "build",
    "builtin",
    "char_coeffs",
    "char_rational",
    "classify_cotransitive",
    "cotransitivity",
    "diameter",
    "dual",
    "dual_act",
    "enumerate_classes",
    "find_level_witness",
    "first_intransitive_level",
    "gap_series",
    "group_section",
    "inverse",
    "is_transitive_exact",
    "merge_reports",
    "minimize",
    "minimize_map",
    "orbit_cycle",
    "orbits_on_level",
    "product",
    "properties",
    "relabel",
    "spectrum",
    "stabilizes_infinite",
    "steer_to",
    "two_sided_gap",
    "union",
    "verify_lift",
    "__version__",
]
