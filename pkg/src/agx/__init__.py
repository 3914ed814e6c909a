"""Automaton groups: classification, word problem, Schreier graphs and growth."""
from .classification import (
    ClassificationReport,
    NucleusResult,
    ProbeTable,
    activity_path_count,
    classify,
    nucleus,
    probe_weak_contraction,
    restriction_sphere,
)
from .core import (
    Automaton,
    act_epword,
    apply_group_word,
    apply_state,
    inverse_automaton,
    minimize,
    power_alphabet,
    subautomaton,
    symmetric_closure,
    validate_automaton,
)
from .families import FamilySpec, build
from .schreier import (
    GrowthSeries,
    SchreierGraph,
    graph_metrics,
    growth_series,
    orbital_ball,
    schreier_level_graph,
)
from .wordproblem import are_equal, is_trivial, is_trivial_naive, order_probe
from .words import EPWord, GroupWord

__all__ = [name for name in dir() if not name.startswith("_")]
