"""Cellular automata over monoids."""

from .monoid import (Bicyclic, BicyclicElement, FiniteMonoid, FreeMonoid, MonoidMorphism,
                     NatAdd, classify_element, cyclic, find_bicyclic_pair, flip_flop,
                     map_monoid, monoid_predicates, multiply, opposite, submonoid_closure,
                     trivial, u1)
from .congruence import (Congruence, congruence_closure, enumerate_congruences,
                         kernel_congruence, marked_window_agree, quotient_monoid,
                         residually_P_check)
from .shift import (Configuration, WindowConfiguration, inv_gamma, orbit_and_stabilizer,
                    periodic_approximation, periodic_points, shift, window_hb_agree)
from .ca import (CellularAutomaton, SubmonoidContext, apply, apply_windowed, compose,
                 induce, left_inverse_ca, lift_ca, minimal_memory, quotient_ca, restrict)
from .analysis import (ca_status, bicyclic_in_ca_monoid, bicyclic_nonsurjectivity_demo,
                       marked_limit_demo, residual_surjunctivity_pipeline,
                       surjunctivity_sweep)

__all__ = [
    "Bicyclic", "BicyclicElement", "CellularAutomaton", "Configuration", "Congruence",
    "FiniteMonoid", "FreeMonoid", "MonoidMorphism", "NatAdd", "SubmonoidContext",
    "WindowConfiguration", "apply", "apply_windowed", "bicyclic_in_ca_monoid",
    "bicyclic_nonsurjectivity_demo", "ca_status", "classify_element", "compose",
    "congruence_closure", "cyclic", "enumerate_congruences", "find_bicyclic_pair",
    "flip_flop", "induce", "inv_gamma", "kernel_congruence", "left_inverse_ca", "lift_ca",
    "map_monoid", "marked_limit_demo", "marked_window_agree", "minimal_memory",
    "monoid_predicates", "multiply", "opposite", "orbit_and_stabilizer",
    "periodic_approximation", "periodic_points", "quotient_ca", "quotient_monoid",
    "residual_surjunctivity_pipeline", "residually_P_check", "restrict", "shift",
    "submonoid_closure", "surjunctivity_sweep", "trivial", "u1", "window_hb_agree",
]

__version__ = "0.1.0"
