"""Symmetry-stabilized (a,b)-colouring games on Hamming graphs."""

from __future__ import annotations

from .board import Board, Shape, is_member, is_theta_compatible, plh_census, validate_latin
from .errors import BudgetExceeded
from .game import GameConfig, GameState, Move, Outcome, Player, Variant
from .perm import Perm, cycle_structure
from .symmetry import Isotopism, is_extendable, is_feasible, natural_extension, orbit_partition

__version__ = "0.1.0"

__all__ = [
    "Board",
    "BudgetExceeded",
    "GameConfig",
    "GameState",
    "Isotopism",
    "Move",
    "Outcome",
    "Perm",
    "Player",
    "Shape",
    "Variant",
    "cycle_structure",
    "is_extendable",
    "is_feasible",
    "is_member",
    "is_theta_compatible",
    "natural_extension",
    "orbit_partition",
    "plh_census",
    "validate_latin",
]
