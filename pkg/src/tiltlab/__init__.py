"""Exact computations with tilts of Brauer tree algebras and their stability conditions."""

from .errors import TiltlabError
from .hearts import HeartState, apply_word, standard_heart, standard_line
from .trees import BrauerTree, line, make_tree, star

__all__ = [
    "BrauerTree",
    "HeartState",
    "TiltlabError",
    "apply_word",
    "line",
    "make_tree",
    "standard_heart",
    "standard_line",
    "star",
]
__version__ = "0.1.0"
