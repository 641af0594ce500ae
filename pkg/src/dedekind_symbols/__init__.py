"""Generalized Dedekind sums and modular Dedekind symbols for Fuchsian groups."""
from .catalog import get_group, load_catalog
from .classical import dede_s
from .congruence import h_gamma0, vassileva_S
from .groups import parse_word
from .matrices import GMat
from .phase import omega
from .symbols import SymbolValue, WordModel

__version__ = "0.1.0"

__all__ = [
    "GMat",
    "SymbolValue",
    "WordModel",
    "dede_s",
    "get_group",
    "h_gamma0",
    "load_catalog",
    "omega",
    "parse_word",
    "vassileva_S",
]
