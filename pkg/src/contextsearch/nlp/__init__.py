from .brackets import ParseNode, parse_brackets
from .decompose import MODES, DecomposeConfig, decompose, decompose_document
from .mentions import Mention, recognize_entities, resolve_anaphora
from .sci import CONC, ENUM, LEAF, SUB, SciConfig, SciNode, build_sci_tree
from .scr import recombine

__all__ = [
    "ParseNode", "parse_brackets",
    "MODES", "DecomposeConfig", "decompose", "decompose_document",
    "Mention", "recognize_entities", "resolve_anaphora",
    "CONC", "ENUM", "LEAF", "SUB", "SciConfig", "SciNode", "build_sci_tree",
    "recombine",
]
