"""Finitely generated subgroups of free groups via Stallings graphs, malnormal
subgroups avoiding prescribed conjugates, and L2-Betti numbers of groups with
L2-independent hierarchies."""

from .errors import VfbcError
from .words import Word, parse_word, parse_word_list
from .stallings import (INFINITE, Subgroup, basis, contains, index, is_malnormal, pullback,
                        subgroup_graph)
from .construct import AvoidanceProblem, Certificate, construct_malnormal, verify_certificate
from .hierarchy import betti, decide_vfbc, euler_char, parse_hierarchy

__all__ = [
    "VfbcError", "Word", "parse_word", "parse_word_list", "INFINITE", "Subgroup", "basis",
    "contains", "index", "is_malnormal", "pullback", "subgroup_graph", "AvoidanceProblem",
    "Certificate", "construct_malnormal", "verify_certificate", "betti", "decide_vfbc",
    "euler_char", "parse_hierarchy",
]
