"""Disjoint rainbow bases in binary matroids with few extra elements."""

from .errors import ConsistencyError, InputError, RepairFailed, ResourceLimitError
from .extract import Certificate, ExtractionConfig, extract_all, extract_step, initial_state
from .formats import format_certificate, format_instance, parse_certificate, parse_instance
from .gf2 import Gf2Matrix
from .graph import AltPath, ColouredGraph, Matching, build_graph, konig_ore_matching, remove_matching
from .intersect import find_rainbow_basis, max_common_independent
from .matroid import BaseSequence, BinaryMatroid, QuotientMatroid, build_quotient, enumerate_flats
from .oracle import InstanceSpec, brute_force_t, gen_instance, verify_certificate

__all__ = [
    "AltPath",
    "BaseSequence",
    "BinaryMatroid",
    "Certificate",
    "ColouredGraph",
    "ConsistencyError",
    "ExtractionConfig",
    "Gf2Matrix",
    "InputError",
    "InstanceSpec",
    "Matching",
    "QuotientMatroid",
    "RepairFailed",
    "ResourceLimitError",
    "brute_force_t",
    "build_graph",
    "build_quotient",
    "enumerate_flats",
    "extract_all",
    "extract_step",
    "find_rainbow_basis",
    "format_certificate",
    "format_instance",
    "gen_instance",
    "initial_state",
    "konig_ore_matching",
    "max_common_independent",
    "parse_certificate",
    "parse_instance",
    "remove_matching",
    "verify_certificate",
]
