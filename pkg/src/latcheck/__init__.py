"""Subgroup lattices of finite permutation groups and chain invariants."""

from .group import FiniteGroup, GroupError, SubgroupSet, generate_group, subgroup_generated
from .groupspec import SpecError, canonical, make_named, parse_group_spec
from .invariants import InvariantReport, chiefl, invariant_report, minmaxl, modl, modular_elements
from .lattice import SubgroupLattice, enumerate_subgroups
from .perm import Permutation

__version__ = "0.1.0"

__all__ = [
    "FiniteGroup", "GroupError", "SubgroupSet", "generate_group", "subgroup_generated",
    "SpecError", "canonical", "make_named", "parse_group_spec",
    "InvariantReport", "chiefl", "invariant_report", "minmaxl", "modl", "modular_elements",
    "SubgroupLattice", "enumerate_subgroups", "Permutation",
]
