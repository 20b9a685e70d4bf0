"""Exact class-algebra computations for finite groups: partitions of conjugacy classes,
character tables, Frobenius and degree polynomials, commutator counts and McKay checks."""

__version__ = "0.1.0"

from .group_core import FiniteGroup, builtin, conjugacy_classes, load_group
from .partitions import build_partition, structure_constants
from .characters import character_table, partition_table
from .polynomials import degree_polynomial, frobenius_polynomial
from .mckay import mckay_check

__all__ = [
	"FiniteGroup", "builtin", "conjugacy_classes", "load_group", "build_partition", "structure_constants",
	"character_table", "partition_table", "degree_polynomial", "frobenius_polynomial", "mckay_check",
]
