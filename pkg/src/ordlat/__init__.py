"""Lattice-ordered groups of finitely supported functions on scattered spaces."""

from ordlat.ordinal import (
    Ordinal,
    ZERO,
    ONE,
    OMEGA,
    add,
    classify,
    compare,
    floor_rank,
    format_ordinal,
    from_int,
    last_exponent,
    omega_power,
    parse_ordinal,
    successor,
)

__all__ = [
    "Ordinal",
    "ZERO",
    "ONE",
    "OMEGA",
    "add",
    "classify",
    "compare",
    "floor_rank",
    "format_ordinal",
    "from_int",
    "last_exponent",
    "omega_power",
    "parse_ordinal",
    "successor",
]

__version__ = "0.1.0"
