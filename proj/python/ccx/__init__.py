"""Non-ground congruence closure (CC(X)) with a ground congruence closure baseline."""

from ._core import (
    CSV_HEADER,
    ParseError,
    Problem,
    Saturation,
    ground_cc,
    load,
    parse_equations,
    parse_tptp,
    run,
    saturate,
)

__all__ = [
    "CSV_HEADER",
    "ParseError",
    "Problem",
    "Saturation",
    "ground_cc",
    "load",
    "parse_equations",
    "parse_tptp",
    "run",
    "saturate",
]
