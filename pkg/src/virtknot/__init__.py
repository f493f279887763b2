"""virtknot: a Gauss-diagram calculator for virtual knots and links."""

from .diagrams import (
    Arrow,
    Chord,
    Endpoint,
    FormalSum,
    GaussDiagram,
    ParseError,
    Underlying,
    canonical_code,
    close_long,
    expand_semi_virtual,
    parse_gauss_code,
    resolve_chords,
    reverse_arrows,
    serialize,
    subdiagrams,
)

__version__ = "0.1.0"
