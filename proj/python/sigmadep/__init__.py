"""Exact sigma-dependence tests for phi(y) = a y, isomonodromy checks and
sequence frames. Expressions and matrices are passed as strings in the
same syntax the command-line tool accepts."""

from ._core import (
    SCHEMA_VERSION,
    Element,
    EngineError,
    Tower,
    check_certificate_numeric,
    companion,
    decide,
    fundamental_matrix,
    is_isomonodromic,
    run_cli,
    verify_certificate,
    verify_isomonodromic,
)


def shift_tower(theta="t", z="z"):
    """Q(theta)(z) with phi(z) = z + 1 and sigma(z) = z + theta."""
    return Tower([theta, f"{z}: phi={z}+1, sigma={z}+{theta}"])


__all__ = [
    "SCHEMA_VERSION",
    "Element",
    "EngineError",
    "Tower",
    "check_certificate_numeric",
    "companion",
    "decide",
    "fundamental_matrix",
    "is_isomonodromic",
    "run_cli",
    "shift_tower",
    "verify_certificate",
    "verify_isomonodromic",
]
