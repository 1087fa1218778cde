"""Finite levels of the tower ``R_n -> R_{n-1}`` (kill the last variable).

The ring in infinitely many variables is never built; it is the limit of
these levels, and every statement about it is checked as a commuting square
between consecutive levels.
"""

from dataclasses import dataclass

from .cartier import flat_basis, is_flat, project
from .connection import Connection
from .series import DimensionMismatch

__all__ = [
    "TowerLevel",
    "restrict_connection",
    "restrict_vector",
    "compatibility_check",
    "tower",
    "tower_compatibility",
    "frame_restriction_check",
]


@dataclass(frozen=True)
class TowerLevel:
    level: int
    connection: Connection


def restrict_connection(C):
    """Drop ``A_n`` and set ``x_n = 0`` in the remaining matrices."""
    if C.n_vars < 2:
        raise DimensionMismatch("cannot restrict a connection in fewer than two variables")
    coeffs = [a.restrict_last() for a in C.coeffs[:-1]]
    # curvature of the restriction is the restriction of the curvature
    return Connection(coeffs, check=True)


def restrict_vector(m):
    if m.n_vars < 2:
        raise DimensionMismatch("cannot restrict a vector below one variable")
    return m.restrict_last()


def compatibility_check(C, m):
    """Restricting then projecting agrees with projecting then restricting."""
    top = restrict_vector(project(C, m))
    below = project(restrict_connection(C), restrict_vector(m))
    return top.equal_at(below, C.trunc_order)


def tower(C, lowest=1):
    """Levels ``n, n-1, ..., lowest`` obtained by repeated restriction."""
    levels = [TowerLevel(C.n_vars, C)]
    while levels[-1].level > lowest:
        below = restrict_connection(levels[-1].connection)
        levels.append(TowerLevel(below.n_vars, below))
    return levels


def tower_compatibility(C, m, lowest=1):
    """Compatibility at every step from level n down to ``lowest``."""
    results = []
    for level in tower(C, lowest)[:-1]:
        results.append(compatibility_check(level.connection, m))
        m = restrict_vector(m)
    return all(results)


def frame_restriction_check(C):
    """Each restricted flat section is flat one level down."""
    below = restrict_connection(C)
    return all(is_flat(below, restrict_vector(b)) for b in flat_basis(C).sections)
