"""Shared helpers for comparing induced maps in invariant coordinates."""

from multinorm.intlinalg import IntMatrix


def column_classes(mat: IntMatrix, pres):
    """Columns of an abstract matrix reduced in a target presentation."""
    return [pres.reduce_abstract([mat.get(i, j) for i in range(mat.rows)])
            for j in range(mat.cols)]


def maps_equal_mod(m1: IntMatrix, m2: IntMatrix, pres) -> bool:
    if (m1.rows, m1.cols) != (m2.rows, m2.cols):
        return False
    return column_classes(m1, pres) == column_classes(m2, pres)


def is_identity_mod(mat: IntMatrix, pres) -> bool:
    return maps_equal_mod(mat, IntMatrix.identity(mat.rows), pres)


def is_zero_mod(mat: IntMatrix, pres) -> bool:
    return maps_equal_mod(mat, IntMatrix.zeros(mat.rows, mat.cols), pres)
