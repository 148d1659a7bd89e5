from fractions import Fraction
from typing import Optional

from lieh1tools.linalg.exact import ScalarLike, as_scalar

SPECIAL_POINTS = {
    (Fraction(0), Fraction(0)): 5,
    (Fraction(0), Fraction(1)): 2,
    (Fraction(1), Fraction(0)): 2,
    (Fraction(0), Fraction(2)): 1,
    (Fraction(2), Fraction(0)): 1,
    (Fraction(1), Fraction(1)): 1,
}


def expected_h1(alpha: ScalarLike, beta: ScalarLike) -> int:
    """ dim H^1(W, F_alpha ⊗ F_beta) at degree 0. """
    point = (as_scalar(alpha), as_scalar(beta))
    if point in SPECIAL_POINTS:
        return SPECIAL_POINTS[point]
    if point[0] + point[1] == 1:
        return 1
    return 0


def expected_application(name: str, alpha: Optional[ScalarLike] = None) -> int:
    if name == "witt-wedge":
        return 0
    if name == "ovsienko-roger-tensor":
        alpha = as_scalar(alpha)
        return 7 if alpha == 0 else 1 if alpha in (1, Fraction(1, 2)) else 0
    if name == "ovsienko-roger-wedge":
        return 3 if as_scalar(alpha) == 0 else 0
    if name == "schroedinger-virasoro-tensor":
        return 7
    if name == "schroedinger-virasoro-wedge":
        return 3
    raise NotImplementedError(f"Application '{name}' not implemented.")


def expected_hom_invariants(alpha: ScalarLike) -> int:
    return 2 if as_scalar(alpha) == 0 else 0
