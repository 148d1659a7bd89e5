from fractions import Fraction
from typing import Callable, Dict, List, Tuple

from lieh1tools.algebras.elements import BasisIndex, Element, basis
from lieh1tools.algebras.modules import TensorDensityModule, cached_action
from lieh1tools.algebras.preconfigs import tensor_density
from lieh1tools.cohomology.derivations import Derivation, DerivationWindow, coboundary, first_window_defect
from lieh1tools.linalg.exact import ScalarLike, kernel_rows


def reduce_nonzero_degree(derivation: DerivationWindow) -> Element:
    """ For d != 0 every cocycle is inner: D(L_n) = L_n.v with v = -D(L_0)/d, because
    L_n.D(L_0) - L_0.D(L_n) = n D(L_n) and L_0 acts on grade n+d by -(n+d). """
    if derivation.degree == 0:
        raise ValueError("Degree-zero derivations are not reducible to coboundaries.")
    defect = first_window_defect(derivation)
    if defect is not None:
        x, y, value = defect
        raise ValueError(f"Not a cocycle: defect at ({x}, {y}) is {value}.")
    v = derivation.value(basis("L", 0)) * Fraction(-1, derivation.degree)
    inner = coboundary(derivation.module, v, derivation.gen_bound, degree=derivation.degree)
    for x in derivation.generators():
        if inner.value(x) != derivation.value(x):
            raise ValueError(f"Coboundary of {v} differs from the derivation at {x}.")
    return v


def l0_invariant_space(alpha: ScalarLike, beta: ScalarLike, support: int) -> Tuple[List[Element], int]:
    """ Grade-0 elements sum a(i) v_i⊗v_{-i}, |i| <= support, killed by L_n for all |n| <= 2. """
    if support < 2:
        raise ValueError(f"Support {support} is below the minimum of 2.")
    module = tensor_density(alpha, beta)
    generators = module.basis(0, support)
    rows: Dict[BasisIndex, Dict[int, Fraction]] = {}
    for k, b in enumerate(generators):
        for n in range(-2, 3):
            for idx, c in cached_action(module, basis("L", n), b).terms.items():
                rows.setdefault(idx, {})[k] = c
    _, kernel = kernel_rows(rows.values(), len(generators))
    elements = [Element({generators[k]: c for k, c in vec.items()}) for vec in kernel]
    return elements, len(elements)


def _coefficients(derivation: Derivation) -> Tuple[Fraction, Fraction, Callable[[int, int], Fraction]]:
    module = derivation.module
    if not isinstance(module, TensorDensityModule):
        raise ValueError(f"Recurrences are stated for F_alpha ⊗ F_beta, not '{module.kind}'.")

    def a(n: int, i: int) -> Fraction:
        return derivation.value(basis("L", n)).coefficient(BasisIndex("v|v", (i, n - i)))

    return module.alpha, module.beta, a


def recurrence_defect_sym(derivation: Derivation, m: int, i: int) -> Fraction:
    """ Coefficient of v_i⊗v_{-i} in L_m.D(L_{-m}) - L_{-m}.D(L_m), valid when D(L_0) = 0. """
    alpha, beta, a = _coefficients(derivation)
    if derivation.value(basis("L", 0)):
        raise ValueError("The symmetric recurrence requires D(L_0) = 0.")
    return ((i + m - m * alpha) * a(m, i + m) - (i - m + m * beta) * a(m, i)
            - ((i - m + m * alpha) * a(-m, i - m) - (i + m - m * beta) * a(-m, i)))


def recurrence_defect_pm(derivation: Derivation, i: int) -> Tuple[Fraction, Fraction]:
    """ Recurrences linking D(L_1), D(L_2), D(L_-1) and D(L_-1), D(L_-2), D(L_1) at index i. """
    alpha, beta, a = _coefficients(derivation)
    plus = ((i - 2 + 2 * alpha) * a(-1, i - 2) - (i + 1 - 2 * beta) * a(-1, i) + 3 * a(1, i)
            - ((i + 1 - alpha) * a(2, i + 1) - (i - 2 + beta) * a(2, i)))
    minus = ((i + 2 - 2 * alpha) * a(1, i + 2) - (i - 1 + 2 * beta) * a(1, i) - 3 * a(-1, i)
             - ((i - 1 + alpha) * a(-2, i - 1) - (i + 2 - beta) * a(-2, i)))
    return plus, minus
