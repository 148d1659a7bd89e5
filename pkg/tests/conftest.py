from fractions import Fraction

import pytest
from hypothesis import settings

from lieh1tools.algebras.elements import BasisIndex, Element, basis, tensor_index
from lieh1tools.algebras.preconfigs import make_algebra, make_module, tensor_density
from lieh1tools.cohomology.derivations import FormulaDerivation
from lieh1tools.cohomology.engine import Window

settings.register_profile("lieh1", max_examples=200, deadline=None)
settings.load_profile("lieh1")


def _skew(a: BasisIndex, b: BasisIndex) -> Element:
    return Element.of(tensor_index(a, b)) - Element.of(tensor_index(b, a))


@pytest.fixture
def default_window():
    return Window(gen_bound=4, support=10)


@pytest.fixture
def origin_module():
    return tensor_density(0, 0)


@pytest.fixture
def mutated_delta02():
    """ n^2 v_0⊗v_n at (0, 2); the cocycle there is n^3 v_0⊗v_n. """
    module = tensor_density(0, 2)
    return FormulaDerivation(
        module=module, name="delta02_squared",
        formula=lambda x: Element.of(BasisIndex("v|v", (0, x.index[0])), x.index[0] ** 2))


@pytest.fixture
def printed_d3():
    """ Y_m -> M_0⊗Y_m - Y_m⊗M_0 without the factor 1/2 on the Y part. """
    module = make_module("adjoint-wedge", make_algebra("schroedinger-virasoro"))

    def formula(x: BasisIndex) -> Element:
        if x.sector == "L":
            return Element.zero()
        return _skew(basis("M", 0), x)

    return FormulaDerivation(module=module, name="sv_wedge_3_printed", formula=formula)


@pytest.fixture
def witt_wedge():
    return make_module("adjoint-wedge", make_algebra("witt"))
