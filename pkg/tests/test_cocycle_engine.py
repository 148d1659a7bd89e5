from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lieh1tools.algebras.elements import BasisIndex, Element, basis
from lieh1tools.algebras.preconfigs import DEFAULT_GRID, make_algebra, make_module, tensor_density
from lieh1tools.cohomology.catalog import entries_for, get_entry
from lieh1tools.cohomology.derivations import (
    DerivationWindow,
    coboundary,
    cocycle_defect,
    first_window_defect,
    restrict,
)
from lieh1tools.cohomology.engine import (
    CocycleSystem,
    H1Computation,
    Window,
    cocycle_space,
    h1_dimension,
    inner_space,
    weight_degrees,
)
from lieh1tools.cohomology.golden import expected_h1
from lieh1tools.cohomology.reductions import (
    l0_invariant_space,
    recurrence_defect_pm,
    recurrence_defect_sym,
    reduce_nonzero_degree,
)
from strategies import homogeneous_elements

FAST_POINTS = [(0, 0), (0, 1), (2, 0), (1, 1), (3, -2), (Fraction(1, 3), Fraction(1, 5))]
NONZERO_DEGREES = [-4, -3, -2, -1, 1, 2, 3, 4]


def _vv(i, j):
    return BasisIndex("v|v", (i, j))


def _random_cocycle(module, degree, window, rng):
    basis_ = H1Computation(module, degree, window, with_inner=False).cocycle_basis()
    combo = None
    for c, d in zip(rng.integers(-3, 4, size=len(basis_)), basis_):
        term = d.scaled(int(c))
        combo = term if combo is None else combo + term
    return combo


@pytest.mark.parametrize("gen_bound,support,inner", [(1, 6, None), (4, 5, None), (4, 10, 9)])
def test_window_preconditions(gen_bound, support, inner):
    with pytest.raises(ValueError):
        Window(gen_bound, support, inner)


def test_window_inner_default():
    assert Window(4, 10).inner == 14
    assert Window(4, 10).widened(2) == Window(4, 12)


def test_weight_degrees():
    assert weight_degrees(tensor_density(0, 0)) == [0]
    wedge = make_module("adjoint-wedge", make_algebra("ovsienko-roger", {"alpha": 0}))
    assert weight_degrees(wedge) == [-1, 0, 1, 2]


def test_origin_report(origin_module):
    report = h1_dimension(origin_module, 0)
    assert report.dim_h1 == 5
    assert report.stabilized
    assert report.dim_inner == 12
    assert report.dim_cocycle == 17
    assert len(report.basis) == 5
    assert list(report.to_json())[:11] == ["algebra", "module", "alpha", "beta", "degree", "gen_bound", "support",
                                           "dim_cocycle", "dim_inner", "dim_h1", "stabilized"]
    assert report.to_record() == {"alpha": "0", "beta": "0", "degree": 0, "M": 4, "N": 10, "dim_h1": 5,
                                  "stabilized": True}


def test_one_one_inner_dimension():
    report = h1_dimension(tensor_density(1, 1), 0)
    assert report.dim_inner == 13
    assert report.dim_h1 == 1


@pytest.mark.parametrize("alpha,beta", FAST_POINTS)
def test_h1_dimension(alpha, beta):
    report = h1_dimension(tensor_density(alpha, beta), 0)
    assert report.dim_h1 == expected_h1(alpha, beta)
    assert report.stabilized


@pytest.mark.slow
@pytest.mark.parametrize("alpha,beta", DEFAULT_GRID)
def test_h1_dimension_default_grid(alpha, beta):
    report = h1_dimension(tensor_density(alpha, beta), 0, stabilization_rounds=1)
    assert report.dim_h1 == expected_h1(alpha, beta)
    assert report.stabilized


def test_space_dimensions(origin_module):
    cocycles, dim_cocycle = cocycle_space(origin_module, 0)
    inner, dim_inner = inner_space(origin_module, 0)
    assert (dim_cocycle, dim_inner) == (17, 12)
    computation = H1Computation(origin_module, 0, Window())
    assert all(computation.is_cocycle(d) for d in inner)
    assert all(first_window_defect(d) is None for d in cocycles[:5])


def test_representatives_are_catalog_classes(origin_module, default_window):
    computation = H1Computation(origin_module, 0, default_window)
    params = {"alpha": 0, "beta": 0}
    names = entries_for(params)
    assert names == ["delta00_1", "delta00_2", "delta00_3", "delta00_4", "delta00_5"]
    derivations = [get_entry(n).derivation(params) for n in names]
    assert all(computation.is_cocycle(d) for d in derivations)
    assert computation.quotient_rank(derivations) == 5
    assert computation.quotient_rank(derivations + computation.representatives()) == 5


@given(data=st.data())
def test_coboundary_is_cocycle(data):
    alpha, beta = data.draw(st.sampled_from(DEFAULT_GRID))
    degree = data.draw(st.integers(-3, 3))
    module = tensor_density(alpha, beta)
    v = data.draw(homogeneous_elements(module, degree, support=4))
    derivation = coboundary(module, v, gen_bound=3, degree=degree)
    assert first_window_defect(derivation) is None
    assert cocycle_defect(derivation, 2, -1) == 0


@given(data=st.data())
def test_wedge_coboundary_is_cocycle(data):
    alpha = data.draw(st.sampled_from([0, 1, Fraction(1, 2), -1]))
    module = make_module("adjoint-wedge", make_algebra("ovsienko-roger", {"alpha": alpha}))
    v = data.draw(homogeneous_elements(module, data.draw(st.integers(-2, 2)), support=3))
    derivation = coboundary(module, v, gen_bound=2)
    assert first_window_defect(derivation) is None


def test_coboundary_errors(origin_module):
    with pytest.raises(ValueError):
        coboundary(origin_module, Element.of(_vv(0, 1)) + Element.of(_vv(0, 2)), 3)
    with pytest.raises(ValueError):
        coboundary(origin_module, Element.of(_vv(0, 1)), 3, degree=2)
    with pytest.raises(ValueError):
        coboundary(origin_module, Element.of(_vv(0, 8)), 4, support=10)


def test_cocycle_defect_outside_window(origin_module):
    derivation = restrict(get_entry("delta00_1").derivation({"alpha": 0, "beta": 0}), 4, 10)
    assert cocycle_defect(derivation, 1, 2) == 0
    with pytest.raises(ValueError):
        cocycle_defect(derivation, 3, 2)
    with pytest.raises(ValueError):
        derivation.value(basis("L", 5))


def test_system_coordinates_roundtrip(origin_module, default_window):
    system = CocycleSystem(origin_module, 0, default_window)
    derivation = restrict(get_entry("delta00_5").derivation({"alpha": 0, "beta": 0}), 4, 10)
    assert system.to_window(system.coordinates(derivation)) == derivation


@pytest.mark.parametrize("alpha,beta", [(0, 0), (Fraction(1, 2), Fraction(1, 2))])
@pytest.mark.parametrize("degree", [-2, -1, 1, 2])
def test_nonzero_degree_vanishes(alpha, beta, degree):
    assert h1_dimension(tensor_density(alpha, beta), degree).dim_h1 == 0


@pytest.mark.slow
@pytest.mark.parametrize("alpha,beta", DEFAULT_GRID)
def test_nonzero_degree_vanishes_default_grid(alpha, beta):
    module = tensor_density(alpha, beta)
    assert [h1_dimension(module, d, stabilization_rounds=0).dim_h1 for d in NONZERO_DEGREES] == [0] * 8


def test_reduce_nonzero_degree_examples():
    module = tensor_density(0, 0)
    derivation = coboundary(module, Element.of(_vv(1, 1), Fraction(-1, 2)), 4)
    assert derivation.value(basis("L", 0)) == Element.of(_vv(1, 1))
    assert reduce_nonzero_degree(derivation) == Element.of(_vv(1, 1), Fraction(-1, 2))
    derivation = coboundary(module, Element.of(_vv(0, -1)), 4)
    assert derivation.value(basis("L", 0)) == Element.of(_vv(0, -1))
    assert reduce_nonzero_degree(derivation) == Element.of(_vv(0, -1))


def test_reduce_nonzero_degree_errors(origin_module):
    zero_degree = restrict(get_entry("delta00_1").derivation({"alpha": 0, "beta": 0}), 4, 10)
    with pytest.raises(ValueError):
        reduce_nonzero_degree(zero_degree)
    broken = DerivationWindow.from_mapping(origin_module, 1, 4, 10, {basis("L", 1): Element.of(_vv(1, 1))})
    with pytest.raises(ValueError):
        reduce_nonzero_degree(broken)


@pytest.mark.parametrize("num_samples", [pytest.param(10), pytest.param(50, marks=pytest.mark.slow)])
def test_reduce_random_cocycles(num_samples):
    window = Window(4, 10)
    for child in np.random.SeedSequence(1535523).spawn(num_samples):
        rng = np.random.default_rng(child)
        alpha, beta = DEFAULT_GRID[rng.integers(len(DEFAULT_GRID))]
        degree = NONZERO_DEGREES[rng.integers(len(NONZERO_DEGREES))]
        module = tensor_density(alpha, beta)
        cocycle = _random_cocycle(module, degree, window, rng)
        v = reduce_nonzero_degree(cocycle)
        inner = coboundary(module, v, window.gen_bound, degree=degree)
        assert all(inner.value(x) == cocycle.value(x) for x in cocycle.generators())


@pytest.mark.parametrize("alpha,beta", DEFAULT_GRID)
def test_l0_invariants(alpha, beta):
    elements, dim = l0_invariant_space(alpha, beta, 10)
    if (alpha, beta) == (0, 0):
        assert dim == 1
        assert elements == [Element.of(_vv(0, 0))]
    else:
        assert dim == 0


def test_l0_invariants_minimum_support():
    with pytest.raises(ValueError):
        l0_invariant_space(0, 0, 1)


@pytest.mark.parametrize("alpha,beta", DEFAULT_GRID)
def test_recurrences_vanish_on_cocycles(alpha, beta):
    module = tensor_density(alpha, beta)
    for derivation in H1Computation(module, 0, Window(), with_inner=False).cocycle_basis():
        if derivation.value(basis("L", 0)):
            continue
        for i in range(-8, 9):
            assert recurrence_defect_pm(derivation, i) == (0, 0)
            for m in range(1, 5):
                assert recurrence_defect_sym(derivation, m, i) == 0


def test_recurrences_detect_wrong_power(mutated_delta02):
    assert recurrence_defect_pm(mutated_delta02, 0)[0] == 6
    exact = get_entry("delta02").derivation({"alpha": 0, "beta": 2})
    assert all(recurrence_defect_pm(exact, i) == (0, 0) for i in range(-8, 9))


def test_recurrences_need_tensor_density(witt_wedge):
    derivation = coboundary(witt_wedge, Element.zero(), 2)
    with pytest.raises(ValueError):
        recurrence_defect_pm(derivation, 0)


def test_coboundary_of_origin_vector():
    v = Element.of(_vv(0, 0))
    assert coboundary(tensor_density(0, 0), v, 4).is_zero()
    assert coboundary(tensor_density(1, 0), v, 4).value(basis("L", 3)) == Element.of(_vv(3, 0), -3)
    assert coboundary(tensor_density(0, 1), v, 4).value(basis("L", -2)) == Element.of(_vv(0, -2), 2)


def test_nonzero_degree_cocycles_are_inner():
    computation = H1Computation(tensor_density(-1, -1), 3, Window(4, 8))
    assert computation.dim_h1 == 0
    assert computation.dim_cocycle == computation.dim_inner


def test_recurrences_on_catalog_entries():
    one_one = get_entry("delta11").derivation({"alpha": 1, "beta": 1})
    assert all(recurrence_defect_sym(one_one, 1, i) == 0 for i in range(-6, 7))
    assert cocycle_defect(one_one, 2, -1) == 0


@pytest.mark.parametrize("alpha,beta", FAST_POINTS)
def test_dimension_is_constant_on_wider_windows(alpha, beta):
    module = tensor_density(alpha, beta)
    dims = [H1Computation(module, 0, Window(m, n)).dim_h1 for m, n in [(4, 8), (4, 10), (5, 10)]]
    assert dims == [expected_h1(alpha, beta)] * 3
