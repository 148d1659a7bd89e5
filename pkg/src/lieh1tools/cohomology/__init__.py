from lieh1tools.cohomology.bialgebra import check_cojacobi, h1_applications, hom_invariants, wedge_project
from lieh1tools.cohomology.catalog import (
    CATALOG,
    evaluate,
    get_entry,
    verify_cocycle,
    verify_independence,
    verify_noncoboundary,
)
from lieh1tools.cohomology.derivations import DerivationWindow, FormulaDerivation, coboundary, cocycle_defect
from lieh1tools.cohomology.engine import CohomologyReport, Window, cocycle_space, h1_dimension, inner_space
from lieh1tools.cohomology.reductions import (
    l0_invariant_space,
    recurrence_defect_pm,
    recurrence_defect_sym,
    reduce_nonzero_degree,
)
