import dataclasses as dc
import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from lieh1tools.algebras.elements import BasisIndex, Element, accumulate, basis
from lieh1tools.algebras.modules import ModuleSpec, cached_action
from lieh1tools.algebras.preconfigs import make_algebra, make_module
from lieh1tools.cohomology import catalog as lcatalog
from lieh1tools.cohomology.derivations import Derivation
from lieh1tools.cohomology.engine import CohomologyReport, H1Computation, Window, make_report
from lieh1tools.linalg.exact import ScalarLike, as_scalar, format_scalar, kernel_rows

log = logging.getLogger(__name__)

APPLICATIONS = ("witt-wedge", "ovsienko-roger-tensor", "ovsienko-roger-wedge",
                "schroedinger-virasoro-tensor", "schroedinger-virasoro-wedge")
VANISHING_DEGREES = (-2, -1, 1, 2)
APPLICATION_WINDOW = Window(gen_bound=4, support=8)


def wedge_project(w: Element) -> Element:
    """ (w - swap(w)) / 2 """
    return (w - w.swapped()) / 2


def is_skew(w: Element) -> bool:
    return w.swapped() == -w


@dc.dataclass(frozen=True)
class CoJacobiCheck:
    passed: bool
    test_bound: int
    witness: Optional[BasisIndex] = None
    residual: Optional[Element] = None


def check_cojacobi(delta: Derivation, test_bound: int) -> CoJacobiCheck:
    """ (1 + xi + xi^2)(delta ⊗ id) delta(x) = 0 for every basis x of grade in [-test_bound, test_bound],
    xi cycling the three tensor factors. """
    bound = getattr(delta, "gen_bound", None)
    if bound is not None and bound < 2 * test_bound:
        raise ValueError(f"Co-Jacobi up to grade {test_bound} needs values up to grade {2 * test_bound}, "
                         f"the window stops at {bound}.")
    for x in delta.module.algebra.window_basis(test_bound):
        value = delta.value(x)
        if not is_skew(value):
            raise ValueError(f"Cobracket value at {x} is not antisymmetric.")
        acc: Dict[BasisIndex, Fraction] = {}
        for idx, c in value.terms.items():
            first, second = idx.factors()
            accumulate(acc, delta.value(first).tensor(Element.of(second)), c)
        composed = Element(acc)
        residual = composed + composed.cycled() + composed.cycled().cycled()
        if residual:
            return CoJacobiCheck(False, test_bound, x, residual)
    return CoJacobiCheck(True, test_bound)


def application_module(name: str, alpha: Optional[ScalarLike] = None) -> ModuleSpec:
    if name not in APPLICATIONS:
        raise NotImplementedError(f"Application '{name}' not implemented.")
    algebra_name, kind = name.rsplit("-", 1)
    algebra = make_algebra(algebra_name, {"alpha": alpha})
    return make_module(f"adjoint-{kind}", algebra)


def application_catalog(name: str, alpha: Optional[ScalarLike] = None) -> List[str]:
    """ Catalog cocycles expected among the classes of an application. """
    if name.startswith("ovsienko-roger") and as_scalar(alpha) != 0:
        return []
    if name == "ovsienko-roger-tensor":
        return lcatalog.catalog_names("intertwiner")
    if name == "ovsienko-roger-wedge":
        return [n for n in lcatalog.catalog_names("wedge") if n.startswith("or_")]
    if name == "schroedinger-virasoro-wedge":
        return [n for n in lcatalog.catalog_names("wedge") if n.startswith("sv_")]
    return []


def match_catalog(computation: H1Computation, names: Sequence[str],
                  parameters: Optional[Dict[str, ScalarLike]] = None) -> Dict[str, bool]:
    """ A name matches when its cocycle lies in the computed cocycle space, its class is nonzero and the named
    classes are jointly independent. """
    derivations = [lcatalog.get_entry(n).derivation(parameters) for n in names]
    joint = computation.quotient_rank(derivations) == len(derivations)
    return {n: joint and computation.is_cocycle(d) and computation.quotient_rank([d]) == 1
            for n, d in zip(names, derivations)}


@dc.dataclass(frozen=True)
class ApplicationReport:
    name: str
    reports: Tuple[CohomologyReport, ...]  # degree 0 first, then the vanishing checks
    representatives_match_catalog: Dict[str, bool]

    @property
    def main(self) -> CohomologyReport:
        return self.reports[0]

    def vanishing(self) -> bool:
        return all(r.dim_h1 == 0 for r in self.reports[1:])

    def to_json_lines(self) -> List[dict]:
        lines = []
        for k, report in enumerate(self.reports):
            data = dict(report.to_json(), application=self.name)
            if k == 0:
                data["representatives_match_catalog"] = dict(self.representatives_match_catalog)
            lines.append(data)
        return lines


def h1_applications(name: str, alpha: Optional[ScalarLike] = None, window: Optional[Window] = None,
                    degrees: Sequence[int] = VANISHING_DEGREES,
                    stabilization_rounds: int = 1) -> ApplicationReport:
    module = application_module(name, alpha)
    window = window or APPLICATION_WINDOW
    computation = H1Computation(module, 0, window)
    reports = [make_report(computation, stabilization_rounds)]
    for d in degrees:
        reports.append(make_report(H1Computation(module, d, window), stabilization_rounds))
    names = application_catalog(name, alpha)
    parameters = {"alpha": alpha} if alpha is not None else {}
    matches = match_catalog(computation, names, parameters) if names else {}
    log.info("%s%s: h1 = %d", name, "" if alpha is None else f"({format_scalar(alpha)})", reports[0].dim_h1)
    return ApplicationReport(name, tuple(reports), matches)


def hom_invariants(alpha: ScalarLike, gen_bound: int = 4, support: int = 10) -> Tuple[List[Dict[int, Element]], int]:
    """ Degree-0 maps phi: F_alpha -> W(alpha) ⊗ W(alpha) on v_n, |n| <= gen_bound, with
    L_m.phi(v_n) = phi([L_m, v_n]) whenever all grades stay in the window. """
    alpha = as_scalar(alpha)
    window = Window(gen_bound, support)
    module = make_module("adjoint-tensor", make_algebra("ovsienko-roger", {"alpha": alpha}))
    out: List[Dict[int, Element]] = []
    for weight in sorted({module.weight(BasisIndex(s, (0, 0))) for s in module.sectors()}):
        columns: List[Tuple[int, Element]] = []
        by_grade: Dict[int, List[int]] = {}
        for n in range(-window.gen_bound, window.gen_bound + 1):
            for _, value in module.value_basis(n, window.support, weight):
                by_grade.setdefault(n, []).append(len(columns))
                columns.append((n, value))
        rows = []
        for m in range(-window.gen_bound, window.gen_bound + 1):
            x = basis("L", m)
            for n in range(-window.gen_bound, window.gen_bound + 1):
                if abs(m + n) > window.gen_bound:
                    continue
                acc: Dict[BasisIndex, Dict[int, Fraction]] = {}
                bracket = -(alpha * m + n)
                for col in by_grade.get(n, ()):
                    for idx, c in columns[col][1].extend(lambda b: cached_action(module, x, b)).terms.items():
                        acc.setdefault(idx, {})[col] = acc.get(idx, {}).get(col, 0) + c
                if bracket:
                    for col in by_grade.get(m + n, ()):
                        for idx, c in columns[col][1].terms.items():
                            acc.setdefault(idx, {})[col] = acc.get(idx, {}).get(col, 0) - bracket * c
                rows.extend({col: c for col, c in row.items() if c} for row in acc.values())
        _, kernel = kernel_rows(rows, len(columns))
        for vector in kernel:
            phi: Dict[int, Dict[BasisIndex, Fraction]] = {}
            for col, c in vector.items():
                n, value = columns[col]
                accumulate(phi.setdefault(n, {}), value, c)
            out.append({n: Element(v) for n, v in sorted(phi.items()) if v})
    return out, len(out)
