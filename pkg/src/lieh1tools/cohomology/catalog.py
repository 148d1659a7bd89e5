import dataclasses as dc
import logging
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from lieh1tools.algebras.elements import BasisIndex, Element, basis
from lieh1tools.algebras.modules import ModuleSpec, cached_action
from lieh1tools.algebras.preconfigs import make_algebra, make_module
from lieh1tools.cohomology.derivations import Derivation, FormulaDerivation, basis_defect
from lieh1tools.cohomology.engine import H1Computation, Window
from lieh1tools.linalg.exact import INFEASIBLE, Echelon, ScalarLike, as_scalar, solve_affine_rows

log = logging.getLogger(__name__)

Parameters = Mapping[str, ScalarLike]
Formula = Callable[[Dict[str, Fraction], BasisIndex], Element]


def _vv(i: int, j: int) -> BasisIndex:
    return BasisIndex("v|v", (i, j))


def _sum(terms) -> Element:
    acc: Dict[BasisIndex, Fraction] = {}
    for idx, c in terms:
        acc[idx] = acc.get(idx, 0) + c
    return Element(acc)


def _on_l(fn: Callable[[Dict[str, Fraction], int], Element]) -> Formula:
    """ Formula that only depends on L_n and vanishes on the other sectors. """

    def formula(params: Dict[str, Fraction], x: BasisIndex) -> Element:
        return fn(params, x.index[0]) if x.sector == "L" else Element.zero()

    return formula


def _line_cocycle(params, n: int) -> Element:
    beta = params["beta"]
    if n >= 1:
        return _sum(((_vv(i, n - i), i - n * beta) for i in range(0, n)))
    if n == 0:
        return Element.zero()
    return -_sum(((_vv(i, n - i), i - n * beta) for i in range(n, 0)))


def _origin_five(params, n: int) -> Element:
    if n == 0:
        return Element.of(_vv(0, 0))
    if n == 1:
        return Element.zero()
    if n >= 2:
        return -_sum(((_vv(i, n - i), 1) for i in range(1, n)))
    return _sum(((_vv(i, n - i), 1) for i in range(n, 1)))


def _one_one(params, n: int) -> Element:
    if n >= 1:
        return _sum(((_vv(i, n - i), i * (n - i)) for i in range(1, n + 1)))
    if n == 0:
        return Element.zero()
    return -_sum(((_vv(i, n - i), i * (n - i)) for i in range(n, 0)))


def _skew(a: BasisIndex, b: BasisIndex) -> Element:
    return _sum([(BasisIndex(f"{a.sector}|{b.sector}", a.index + b.index), 1),
                 (BasisIndex(f"{b.sector}|{a.sector}", b.index + a.index), -1)])


def _or_wedge(kind: int) -> Formula:
    def formula(params, x: BasisIndex) -> Element:
        m = x.index[0]
        if kind in (1, 2) and x.sector == "L":
            return _skew(basis("v", m), basis("v", 0)) * (m if kind == 2 else 1)
        if kind == 3 and x.sector == "v":
            return _skew(basis("v", m), basis("v", 0))
        return Element.zero()

    return formula


def _sv_wedge(kind: int) -> Formula:
    def formula(params, x: BasisIndex) -> Element:
        m = x.index[0]
        if kind in (1, 2) and x.sector == "L":
            return _skew(basis("M", 0), basis("M", m)) * (m if kind == 2 else 1)
        if kind == 3 and x.sector == "Y":
            return _skew(basis("M", 0), basis("Y", m)) * Fraction(1, 2)
        if kind == 3 and x.sector == "M":
            return _skew(basis("M", 0), basis("M", m))
        return Element.zero()

    return formula


def _intertwiner(left: bool) -> Formula:
    def formula(params, x: BasisIndex) -> Element:
        if x.sector != "v":
            return Element.zero()
        m = x.index[0]
        return Element.of(_vv(0, m) if left else _vv(m, 0))

    return formula


@dc.dataclass(frozen=True)
class CatalogEntry:
    name: str
    algebra: str
    module: str
    formula: Formula
    description: str
    fixed: Tuple[Tuple[str, Fraction], ...] = ()  # required parameter values
    on_line: bool = False  # requires alpha + beta = 1
    group: str = "witt"  # witt | intertwiner | wedge

    def parameter_names(self) -> Tuple[str, ...]:
        if self.module == "tensor-density":
            return ("alpha", "beta")
        if self.algebra == "ovsienko-roger":
            return ("alpha",)
        return ()

    def sample_parameters(self) -> Dict[str, Fraction]:
        if self.on_line:
            return {"alpha": Fraction(3), "beta": Fraction(-2)}
        return dict(self.fixed)

    def accepts(self, parameters: Parameters) -> bool:
        try:
            self.check(parameters)
        except (ValueError, KeyError):
            return False
        return True

    def check(self, parameters: Optional[Parameters]) -> Dict[str, Fraction]:
        parameters = parameters or {}
        params = {}
        for name in self.parameter_names():
            if name not in parameters or parameters[name] is None:
                raise KeyError(f"Entry '{self.name}' requires parameter '{name}'.")
            params[name] = as_scalar(parameters[name])
        for name, value in self.fixed:
            if params[name] != value:
                raise ValueError(f"Entry '{self.name}' is defined at {name}={value}, got {params[name]}.")
        if self.on_line and params["alpha"] + params["beta"] != 1:
            raise ValueError(f"Entry '{self.name}' needs alpha + beta = 1, got {params['alpha']} + {params['beta']}.")
        return params

    def module_spec(self, parameters: Optional[Parameters] = None) -> ModuleSpec:
        params = self.check(parameters)
        return make_module(self.module, make_algebra(self.algebra, params), params)

    def derivation(self, parameters: Optional[Parameters] = None) -> FormulaDerivation:
        params = self.check(parameters)
        return FormulaDerivation(module=self.module_spec(params), name=self.name,
                                 formula=lambda x: self.formula(params, x))


def _fixed(alpha, beta=None):
    out = (("alpha", Fraction(alpha)),)
    return out if beta is None else out + (("beta", Fraction(beta)),)


_ENTRIES = [
    CatalogEntry("delta_1mb_b", "witt", "tensor-density", _on_l(_line_cocycle),
                 "sum (i - n beta) v_i⊗v_{n-i} on alpha + beta = 1", on_line=True),
    CatalogEntry("delta00_1", "witt", "tensor-density", _on_l(lambda p, n: Element.of(_vv(0, n))),
                 "v_0⊗v_n", _fixed(0, 0)),
    CatalogEntry("delta00_2", "witt", "tensor-density", _on_l(lambda p, n: Element.of(_vv(0, n), n)),
                 "n v_0⊗v_n", _fixed(0, 0)),
    CatalogEntry("delta00_3", "witt", "tensor-density", _on_l(lambda p, n: Element.of(_vv(n, 0))),
                 "v_n⊗v_0", _fixed(0, 0)),
    CatalogEntry("delta00_4", "witt", "tensor-density", _on_l(lambda p, n: Element.of(_vv(n, 0), n)),
                 "n v_n⊗v_0", _fixed(0, 0)),
    CatalogEntry("delta00_5", "witt", "tensor-density", _on_l(_origin_five),
                 "v_0⊗v_0 at n = 0, -sum v_i⊗v_{n-i} for n >= 2, sum over [n, 0] for n < 0", _fixed(0, 0)),
    CatalogEntry("delta01_1", "witt", "tensor-density", _on_l(lambda p, n: Element.of(_vv(0, n), n * n)),
                 "n^2 v_0⊗v_n", _fixed(0, 1)),
    CatalogEntry("delta10_1", "witt", "tensor-density", _on_l(lambda p, n: Element.of(_vv(n, 0), n * n)),
                 "n^2 v_n⊗v_0", _fixed(1, 0)),
    CatalogEntry("delta02", "witt", "tensor-density", _on_l(lambda p, n: Element.of(_vv(0, n), n ** 3)),
                 "n^3 v_0⊗v_n", _fixed(0, 2)),
    CatalogEntry("delta20", "witt", "tensor-density", _on_l(lambda p, n: Element.of(_vv(n, 0), n ** 3)),
                 "n^3 v_n⊗v_0", _fixed(2, 0)),
    CatalogEntry("delta11", "witt", "tensor-density", _on_l(_one_one),
                 "sum i(n-i) v_i⊗v_{n-i}", _fixed(1, 1)),
    CatalogEntry("tilde6", "ovsienko-roger", "adjoint-tensor", _intertwiner(left=True),
                 "v_m -> v_0⊗v_m, L_m -> 0", _fixed(0), group="intertwiner"),
    CatalogEntry("tilde7", "ovsienko-roger", "adjoint-tensor", _intertwiner(left=False),
                 "v_m -> v_m⊗v_0, L_m -> 0", _fixed(0), group="intertwiner"),
    CatalogEntry("or_wedge_1", "ovsienko-roger", "adjoint-wedge", _or_wedge(1),
                 "L_m -> v_m⊗v_0 - v_0⊗v_m", _fixed(0), group="wedge"),
    CatalogEntry("or_wedge_2", "ovsienko-roger", "adjoint-wedge", _or_wedge(2),
                 "L_m -> m (v_m⊗v_0 - v_0⊗v_m)", _fixed(0), group="wedge"),
    CatalogEntry("or_wedge_3", "ovsienko-roger", "adjoint-wedge", _or_wedge(3),
                 "v_m -> v_m⊗v_0 - v_0⊗v_m", _fixed(0), group="wedge"),
    CatalogEntry("sv_wedge_1", "schroedinger-virasoro", "adjoint-wedge", _sv_wedge(1),
                 "L_m -> M_0⊗M_m - M_m⊗M_0", group="wedge"),
    CatalogEntry("sv_wedge_2", "schroedinger-virasoro", "adjoint-wedge", _sv_wedge(2),
                 "L_m -> m (M_0⊗M_m - M_m⊗M_0)", group="wedge"),
    CatalogEntry("sv_wedge_3", "schroedinger-virasoro", "adjoint-wedge", _sv_wedge(3),
                 "Y_m -> (M_0⊗Y_m - Y_m⊗M_0)/2, M_m -> M_0⊗M_m - M_m⊗M_0", group="wedge"),
]

CATALOG: Dict[str, CatalogEntry] = {entry.name: entry for entry in _ENTRIES}


def get_entry(name: str) -> CatalogEntry:
    if name not in CATALOG:
        raise NotImplementedError(f"Catalog entry '{name}' not implemented.")
    return CATALOG[name]


def catalog_names(group: Optional[str] = None) -> List[str]:
    return [e.name for e in _ENTRIES if group is None or e.group == group]


def entries_for(parameters: Parameters, algebra: str = "witt", module: str = "tensor-density") -> List[str]:
    """ Entries declared at a parameter point. """
    return [e.name for e in _ENTRIES if e.algebra == algebra and e.module == module and e.accepts(parameters)]


def evaluate(name: str, parameters: Optional[Parameters], n: int, sector: str = "L") -> Element:
    entry = get_entry(name)
    return entry.formula(entry.check(parameters), basis(sector, n))


def _resolve(target: Union[str, Derivation], parameters: Optional[Parameters]) -> Derivation:
    if isinstance(target, str):
        return get_entry(target).derivation(parameters)
    return target


def _name(target: Union[str, Derivation]) -> str:
    return target if isinstance(target, str) else getattr(target, "name", type(target).__name__)


@dc.dataclass(frozen=True)
class CocycleCheck:
    name: str
    passed: bool
    bracket_bound: int
    witness: Optional[Tuple[BasisIndex, BasisIndex]] = None
    defect: Optional[Element] = None

    @property
    def witness_grades(self) -> Optional[Tuple[int, int]]:
        return None if self.witness is None else (self.witness[0].degree, self.witness[1].degree)


def defect_pairs(algebra, bound: int) -> List[Tuple[BasisIndex, BasisIndex]]:
    """ Distinct generator pairs with grades in [-bound, bound], positive part first, then by |m| + |n|. """
    generators = algebra.window_basis(bound)
    pairs = [(x, y) for a, y in enumerate(generators) for x in generators[a + 1:]]
    return sorted(pairs, key=lambda p: (min(p[0].degree, p[1].degree) < 1, abs(p[0].degree) + abs(p[1].degree),
                                        p[0].degree, p[1].degree, p[0].sector, p[1].sector))


def verify_cocycle(target: Union[str, Derivation], parameters: Optional[Parameters] = None,
                   bracket_bound: int = 10) -> CocycleCheck:
    derivation = _resolve(target, parameters)
    for x, y in defect_pairs(derivation.module.algebra, bracket_bound):
        defect = basis_defect(derivation, x, y)
        if defect:
            log.info("%s fails the cocycle identity at (%s, %s)", _name(target), x, y)
            return CocycleCheck(_name(target), False, bracket_bound, (x, y), defect)
    return CocycleCheck(_name(target), True, bracket_bound)


@dc.dataclass(frozen=True)
class NoncoboundaryCheck:
    name: str
    passed: bool
    largest_window: int
    found_at: Optional[int] = None
    solution: Optional[Element] = None

    def certificate(self) -> str:
        return f"pass@{self.largest_window}" if self.passed else f"fail@{self.found_at}"


def _coboundary_system(derivation: Derivation, inner_support: int, gen_bound: int):
    module = derivation.module
    generators = module.value_basis(derivation.degree, inner_support)
    rows: Dict[Tuple[BasisIndex, BasisIndex], Dict[int, Fraction]] = {}
    rhs: Dict[Tuple[BasisIndex, BasisIndex], Fraction] = {}
    for x in module.algebra.window_basis(gen_bound):
        for k, (_, v) in enumerate(generators):
            image = v.extend(lambda b: cached_action(module, x, b))
            for key, c in module.coordinates(image).items():
                rows.setdefault((x, key), {})[k] = c
        for key, c in module.coordinates(derivation.value(x)).items():
            rhs[(x, key)] = c
            rows.setdefault((x, key), {})
    keys = sorted(rows)
    return generators, [rows[k] for k in keys], [rhs.get(k, 0) for k in keys]


def verify_noncoboundary(target: Union[str, Derivation], parameters: Optional[Parameters] = None,
                         max_window: int = 12, gen_bound: int = 4) -> NoncoboundaryCheck:
    """ Tries D = coboundary(v) for v supported in [-N_v, N_v], N_v = 0..max_window. """
    derivation = _resolve(target, parameters)
    for inner_support in range(max_window + 1):
        generators, rows, rhs = _coboundary_system(derivation, inner_support, gen_bound)
        solution, _ = solve_affine_rows(rows, rhs, len(generators))
        if solution is not INFEASIBLE:
            element = Element.sum([generators[k][1] for k in solution], [solution[k] for k in solution])
            return NoncoboundaryCheck(_name(target), False, inner_support, inner_support, element)
    return NoncoboundaryCheck(_name(target), True, max_window)


@dc.dataclass(frozen=True)
class IndependenceCheck:
    names: Tuple[str, ...]
    passed: bool
    rank: int
    rank_in_h1: Optional[int] = None

    @property
    def independent_in_h1(self) -> Optional[bool]:
        return None if self.rank_in_h1 is None else self.rank_in_h1 == len(self.names)


EVALUATION_GRADES = (-2, -1, 1, 2)


def verify_independence(targets: Sequence[Union[str, Derivation]], parameters: Optional[Parameters] = None,
                        window: Optional[Window] = None, in_h1: bool = True) -> IndependenceCheck:
    derivations = [_resolve(t, parameters) for t in targets]
    modules = {d.module for d in derivations}
    if len(modules) != 1:
        raise ValueError("Independence is only defined for entries on the same module.")
    module = modules.pop()
    columns: Dict[Tuple[BasisIndex, BasisIndex], int] = {}
    echelon = Echelon()
    for derivation in derivations:
        row = {}
        for n in EVALUATION_GRADES:
            for x in module.algebra.basis_at(n):
                for idx, c in derivation.value(x).terms.items():
                    row[columns.setdefault((x, idx), len(columns))] = c
        echelon.add(row)
    rank_in_h1 = None
    if in_h1:
        computation = H1Computation(module, 0, window or Window())
        rank_in_h1 = computation.quotient_rank(derivations)
    return IndependenceCheck(tuple(_name(t) for t in targets), echelon.rank == len(derivations), echelon.rank,
                             rank_in_h1)
