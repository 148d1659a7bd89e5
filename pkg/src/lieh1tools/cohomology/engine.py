import dataclasses as dc
import logging
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from lieh1tools.algebras.elements import BasisIndex, Element, accumulate
from lieh1tools.algebras.modules import ModuleSpec, cached_action
from lieh1tools.cohomology.derivations import Derivation, DerivationWindow, window_pairs
from lieh1tools.linalg.exact import Echelon, Row, kernel_rows

log = logging.getLogger(__name__)

DEFAULT_GEN_BOUND = 4
DEFAULT_SUPPORT = 10


@dc.dataclass(frozen=True)
class Window:
    gen_bound: int = DEFAULT_GEN_BOUND  # M: generators of grade in [-M, M]
    support: int = DEFAULT_SUPPORT  # N: value index components in [-N, N]
    inner_support: Optional[int] = None  # N_v: support of inner generators, defaults to N + M

    def __post_init__(self):
        if self.gen_bound < 2:
            raise ValueError(f"Grade window M={self.gen_bound} is below the minimum of 2.")
        if self.support < self.gen_bound + 2:
            raise ValueError(f"Support window N={self.support} is smaller than M+2={self.gen_bound + 2}.")
        if self.inner_support is not None and self.inner_support < self.support:
            raise ValueError(f"Inner window N_v={self.inner_support} is smaller than N={self.support}.")

    @property
    def inner(self) -> int:
        return self.support + self.gen_bound if self.inner_support is None else self.inner_support

    def widened(self, step: int) -> "Window":
        inner = None if self.inner_support is None else self.inner_support + step
        return dc.replace(self, support=self.support + step, inner_support=inner)


def weight_degrees(module: ModuleSpec) -> List[int]:
    """ Possible differences between the weight of a value and the weight of its generator. """
    algebra = module.algebra
    value_weights = {module.weight(BasisIndex(s, (0,) * len(s.split("|")))) for s in module.sectors()}
    generator_weights = {algebra.weight(x) for x in algebra.basis_at(0)}
    return sorted({w - g for w in value_weights for g in generator_weights})


class CocycleSystem:
    """ Cocycle equations of one degree and one weight-degree on a truncation window. Unknowns are the
    coordinates of D(x) for every generator x of grade in [-M, M]; equations are all defects of pairs whose
    bracket stays in the window, with every output term kept. """

    def __init__(self, module: ModuleSpec, degree: int, window: Window, weight: int = 0):
        self.module = module
        self.algebra = module.algebra
        self.degree = degree
        self.window = window
        self.weight = weight
        self.generators = self.algebra.window_basis(window.gen_bound)
        self.columns: List[Tuple[BasisIndex, BasisIndex, Element]] = []
        self.column_of: Dict[Tuple[BasisIndex, BasisIndex], int] = {}
        self.by_generator: Dict[BasisIndex, List[int]] = {}
        for x in self.generators:
            cols = []
            for key, value in module.value_basis(x.degree + degree, window.support,
                                                 self.algebra.weight(x) + weight):
                self.column_of[(x, key)] = len(self.columns)
                cols.append(len(self.columns))
                self.columns.append((x, key, value))
            self.by_generator[x] = cols

    @property
    def num_unknowns(self) -> int:
        return len(self.columns)

    def _act(self, x: BasisIndex, value: Element) -> Element:
        return value.extend(lambda b: cached_action(self.module, x, b))

    def equations(self) -> List[Row]:
        rows: List[Row] = []
        for x, y in window_pairs(self.algebra, self.window.gen_bound):
            acc: Dict[BasisIndex, Row] = {}

            def add(col: int, element: Element, scale):
                for idx, c in element.terms.items():
                    if self.module.skew and idx > idx.swapped():
                        continue
                    row = acc.setdefault(idx, {})
                    new = row.get(col, 0) + c * scale
                    if new:
                        row[col] = new
                    else:
                        row.pop(col)

            for col in self.by_generator[y]:
                add(col, self._act(x, self.columns[col][2]), 1)
            for col in self.by_generator[x]:
                add(col, self._act(y, self.columns[col][2]), -1)
            for z, c in self.algebra.bracket(x, y).terms.items():
                for col in self.by_generator.get(z, ()):
                    add(col, self.columns[col][2], -c)
            rows.extend(row for row in acc.values() if row)
        return rows

    def to_window(self, vector: Row, support: Optional[int] = None) -> DerivationWindow:
        values: Dict[BasisIndex, Dict[BasisIndex, Fraction]] = {}
        for col, c in vector.items():
            x, _, value = self.columns[col]
            accumulate(values.setdefault(x, {}), value, c)
        return DerivationWindow.from_mapping(self.module, self.degree, self.window.gen_bound,
                                             self.window.support if support is None else support,
                                             {x: Element(v) for x, v in values.items()})

    def coordinates(self, derivation: Derivation) -> Row:
        """ Coordinates of the weight component of a derivation handled by this system. """
        row: Row = {}
        for x in self.generators:
            for key, c in self.module.coordinates(derivation.value(x)).items():
                if self.module.weight(key) - self.algebra.weight(x) != self.weight:
                    continue
                col = self.column_of.get((x, key))
                if col is None:
                    raise ValueError(f"Value term {key} of {x} lies outside the window.")
                row[col] = c
        return row


@dc.dataclass
class WeightBlock:
    system: CocycleSystem
    cocycles: List[Row]
    inner: Dict[int, Row]  # reduced echelon rows spanning the coboundaries that fit the window
    invariants: int  # dimension of the kernel of v -> (x.v)_x
    representatives: List[Row]

    @property
    def dim_cocycle(self) -> int:
        return len(self.cocycles)

    @property
    def dim_inner(self) -> int:
        return len(self.inner)

    @property
    def dim_h1(self) -> int:
        return self.dim_cocycle - self.dim_inner


def _inner_images(system: CocycleSystem, inner_support: int) -> Tuple[List[Row], int]:
    """ Coboundaries of grade-d generators with support in [-N_v, N_v] whose values fit the window, and the
    dimension of the invariants among those generators. """
    module = system.module
    generators = module.value_basis(system.degree, inner_support, system.weight)
    inside: List[Row] = []
    outside: Dict[Tuple[BasisIndex, BasisIndex], Row] = {}
    for k, (_, v) in enumerate(generators):
        image: Row = {}
        for x in system.generators:
            for key, c in module.coordinates(system._act(x, v)).items():
                col = system.column_of.get((x, key))
                if col is None:
                    outside.setdefault((x, key), {})[k] = c
                else:
                    image[col] = c
        inside.append(image)
    _, combos = kernel_rows(outside.values(), len(generators))
    images = []
    for combo in combos:
        acc: Row = {}
        for k, c in combo.items():
            for col, value in inside[k].items():
                new = acc.get(col, 0) + c * value
                if new:
                    acc[col] = new
                else:
                    acc.pop(col)
        images.append(acc)
    rank = Echelon(images).rank
    return images, len(combos) - rank


def solve_block(module: ModuleSpec, degree: int, window: Window, weight: int = 0,
                with_inner: bool = True) -> WeightBlock:
    system = CocycleSystem(module, degree, window, weight)
    equations = system.equations()
    rank, cocycles = kernel_rows(equations, system.num_unknowns)
    log.debug("%s d=%d e=%d: %d unknowns, %d equations, rank %d", module.kind, degree, weight,
              system.num_unknowns, len(equations), rank)
    if not with_inner:
        return WeightBlock(system=system, cocycles=cocycles, inner={}, invariants=0, representatives=[])
    images, invariants = _inner_images(system, window.inner)
    inner = Echelon(images)
    combined = Echelon(images)
    representatives = []
    for z in cocycles:
        if combined.add(z) is not None:
            representatives.append(inner.reduce(z))
    block = WeightBlock(system=system, cocycles=cocycles, inner=inner.rref(), invariants=invariants,
                        representatives=representatives)
    if len(representatives) != block.dim_h1:
        log.warning("%s d=%d e=%d: inner space is not contained in the cocycle space", module.kind, degree, weight)
    return block


class H1Computation:
    """ Cocycles, coboundaries and classes of one module at one degree, split by weight-degree. """

    def __init__(self, module: ModuleSpec, degree: int, window: Window, with_inner: bool = True):
        self.module = module
        self.degree = degree
        self.window = window
        self.blocks = [solve_block(module, degree, window, e, with_inner) for e in weight_degrees(module)]

    @property
    def dim_cocycle(self) -> int:
        return sum(b.dim_cocycle for b in self.blocks)

    @property
    def dim_inner(self) -> int:
        return sum(b.dim_inner for b in self.blocks)

    @property
    def dim_h1(self) -> int:
        return sum(b.dim_h1 for b in self.blocks)

    @property
    def invariants(self) -> int:
        return sum(b.invariants for b in self.blocks)

    def cocycle_basis(self) -> List[DerivationWindow]:
        return [b.system.to_window(z) for b in self.blocks for z in b.cocycles]

    def inner_basis(self) -> List[DerivationWindow]:
        return [b.system.to_window(b.inner[p]) for b in self.blocks for p in sorted(b.inner)]

    def representatives(self) -> List[DerivationWindow]:
        return [b.system.to_window(r) for b in self.blocks for r in b.representatives]

    def _global(self, rows_per_block: Iterable[Tuple[int, Row]]) -> Row:
        row: Row = {}
        offset = 0
        offsets = []
        for b in self.blocks:
            offsets.append(offset)
            offset += b.system.num_unknowns
        for k, block_row in rows_per_block:
            for col, c in block_row.items():
                row[offsets[k] + col] = c
        return row

    def coordinates(self, derivation: Derivation) -> Row:
        return self._global((k, b.system.coordinates(derivation)) for k, b in enumerate(self.blocks))

    def is_cocycle(self, derivation: Derivation) -> bool:
        """ Whether the window restriction lies in the computed cocycle space. """
        return all(Echelon(b.cocycles).contains(b.system.coordinates(derivation)) for b in self.blocks)

    def quotient_rank(self, derivations: Sequence[Derivation]) -> int:
        """ Rank of the classes of the given derivations modulo the inner space. """
        echelon = Echelon(self._global([(k, row)]) for k, b in enumerate(self.blocks) for row in b.inner.values())
        base = echelon.rank
        for derivation in derivations:
            echelon.add(self.coordinates(derivation))
        return echelon.rank - base


@dc.dataclass(frozen=True)
class CohomologyReport:
    algebra: str
    module: str
    alpha: Optional[str]
    beta: Optional[str]
    degree: int
    gen_bound: int
    support: int
    inner_support: int
    dim_cocycle: int
    dim_inner: int
    dim_h1: int
    stabilized: bool
    basis: Tuple[DerivationWindow, ...] = ()
    dim_invariants: int = 0
    weights: Tuple[Tuple[int, int], ...] = ()  # (weight-degree, h1 dimension of that block)

    def to_json(self):
        return {"algebra": self.algebra, "module": self.module, "alpha": self.alpha, "beta": self.beta,
                "degree": self.degree, "gen_bound": self.gen_bound, "support": self.support,
                "dim_cocycle": self.dim_cocycle, "dim_inner": self.dim_inner, "dim_h1": self.dim_h1,
                "stabilized": self.stabilized, "basis": [d.to_json() for d in self.basis],
                "inner_support": self.inner_support, "dim_invariants": self.dim_invariants,
                "weights": [list(w) for w in self.weights]}

    def to_record(self):
        """ Flat row for tabular output. """
        return {"alpha": self.alpha, "beta": self.beta, "degree": self.degree, "M": self.gen_bound,
                "N": self.support, "dim_h1": self.dim_h1, "stabilized": self.stabilized}


def cocycle_space(module: ModuleSpec, degree: int, gen_bound: int = DEFAULT_GEN_BOUND,
                  support: int = DEFAULT_SUPPORT) -> Tuple[List[DerivationWindow], int]:
    computation = H1Computation(module, degree, Window(gen_bound, support), with_inner=False)
    return computation.cocycle_basis(), computation.dim_cocycle


def inner_space(module: ModuleSpec, degree: int, gen_bound: int = DEFAULT_GEN_BOUND,
                support: int = DEFAULT_SUPPORT,
                inner_support: Optional[int] = None) -> Tuple[List[DerivationWindow], int]:
    window = Window(gen_bound, support, inner_support)
    basis = []
    for e in weight_degrees(module):
        system = CocycleSystem(module, degree, window, e)
        images, _ = _inner_images(system, window.inner)
        rref = Echelon(images).rref()
        basis.extend(system.to_window(rref[p]) for p in sorted(rref))
    return basis, len(basis)


def compute_h1(module: ModuleSpec, degree: int, window: Window) -> H1Computation:
    return H1Computation(module, degree, window)


def h1_dimension(module: ModuleSpec, degree: int = 0, gen_bound: int = DEFAULT_GEN_BOUND,
                 support: int = DEFAULT_SUPPORT, inner_support: Optional[int] = None,
                 stabilization_rounds: int = 1) -> CohomologyReport:
    window = Window(gen_bound, support, inner_support)
    computation = compute_h1(module, degree, window)
    return make_report(computation, stabilization_rounds)


def make_report(computation: H1Computation, stabilization_rounds: int = 1) -> CohomologyReport:
    window = computation.window
    stabilized = True
    for r in range(1, stabilization_rounds + 1):
        wider = H1Computation(computation.module, computation.degree, window.widened(2 * r))
        if wider.dim_h1 != computation.dim_h1:
            log.warning("%s d=%d: h1 changes from %d to %d at N=%d", computation.module.kind, computation.degree,
                        computation.dim_h1, wider.dim_h1, wider.window.support)
            stabilized = False
            break
    return CohomologyReport(
        **computation.module.header(),
        degree=computation.degree,
        gen_bound=window.gen_bound,
        support=window.support,
        inner_support=window.inner,
        dim_cocycle=computation.dim_cocycle,
        dim_inner=computation.dim_inner,
        dim_h1=computation.dim_h1,
        stabilized=stabilized,
        basis=tuple(computation.representatives()),
        dim_invariants=computation.invariants,
        weights=tuple((e, b.dim_h1) for e, b in zip(weight_degrees(computation.module), computation.blocks)),
    )
