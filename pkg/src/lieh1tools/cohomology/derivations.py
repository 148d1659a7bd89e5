import dataclasses as dc
from fractions import Fraction
from functools import cached_property
from typing import Callable, Dict, Iterable, Mapping, Optional, Protocol, Tuple

from lieh1tools.algebras.algebras import AlgebraSpec
from lieh1tools.algebras.elements import BasisIndex, Element, accumulate, basis
from lieh1tools.algebras.modules import ModuleSpec, cached_action
from lieh1tools.linalg.exact import ScalarLike, as_scalar, format_scalar


class Derivation(Protocol):
    """ Anything that assigns module values to algebra basis vectors. """
    module: ModuleSpec
    degree: int

    def value(self, x: BasisIndex) -> Element:
        ...


@dc.dataclass(frozen=True)
class DerivationWindow:
    module: ModuleSpec
    degree: int
    gen_bound: int
    support: int
    values: Tuple[Tuple[BasisIndex, Element], ...] = ()

    def __post_init__(self):
        sectors = set(self.module.sectors())
        for x, value in self.values:
            self.algebra.check(x)
            if abs(x.degree) > self.gen_bound:
                raise ValueError(f"Generator {x} lies outside grade window {self.gen_bound}.")
            if value.degrees() - {x.degree + self.degree}:
                raise ValueError(f"Value of {x} is not homogeneous of grade {x.degree + self.degree}.")
            if value.support_width() > self.support:
                raise ValueError(f"Value of {x} exceeds support window {self.support}.")
            if value.sectors() - sectors:
                raise ValueError(f"Value of {x} has sectors outside module '{self.module.kind}'.")

    @classmethod
    def from_mapping(cls, module: ModuleSpec, degree: int, gen_bound: int, support: int,
                     values: Mapping[BasisIndex, Element]):
        return cls(module=module, degree=degree, gen_bound=gen_bound, support=support,
                   values=tuple(sorted((x, v) for x, v in values.items() if v)))

    @property
    def algebra(self) -> AlgebraSpec:
        return self.module.algebra

    @cached_property
    def _lookup(self) -> Dict[BasisIndex, Element]:
        return dict(self.values)

    def generators(self):
        return self.algebra.window_basis(self.gen_bound)

    def value(self, x: BasisIndex) -> Element:
        self.algebra.check(x)
        if abs(x.degree) > self.gen_bound:
            raise ValueError(f"Grade {x.degree} is missing from a window of bound {self.gen_bound}.")
        return self._lookup.get(x, Element.zero())

    def is_zero(self) -> bool:
        return not self.values

    def __add__(self, other: "DerivationWindow") -> "DerivationWindow":
        self._check_compatible(other)
        values = {x: self.value(x) + other.value(x) for x in self.generators()}
        return DerivationWindow.from_mapping(self.module, self.degree, self.gen_bound,
                                             max(self.support, other.support), values)

    def __sub__(self, other: "DerivationWindow") -> "DerivationWindow":
        return self + other.scaled(-1)

    def scaled(self, scalar: ScalarLike) -> "DerivationWindow":
        return DerivationWindow.from_mapping(self.module, self.degree, self.gen_bound, self.support,
                                             {x: v * scalar for x, v in self.values})

    def _check_compatible(self, other: "DerivationWindow"):
        if (self.module, self.degree, self.gen_bound) != (other.module, other.degree, other.gen_bound):
            raise ValueError("Derivation windows differ in module, degree or grade window.")

    def to_json(self):
        return {"degree": self.degree, "gen_bound": self.gen_bound, "support": self.support,
                "values": [{"generator": x.to_json(), "value": v.to_json()} for x, v in self.values]}


@dc.dataclass(frozen=True)
class FormulaDerivation:
    """ A derivation given by a closed formula on every basis vector of the algebra. """
    module: ModuleSpec
    formula: Callable[[BasisIndex], Element]
    name: str = "formula"
    degree: int = 0
    scale: Fraction = Fraction(1)

    def value(self, x: BasisIndex) -> Element:
        self.module.algebra.check(x)
        return self.formula(x) * self.scale

    def scaled(self, scalar: ScalarLike) -> "FormulaDerivation":
        return dc.replace(self, scale=self.scale * as_scalar(scalar), name=f"{format_scalar(scalar)}*{self.name}")

    def restrict(self, gen_bound: int, support: int) -> DerivationWindow:
        return restrict(self, gen_bound, support)


def restrict(derivation: Derivation, gen_bound: int, support: int) -> DerivationWindow:
    values = {x: derivation.value(x) for x in derivation.module.algebra.window_basis(gen_bound)}
    return DerivationWindow.from_mapping(derivation.module, derivation.degree, gen_bound, support, values)


def basis_defect(derivation: Derivation, x: BasisIndex, y: BasisIndex) -> Element:
    """ x.D(y) - y.D(x) - D([x, y]) """
    module = derivation.module
    acc: Dict[BasisIndex, Fraction] = {}
    accumulate(acc, module.act_element(x, derivation.value(y)), 1)
    accumulate(acc, module.act_element(y, derivation.value(x)), -1)
    for z, c in module.algebra.bracket(x, y).terms.items():
        accumulate(acc, derivation.value(z), -c)
    return Element(acc)


def _check_window(derivation: Derivation, *grades: int):
    bound = getattr(derivation, "gen_bound", None)
    if bound is not None and any(abs(g) > bound for g in grades):
        raise ValueError(f"Grades {grades} exceed the window bound {bound}.")


def cocycle_defect(derivation: Derivation, m: int, n: int, sectors: Tuple[str, str] = ("L", "L")) -> Element:
    _check_window(derivation, m, n, m + n)
    return basis_defect(derivation, basis(sectors[0], m), basis(sectors[1], n))


def cocycle_defects(derivation: Derivation, m: int, n: int) -> Dict[Tuple[BasisIndex, BasisIndex], Element]:
    """ One defect per ordered pair of sectors at grades m and n. """
    _check_window(derivation, m, n, m + n)
    algebra = derivation.module.algebra
    return {(x, y): basis_defect(derivation, x, y) for x in algebra.basis_at(m) for y in algebra.basis_at(n)}


def window_pairs(algebra: AlgebraSpec, gen_bound: int) -> Iterable[Tuple[BasisIndex, BasisIndex]]:
    """ Unordered pairs of distinct generators whose bracket stays inside the grade window. """
    generators = algebra.window_basis(gen_bound)
    for a, x in enumerate(generators):
        for y in generators[a + 1:]:
            if abs(x.degree + y.degree) <= gen_bound:
                yield x, y


def first_window_defect(derivation: DerivationWindow) -> Optional[Tuple[BasisIndex, BasisIndex, Element]]:
    for x, y in window_pairs(derivation.algebra, derivation.gen_bound):
        defect = basis_defect(derivation, x, y)
        if defect:
            return x, y, defect
    return None


def coboundary(module: ModuleSpec, v: Element, gen_bound: int, support: Optional[int] = None,
               degree: Optional[int] = None) -> DerivationWindow:
    """ The inner derivation x -> x.v on all generators of grade in [-gen_bound, gen_bound]. """
    if not v.is_homogeneous():
        raise ValueError(f"Coboundary needs a homogeneous element, got {v}.")
    if v and degree is not None and v.degree != degree:
        raise ValueError(f"Element has grade {v.degree}, expected {degree}.")
    if module.skew:
        module.coordinates(v)
    values = {x: v.extend(lambda b, x=x: cached_action(module, x, b))
              for x in module.algebra.window_basis(gen_bound)}
    needed = max((value.support_width() for value in values.values()), default=0)
    if support is None:
        support = needed
    elif needed > support:
        raise ValueError(f"Coboundary values need support {needed}, window allows {support}.")
    grade = v.degree if v else (degree or 0)
    return DerivationWindow.from_mapping(module, grade, gen_bound, support, values)
