import dataclasses as dc
from fractions import Fraction
from types import MappingProxyType
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Set, Tuple

from lieh1tools.linalg.exact import ScalarLike, as_scalar, format_scalar

TENSOR_SEPARATOR = "|"


@dc.dataclass(frozen=True, order=True)
class BasisIndex:
    sector: str
    index: Tuple[int, ...]

    def __post_init__(self):
        if len(self.sector.split(TENSOR_SEPARATOR)) != len(self.index):
            raise ValueError(f"Sector '{self.sector}' does not match index {self.index}.")

    @property
    def degree(self) -> int:
        return sum(self.index)

    @property
    def rank(self) -> int:
        """ Number of tensor factors. """
        return len(self.index)

    @property
    def is_tensor(self) -> bool:
        return self.rank == 2

    def factors(self) -> Tuple["BasisIndex", ...]:
        return tuple(BasisIndex(s, (i,)) for s, i in zip(self.sector.split(TENSOR_SEPARATOR), self.index))

    def swapped(self) -> "BasisIndex":
        if self.rank != 2:
            raise ValueError(f"Cannot swap factors of {self}.")
        first, second = self.factors()
        return tensor_index(second, first)

    def cycled(self) -> "BasisIndex":
        """ a⊗b⊗c -> c⊗a⊗b """
        if self.rank != 3:
            raise ValueError(f"Cannot cycle factors of {self}.")
        a, b, c = self.factors()
        return tensor_index(c, a, b)

    def to_json(self):
        return {"sector": self.sector, "index": list(self.index)}

    @classmethod
    def from_json(cls, data):
        return cls(sector=data["sector"], index=tuple(int(i) for i in data["index"]))

    def __str__(self):
        return "⊗".join(f"{f.sector}_{f.index[0]}" for f in self.factors())


def basis(sector: str, index: int) -> BasisIndex:
    return BasisIndex(sector, (index,))


def tensor_index(*factors: BasisIndex) -> BasisIndex:
    return BasisIndex(TENSOR_SEPARATOR.join(f.sector for f in factors),
                      tuple(i for f in factors for i in f.index))


class Element:
    """ Finitely supported linear combination of basis vectors with exact coefficients. Immutable; zero
    coefficients are never stored. """
    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[BasisIndex, ScalarLike]] = None):
        clean = {}
        for idx, coeff in (terms or {}).items():
            coeff = as_scalar(coeff)
            if coeff:
                clean[idx] = coeff
        self._terms = clean

    @classmethod
    def _wrap(cls, clean: Dict[BasisIndex, Fraction]) -> "Element":
        element = cls.__new__(cls)
        element._terms = clean
        return element

    @classmethod
    def zero(cls) -> "Element":
        return cls._wrap({})

    @classmethod
    def of(cls, idx: BasisIndex, coeff: ScalarLike = 1) -> "Element":
        return cls({idx: coeff})

    @classmethod
    def sum(cls, elements, coeffs=None) -> "Element":
        acc: Dict[BasisIndex, Fraction] = {}
        for k, element in enumerate(elements):
            scale = 1 if coeffs is None else coeffs[k]
            accumulate(acc, element, scale)
        return cls._wrap(acc)

    @property
    def terms(self) -> Mapping[BasisIndex, Fraction]:
        return MappingProxyType(self._terms)

    def items(self) -> List[Tuple[BasisIndex, Fraction]]:
        return sorted(self._terms.items())

    def coefficient(self, idx: BasisIndex) -> Fraction:
        return self._terms.get(idx, Fraction(0))

    def __iter__(self) -> Iterator[BasisIndex]:
        return iter(sorted(self._terms))

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other):
        if isinstance(other, Element):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "Element") -> "Element":
        acc = dict(self._terms)
        accumulate(acc, other, 1)
        return Element._wrap(acc)

    def __sub__(self, other: "Element") -> "Element":
        acc = dict(self._terms)
        accumulate(acc, other, -1)
        return Element._wrap(acc)

    def __neg__(self) -> "Element":
        return Element._wrap({idx: -c for idx, c in self._terms.items()})

    def __mul__(self, scalar: ScalarLike) -> "Element":
        scalar = as_scalar(scalar)
        if not scalar:
            return Element.zero()
        return Element._wrap({idx: c * scalar for idx, c in self._terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar: ScalarLike) -> "Element":
        scalar = as_scalar(scalar)
        if not scalar:
            raise ZeroDivisionError("Element divided by zero.")
        return self * (1 / scalar)

    def degrees(self) -> Set[int]:
        return {idx.degree for idx in self._terms}

    def grade_part(self, k: int) -> "Element":
        return Element._wrap({idx: c for idx, c in self._terms.items() if idx.degree == k})

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> Optional[int]:
        """ Grade of a homogeneous element, None for zero. """
        degrees = self.degrees()
        if len(degrees) > 1:
            raise ValueError(f"Element {self} is not homogeneous.")
        return next(iter(degrees)) if degrees else None

    def sectors(self) -> Set[str]:
        return {idx.sector for idx in self._terms}

    def support_width(self) -> int:
        """ Largest absolute index component over all terms. """
        return max((abs(i) for idx in self._terms for i in idx.index), default=0)

    def swapped(self) -> "Element":
        return Element._wrap({idx.swapped(): c for idx, c in self._terms.items()})

    def cycled(self) -> "Element":
        return Element._wrap({idx.cycled(): c for idx, c in self._terms.items()})

    def tensor(self, other: "Element") -> "Element":
        acc: Dict[BasisIndex, Fraction] = {}
        for a, ca in self._terms.items():
            for b, cb in other._terms.items():
                idx = tensor_index(*a.factors(), *b.factors())
                value = acc.get(idx, 0) + ca * cb
                if value:
                    acc[idx] = value
                else:
                    acc.pop(idx, None)
        return Element._wrap(acc)

    def extend(self, linear_map: Callable[[BasisIndex], "Element"]) -> "Element":
        """ Apply the linear extension of a map defined on basis vectors. """
        acc: Dict[BasisIndex, Fraction] = {}
        for idx, coeff in self._terms.items():
            accumulate(acc, linear_map(idx), coeff)
        return Element._wrap(acc)

    def to_json(self):
        return {"terms": [dict(idx.to_json(), coeff=format_scalar(c)) for idx, c in self.items()]}

    @classmethod
    def from_json(cls, data) -> "Element":
        return cls({BasisIndex.from_json(t): as_scalar(t["coeff"]) for t in data["terms"]})

    def __repr__(self):
        if not self._terms:
            return "0"
        return " + ".join(f"{format_scalar(c)}*{idx}" for idx, c in self.items())


def accumulate(acc: Dict[BasisIndex, Fraction], element: Element, scale: ScalarLike = 1):
    """ acc += scale * element, in place, dropping cancelled terms. """
    if not scale:
        return
    for idx, coeff in element.terms.items():
        value = acc.get(idx, 0) + coeff * scale
        if value:
            acc[idx] = value
        else:
            acc.pop(idx, None)
