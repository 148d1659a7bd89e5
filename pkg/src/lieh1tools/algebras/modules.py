import dataclasses as dc
import functools
import itertools
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from lieh1tools.algebras.algebras import AlgebraSpec, WittAlgebra, density_action, tensor_action
from lieh1tools.algebras.elements import TENSOR_SEPARATOR, BasisIndex, Element, accumulate, tensor_index
from lieh1tools.linalg.exact import format_scalar


@dc.dataclass(frozen=True)
class ModuleSpec:
    kind: str
    algebra: AlgebraSpec

    @property
    def skew(self) -> bool:
        """ Skew modules are the antisymmetric part of a tensor square; values are parametrised by b - swap(b). """
        return False

    def sectors(self) -> Tuple[str, ...]:
        raise NotImplementedError(f"Module kind '{self.kind}' not implemented.")

    def act(self, x: BasisIndex, w: BasisIndex) -> Element:
        raise NotImplementedError(f"Module kind '{self.kind}' not implemented.")

    def weight(self, w: BasisIndex) -> int:
        return 0

    @property
    def parameters(self) -> Dict[str, Fraction]:
        base = {f.name for f in dc.fields(ModuleSpec)}
        return {f.name: getattr(self, f.name) for f in dc.fields(self) if f.name not in base}

    def header(self) -> Dict[str, Optional[str]]:
        """ Names and parameters as they appear in every report. """
        params = dict(self.algebra.parameters)
        params.update(self.parameters)
        return {"algebra": self.algebra.name, "module": self.kind,
                "alpha": format_scalar(params["alpha"]) if "alpha" in params else None,
                "beta": format_scalar(params["beta"]) if "beta" in params else None}

    def act_element(self, x: BasisIndex, w: Element) -> Element:
        return w.extend(lambda b: cached_action(self, x, b))

    def basis(self, grade: int, support: int, weight: Optional[int] = None) -> List[BasisIndex]:
        """ Module basis vectors of the given grade with every index component in [-support, support]. """
        out = []
        for sector in self.sectors():
            rank = len(sector.split(TENSOR_SEPARATOR))
            if rank == 1:
                candidates = [BasisIndex(sector, (grade,))] if abs(grade) <= support else []
            else:
                candidates = [BasisIndex(sector, (i, grade - i)) for i in range(-support, support + 1)
                              if abs(grade - i) <= support]
            out.extend(b for b in candidates if weight is None or self.weight(b) == weight)
        return sorted(out)

    def canonical(self, b: BasisIndex) -> Tuple[BasisIndex, int]:
        """ Coordinate key of a basis vector and the sign it carries relative to that key. """
        return b, 1

    def value_basis(self, grade: int, support: int, weight: Optional[int] = None) -> List[Tuple[BasisIndex, Element]]:
        """ (coordinate key, element) pairs spanning the admissible values at this grade. """
        return [(b, Element.of(b)) for b in self.basis(grade, support, weight)]

    def coordinates(self, w: Element) -> Dict[BasisIndex, Fraction]:
        return dict(w.terms)


@functools.lru_cache(maxsize=1 << 18)
def cached_action(module: ModuleSpec, x: BasisIndex, w: BasisIndex) -> Element:
    return module.act(x, w)


@dc.dataclass(frozen=True)
class DensityModule(ModuleSpec):
    kind: str = "density"
    algebra: AlgebraSpec = dc.field(default_factory=WittAlgebra)
    alpha: Fraction = Fraction(0)

    def sectors(self) -> Tuple[str, ...]:
        return ("v",)

    def act(self, x: BasisIndex, w: BasisIndex) -> Element:
        self.algebra.check(x)
        if w.sector != "v":
            raise ValueError(f"Density modules act on v-vectors, not '{w.sector}'.")
        return density_action(self.alpha, x.index[0], w.index[0])


@dc.dataclass(frozen=True)
class TensorDensityModule(ModuleSpec):
    """ F_alpha ⊗ F_beta over the Witt algebra. """
    kind: str = "tensor-density"
    algebra: AlgebraSpec = dc.field(default_factory=WittAlgebra)
    alpha: Fraction = Fraction(0)
    beta: Fraction = Fraction(0)

    def sectors(self) -> Tuple[str, ...]:
        return ("v|v",)

    def act(self, x: BasisIndex, w: BasisIndex) -> Element:
        self.algebra.check(x)
        return tensor_action(self.alpha, self.beta, x.index[0], Element.of(w))


@dc.dataclass(frozen=True)
class AdjointModule(ModuleSpec):
    kind: str = "adjoint"
    algebra: AlgebraSpec = dc.field(default_factory=WittAlgebra)

    def sectors(self) -> Tuple[str, ...]:
        return self.algebra.sectors

    def act(self, x: BasisIndex, w: BasisIndex) -> Element:
        return self.algebra.bracket(x, w)

    def weight(self, w: BasisIndex) -> int:
        return self.algebra.weight(w)


@dc.dataclass(frozen=True)
class AdjointTensorModule(ModuleSpec):
    kind: str = "adjoint-tensor"
    algebra: AlgebraSpec = dc.field(default_factory=WittAlgebra)

    def sectors(self) -> Tuple[str, ...]:
        return tuple(TENSOR_SEPARATOR.join(pair) for pair in itertools.product(self.algebra.sectors, repeat=2))

    def act(self, x: BasisIndex, w: BasisIndex) -> Element:
        a, b = w.factors()
        acc: Dict[BasisIndex, Fraction] = {}
        for idx, c in self.algebra.bracket(x, a).terms.items():
            accumulate(acc, Element.of(tensor_index(idx, b)), c)
        for idx, c in self.algebra.bracket(x, b).terms.items():
            accumulate(acc, Element.of(tensor_index(a, idx)), c)
        return Element(acc)

    def weight(self, w: BasisIndex) -> int:
        return self.algebra.weight(w)


@dc.dataclass(frozen=True)
class AdjointWedgeModule(AdjointTensorModule):
    kind: str = "adjoint-wedge"

    @property
    def skew(self) -> bool:
        return True

    def canonical(self, b: BasisIndex) -> Tuple[BasisIndex, int]:
        swapped = b.swapped()
        return (b, 1) if b <= swapped else (swapped, -1)

    def value_basis(self, grade: int, support: int, weight: Optional[int] = None) -> List[Tuple[BasisIndex, Element]]:
        out = []
        for b in self.basis(grade, support, weight):
            swapped = b.swapped()
            if b < swapped:
                out.append((b, Element({b: 1, swapped: -1})))
        return out

    def coordinates(self, w: Element) -> Dict[BasisIndex, Fraction]:
        if w.swapped() != -w:
            raise ValueError(f"{w} is not antisymmetric.")
        return {b: c for b, c in w.terms.items() if b < b.swapped()}
