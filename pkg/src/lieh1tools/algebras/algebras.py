import dataclasses as dc
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Tuple

from lieh1tools.algebras.elements import BasisIndex, Element, basis
from lieh1tools.linalg.exact import ScalarLike, as_scalar, format_scalar


def witt_bracket(m: int, n: int) -> Element:
    """ [L_m, L_n] = (m-n) L_{m+n} """
    return Element.of(basis("L", m + n), m - n)


def density_action(alpha: ScalarLike, m: int, n: int) -> Element:
    """ L_m . v_n = -(alpha m + n) v_{m+n} """
    return Element.of(basis("v", m + n), -(as_scalar(alpha) * m + n))


def tensor_action(alpha: ScalarLike, beta: ScalarLike, m: int, w: Element) -> Element:
    alpha, beta = as_scalar(alpha), as_scalar(beta)

    def on_basis(idx: BasisIndex) -> Element:
        if idx.sector != "v|v":
            raise ValueError(f"Tensor action is defined on v⊗v only, got {idx}.")
        i, j = idx.index
        return Element({BasisIndex("v|v", (m + i, j)): -(i + alpha * m)}) + \
            Element({BasisIndex("v|v", (i, m + j)): -(j + beta * m)})

    return w.extend(on_basis)


@dc.dataclass(frozen=True)
class AlgebraSpec:
    name: str
    sectors: Tuple[str, ...]
    weights: Tuple[int, ...]  # secondary grading, additive under the bracket

    def bracket(self, x: BasisIndex, y: BasisIndex) -> Element:
        raise NotImplementedError(f"Bracket of '{self.name}' not implemented.")

    @cached_property
    def _sector_weights(self) -> Dict[str, int]:
        return dict(zip(self.sectors, self.weights))

    @property
    def parameters(self) -> Dict[str, Fraction]:
        base = {f.name for f in dc.fields(AlgebraSpec)}
        return {f.name: getattr(self, f.name) for f in dc.fields(self) if f.name not in base}

    def header(self) -> Dict[str, str]:
        return {"algebra": self.name, **{k: format_scalar(v) for k, v in self.parameters.items()}}

    def basis_at(self, grade: int) -> List[BasisIndex]:
        return [basis(s, grade) for s in self.sectors]

    def window_basis(self, bound: int) -> List[BasisIndex]:
        return [x for m in range(-bound, bound + 1) for x in self.basis_at(m)]

    def weight(self, idx: BasisIndex) -> int:
        """ Weight of an algebra basis vector, or the summed weight of a tensor of algebra basis vectors. """
        return sum(self._sector_weights[f.sector] for f in idx.factors())

    def check(self, x: BasisIndex):
        if x.rank != 1 or x.sector not in self._sector_weights:
            raise ValueError(f"{x} is not a basis vector of '{self.name}'.")


@dc.dataclass(frozen=True)
class WittAlgebra(AlgebraSpec):
    name: str = "witt"
    sectors: Tuple[str, ...] = ("L",)
    weights: Tuple[int, ...] = (0,)

    def bracket(self, x: BasisIndex, y: BasisIndex) -> Element:
        self.check(x)
        self.check(y)
        return witt_bracket(x.index[0], y.index[0])


@dc.dataclass(frozen=True)
class OvsienkoRogerAlgebra(AlgebraSpec):
    """ W(alpha): the Witt algebra extended by the abelian ideal F_alpha. """
    name: str = "ovsienko-roger"
    sectors: Tuple[str, ...] = ("L", "v")
    weights: Tuple[int, ...] = (0, 1)
    alpha: Fraction = Fraction(0)

    def bracket(self, x: BasisIndex, y: BasisIndex) -> Element:
        self.check(x)
        self.check(y)
        (m,), (n,) = x.index, y.index
        if x.sector == "L" and y.sector == "L":
            return witt_bracket(m, n)
        if x.sector == "L" and y.sector == "v":
            return density_action(self.alpha, m, n)
        if x.sector == "v" and y.sector == "L":
            return -density_action(self.alpha, n, m)
        return Element.zero()


@dc.dataclass(frozen=True)
class SchroedingerVirasoroAlgebra(AlgebraSpec):
    """ Twisted Schroedinger-Virasoro algebra on L, Y, M. Y transforms like F_{-1/2}, M like F_0. """
    name: str = "schroedinger-virasoro"
    sectors: Tuple[str, ...] = ("L", "Y", "M")
    weights: Tuple[int, ...] = (0, 1, 2)

    def bracket(self, x: BasisIndex, y: BasisIndex) -> Element:
        self.check(x)
        self.check(y)
        (m,), (n,) = x.index, y.index
        pair = (x.sector, y.sector)
        if pair == ("L", "L"):
            return witt_bracket(m, n)
        if pair == ("L", "Y"):
            return Element.of(basis("Y", m + n), Fraction(m, 2) - n)
        if pair == ("Y", "L"):
            return Element.of(basis("Y", m + n), m - Fraction(n, 2))
        if pair == ("L", "M"):
            return Element.of(basis("M", m + n), -n)
        if pair == ("M", "L"):
            return Element.of(basis("M", m + n), m)
        if pair == ("Y", "Y"):
            return Element.of(basis("M", m + n), m - n)
        return Element.zero()
