from fractions import Fraction
from typing import List, Mapping, Optional, Tuple

import lieh1tools.algebras.algebras as lalgebras
import lieh1tools.algebras.modules as lmodules
from lieh1tools.linalg.exact import ScalarLike, as_scalar

ALGEBRA_NAMES = ("witt", "ovsienko-roger", "schroedinger-virasoro")
MODULE_KINDS = ("density", "tensor-density", "adjoint", "adjoint-tensor", "adjoint-wedge")

# Sample points for F_alpha ⊗ F_beta: special points, the alpha+beta=1 line, generic points.
DEFAULT_GRID: Tuple[Tuple[Fraction, Fraction], ...] = tuple(
    (Fraction(a), Fraction(b)) for a, b in [
        (0, 0), (0, 1), (1, 0), (0, 2), (2, 0), (1, 1),
        (3, -2), (-4, 5), ("1/2", "1/2"), ("2/3", "1/3"),
        (-1, -1), (2, 2), (5, 7), ("1/3", "1/5"), (-2, 0),
    ]
)
# Further generic point kept out of the default grid file.
EXTRA_GRID: Tuple[Tuple[Fraction, Fraction], ...] = ((Fraction(0), Fraction(-1)),)

# Sample values of alpha for W(alpha): the exceptional values 0, 1, 1/2 and four generic ones.
ALPHA_GRID: Tuple[Fraction, ...] = tuple(Fraction(a) for a in [0, 1, "1/2", -1, 2, "1/3", -3])


def _param(parameters: Mapping[str, ScalarLike], name: str, owner: str) -> Fraction:
    if name not in parameters or parameters[name] is None:
        raise KeyError(f"'{owner}' requires parameter '{name}'.")
    return as_scalar(parameters[name])


def make_algebra(name: str, parameters: Optional[Mapping[str, ScalarLike]] = None) -> lalgebras.AlgebraSpec:
    parameters = parameters or {}
    if name == "witt":
        return lalgebras.WittAlgebra()
    elif name == "ovsienko-roger":
        return lalgebras.OvsienkoRogerAlgebra(alpha=_param(parameters, "alpha", name))
    elif name == "schroedinger-virasoro":
        return lalgebras.SchroedingerVirasoroAlgebra()
    raise NotImplementedError(f"Algebra '{name}' not implemented.")


def make_module(kind: str, algebra: lalgebras.AlgebraSpec,
                parameters: Optional[Mapping[str, ScalarLike]] = None) -> lmodules.ModuleSpec:
    parameters = parameters or {}
    if kind in ("density", "tensor-density") and not isinstance(algebra, lalgebras.WittAlgebra):
        raise ValueError(f"Module kind '{kind}' is only defined over the Witt algebra, not '{algebra.name}'.")
    if kind == "density":
        return lmodules.DensityModule(algebra=algebra, alpha=_param(parameters, "alpha", kind))
    elif kind == "tensor-density":
        return lmodules.TensorDensityModule(algebra=algebra,
                                            alpha=_param(parameters, "alpha", kind),
                                            beta=_param(parameters, "beta", kind))
    elif kind == "adjoint":
        return lmodules.AdjointModule(algebra=algebra)
    elif kind == "adjoint-tensor":
        return lmodules.AdjointTensorModule(algebra=algebra)
    elif kind == "adjoint-wedge":
        return lmodules.AdjointWedgeModule(algebra=algebra)
    raise NotImplementedError(f"Module kind '{kind}' not implemented.")


def tensor_density(alpha: ScalarLike, beta: ScalarLike) -> lmodules.TensorDensityModule:
    return make_module("tensor-density", make_algebra("witt"), {"alpha": alpha, "beta": beta})


def default_grid() -> List[Tuple[Fraction, Fraction]]:
    return list(DEFAULT_GRID)
