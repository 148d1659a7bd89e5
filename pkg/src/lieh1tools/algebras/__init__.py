from lieh1tools.algebras.algebras import (
    AlgebraSpec,
    OvsienkoRogerAlgebra,
    SchroedingerVirasoroAlgebra,
    WittAlgebra,
    density_action,
    tensor_action,
    witt_bracket,
)
from lieh1tools.algebras.elements import BasisIndex, Element, basis, tensor_index
from lieh1tools.algebras.modules import ModuleSpec
from lieh1tools.algebras.preconfigs import make_algebra, make_module, tensor_density
