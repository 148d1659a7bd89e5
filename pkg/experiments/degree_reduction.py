import logging

import numpy as np
import pandas as pd

import common
from lieh1tools.algebras.elements import Element
from lieh1tools.algebras.preconfigs import default_grid, tensor_density
from lieh1tools.cohomology.derivations import coboundary
from lieh1tools.cohomology.engine import H1Computation, Window
from lieh1tools.cohomology.reductions import reduce_nonzero_degree
from lieh1tools.linalg.exact import format_scalar

log = logging.getLogger(__name__)


def random_window_cocycle(module, degree: int, window: Window, rng: np.random.Generator):
    """ A pseudorandom integer combination of the computed cocycle basis at this degree. """
    computation = H1Computation(module, degree, window, with_inner=False)
    basis = computation.cocycle_basis()
    coeffs = rng.integers(-3, 4, size=len(basis))
    cocycle = None
    for c, d in zip(coeffs, basis):
        term = d.scaled(int(c))
        cocycle = term if cocycle is None else cocycle + term
    return cocycle


def run_eval(gen_bound: int, support: int, degrees, num_samples: int, seed: int):
    seed_spawners = np.random.SeedSequence(seed)
    window = Window(gen_bound, support)
    points = default_grid()
    results = []
    for rep, child in enumerate(seed_spawners.spawn(num_samples)):
        rng = np.random.default_rng(child)
        alpha, beta = points[rng.integers(len(points))]
        degree = int(rng.choice(degrees))
        module = tensor_density(alpha, beta)
        cocycle = random_window_cocycle(module, degree, window, rng)
        v = reduce_nonzero_degree(cocycle) if cocycle is not None else Element.zero()
        inner = coboundary(module, v, gen_bound, degree=degree)
        reconstructed = cocycle is None or all(inner.value(x) == cocycle.value(x) for x in cocycle.generators())
        results.append({"rep": rep, "alpha": format_scalar(alpha), "beta": format_scalar(beta), "degree": degree,
                        "terms": len(v), "reconstructed": reconstructed})
        if not reconstructed:
            log.warning("Reduction failed for (%s, %s) at d=%d", alpha, beta, degree)
    return results


def main():
    experiment_name = "degree_reduction"
    parser = common.get_common_parser()
    parser.add_argument("--support", type=int, default=10, help="Value index components in [-N, N].")
    parser.add_argument("--degrees", type=int, nargs="+", default=[-4, -3, -2, -1, 1, 2, 3, 4],
                        help="Nonzero degrees to sample from.")
    parser.add_argument("--num-samples", type=int, default=50, help="Number of pseudorandom cocycles.")

    args = parser.parse_args()
    if args.debug:
        args.num_samples = 5
    if 0 in args.degrees:
        parser.error("Degree 0 cocycles do not reduce to coboundaries.")
    results_path, args = common.setup_experiment(experiment_name, args, f"M{args.gen_bound}_N{args.support}")

    results = run_eval(args.gen_bound, args.support, args.degrees, args.num_samples, args.seed)
    df = pd.DataFrame(results)
    log.info("%d of %d cocycles reconstructed", int(df["reconstructed"].sum()), len(df))
    df.to_json(results_path, indent=2, orient="records")


if __name__ == "__main__":
    main()
