import logging

import pandas as pd
from tqdm import tqdm

import common
from lieh1tools.algebras.preconfigs import EXTRA_GRID, default_grid, tensor_density
from lieh1tools.cohomology.engine import H1Computation, Window
from lieh1tools.cohomology.golden import expected_h1
from lieh1tools.linalg.exact import format_scalar

log = logging.getLogger(__name__)


def run_eval(gen_bound: int, supports, degrees, with_extra: bool):
    points = default_grid() + (list(EXTRA_GRID) if with_extra else [])
    results = []
    for alpha, beta in tqdm(points):
        module = tensor_density(alpha, beta)
        for degree in degrees:
            for support in supports:
                computation = H1Computation(module, degree, Window(gen_bound, support))
                results.append({
                    "alpha": format_scalar(alpha),
                    "beta": format_scalar(beta),
                    "degree": degree,
                    "M": gen_bound,
                    "N": support,
                    "dim_cocycle": computation.dim_cocycle,
                    "dim_inner": computation.dim_inner,
                    "dim_h1": computation.dim_h1,
                    "expected": expected_h1(alpha, beta) if degree == 0 else 0,
                })
            log.info("(%s, %s) d=%d: %s", format_scalar(alpha), format_scalar(beta), degree,
                     [r["dim_h1"] for r in results[-len(supports):]])
    return results


def main():
    experiment_name = "window_stabilization"
    parser = common.get_common_parser()
    parser.add_argument("--supports", type=int, nargs="+", default=[6, 8, 10, 12],
                        help="Support bounds N to compare.")
    parser.add_argument("--degrees", type=int, nargs="+", default=[0], help="Degrees d of the derivations.")
    parser.add_argument("--with-extra", action="store_true", help="Include the extra generic grid points.")

    args = parser.parse_args()
    if args.debug:
        args.supports = args.supports[:2]
    results_path, args = common.setup_experiment(experiment_name, args, f"M{args.gen_bound}")

    results = run_eval(args.gen_bound, args.supports, args.degrees, args.with_extra)
    df = pd.DataFrame(results)
    unstable = df.groupby(["alpha", "beta", "degree"])["dim_h1"].nunique() > 1
    if unstable.any():
        log.warning("Dimension changes with N at %s", list(unstable[unstable].index))
    df.to_json(results_path, indent=2, orient="records")


if __name__ == "__main__":
    main()
