import argparse
import dataclasses as dc
import json
import logging
import os
import sys
from fractions import Fraction
from multiprocessing import Pool
from typing import Dict, Iterable, List, Optional, Sequence, TextIO, Tuple

import pandas as pd
from tqdm import tqdm

import lieh1tools.cohomology.bialgebra as lbialgebra
import lieh1tools.cohomology.catalog as lcatalog
import lieh1tools.cohomology.golden as lgolden
from lieh1tools.algebras.preconfigs import ALPHA_GRID, make_algebra, make_module
from lieh1tools.argsfromconfig import make_parser
from lieh1tools.cohomology.engine import H1Computation, Window, h1_dimension
from lieh1tools.linalg.exact import format_scalar, parse_scalar
from lieh1tools.utils import CLI_CONFIG_FILE, DEFAULT_GRID_FILE, EnhancedJSONEncoder, make_result_folder, \
    worker_count

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NOT_STABILIZED = 3
EXIT_MISMATCH = 4

FORMATS = ("json", "tsv")


@dc.dataclass(frozen=True)
class RunConfig:
    subcommand: str
    algebra: str = "witt"
    module: str = "tensor-density"
    alpha: Optional[str] = None
    beta: Optional[str] = None
    degree: int = 0
    gen_bound: int = 4
    support: int = 10
    inner_support: Optional[int] = None
    stabilization_rounds: int = 1
    format: str = "json"
    grid: str = "default"
    name: Optional[str] = None
    bracket_bound: int = 10
    max_window: int = 12
    n: int = 1
    sector: str = "L"
    workers: Optional[int] = None
    resultdir: Optional[str] = None
    verbose: bool = False
    with_applications: bool = False

    @classmethod
    def from_namespace(cls, args: argparse.Namespace) -> "RunConfig":
        known = {f.name for f in dc.fields(cls)}
        return cls(**{k: v for k, v in vars(args).items() if k in known})

    def validate(self) -> "RunConfig":
        if self.format not in FORMATS:
            raise ValueError(f"Output format must be one of {FORMATS}, got '{self.format}'.")
        if self.stabilization_rounds < 0:
            raise ValueError(f"Stabilization rounds must be non-negative, got {self.stabilization_rounds}.")
        if self.bracket_bound < 1 or self.max_window < 0:
            raise ValueError("Bracket bound must be positive and the coboundary window non-negative.")
        self.window()
        self.parameters()
        return self

    def window(self) -> Window:
        return Window(self.gen_bound, self.support, self.inner_support)

    def parameters(self) -> Dict[str, Fraction]:
        return {k: parse_scalar(v) for k, v in (("alpha", self.alpha), ("beta", self.beta)) if v is not None}

    def inputs(self) -> dict:
        return dc.asdict(self)


class ReportWriter:
    """ Collects JSON lines or TSV records and writes them on close, so a run that fails halfway emits nothing. """

    def __init__(self, config: RunConfig, stream: TextIO):
        self.config = config
        self.stream = stream
        self.lines: List[str] = []
        self.records: List[dict] = []

    def emit(self, data: dict, record: Optional[dict] = None):
        if self.config.format == "tsv":
            self.records.append(record if record is not None else data)
            return
        self.lines.append(json.dumps(data, cls=EnhancedJSONEncoder))

    def close(self):
        if self.config.format == "tsv" and self.records:
            text = pd.DataFrame(self.records).to_csv(sep="\t", index=False)
            self.lines = text.splitlines()
            self.stream.write(text)
        elif self.lines:
            self.stream.write("\n".join(self.lines) + "\n")
        self.stream.flush()
        if self.config.resultdir is not None:
            file_name = "reports.tsv" if self.config.format == "tsv" else "reports.jsonl"
            results_path = make_result_folder(self.config.resultdir, "lieh1tools", self.config.subcommand,
                                              file_name)
            with open(results_path, "w") as fp:
                fp.write("\n".join(self.lines) + "\n")
            with open(os.path.join(os.path.dirname(results_path), "run_inputs.json"), "w") as fp:
                json.dump(self.config.inputs(), fp, indent=2)
            log.info("Reports stored in %s", results_path)


def read_grid(grid: str) -> List[Tuple[Fraction, Fraction]]:
    """ Points of a grid file with 'alpha' and 'beta' columns, in file order. """
    grid = DEFAULT_GRID_FILE if grid == "default" else grid
    if not os.path.exists(grid):
        raise ValueError(f"Grid file '{grid}' does not exist.")
    df = pd.read_csv(grid, sep="\t", dtype=str)
    missing = {"alpha", "beta"} - set(df.columns)
    if missing:
        raise ValueError(f"Grid file '{grid}' lacks columns {sorted(missing)}.")
    return [(parse_scalar(a), parse_scalar(b)) for a, b in zip(df["alpha"], df["beta"])]


def _sweep_point(task) -> Tuple[dict, dict]:
    alpha, beta, degree, window, rounds = task
    module = make_module("tensor-density", make_algebra("witt"), {"alpha": alpha, "beta": beta})
    report = h1_dimension(module, degree, window.gen_bound, window.support, window.inner_support, rounds)
    return report.to_json(), report.to_record()


def sweep_reports(points: Sequence[Tuple[Fraction, Fraction]], degree: int, window: Window, rounds: int,
                  workers: Optional[int] = None) -> Iterable[Tuple[dict, dict]]:
    """ Reports in input order; points are farmed out to a process pool when more than one worker is allowed. """
    tasks = [(a, b, degree, window, rounds) for a, b in points]
    workers = worker_count(workers)
    if workers == 1:
        yield from tqdm(map(_sweep_point, tasks), total=len(tasks), file=sys.stderr, disable=len(tasks) < 2)
        return
    with Pool(workers) as pool:
        yield from tqdm(pool.imap(_sweep_point, tasks), total=len(tasks), file=sys.stderr)


def _run_h1(config: RunConfig, writer: ReportWriter) -> int:
    params = config.parameters()
    module = make_module(config.module, make_algebra(config.algebra, params), params)
    window = config.window()
    report = h1_dimension(module, config.degree, window.gen_bound, window.support, window.inner_support,
                          config.stabilization_rounds)
    writer.emit(report.to_json(), report.to_record())
    return EXIT_OK if report.stabilized else EXIT_NOT_STABILIZED


def _run_sweep(config: RunConfig, writer: ReportWriter) -> int:
    if (config.algebra, config.module) != ("witt", "tensor-density"):
        raise ValueError("Sweeps run over F_alpha ⊗ F_beta of the Witt algebra only.")
    stabilized = True
    for data, record in sweep_reports(read_grid(config.grid), config.degree, config.window(),
                                      config.stabilization_rounds, config.workers):
        writer.emit(data, record)
        stabilized &= data["stabilized"]
    return EXIT_OK if stabilized else EXIT_NOT_STABILIZED


def _catalog_targets(config: RunConfig) -> List[str]:
    return [lcatalog.get_entry(config.name).name] if config.name else lcatalog.catalog_names()


def _run_verify_catalog(config: RunConfig, writer: ReportWriter) -> int:
    given = config.parameters()
    computations: Dict[object, H1Computation] = {}
    failed = False
    for name in _catalog_targets(config):
        entry = lcatalog.get_entry(name)
        params = given or entry.sample_parameters()
        cocycle = lcatalog.verify_cocycle(name, params, config.bracket_bound)
        certificate = None
        if entry.group == "witt":
            certificate = lcatalog.verify_noncoboundary(name, params, config.max_window).certificate()
        module = entry.module_spec(params)
        if module not in computations:
            computations[module] = H1Computation(module, 0, config.window())
        peers = lcatalog.entries_for(params, entry.algebra, entry.module)
        derivations = [lcatalog.get_entry(p).derivation(params) for p in peers]
        independent = computations[module].quotient_rank(derivations) == len(derivations)
        failed |= not cocycle.passed or certificate not in (None, f"pass@{config.max_window}") or not independent
        data = {"name": name, "cocycle": "pass" if cocycle.passed else "fail", "noncoboundary": certificate,
                "independent_in_h1": independent}
        if cocycle.witness is not None:
            data["witness"] = [str(x) for x in cocycle.witness]
            data["defect"] = cocycle.defect.to_json()
        writer.emit(data, {k: v for k, v in data.items() if k not in ("witness", "defect")})
    return EXIT_MISMATCH if failed else EXIT_OK


def _run_noncoboundary(config: RunConfig, writer: ReportWriter) -> int:
    if config.name is None:
        raise KeyError("noncoboundary requires --name.")
    entry = lcatalog.get_entry(config.name)
    check = lcatalog.verify_noncoboundary(entry.name, config.parameters() or entry.sample_parameters(),
                                          config.max_window)
    data = {"name": check.name, "noncoboundary": check.certificate(),
            "solution": None if check.solution is None else check.solution.to_json()}
    writer.emit(data, {"name": check.name, "noncoboundary": check.certificate()})
    return EXIT_OK


def _run_evaluate(config: RunConfig, writer: ReportWriter) -> int:
    if config.name is None:
        raise KeyError("evaluate requires --name.")
    entry = lcatalog.get_entry(config.name)
    value = lcatalog.evaluate(entry.name, config.parameters() or entry.sample_parameters(), config.n,
                              config.sector)
    writer.emit({"name": entry.name, "sector": config.sector, "n": config.n, "value": value.to_json()},
                {"name": entry.name, "sector": config.sector, "n": config.n, "value": repr(value)})
    return EXIT_OK


def _application_points(config: RunConfig) -> List[Tuple[str, Optional[Fraction]]]:
    names = [config.name] if config.name else list(lbialgebra.APPLICATIONS)
    alpha = config.parameters().get("alpha")
    points = []
    for name in names:
        if name not in lbialgebra.APPLICATIONS:
            raise NotImplementedError(f"Application '{name}' not implemented.")
        if name.startswith("ovsienko-roger"):
            points.extend((name, a) for a in ([alpha] if alpha is not None else ALPHA_GRID))
        else:
            points.append((name, None))
    return points


def _application_reports(config: RunConfig) -> Iterable[lbialgebra.ApplicationReport]:
    window = config.window()
    for name, alpha in tqdm(_application_points(config), file=sys.stderr, disable=not config.verbose):
        yield lbialgebra.h1_applications(name, alpha, window, stabilization_rounds=config.stabilization_rounds)


def _run_applications(config: RunConfig, writer: ReportWriter) -> int:
    stabilized = True
    for app in _application_reports(config):
        for data, report in zip(app.to_json_lines(), app.reports):
            writer.emit(data, dict(report.to_record(), application=app.name))
            stabilized &= data["stabilized"]
    return EXIT_OK if stabilized else EXIT_NOT_STABILIZED


def _run_golden(config: RunConfig, writer: ReportWriter) -> int:
    matched, stabilized = True, True
    points = read_grid(config.grid)
    for (alpha, beta), (data, _) in zip(points, sweep_reports(points, 0, config.window(),
                                                              config.stabilization_rounds, config.workers)):
        expected = lgolden.expected_h1(alpha, beta)
        match = expected == data["dim_h1"]
        matched &= match
        stabilized &= data["stabilized"]
        writer.emit({"alpha": format_scalar(alpha), "beta": format_scalar(beta), "expected": expected,
                     "dim_h1": data["dim_h1"], "stabilized": data["stabilized"], "match": match})
    if config.with_applications:
        apps = dc.replace(config, name=None, alpha=None, support=min(config.support, 8))
        for app in _application_reports(apps):
            alpha = app.main.alpha
            expected = lgolden.expected_application(app.name, alpha)
            match = expected == app.main.dim_h1 and app.vanishing()
            matched &= match
            stabilized &= all(r.stabilized for r in app.reports)
            writer.emit({"application": app.name, "alpha": alpha, "expected": expected,
                         "dim_h1": app.main.dim_h1, "stabilized": app.main.stabilized, "match": match})
        for alpha in ALPHA_GRID[:3]:
            _, dim = lbialgebra.hom_invariants(alpha)
            expected = lgolden.expected_hom_invariants(alpha)
            matched &= expected == dim
            writer.emit({"application": "hom-invariants", "alpha": format_scalar(alpha), "expected": expected,
                         "dim_h1": dim, "stabilized": True, "match": expected == dim})
    if not matched:
        log.warning("Golden comparison failed.")
        return EXIT_MISMATCH
    return EXIT_OK if stabilized else EXIT_NOT_STABILIZED


HANDLERS = {
    "h1": _run_h1,
    "sweep": _run_sweep,
    "verify-catalog": _run_verify_catalog,
    "noncoboundary": _run_noncoboundary,
    "evaluate": _run_evaluate,
    "applications": _run_applications,
    "golden": _run_golden,
}


def run(config: RunConfig, stream: Optional[TextIO] = None) -> int:
    """ Runs one subcommand and returns its exit code; invalid input is reported on stderr as a single line. """
    stream = stream or sys.stdout
    try:
        if config.subcommand not in HANDLERS:
            raise NotImplementedError(f"Subcommand '{config.subcommand}' not implemented.")
        config.validate()
        writer = ReportWriter(config, stream)
        code = HANDLERS[config.subcommand](config, writer)
        writer.close()
    except (ValueError, KeyError, NotImplementedError) as e:
        message = e.args[0] if isinstance(e, KeyError) and e.args else str(e)
        sys.stderr.write(f"error: {message}\n")
        return EXIT_INVALID
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = make_parser(CLI_CONFIG_FILE)
    args = parser.parse_args(argv)
    logging.basicConfig(format="%(asctime)s - %(levelname)s - %(message)s",
                        level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    return run(RunConfig.from_namespace(args))


if __name__ == "__main__":
    sys.exit(main())
