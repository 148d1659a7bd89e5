import dataclasses as dc
import json
import os
from datetime import datetime
from fractions import Fraction
from typing import Optional

from lieh1tools.linalg.exact import format_scalar

THIS_DIR = os.path.dirname(os.path.realpath(__file__))
LIEH1_DATA_ROOT = os.path.join(THIS_DIR, "data")
LIEH1_CONFIG_ROOT = os.path.join(THIS_DIR, "configs")
DEFAULT_GRID_FILE = os.path.join(LIEH1_DATA_ROOT, "default_grid.tsv")
CLI_CONFIG_FILE = os.path.join(LIEH1_CONFIG_ROOT, "cli.yml")

MAX_WORKERS_ENV = "LIEH1_MAX_WORKERS"


class EnhancedJSONEncoder(json.JSONEncoder):
    def default(self, o):
        if hasattr(o, "to_json"):
            return o.to_json()
        if dc.is_dataclass(o):
            return dc.asdict(o)
        if isinstance(o, Fraction):
            return format_scalar(o)
        return super().default(o)


def check_save_dir_exists(out_file, fix=True):
    if not os.path.exists(os.path.dirname(out_file)):
        if fix:
            os.makedirs(os.path.dirname(out_file), exist_ok=True)
        else:
            raise OSError("Directory of " + out_file + " does not exist.")


def make_result_folder(resultdir: str, experiment: str, setting: str, file_name: str):
    folder = os.path.join(resultdir, experiment, setting, datetime.now().strftime("%Y%m%d-%H%M-%S-%f"))
    results_path = os.path.join(folder, file_name)
    check_save_dir_exists(results_path)
    return results_path


def worker_count(requested: Optional[int]) -> int:
    """ Requested pool size, capped by LIEH1_MAX_WORKERS when set. """
    workers = max(1, requested or 1)
    cap = os.environ.get(MAX_WORKERS_ENV)
    if cap:
        try:
            workers = min(workers, max(1, int(cap)))
        except ValueError:
            raise ValueError(f"{MAX_WORKERS_ENV} must be an integer, got '{cap}'.")
    return workers
