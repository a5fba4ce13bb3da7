"""CSV and JSON output formats.

CSV: ``#``-prefixed metadata lines, then a header row, then one row per
replicate. Floats are written with 17 significant digits so 64-bit values
round-trip exactly; summaries recomputed from a CSV match the emitted
JSON. JSON summaries carry ``schema_version`` 1.
"""

from __future__ import annotations

import dataclasses
import json
from importlib.metadata import version as _pkg_version
from pathlib import Path

import numpy as np

from .experiments import RecordSet

SCHEMA_VERSION = 1

try:
    PACKAGE_VERSION = _pkg_version("liplab")
except Exception:  # not installed (e.g. run from a source tree)
    PACKAGE_VERSION = "0.0.0"


def _format_value(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def records_to_csv(records: RecordSet) -> str:
    lines = [f"# liplab {PACKAGE_VERSION} schema {SCHEMA_VERSION}"]
    meta = records.meta
    if "experiment" in meta:
        lines.append(f"# experiment: {meta['experiment']}")
    if "seed" in meta:
        lines.append(f"# seed: {meta['seed']}")
    if "params" in meta:
        lines.append("# config: " + json.dumps(meta["params"], sort_keys=True))
    lines.append(",".join(records.columns))
    cols = [records.arrays[c] for c in records.columns]
    for i in range(records.num_rows):
        lines.append(",".join(_format_value(col[i]) for col in cols))
    return "\n".join(lines) + "\n"


def write_records_csv(path, records: RecordSet) -> None:
    Path(path).write_text(records_to_csv(records), encoding="utf-8")


def read_records_csv(path) -> RecordSet:
    meta: dict = {}
    header: list[str] | None = None
    rows: list[list[str]] = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("experiment:"):
                meta["experiment"] = body.split(":", 1)[1].strip()
            elif body.startswith("seed:"):
                meta["seed"] = int(body.split(":", 1)[1].strip())
            elif body.startswith("config:"):
                meta["params"] = json.loads(body.split(":", 1)[1].strip())
            continue
        if header is None:
            header = line.split(",")
            continue
        rows.append(line.split(","))
    if header is None:
        raise ValueError(f"no header row in {path}")
    arrays = {}
    for j, name in enumerate(header):
        col = [r[j] for r in rows]
        if all("." not in v and "e" not in v and "n" not in v for v in col):
            arrays[name] = np.array([int(v) for v in col], dtype=np.int64)
        else:
            arrays[name] = np.array([float(v) for v in col], dtype=np.float64)
    return RecordSet(header, arrays, meta)


def _jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {k: _jsonable(v) for k, v in dataclasses.asdict(obj).items()}
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    return obj


def summary_json(experiment: str, config: dict, reports: dict) -> str:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "version": PACKAGE_VERSION,
        "experiment": experiment,
        "config": _jsonable(config),
        "reports": _jsonable(reports),
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def write_summary_json(path, experiment: str, config: dict, reports: dict) -> None:
    Path(path).write_text(summary_json(experiment, config, reports),
                          encoding="utf-8")
