"""Output serialization: CSV/JSON tables, atomic file writes, schema access."""

from __future__ import annotations

import json
import os
import sys
import tempfile
from importlib import resources

SPECTRUM_HEADER = ["E", "lambda", "branch", "degeneracy"]
SCATTER_HEADER = ["k", "reT", "imT", "reR", "imR", "T2", "R2", "defect"]
SWEEP_HEADER = ["theta_plus", "theta_minus", "n", "E"]


def fmt(x) -> str:
    """Round-trip-safe numeric formatting (17 significant digits)."""
    if x is None:
        return ""
    if isinstance(x, int):
        return str(x)
    return f"{x:.17g}"


def render_csv(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def render_json(schema: str, config: dict, rows: list[dict]) -> str:
    doc = {"schema": schema, "config": config, "rows": rows}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_output(text: str, path: str | None) -> None:
    """Write to stdout, or atomically to `path` (temp file + rename)."""
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".singular-sae-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_schema() -> dict:
    """The shipped JSON schema for all JSON outputs."""
    text = resources.files("singular_sae").joinpath("data/output.schema.json").read_text()
    return json.loads(text)


def spectrum_rows(result) -> list[list]:
    return [[lv.E, lv.lam, lv.branch, lv.degeneracy] for lv in result.levels]


def spectrum_json_rows(result) -> list[dict]:
    return [
        {"E": lv.E, "lambda": lv.lam, "branch": lv.branch,
         "degeneracy": lv.degeneracy}
        for lv in result.levels
    ]


def scatter_rows(results) -> list[list]:
    out = []
    for r in results:
        out.append([r.k, r.T.real, r.T.imag, r.R.real, r.R.imag,
                    abs(r.T) ** 2, abs(r.R) ** 2, r.unitarity_defect])
    return out


def scatter_json_rows(results) -> list[dict]:
    return [
        {"k": r.k, "reT": r.T.real, "imT": r.T.imag, "reR": r.R.real,
         "imR": r.R.imag, "T2": abs(r.T) ** 2, "R2": abs(r.R) ** 2,
         "defect": r.unitarity_defect}
        for r in results
    ]
