"""Table emission for the command-line tools.

CSV files open with '#'-prefixed metadata lines (one `# key = value` per
line) followed by a plain header row and comma-separated data rows; the
same table can be emitted as a JSON document instead.  Floats are
printed with 12 significant digits in both formats, so identical inputs
produce identical bytes.
"""

import json
import sys
from contextlib import contextmanager


def fmt_float(x: float) -> str:
    return f"{x:.12g}"


def fmt_cell(x) -> str:
    if isinstance(x, float):
        return fmt_float(x)
    return str(x)


def _json_value(x):
    if isinstance(x, float):
        return float(fmt_float(x))
    if isinstance(x, (list, tuple)):
        return [_json_value(v) for v in x]
    return x


def write_csv(stream, meta: dict, columns, rows):
    for k, v in meta.items():
        stream.write(f"# {k} = {fmt_cell(v)}\n")
    stream.write(",".join(columns) + "\n")
    for row in rows:
        stream.write(",".join(fmt_cell(c) for c in row) + "\n")


def write_json(stream, meta: dict, columns, rows):
    doc = {
        "meta": {k: _json_value(v) for k, v in meta.items()},
        "columns": list(columns),
        "rows": [[_json_value(c) for c in row] for row in rows],
    }
    json.dump(doc, stream)
    stream.write("\n")


def write_table(out, fmt: str, meta: dict, columns, rows):
    """Emit one table to a path (or stdout when out is None)."""
    writer = write_json if fmt == "json" else write_csv
    with _open_out(out) as stream:
        writer(stream, meta, columns, rows)


@contextmanager
def _open_out(out):
    if out is None:
        yield sys.stdout
    else:
        with open(out, "w", newline="") as fh:
            yield fh
