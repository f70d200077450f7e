"""Cayley table files and report serialization.

Cayley table file: first non-comment line is the order m, followed by m rows
of m space-separated 0-based ids (row-major, element 0 the identity). Lines
starting with ``#`` are comments.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json

import numpy as np

from .bounds import BoundReport
from .errors import GroupAxiomError
from .groups import DenseGroup, FiniteGroup

VERDICT_COLUMNS = ("bound_sym", "bound_diam", "bound_pgroup", "bound_q8", "bound_abelian", "babai")


def parse_cayley_table(text: str, name: str = "G") -> DenseGroup:
    lines = [
        (no, ln.strip())
        for no, ln in enumerate(text.splitlines(), start=1)
        if ln.strip() and not ln.lstrip().startswith("#")
    ]
    if not lines:
        raise GroupAxiomError("empty Cayley table file")
    no, head = lines[0]
    try:
        m = int(head)
    except ValueError:
        raise GroupAxiomError(f"line {no}: expected the group order, got {head!r}") from None
    if m < 1:
        raise GroupAxiomError(f"line {no}: order must be positive")
    rows = lines[1:]
    if len(rows) != m:
        raise GroupAxiomError(f"expected {m} table rows, found {len(rows)}")
    table = np.empty((m, m), dtype=np.int64)
    for r, (no, ln) in enumerate(rows):
        parts = ln.split()
        if len(parts) != m:
            raise GroupAxiomError(f"line {no}: row {r} has {len(parts)} entries, expected {m}", r, None)
        try:
            table[r] = [int(p) for p in parts]
        except ValueError:
            raise GroupAxiomError(f"line {no}: row {r} contains a non-integer entry", r, None) from None
    return DenseGroup(table, name=name)


def emit_cayley_table(G: FiniteGroup) -> str:
    if isinstance(G, DenseGroup):
        table = G.table
    else:
        ids = np.arange(G.order)
        table = G.mul_many(ids[:, None], ids[None, :])
    out = [str(G.order)]
    out.extend(" ".join(map(str, row)) for row in table.tolist())
    return "\n".join(out) + "\n"


def report_dict(report: BoundReport) -> dict:
    d = dataclasses.asdict(report)
    schema = d.pop("schema")
    return {"schema": schema, **d}


def emit_report(report: BoundReport | list[BoundReport], fmt: str = "json") -> str:
    reports = report if isinstance(report, list) else [report]
    if fmt == "json":
        body = [report_dict(r) for r in reports]
        return json.dumps(body[0] if len(body) == 1 else body, indent=2) + "\n"
    if fmt == "csv":
        return _emit_csv(reports)
    raise ValueError(f"unknown report format {fmt!r}")


def csv_header() -> list[str]:
    names = [f.name for f in dataclasses.fields(BoundReport) if f.name not in ("verdicts", "notes")]
    names.remove("schema")
    return ["schema"] + names + [f"verdict_{c}" for c in VERDICT_COLUMNS] + ["notes"]


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, list):
        return ";".join(map(str, v))
    return str(v)


def _emit_csv(reports: list[BoundReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = csv_header()
    w.writerow(header)
    for r in reports:
        d = dataclasses.asdict(r)
        row = []
        for col in header:
            if col.startswith("verdict_"):
                row.append(r.verdicts.get(col[len("verdict_"):], ""))
            elif col == "notes":
                row.append(" | ".join(r.notes))
            else:
                row.append(_cell(d[col]))
        w.writerow(row)
    return buf.getvalue()
