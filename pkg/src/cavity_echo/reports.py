"""Serialisation of efficiency, scan and matching reports.

Two formats, both deterministic: ``csv`` and ``json``.  Every float is
written with 12 significant digits; non-finite values are written as
``nan``/``inf`` in CSV and as ``null`` in JSON.

CSV layouts (column order is fixed):

* ScanResult: ``M,ratio,q_me,q_min_mode``, one row per grid point in grid
  order.  Rows whose evaluation failed carry ``nan`` and are listed after
  the table as ``# error M=<m> ratio=<r>: <message>`` lines.
* EfficiencyReport: ``mode,q_st,q_me_k,decoherence_factor,mean_photons``
  per mode, then ``total,<q_st total>,<q_me total>,,<photons>``; warnings
  follow as ``# warning: ...`` lines.
* MatchReport: ``key,value`` rows in field order.

The JSON document is an object with a ``"type"`` key (``scan``,
``efficiency`` or ``match``) followed by the report fields in declaration
order; scan rows are ``[M, ratio, q_me, q_min_mode, error]`` arrays.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import fields

from .optimize import MatchReport, ScanResult, ScanRow
from .spectral import EfficiencyReport

__all__ = ["emit_report", "parse_report", "write_report", "format_number", "SCAN_HEADER"]

SCAN_HEADER = ("M", "ratio", "q_me", "q_min_mode")
EFFICIENCY_HEADER = ("mode", "q_st", "q_me_k", "decoherence_factor", "mean_photons")
_KINDS = {ScanResult: "scan", EfficiencyReport: "efficiency", MatchReport: "match"}


def format_number(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.12g}"


def _json_number(x):
    if x is None or isinstance(x, (bool, int, str)):
        return x
    x = float(x)
    return float(f"{x:.12g}") if math.isfinite(x) else None


def _kind(report):
    for cls, name in _KINDS.items():
        if isinstance(report, cls):
            return name
    raise TypeError(f"cannot serialise {type(report).__name__}")


def _csv_text(rows, comments=()):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    for c in comments:
        buf.write(f"# {c}\n")
    return buf.getvalue()


def _emit_csv(report):
    kind = _kind(report)
    if kind == "scan":
        rows = [SCAN_HEADER]
        rows += [(str(r.mode_count), format_number(r.ratio), format_number(r.q_me),
                  format_number(r.q_min_mode)) for r in report.rows]
        comments = [f"error M={r.mode_count} ratio={format_number(r.ratio)}: {r.error}"
                    for r in report.rows if r.error]
        return _csv_text(rows, comments)
    if kind == "efficiency":
        rows = [EFFICIENCY_HEADER]
        n = report.mean_photons or (1.0,) * len(report.per_mode_storage)
        for k, vals in enumerate(zip(report.per_mode_storage, report.per_mode_retrieval,
                                     report.per_mode_decoherence_factor, n)):
            rows.append((str(k), *map(format_number, vals)))
        rows.append(("total", format_number(report.total_storage),
                     format_number(report.total_memory), "", format_number(sum(n))))
        return _csv_text(rows, [f"warning: {w}" for w in report.warnings])
    rows = [("key", "value")]
    for f in fields(report):
        value = getattr(report, f.name)
        if f.name == "warnings":
            value = " | ".join(value)
        elif not isinstance(value, str):
            value = format_number(value)
        rows.append((f.name, value))
    return _csv_text(rows)


def _emit_json(report):
    kind = _kind(report)
    doc = {"type": kind}
    for f in fields(report):
        value = getattr(report, f.name)
        if f.name == "rows":
            value = [[r.mode_count, _json_number(r.ratio), _json_number(r.q_me),
                      _json_number(r.q_min_mode), r.error] for r in value]
        elif isinstance(value, tuple):
            value = [_json_number(v) for v in value]
        else:
            value = _json_number(value)
        doc[f.name] = value
    return json.dumps(doc, indent=2) + "\n"


def emit_report(report, fmt: str = "json") -> str:
    """Serialise ``report`` as ``"csv"`` or ``"json"`` text."""
    if fmt == "csv":
        return _emit_csv(report)
    if fmt == "json":
        return _emit_json(report)
    raise ValueError(f"unknown report format {fmt!r}")


def write_report(report, path, fmt: str = "json") -> None:
    text = emit_report(report, fmt)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _float(text):
    return math.nan if text in ("", "nan") else float(text)


def _from_json(value):
    return math.nan if value is None else value


def parse_report(text: str, fmt: str = "json", kind: str | None = None):
    """Inverse of :func:`emit_report`.

    ``kind`` (``scan``, ``efficiency``, ``match``) is needed for CSV input
    only; JSON documents name their type.
    """
    if fmt == "json":
        doc = json.loads(text)
        kind = doc.pop("type")
        if kind == "scan":
            rows = tuple(ScanRow(int(m), float(r), _from_json(q), _from_json(qm), e)
                         for m, r, q, qm, e in doc["rows"])
            return ScanResult(rows, tuple(doc["m_grid"]), tuple(doc["ratio_grid"]),
                              doc["gamma2_ratio"])
        cls = EfficiencyReport if kind == "efficiency" else MatchReport
        values = {}
        for f in fields(cls):
            v = doc[f.name]
            values[f.name] = tuple(_from_json(x) for x in v) if isinstance(v, list) else _from_json(v)
        return cls(**values)
    if fmt != "csv":
        raise ValueError(f"unknown report format {fmt!r}")

    lines = text.splitlines()
    comments = [ln[2:] for ln in lines if ln.startswith("# ")]
    table = list(csv.reader(ln for ln in lines if not ln.startswith("#")))
    if kind == "scan":
        if tuple(table[0]) != SCAN_HEADER:
            raise ValueError("not a scan CSV")
        errors = {}
        for c in comments:
            head, msg = c.split(": ", 1)
            _, m, r = head.split()
            errors[(int(m[2:]), float(r[6:]))] = msg
        rows = tuple(
            ScanRow(int(m), float(r), _float(q), _float(qm), errors.get((int(m), float(r))))
            for m, r, q, qm in table[1:]
        )
        m_grid = tuple(dict.fromkeys(r.mode_count for r in rows))
        ratio_grid = tuple(dict.fromkeys(r.ratio for r in rows))
        # the gamma2 proportion is not part of the CSV layout
        return ScanResult(rows, m_grid, ratio_grid, math.nan)
    if kind == "efficiency":
        body = table[1:-1]
        total = table[-1]
        cols = list(zip(*body)) if body else [()] * 5
        return EfficiencyReport(
            per_mode_storage=tuple(map(float, cols[1])),
            per_mode_retrieval=tuple(map(float, cols[2])),
            per_mode_decoherence_factor=tuple(map(float, cols[3])),
            total_storage=float(total[1]),
            total_memory=float(total[2]),
            mean_photons=tuple(map(float, cols[4])),
            warnings=tuple(c[len("warning: "):] for c in comments if c.startswith("warning: ")),
        )
    if kind == "match":
        raw = dict(table[1:])
        values = {}
        for f in fields(MatchReport):
            v = raw[f.name]
            if f.name == "objective":
                values[f.name] = v
            elif f.name == "warnings":
                values[f.name] = tuple(v.split(" | ")) if v else ()
            elif f.name == "unimodal":
                values[f.name] = v == "true"
            elif f.name == "evaluations":
                values[f.name] = int(v)
            elif f.name == "optical_depth":
                values[f.name] = None if v == "" else float(v)
            else:
                values[f.name] = _float(v)
        return MatchReport(**values)
    raise ValueError("kind must be one of scan, efficiency, match for CSV input")
