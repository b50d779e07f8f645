"""Report rows shared by every command, with CSV and JSON serialization.

Floats are written with ``repr`` so both formats round-trip exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Iterable, List, Optional

HEADER = ("method", "metric", "eps", "sigma", "depsilon", "risk", "classifier", "degenerate")
SCHEMA = "otrisk.report/1"
METHODS = ("exact-empirical", "mixture-bound", "wp-bound", "loss-bound", "classifier-risk")


class InvariantViolation(RuntimeError):
    """A computed quantity broke a guaranteed property."""


@dataclass(frozen=True)
class RiskReport:
    """One result row.

    ``depsilon`` holds the transport cost, or the implied upper bound on it
    for bound methods; ``risk`` holds the risk or the risk lower bound.
    """

    method: str
    metric: str
    eps: float
    sigma: Optional[float] = None
    depsilon: Optional[float] = None
    risk: Optional[float] = None
    classifier: str = ""
    degenerate: bool = False
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (self.method in METHODS or self.method.startswith("analytic-")):
            raise ValueError(f"unknown report method {self.method!r}")

    def validate(self, tol: float = 1e-9) -> "RiskReport":
        """Raise :class:`InvariantViolation` if a risk leaves its range.

        Optimal risks and their bounds lie in ``[0, 1/2]``; the risk of an
        arbitrary given classifier only in ``[0, 1]``.
        """
        if self.method != "loss-bound" and self.risk is not None:
            top = 1.0 if self.method == "classifier-risk" else 0.5
            if not (-tol <= self.risk <= top + tol):
                raise InvariantViolation(f"{self.method} risk {self.risk!r} outside [0, {top:g}]")
        if self.depsilon is not None and not (-tol <= self.depsilon <= 1 + tol):
            raise InvariantViolation(f"{self.method} transport cost {self.depsilon!r} outside [0, 1]")
        return self

    def to_row(self) -> List[str]:
        return [self.method, self.metric, _fmt(self.eps), _fmt(self.sigma), _fmt(self.depsilon),
                _fmt(self.risk), self.classifier, "true" if self.degenerate else "false"]

    @classmethod
    def from_row(cls, row) -> "RiskReport":
        if len(row) != len(HEADER):
            raise ValueError(f"expected {len(HEADER)} fields, got {len(row)}")
        method, metric, eps, sigma, dep, risk, clf, deg = row
        if deg not in ("true", "false"):
            raise ValueError(f"bad degenerate flag {deg!r}")
        return cls(method, metric, float(eps), _parse(sigma), _parse(dep), _parse(risk), clf, deg == "true")

    def to_dict(self) -> dict:
        return asdict(self)


def _fmt(x) -> str:
    return "" if x is None else repr(float(x))


def _parse(text):
    return None if text == "" else float(text)


def write_csv(reports: Iterable[RiskReport], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(HEADER)
    for r in reports:
        w.writerow(r.to_row())


def read_csv(fh) -> List[RiskReport]:
    rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != HEADER:
        raise ValueError("missing or unexpected header")
    return [RiskReport.from_row(r) for r in rows[1:]]


def to_csv_text(reports) -> str:
    buf = io.StringIO()
    write_csv(reports, buf)
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "tolist"):
        return _jsonable(obj.tolist())
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    return str(obj)


def to_json_text(reports, command: str = "", extra: Optional[dict] = None) -> str:
    """Self-describing document with every row and its diagnostics."""
    doc = {"schema": SCHEMA, "command": command, "columns": list(HEADER),
           "rows": [_jsonable(r.to_dict()) for r in reports]}
    if extra:
        doc.update(_jsonable(extra))
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def from_json_text(text: str) -> List[RiskReport]:
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"unsupported schema {doc.get('schema')!r}")
    return [RiskReport(**row) for row in doc["rows"]]
