"""Serializable parameter reports and their file formats."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .coherent import CoherentConfiguration, intersection_tensor
from .fusion import compare_tables
from .tables import table_source

__all__ = ["SCHEMA_VERSION", "ParamReport", "build_report", "to_json", "matrix_csv",
           "tables_csv", "edgelist", "write_outputs"]

SCHEMA_VERSION = 1
FLOAT_DIGITS = 9


def _label(label):
    return label if isinstance(label, str) else int(label)


def _round(x):
    if isinstance(x, float):
        return round(x, FLOAT_DIGITS) + 0.0
    if isinstance(x, (list, tuple)):
        return [_round(v) for v in x]
    if isinstance(x, dict):
        return {k: _round(v) for k, v in x.items()}
    return x


@dataclass
class ParamReport:
    q: int
    field_order: int
    variant: str
    fusion: str
    name: str
    n: int
    relations: list[dict]
    tensor: list[list[int]]
    mode: str
    seed: int
    checks: list[dict] = field(default_factory=list)
    multiplicities: list[int] | None = None
    P: list[list[float]] | None = None
    Q: list[list[float]] | None = None
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks)

    def as_dict(self) -> dict:
        d = {
            "schema": SCHEMA_VERSION,
            "version": __version__,
            "q": self.q,
            "field_order": self.field_order,
            "variant": self.variant,
            "fusion": self.fusion,
            "name": self.name,
            "n": self.n,
            "relations": self.relations,
            "tensor": self.tensor,
            "multiplicities": self.multiplicities,
            "eigenmatrices": {"P": self.P, "Q": self.Q} if self.P is not None else None,
            "checks": self.checks,
            "mode": self.mode,
            "seed": self.seed,
            "passed": self.passed,
        }
        d.update(self.extra)
        return _round(d)


def build_report(cc: CoherentConfiguration, q: int, variant: str, fusion: str, mode: str, seed: int,
                 checks=(), spectral_data=None, extra: dict | None = None) -> ParamReport:
    tensor = intersection_tensor(cc)
    rels = [{"id": r.id, "label": _label(r.label), "eps": r.eps, "phi": r.phi,
             "valency": cc.valency(r.id)} for r in cc.relations]
    rep = ParamReport(q, cc.ctx.order if cc.ctx is not None else q, variant, fusion, cc.name, cc.n,
                      rels, tensor.nonzero(), mode, seed, [c.as_dict() for c in checks],
                      extra=dict(extra or {}))
    if spectral_data is not None:
        rep.multiplicities = [int(m) for m in spectral_data.multiplicities]
        rep.P = spectral_data.P.tolist()
        rep.Q = spectral_data.Q.tolist()
    return rep


def to_json(report: ParamReport) -> str:
    return json.dumps(report.as_dict(), sort_keys=True, ensure_ascii=False, indent=1) + "\n"


def matrix_csv(M: np.ndarray) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in np.asarray(M).tolist():
        w.writerow([repr(round(float(v), FLOAT_DIGITS) + 0.0) for v in row])
    return buf.getvalue()


def tables_csv(fused: CoherentConfiguration, name: str, q: int) -> str:
    """Counted p^k_{i,j}(eps) next to the tabulated formula and its value."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["eps", "k", "i", "j", "counted", "formula", "expected", "match"])
    for r in compare_tables(fused, name, q):
        counted = "" if r["counted"] is None else r["counted"]
        match = "n/a" if r["counted"] is None else str(r["match"]).lower()
        w.writerow([r["eps"], r["k"], r["i"], r["j"], counted,
                    table_source(name, r["k"], r["i"], r["j"]), r["expected"], match])
    return buf.getvalue()


def edgelist(adj: np.ndarray) -> str:
    """One "u v" line per edge, u < v, vertices numbered from 0."""
    us, vs = np.nonzero(np.triu(np.asarray(adj)))
    return "".join(f"{u} {v}\n" for u, v in zip(us.tolist(), vs.tolist()))


def write_outputs(out: Path, files: dict[str, str]) -> list[Path]:
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, text in sorted(files.items()):
        path = out / name
        path.write_text(text, encoding="utf-8")
        written.append(path)
    return written
